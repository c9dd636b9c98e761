#ifndef MVOPTBL_RIGHTOP_HPP
#define MVOPTBL_RIGHTOP_HPP

#include <map>
#include <stdexcept>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mat.hpp"
#include "mvoptbl/matpoly.hpp"

namespace mvoptbl {

/// Right-acting second order operator with matrix-polynomial coefficients.
/// Differential flavor: (F . D)(x) = F''(x) c2(x) + F'(x) c1(x) + F(x) c0(x).
/// Difference flavor:   (F . D)(x) = sum_h F(x+h) g_h(x).
struct RightOp {
    enum class Flavor { differential, difference };
    Flavor flavor = Flavor::differential;
    int size = 1;
    MatPoly c2, c1, c0;                 // differential
    std::map<int, MatPoly> shift_coeff; // difference

    MatPoly apply(const MatPoly& f) const {
        if (f.size() != size) throw std::invalid_argument("RightOp::apply: size mismatch");
        if (flavor == Flavor::differential) {
            MatPoly r(size);
            if (!c2.is_zero()) r += f.derivative().derivative() * c2;
            if (!c1.is_zero()) r += f.derivative() * c1;
            if (!c0.is_zero()) r += f * c0;
            return r;
        }
        MatPoly r(size);
        for (const auto& [h, g] : shift_coeff)
            if (!g.is_zero()) r += f.shift_arg(static_cast<double>(h)) * g;
        return r;
    }
};

/// The Pearson-derived operator: second order differential with coefficients
/// Phi^*, Psi^* for the continuous families; the three-point difference
/// stencil -(F(x+1)-2F(x)+F(x-1)) Phi^*(x) - (F(x)-F(x-1)) Psi^*(x) for the
/// discrete one.
inline RightOp build_pearson_D(const FamilyInstance& f) {
    if (!f.has_pearson)
        throw std::invalid_argument("build_pearson_D: family has no Pearson structure");
    const int n = f.size;
    const MatPoly phi_adj = MatPoly(n, {f.phi0, f.phi1, f.phi2}).adjoint();
    const MatPoly psi_adj = MatPoly(n, {f.psi0, f.psi1}).adjoint();
    RightOp op;
    op.size = n;
    if (!f.is_discrete()) {
        op.flavor = RightOp::Flavor::differential;
        op.c2 = phi_adj;
        op.c1 = psi_adj;
        op.c0 = MatPoly(n);
        return op;
    }
    op.flavor = RightOp::Flavor::difference;
    op.shift_coeff[+1] = phi_adj * -1.0;
    op.shift_coeff[0] = phi_adj * 2.0 - psi_adj;
    op.shift_coeff[-1] = phi_adj * -1.0 + psi_adj;
    return op;
}

/// The operator -1/2 d^2 + d (xI - A) + J for the parameter-free Hermite
/// weight; A is the subdiagonal with entries 2 alpha_j / alpha_{j-1}.
inline RightOp build_free_D(const FamilyInstance& f) {
    if (f.kind != FamilyKind::hermite_free)
        throw std::invalid_argument("build_free_D: expects the parameter-free Hermite family");
    const int n = f.size;
    Mat a(n, n);
    for (int j = 1; j < n; ++j)
        a(j, j - 1) = 2.0 * f.alpha[static_cast<std::size_t>(j)] / f.alpha[static_cast<std::size_t>(j - 1)];
    RightOp op;
    op.size = n;
    op.flavor = RightOp::Flavor::differential;
    op.c2 = MatPoly::constant(-0.5 * Mat::identity(n));
    op.c0 = MatPoly::constant(detail::row_index_diag(n, 0.0));
    op.c1 = MatPoly(n, {-1.0 * a, Mat::identity(n)});  // xI - A
    return op;
}

inline RightOp build_D(const FamilyInstance& f) {
    return f.kind == FamilyKind::hermite_free ? build_free_D(f) : build_pearson_D(f);
}

/// Eigenvalue matrix Lambda_n of the family's operator.
inline Mat eigenvalue_matrix(const FamilyInstance& f, int n) {
    if (n < 0) throw std::invalid_argument("eigenvalue_matrix: n must be nonnegative");
    const double nn = static_cast<double>(n);
    if (f.kind == FamilyKind::hermite_free)
        return nn * Mat::identity(f.size) + detail::row_index_diag(f.size, 0.0);
    Mat lam = nn * (nn - 1.0) * f.phi2.transpose() + nn * f.psi1.transpose();
    if (f.is_discrete()) lam *= -1.0;
    return lam;
}

}  // namespace mvoptbl

#endif
