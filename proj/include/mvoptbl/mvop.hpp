#ifndef MVOPTBL_MVOP_HPP
#define MVOPTBL_MVOP_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mat.hpp"
#include "mvoptbl/matpoly.hpp"
#include "mvoptbl/quadrature.hpp"
#include "mvoptbl/rightop.hpp"

namespace mvoptbl {

/// Full-support rule for the family, exact for the polynomial parts of all
/// inner products <F, G> with deg F, deg G <= n_max.
inline Quadrature family_rule(const FamilyInstance& f, int n_max, int min_nodes = 0) {
    const int nodes = std::max({40, n_max + 2 * f.size + 5, min_nodes});
    switch (f.kind) {
        case FamilyKind::hermite:
        case FamilyKind::hermite_free:
            return gauss_hermite(nodes);
        case FamilyKind::laguerre:
            return gauss_laguerre(nodes, f.nu + 1.0);
        case FamilyKind::gegenbauer:
            return gauss_gegenbauer(nodes, f.nu);
        case FamilyKind::charlier:
            return charlier_sum_rule(f.params.a, 1e-16,
                                     std::max(2 * n_max + 2 * f.size + 4, min_nodes));
    }
    throw std::logic_error("family_rule: unknown kind");
}

/// Lower end of the effective support, used when truncating band integrals:
/// the support boundary, or the point where the scalar weight has decayed
/// below 1e-18 of its maximum.
inline double band_lower_end(const FamilyInstance& f) {
    switch (f.support) {
        case SupportTag::real_line: return -std::sqrt(-std::log(1e-18));
        case SupportTag::half_line: return 0.0;
        case SupportTag::interval: return -1.0;
        case SupportTag::nonneg_integers: return 0.0;
    }
    return 0.0;
}

/// Quadrature for the band-restricted inner product over {x < Omega}
/// (continuous families). Composite Gauss--Legendre with panels graded
/// geometrically toward the lower end, where the scalar weight can be
/// non-smooth; the scalar weight is folded into the returned weights so the
/// rule integrates polynomial-part integrands directly.
inline Quadrature band_rule(const FamilyInstance& f, double omega, int points_per_panel = 40,
                            int panels = 36) {
    if (f.is_discrete()) throw std::invalid_argument("band_rule: continuous families only");
    const double lo = band_lower_end(f);
    if (omega <= lo) throw std::invalid_argument("band_rule: empty band");
    const Quadrature gl = gauss_legendre(points_per_panel);
    Quadrature q;
    q.support = f.support;
    q.exactness_degree = 0;  // not a polynomial-exact rule
    double right = omega;
    for (int k = 0; k < panels; ++k) {
        const double left = (k + 1 == panels) ? lo : lo + (right - lo) * 0.5;
        const double mid = 0.5 * (left + right), half = 0.5 * (right - left);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double x = mid + half * gl.nodes[i];
            q.nodes.push_back(x);
            q.weights.push_back(half * gl.weights[i] * f.scalar_weight(x));
        }
        right = left;
        if (right - lo < 1e-14 * (omega - lo)) break;
    }
    return q;
}

/// <F, G> = integral of F(x) W(x) G(x)^T against the family's measure,
/// optionally band-restricted to {x < Omega}.
inline Mat inner(const FamilyInstance& f, const Quadrature& rule, const MatPoly& fpoly,
                 const MatPoly& gpoly, std::optional<double> omega = std::nullopt) {
    if (fpoly.size() != f.size || gpoly.size() != f.size)
        throw std::invalid_argument("inner: size mismatch");
    Mat acc(f.size, f.size);
    if (omega && f.is_discrete() && *omega <= 0.0)
        throw std::invalid_argument("inner: empty band");
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        if (omega && f.is_discrete() && x >= *omega) continue;  // open interval (-inf, Omega)
        acc += rule.weights[i] * (fpoly.eval(x) * f.Q.eval(x) * gpoly.eval(x).transpose());
    }
    return acc;
}

inline Mat inner(const FamilyInstance& f, const MatPoly& fpoly, const MatPoly& gpoly,
                 std::optional<double> omega = std::nullopt) {
    const int deg = std::max(fpoly.is_zero() ? 0 : fpoly.degree(), gpoly.is_zero() ? 0 : gpoly.degree());
    if (omega && !f.is_discrete())
        return inner(f, band_rule(f, *omega), fpoly, gpoly, std::nullopt);
    return inner(f, family_rule(f, deg), fpoly, gpoly, omega);
}

/// Symmetric matrix inverse with a conditioning guard.
inline Mat guarded_inverse(const Mat& m, double cond_cap = 1e12) {
    const Svd svd = svd_jacobi(m);
    const double smax = svd.sigma.front(), smin = svd.sigma.back();
    if (!(smin > 0.0) || smax / smin > cond_cap)
        throw std::runtime_error("guarded_inverse: matrix condition number exceeds guard");
    const int n = m.rows();
    Mat inv(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv(i, j) += svd.v(i, k) * svd.u(j, k) / svd.sigma[static_cast<std::size_t>(k)];
    return inv;
}

/// Monic MVOP P_0..P_{n_max} with squared norms H_n.
struct MVOPSeq {
    FamilyInstance family;
    int n_max = 0;
    Quadrature rule;
    std::vector<MatPoly> P;
    std::vector<Mat> H;
    std::vector<Mat> H_inv;
};

/// Block Gram--Schmidt on the monomials x^n I, with one re-orthogonalization
/// pass per degree.
inline MVOPSeq generate_mvop(const FamilyInstance& f, int n_max, int min_nodes = 0) {
    if (n_max < 0) throw std::invalid_argument("generate_mvop: n_max must be nonnegative");
    MVOPSeq seq;
    seq.family = f;
    seq.n_max = n_max;
    seq.rule = family_rule(f, n_max, min_nodes);
    for (int n = 0; n <= n_max; ++n) {
        MatPoly p = MatPoly::monomial(n, Mat::identity(f.size));
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < n; ++k) {
                const Mat c = inner(f, seq.rule, p, seq.P[static_cast<std::size_t>(k)]) *
                              seq.H_inv[static_cast<std::size_t>(k)];
                p -= seq.P[static_cast<std::size_t>(k)].mat_times(c);
            }
        Mat h = inner(f, seq.rule, p, p);
        seq.P.push_back(std::move(p));
        seq.H_inv.push_back(guarded_inverse(h));
        seq.H.push_back(std::move(h));
    }
    return seq;
}

/// Projection onto span{P_0, ..., P_M}.
inline MatPoly time_limit(const MVOPSeq& seq, const MatPoly& f, int m) {
    if (m > seq.n_max) throw std::invalid_argument("time_limit: M exceeds the generated range");
    MatPoly r(seq.family.size);
    for (int n = 0; n <= m; ++n) {
        const Mat c = inner(seq.family, seq.rule, f, seq.P[static_cast<std::size_t>(n)]) *
                      seq.H_inv[static_cast<std::size_t>(n)];
        r += seq.P[static_cast<std::size_t>(n)].mat_times(c);
    }
    return r;
}

/// Block matrix with blocks B_{m,n} = <P_m . op, P_n> H_n^{-1}, m,n <= n_cap.
inline Mat basis_matrix_of(const MVOPSeq& seq, const RightOp& op, int n_cap) {
    if (n_cap + 1 > seq.n_max)
        throw std::invalid_argument("basis_matrix_of: cap exceeds the generated range");
    const int nb = seq.family.size;
    Mat big((n_cap + 1) * nb, (n_cap + 1) * nb);
    // op may raise degree by one, so the rule must cover deg <= n_cap + 1 plus
    // the operator coefficients; the seq rule generated for n_max covers it.
    for (int m = 0; m <= n_cap; ++m) {
        const MatPoly pm_op = op.apply(seq.P[static_cast<std::size_t>(m)]);
        for (int n = 0; n <= n_cap; ++n) {
            const Mat b = inner(seq.family, seq.rule, pm_op, seq.P[static_cast<std::size_t>(n)]) *
                          seq.H_inv[static_cast<std::size_t>(n)];
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j) big(m * nb + i, n * nb + j) = b(i, j);
        }
    }
    return big;
}

}  // namespace mvoptbl

#endif
