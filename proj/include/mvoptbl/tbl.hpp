#ifndef MVOPTBL_TBL_HPP
#define MVOPTBL_TBL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mat.hpp"
#include "mvoptbl/matpoly.hpp"
#include "mvoptbl/mvop.hpp"
#include "mvoptbl/rightop.hpp"
#include "mvoptbl/rng.hpp"

namespace mvoptbl {

/// Closed-form commuting-condition matrix R for the Pearson families.
inline Mat closed_form_R(const FamilyInstance& f, int m) {
    if (m < 0) throw std::invalid_argument("closed_form_R: M must be nonnegative");
    if (!f.has_pearson)
        throw std::invalid_argument("closed_form_R: no closed form for the parameter-free family");
    const double mm = static_cast<double>(m);
    switch (f.kind) {
        case FamilyKind::hermite:
            return -(2.0 * mm + 1.0) * f.psi0.transpose();
        case FamilyKind::laguerre:
            return -2.0 * mm * mm * f.phi1.transpose() - (2.0 * mm + 1.0) * f.psi0.transpose();
        case FamilyKind::gegenbauer:
            return -(2.0 * mm * mm / (2.0 * f.nu + f.size) + 2.0 * mm + 1.0) * f.psi0.transpose();
        case FamilyKind::charlier:
            return 2.0 * mm * mm * (f.phi1.transpose() - f.psi1.transpose()) +
                   (2.0 * mm + 1.0) * f.psi0.transpose();
        default:
            throw std::invalid_argument("closed_form_R: unsupported family");
    }
}

/// Residual of (R - x Sigma) W(x) = W(x) (R - x Sigma)^* as a polynomial
/// identity on the polynomial part Q of the weight, normalized.
inline double eq9_residual(const FamilyInstance& f, const Mat& r, const Mat& sigma) {
    const int n = f.size;
    const MatPoly c(n, {r, -1.0 * sigma});
    const MatPoly resid = c * f.Q - f.Q * c.adjoint();
    const double den = f.Q.max_coeff_norm() * (r.norm_inf_entry() + sigma.norm_inf_entry());
    const double num = resid.max_coeff_norm();
    return den > 0.0 ? num / den : num;
}

enum class RSolveStatus { unique, affine_family, inconsistent, ambiguous };

inline std::string to_string(RSolveStatus s) {
    switch (s) {
        case RSolveStatus::unique: return "unique";
        case RSolveStatus::affine_family: return "affine_family";
        case RSolveStatus::inconsistent: return "inconsistent";
        case RSolveStatus::ambiguous: return "ambiguous";
    }
    return "?";
}

struct RSolveReport {
    RSolveStatus status = RSolveStatus::inconsistent;
    Mat particular;              // valid unless inconsistent
    std::vector<Mat> nullspace;  // orthonormal as flattened vectors
    double residual = 0.0;       // relative least-squares residual
    int rows = 0;
    int cols = 0;
    int rank = 0;
};

/// Solve (R - x Sigma) Q(x) = Q(x) (R - x Sigma)^* for the N^2 entries of R
/// by least squares with rank analysis. Rows are scaled to unit max-norm.
inline RSolveReport solve_R(const FamilyInstance& f, const Mat& sigma, double rel_tol = 1e-8,
                            double consistent_tol = 1e-8, double inconsistent_tol = 1e-3) {
    const int n = f.size;
    const int unknowns = n * n;
    const int qdeg = f.Q.is_zero() ? 0 : f.Q.degree();
    const MatPoly rhs_poly = (f.Q.mat_times(sigma) - f.Q.times_mat(sigma.transpose())).times_xk(1);

    std::vector<std::vector<double>> rows_a;
    std::vector<double> rows_b;
    for (int p = 0; p <= qdeg + 1; ++p) {
        const Mat qp = f.Q.coeff(p);
        const Mat bp = rhs_poly.coeff(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<double> row(static_cast<std::size_t>(unknowns), 0.0);
                // coefficient of x^p, entry (i, j) of R Q - Q R^T
                for (int k = 0; k < n; ++k) {
                    row[static_cast<std::size_t>(i * n + k)] += qp(k, j);
                    row[static_cast<std::size_t>(j * n + k)] -= qp(i, k);
                }
                double scale = std::abs(bp(i, j));
                for (double v : row) scale = std::max(scale, std::abs(v));
                if (scale == 0.0) continue;
                for (double& v : row) v /= scale;
                rows_a.push_back(std::move(row));
                rows_b.push_back(bp(i, j) / scale);
            }
    }

    RSolveReport rep;
    rep.rows = static_cast<int>(rows_a.size());
    rep.cols = unknowns;
    if (rows_a.empty()) {
        // no constraints at all: every R works
        rep.status = RSolveStatus::affine_family;
        rep.particular = Mat(n, n);
        for (int i = 0; i < unknowns; ++i) {
            Mat v(n, n);
            v(i / n, i % n) = 1.0;
            rep.nullspace.push_back(v);
        }
        return rep;
    }

    Mat a(rep.rows, unknowns);
    for (int i = 0; i < rep.rows; ++i)
        for (int j = 0; j < unknowns; ++j) a(i, j) = rows_a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const LsqResult lsq = solve_least_squares(a, rows_b, rel_tol);
    rep.rank = lsq.rank;

    double bnorm = 0.0;
    for (double v : rows_b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    rep.residual = bnorm > 0.0 ? lsq.residual_norm / bnorm : 0.0;

    rep.particular = Mat(n, n);
    for (int i = 0; i < unknowns; ++i)
        rep.particular(i / n, i % n) = lsq.solution[static_cast<std::size_t>(i)];
    for (const auto& v : lsq.nullspace) {
        Mat m(n, n);
        for (int i = 0; i < unknowns; ++i) m(i / n, i % n) = v[static_cast<std::size_t>(i)];
        rep.nullspace.push_back(std::move(m));
    }

    if (rep.residual < consistent_tol)
        rep.status = rep.nullspace.empty() ? RSolveStatus::unique : RSolveStatus::affine_family;
    else if (rep.residual > inconsistent_tol)
        rep.status = RSolveStatus::inconsistent;
    else
        rep.status = RSolveStatus::ambiguous;
    return rep;
}

/// Distance from a candidate R to the report's affine solution set
/// (projection onto the orthonormal null-space basis).
inline double solution_set_distance(const RSolveReport& rep, const Mat& r) {
    Mat d = r - rep.particular;
    double d2 = d.norm_fro() * d.norm_fro();
    for (const Mat& v : rep.nullspace) {
        double dot = 0.0;
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j) dot += d(i, j) * v(i, j);
        d2 -= dot * dot;
    }
    return std::sqrt(std::max(0.0, d2));
}

/// The commuting operator T = x D + D (x - 2 Omega) - x (Lambda_M +
/// Lambda_{M+1}) + R, assembled as a single right-acting operator.
struct TOperator {
    FamilyInstance family;
    int M = 0;
    double omega = 0.0;
    Mat R;
    Mat sigma;  // Lambda_M + Lambda_{M+1}
    RightOp D;
    RightOp op;  // the assembled T
};

inline TOperator build_T(const FamilyInstance& f, int m, double omega, const Mat& r) {
    TOperator t;
    t.family = f;
    t.M = m;
    t.omega = omega;
    t.R = r;
    t.sigma = eigenvalue_matrix(f, m) + eigenvalue_matrix(f, m + 1);
    t.D = build_D(f);
    const int n = f.size;
    const MatPoly stretch(n, {Mat::identity(n) * (-2.0 * omega), Mat::identity(n) * 2.0});  // 2x - 2*Omega
    const MatPoly order0_tail(n, {r, -1.0 * t.sigma});  // R - x Sigma

    RightOp assembled;
    assembled.size = n;
    if (t.D.flavor == RightOp::Flavor::differential) {
        assembled.flavor = RightOp::Flavor::differential;
        assembled.c2 = stretch * t.D.c2;
        assembled.c1 = stretch * t.D.c1 + t.D.c2 * 2.0;
        assembled.c0 = stretch * t.D.c0 + t.D.c1 + order0_tail;
    } else {
        assembled.flavor = RightOp::Flavor::difference;
        for (const auto& [h, g] : t.D.shift_coeff) {
            const MatPoly factor(n, {Mat::identity(n) * (h - 2.0 * omega), Mat::identity(n) * 2.0});
            assembled.shift_coeff[h] = factor * g;
        }
        auto it = assembled.shift_coeff.find(0);
        if (it == assembled.shift_coeff.end())
            assembled.shift_coeff[0] = order0_tail;
        else
            it->second += order0_tail;
    }
    t.op = std::move(assembled);
    return t;
}

/// Direct (unassembled) evaluation of F . T, used to validate the assembly:
/// x (F . D) + ((x F) . D) - 2 Omega (F . D) - x F Sigma + F R.
inline MatPoly apply_T_direct(const TOperator& t, const MatPoly& f) {
    const MatPoly fd = t.D.apply(f);
    const MatPoly xf_d = t.D.apply(f.times_xk(1));
    return fd.times_xk(1) + xf_d + fd * (-2.0 * t.omega) -
           f.times_mat(t.sigma).times_xk(1) + f.times_mat(t.R);
}

struct CouplingResult {
    double coupling_at_M = 0.0;       // normalized cross-coupling at the M boundary
    double reference_coupling = 0.0;  // same quantity one level up (generically nonzero)
};

/// Cross-couplings <P_m . T, P_n> H_n^{-1} across the M / M+1 boundary and,
/// for reference, the M+1 / M+2 boundary; both normalized by the largest
/// block magnitude.
inline CouplingResult check_time_commutation(const MVOPSeq& seq, const TOperator& t) {
    const int m = t.M;
    if (seq.n_max < m + 3)
        throw std::invalid_argument("check_time_commutation: need n_max >= M + 3");
    const int nb = seq.family.size;
    const int cap = m + 2;
    const Mat big = basis_matrix_of(seq, t.op, cap);
    auto block_norm = [&](int r, int c) {
        double mx = 0.0;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) mx = std::max(mx, std::abs(big(r * nb + i, c * nb + j)));
        return mx;
    };
    double scale = 0.0;
    for (int r = 0; r <= cap; ++r)
        for (int c = 0; c <= cap; ++c) scale = std::max(scale, block_norm(r, c));
    CouplingResult out;
    const double at_m = std::max(block_norm(m, m + 1), block_norm(m + 1, m));
    const double ref = std::max(block_norm(m + 1, m + 2), block_norm(m + 2, m + 1));
    out.coupling_at_M = scale > 0.0 ? at_m / scale : at_m;
    out.reference_coupling = scale > 0.0 ? ref / scale : ref;
    return out;
}

/// Max normalized symmetry defect |<F.T, G>_Omega - <F, G.T>_Omega| over
/// random matrix-polynomial pairs of degree <= 4.
inline double check_band_symmetry(const TOperator& t, double omega, int trials,
                                  std::uint64_t seed = 7) {
    const FamilyInstance& f = t.family;
    Lcg rng(seed);
    auto random_poly = [&] {
        std::vector<Mat> coeffs;
        for (int p = 0; p <= 4; ++p) {
            Mat c(f.size, f.size);
            for (int i = 0; i < f.size; ++i)
                for (int j = 0; j < f.size; ++j) c(i, j) = rng.uniform(-1.0, 1.0);
            coeffs.push_back(std::move(c));
        }
        return MatPoly(f.size, std::move(coeffs));
    };
    Quadrature rule;
    if (f.is_discrete()) {
        if (omega <= 0.0) throw std::invalid_argument("check_band_symmetry: empty band");
        rule = family_rule(f, 8);
    } else {
        rule = band_rule(f, omega);
    }
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const MatPoly fp = random_poly(), gp = random_poly();
        const std::optional<double> band = f.is_discrete() ? std::optional<double>(omega) : std::nullopt;
        const Mat lhs = inner(f, rule, t.op.apply(fp), gp, band);
        const Mat rhs = inner(f, rule, fp, t.op.apply(gp), band);
        const double scale = std::max({lhs.norm_inf_entry(), rhs.norm_inf_entry(), 1e-300});
        worst = std::max(worst, (lhs - rhs).norm_inf_entry() / scale);
    }
    return worst;
}

struct SweepEntry {
    int size = 0;
    bool default_draw = false;
    std::vector<double> alpha;
    std::vector<double> t;
    RSolveReport report;
};

/// For each size: the fixed default parameter draw plus `trials` seeded random
/// positive draws of the parameter-free Hermite weight, each solved for R with
/// Sigma = Lambda_0 + Lambda_1 = I + 2J.
inline std::vector<SweepEntry> counterexample_sweep(const std::vector<int>& sizes, int trials,
                                                    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("counterexample_sweep: trials must be at least 1");
    std::vector<SweepEntry> out;
    Lcg rng(seed);
    for (int n : sizes) {
        for (int draw = 0; draw <= trials; ++draw) {
            FamilyParams p;
            if (draw > 0) {
                std::vector<double> alpha(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n));
                for (double& v : alpha) v = rng.uniform(0.25, 4.0);
                for (double& v : t) v = rng.uniform(0.25, 4.0);
                p.free_alpha = alpha;
                p.free_t = t;
            }
            const FamilyInstance f = build_family(FamilyKind::hermite_free, n, 0.0, p);
            const Mat sigma = eigenvalue_matrix(f, 0) + eigenvalue_matrix(f, 1);
            SweepEntry e;
            e.size = n;
            e.default_draw = (draw == 0);
            e.alpha = f.alpha;
            e.t = f.t;
            e.report = solve_R(f, sigma);
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace mvoptbl

#endif
