#ifndef MVOPTBL_FAMILY_HPP
#define MVOPTBL_FAMILY_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvoptbl/mat.hpp"
#include "mvoptbl/matpoly.hpp"
#include "mvoptbl/quadrature.hpp"
#include "mvoptbl/scalar_poly.hpp"

namespace mvoptbl {

enum class FamilyKind { hermite, laguerre, gegenbauer, charlier, hermite_free };

inline std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::hermite: return "hermite";
        case FamilyKind::laguerre: return "laguerre";
        case FamilyKind::gegenbauer: return "gegenbauer";
        case FamilyKind::charlier: return "charlier";
        case FamilyKind::hermite_free: return "hermite-free";
    }
    return "?";
}

struct FamilyParams {
    int param_set = 1;     // hermite / laguerre parameter set id
    double lambda = 1.0;   // set 2
    double rho = 1.0;      // set 3
    double C = 0.0;        // set 3
    double a = 1.0;        // charlier
    // Laguerre only: parameter of the triangular polynomial factor. It stays
    // fixed along the nu -> nu+1 ladder, so the shifted weight reuses the base
    // value; a fresh instance defaults to its own nu.
    std::optional<double> laguerre_l;
    // hermite_free overrides; defaults alpha_j = 1, t_j = j
    std::optional<std::vector<double>> free_alpha;
    std::optional<std::vector<double>> free_t;
};

/// A fully resolved weight family: W(x) = L(x) T(x) L(x)^* with the common
/// scalar factor split off as W(x) = w(x) Q(x), Q a matrix polynomial of
/// degree 2N-2.
struct FamilyInstance {
    FamilyKind kind;
    int size = 1;     // N
    double nu = 0.0;  // unused for hermite_free
    FamilyParams params;
    SupportTag support = SupportTag::real_line;

    std::vector<double> alpha;  // length N
    std::vector<double> t;      // length N, diagonal constants of T

    MatPoly L;  // unit lower triangular matrix polynomial
    MatPoly Q;  // polynomial part of W

    bool has_pearson = false;
    Mat phi2, phi1, phi0, psi1, psi0;

    bool is_discrete() const { return kind == FamilyKind::charlier; }

    /// The common scalar factor w(x) in W(x) = w(x) Q(x).
    double scalar_weight(double x) const {
        switch (kind) {
            case FamilyKind::hermite:
            case FamilyKind::hermite_free:
                return std::exp(-x * x);
            case FamilyKind::laguerre:
                return std::pow(x, nu + 1.0) * std::exp(-x);
            case FamilyKind::gegenbauer:
                return std::pow(1.0 - x * x, nu - 0.5);
            case FamilyKind::charlier: {
                const long xi = std::lround(x);
                return std::pow(params.a, xi) / std::tgamma(static_cast<double>(xi) + 1.0);
            }
        }
        return 0.0;
    }

    /// Logarithmic derivative w'(x)/w(x) of the common scalar factor
    /// (continuous families only).
    double scalar_weight_dlog(double x) const {
        switch (kind) {
            case FamilyKind::hermite:
            case FamilyKind::hermite_free:
                return -2.0 * x;
            case FamilyKind::laguerre:
                return (nu + 1.0) / x - 1.0;
            case FamilyKind::gegenbauer:
                return (nu - 0.5) * (-2.0 * x) / (1.0 - x * x);
            case FamilyKind::charlier:
                throw std::logic_error("scalar_weight_dlog: discrete family");
        }
        return 0.0;
    }

    bool in_support(double x) const {
        switch (support) {
            case SupportTag::real_line: return true;
            case SupportTag::half_line: return x > 0.0;
            case SupportTag::interval: return x > -1.0 && x < 1.0;
            case SupportTag::nonneg_integers:
                return x >= 0.0 && std::abs(x - std::lround(x)) < 1e-9;
        }
        return false;
    }

    Mat weight_eval(double x) const {
        if (!in_support(x))
            throw std::invalid_argument("weight_eval: x outside the support");
        return scalar_weight(x) * Q.eval(x);
    }
};

namespace detail {

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// (I + A)^{x + shift} for strictly lower triangular (nilpotent) A,
/// expanded as sum_m binom(x + shift, m) A^m -- a polynomial in x.
inline MatPoly nilpotent_binomial_power(const Mat& a, double shift) {
    const int n = a.rows();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (a(i, j) != 0.0)
                throw std::invalid_argument("nilpotent_binomial_power: A must be strictly lower triangular");
    MatPoly result = MatPoly::identity(n);
    Mat apow = Mat::identity(n);
    ScalarPoly binom = ScalarPoly::constant(1.0);  // binom(x+shift, m)
    for (int m = 1; m < n; ++m) {
        apow = apow * a;
        binom = binom * ScalarPoly({(shift - (m - 1)) / m, 1.0 / m});
        std::vector<Mat> coeffs;
        for (int p = 0; p <= binom.degree(); ++p) coeffs.push_back(apow * binom.coeff(p));
        result += MatPoly(n, std::move(coeffs));
    }
    return result;
}

/// Inverse of (I + S) for nilpotent S via the finite Neumann series.
inline Mat nilpotent_inverse(const Mat& i_plus_s) {
    const int n = i_plus_s.rows();
    const Mat s = i_plus_s - Mat::identity(n);
    Mat result = Mat::identity(n);
    Mat term = Mat::identity(n);
    for (int m = 1; m < n; ++m) {
        term = term * (-1.0 * s);
        result += term;
    }
    return result;
}

/// Assemble a lower triangular matrix polynomial from per-entry scalar
/// polynomials entry(j, k), j >= k (0-based indices).
template <class EntryFn>
MatPoly lower_triangular_poly(int n, EntryFn entry) {
    std::vector<Mat> coeffs;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) {
            const ScalarPoly p = entry(j, k);
            for (int d = 0; d <= p.degree(); ++d) {
                if (d >= static_cast<int>(coeffs.size())) coeffs.push_back(Mat(n, n));
                coeffs[static_cast<std::size_t>(d)](j, k) = p.coeff(d);
            }
        }
    return MatPoly(n, std::move(coeffs));
}

/// Q(x) = L(x) D(x) L(x)^T with D(x) = diag(t_j * s_j(x)).
inline MatPoly recompose_polynomial_part(const MatPoly& l, const std::vector<double>& t,
                                         const std::vector<ScalarPoly>& s) {
    const int n = l.size();
    std::vector<Mat> dcoeffs;
    for (int j = 0; j < n; ++j)
        for (int d = 0; d <= s[static_cast<std::size_t>(j)].degree(); ++d) {
            if (d >= static_cast<int>(dcoeffs.size())) dcoeffs.push_back(Mat(n, n));
            dcoeffs[static_cast<std::size_t>(d)](j, j) =
                t[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)].coeff(d);
        }
    const MatPoly dpoly(n, std::move(dcoeffs));
    return l * dpoly * l.adjoint();
}

inline Mat subdiag_mat(int n, const std::vector<double>& entries) {
    Mat a(n, n);
    for (int j = 1; j < n; ++j) a(j, j - 1) = entries[static_cast<std::size_t>(j - 1)];
    return a;
}

inline Mat row_index_diag(int n, double offset) {
    // diag(1+offset, ..., N+offset)
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = i + 1.0 + offset;
    return Mat::diag(d);
}

}  // namespace detail

inline FamilyInstance build_hermite(int n, double nu, const FamilyParams& p, bool pearson) {
    if (n < 1) throw std::invalid_argument("build_family: N must be at least 1");
    FamilyInstance f;
    f.kind = pearson ? FamilyKind::hermite : FamilyKind::hermite_free;
    f.size = n;
    f.nu = pearson ? nu : 0.0;
    f.params = p;
    f.support = SupportTag::real_line;

    f.alpha.resize(static_cast<std::size_t>(n));
    f.t.resize(static_cast<std::size_t>(n));
    double d = 0.0, c = 0.0;
    if (pearson) {
        if (nu <= 0.0) throw std::invalid_argument("hermite: nu must be positive");
        switch (p.param_set) {
            case 1:
                d = 1.0 / (nu + 1.0);
                c = nu / (nu + 1.0);
                for (int k = 1; k <= n; ++k) {
                    f.alpha[static_cast<std::size_t>(k - 1)] =
                        std::sqrt(std::pow(2.0, 1.0 - k) * pochhammer(n - k + 1.0, k - 1));
                    f.t[static_cast<std::size_t>(k - 1)] =
                        pochhammer(nu + 1.0, k - 1) / detail::factorial(k - 1);
                }
                break;
            case 2:
                if (p.lambda <= 0.0) throw std::invalid_argument("hermite set 2: lambda must be positive");
                d = p.lambda;
                c = p.lambda * nu;
                for (int k = 1; k <= n; ++k) {
                    f.alpha[static_cast<std::size_t>(k - 1)] =
                        std::pow(2.0, 1.0 - k) *
                        std::sqrt(detail::factorial(k - 1) * pochhammer(n - k + 1.0, k - 1));
                    f.t[static_cast<std::size_t>(k - 1)] =
                        std::pow(2.0, -k) * std::pow(p.lambda, nu) * std::tgamma(nu + k);
                }
                break;
            case 3: {
                if (p.rho <= 0.0 || p.C < 0.0)
                    throw std::invalid_argument("hermite set 3: need rho > 0 and C >= 0");
                d = p.rho;
                c = p.C + nu * p.rho;
                const double g = nu + 1.0 + p.C / p.rho;
                for (int k = 1; k <= n; ++k) {
                    f.alpha[static_cast<std::size_t>(k - 1)] = 1.0;
                    f.t[static_cast<std::size_t>(k - 1)] =
                        std::pow(2.0, k - 1.0) * pochhammer(g, k - 1) /
                        (detail::factorial(k - 1) * pochhammer(n - k + 1.0, k - 1)) *
                        std::pow(p.rho, nu) * std::tgamma(g);
                }
                break;
            }
            default:
                throw std::invalid_argument("hermite: unknown parameter set");
        }
    } else {
        for (int k = 1; k <= n; ++k) {
            f.alpha[static_cast<std::size_t>(k - 1)] = 1.0;
            f.t[static_cast<std::size_t>(k - 1)] = static_cast<double>(k);
        }
        if (p.free_alpha) f.alpha = *p.free_alpha;
        if (p.free_t) f.t = *p.free_t;
        if (static_cast<int>(f.alpha.size()) != n || static_cast<int>(f.t.size()) != n)
            throw std::invalid_argument("hermite-free: parameter vectors must have length N");
    }
    for (double v : f.alpha)
        if (v <= 0.0) throw std::invalid_argument("hermite: alpha_j must be positive");
    for (double v : f.t)
        if (v <= 0.0) throw std::invalid_argument("hermite: t_j must be positive");

    // L(x)_{jk} = (alpha_j / alpha_k) H_{j-k}(x) / (j-k)!   (1-based j >= k)
    f.L = detail::lower_triangular_poly(n, [&](int j, int k) {
        return hermite(j - k) * (f.alpha[static_cast<std::size_t>(j)] /
                                 f.alpha[static_cast<std::size_t>(k)] / detail::factorial(j - k));
    });
    std::vector<ScalarPoly> ones(static_cast<std::size_t>(n), ScalarPoly::constant(1.0));
    f.Q = detail::recompose_polynomial_part(f.L, f.t, ones);

    if (pearson) {
        f.has_pearson = true;
        std::vector<double> sub(static_cast<std::size_t>(n - 1 > 0 ? n - 1 : 0));
        std::vector<double> sub_tilde(sub.size());
        for (int k = 2; k <= n; ++k) {
            sub[static_cast<std::size_t>(k - 2)] =
                2.0 * f.alpha[static_cast<std::size_t>(k - 1)] / f.alpha[static_cast<std::size_t>(k - 2)];
            sub_tilde[static_cast<std::size_t>(k - 2)] =
                2.0 * f.alpha[static_cast<std::size_t>(k - 2)] / f.alpha[static_cast<std::size_t>(k - 1)];
        }
        const Mat a = detail::subdiag_mat(n, sub);
        const Mat a_tilde = detail::subdiag_mat(n, sub_tilde);
        const Mat at = a.transpose();
        const Mat j = detail::row_index_diag(n, 0.0);
        const Mat id = Mat::identity(n);

        f.phi2 = Mat(n, n);
        f.phi1 = -d * at;
        f.phi0 = d * (j + 0.5 * (at * at)) + c * id;
        f.psi1 = 2.0 * (d * (j - (n + 1.0) * id) - c * id);
        f.psi0 = at * (c * id + d * ((n + 1.0) * id - j)) +
                 0.5 * d * (a_tilde * j * (static_cast<double>(n) * id - j));
    }
    return f;
}

inline FamilyInstance build_laguerre(int n, double nu, const FamilyParams& p) {
    if (n < 1) throw std::invalid_argument("build_family: N must be at least 1");
    if (nu <= 0.0) throw std::invalid_argument("laguerre: nu must be positive");
    FamilyInstance f;
    f.kind = FamilyKind::laguerre;
    f.size = n;
    f.nu = nu;
    f.params = p;
    f.support = SupportTag::half_line;

    f.alpha.resize(static_cast<std::size_t>(n));
    auto t_of = [&](double v) {
        std::vector<double> t(static_cast<std::size_t>(n));
        switch (p.param_set) {
            case 1:
                for (int k = 1; k <= n; ++k) {
                    double prod = 1.0;
                    for (int s = 1; s <= k - 1; ++s) prod *= 1.0 + v / s;
                    t[static_cast<std::size_t>(k - 1)] = std::tgamma(v + 1.0) * prod;
                }
                break;
            case 2:
                if (p.lambda <= 0.0) throw std::invalid_argument("laguerre set 2: lambda must be positive");
                for (int k = 1; k <= n; ++k)
                    t[static_cast<std::size_t>(k - 1)] = std::pow(p.lambda, v) * std::tgamma(v + k);
                break;
            case 3: {
                if (p.rho <= 0.0 || p.C < 0.0)
                    throw std::invalid_argument("laguerre set 3: need rho > 0 and C >= 0");
                const double g = v + 1.0 + p.C / p.rho;
                for (int k = 1; k <= n; ++k)
                    t[static_cast<std::size_t>(k - 1)] =
                        pochhammer(g, k - 1) /
                        (detail::factorial(k - 1) * pochhammer(n - k + 1.0, k - 1)) *
                        std::pow(p.rho, v) * std::tgamma(g);
                break;
            }
            default:
                throw std::invalid_argument("laguerre: unknown parameter set");
        }
        return t;
    };
    double d = 0.0, c = 0.0;
    switch (p.param_set) {
        case 1:
            d = 1.0;
            c = nu;
            for (int k = 1; k <= n; ++k)
                f.alpha[static_cast<std::size_t>(k - 1)] = std::sqrt(pochhammer(n - k + 1.0, k));
            break;
        case 2:
            d = p.lambda;
            c = p.lambda * nu;
            for (int k = 1; k <= n; ++k)
                f.alpha[static_cast<std::size_t>(k - 1)] =
                    std::sqrt(detail::factorial(k - 1) * pochhammer(n - k + 1.0, k - 1));
            break;
        case 3:
            d = p.rho;
            c = p.C + nu * p.rho;
            for (int k = 1; k <= n; ++k) f.alpha[static_cast<std::size_t>(k - 1)] = 1.0;
            break;
        default:
            throw std::invalid_argument("laguerre: unknown parameter set");
    }
    f.t = t_of(nu);
    for (double v : f.t)
        if (v <= 0.0) throw std::invalid_argument("laguerre: t_j must be positive");

    // L(x)_{jk} = (alpha_j / alpha_k) l_{j-k}^{(al+k)}(x)   (1-based j >= k)
    const double al = p.laguerre_l.value_or(nu);
    f.L = detail::lower_triangular_poly(n, [&](int j, int k) {
        return laguerre(j - k, al + (k + 1)) * (f.alpha[static_cast<std::size_t>(j)] /
                                                f.alpha[static_cast<std::size_t>(k)]);
    });
    // T_jj = t_j x^{nu+j} e^{-x}; common factor x^{nu+1} e^{-x} leaves x^{j-1}.
    std::vector<ScalarPoly> s;
    for (int j = 1; j <= n; ++j) {
        std::vector<double> mono(static_cast<std::size_t>(j), 0.0);
        mono.back() = 1.0;
        s.push_back(ScalarPoly(std::move(mono)));
    }
    f.Q = detail::recompose_polynomial_part(f.L, f.t, s);

    f.has_pearson = true;
    std::vector<double> sub(static_cast<std::size_t>(n - 1 > 0 ? n - 1 : 0));
    for (int k = 2; k <= n; ++k)
        sub[static_cast<std::size_t>(k - 2)] =
            -f.alpha[static_cast<std::size_t>(k - 1)] / f.alpha[static_cast<std::size_t>(k - 2)];
    const Mat a = detail::subdiag_mat(n, sub);
    const Mat at = a.transpose();
    const Mat j = detail::row_index_diag(n, 0.0);
    const Mat id = Mat::identity(n);
    const Mat l0t = f.L.eval(0.0).transpose();
    const Mat l0t_inv = detail::nilpotent_inverse(l0t);

    const Mat delta_inv_a_delta1 = [&] {
        const std::vector<double> t1 = t_of(nu + 1.0);
        Mat m = a;
        for (int r = 0; r < n; ++r)
            for (int cidx = 0; cidx < n; ++cidx)
                if (m(r, cidx) != 0.0)
                    m(r, cidx) *= t1[static_cast<std::size_t>(cidx)] / f.t[static_cast<std::size_t>(r)];
        return m;
    }();

    f.phi2 = -d * (l0t_inv * at * l0t);
    f.phi1 = d * (l0t_inv * j * l0t) + c * id;
    f.phi0 = Mat(n, n);
    f.psi1 = d * (l0t_inv * (j - at * (j + (nu + 1.0) * id)) * l0t) - (d * (n + 1.0) + c) * id;
    f.psi0 = l0t_inv * ((j + (nu + 1.0) * id) * (d * j + c * id) + delta_inv_a_delta1) * l0t;
    return f;
}

inline FamilyInstance build_gegenbauer(int n, double nu) {
    if (n < 1) throw std::invalid_argument("build_family: N must be at least 1");
    if (nu <= 0.0) throw std::invalid_argument("gegenbauer: nu must be positive");
    FamilyInstance f;
    f.kind = FamilyKind::gegenbauer;
    f.size = n;
    f.nu = nu;
    f.support = SupportTag::interval;

    const double ell = (n - 1) / 2.0;  // N = 2*ell + 1, ell a half-integer
    f.alpha.assign(static_cast<std::size_t>(n), 1.0);
    f.t.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        f.t[static_cast<std::size_t>(k)] =
            detail::factorial(k) * pochhammer(nu, k) / pochhammer(nu + 0.5, k) *
            pochhammer(2.0 * nu + 2.0 * ell, k) * (2.0 * ell + nu) /
            (pochhammer(2.0 * ell - k + 1.0, k) * pochhammer(2.0 * nu + k - 1.0, k));
    for (double v : f.t)
        if (v <= 0.0) throw std::invalid_argument("gegenbauer: t_j must be positive");

    // L^{(nu)}(x)_{jk} = beta_{jk} C_{j-k}^{(nu+k)}(x), indices 0..2*ell
    f.L = detail::lower_triangular_poly(n, [&](int j, int k) {
        const double beta =
            detail::factorial(j) / (detail::factorial(k) * pochhammer(2.0 * nu + 2.0 * k, j - k));
        return gegenbauer(j - k, nu + k) * beta;
    });
    // T_jj = t_j (1-x^2)^{nu+j-1/2}; common factor (1-x^2)^{nu-1/2} leaves (1-x^2)^j.
    std::vector<ScalarPoly> s;
    const ScalarPoly one_minus_x2({1.0, 0.0, -1.0});
    for (int j = 0; j < n; ++j) {
        ScalarPoly pj = ScalarPoly::constant(1.0);
        for (int i = 0; i < j; ++i) pj = pj * one_minus_x2;
        s.push_back(pj);
    }
    f.Q = detail::recompose_polynomial_part(f.L, f.t, s);

    // Pearson coefficients. Every formula carries c / ell^2, which stays finite
    // at ell = 0 once the factor is cancelled symbolically; kappa is that ratio.
    const double kappa = (2.0 * nu + 1.0) * (2.0 * ell + nu + 1.0) /
                         (nu * (2.0 * nu + 2.0 * ell + 1.0) * (2.0 * ell + nu) * (ell + nu));
    std::vector<double> jd(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) jd[static_cast<std::size_t>(i)] = static_cast<double>(i);
    const Mat j = Mat::diag(jd);  // diag(0, ..., 2*ell)
    const Mat id = Mat::identity(n);
    const Mat a = detail::subdiag_mat(n, std::vector<double>(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 1.0));
    const Mat at = a.transpose();

    f.has_pearson = true;
    const Mat k1_core = (j + nu * id) * ((2.0 * ell + nu) * id - j);  // -ell^2 K_1 / (2ell+2nu+1)
    f.psi1 = -kappa * (2.0 * ell + 2.0 * nu + 1.0) * k1_core;
    f.phi2 = -kappa * k1_core;
    f.phi1 = 0.5 * kappa *
             (((2.0 * ell + 1.0) * id - 2.0 * j) * (j - (2.0 * ell + 1.0) * id) * a +
              ((2.0 * ell - 1.0) * id - 2.0 * j) * at * j);
    f.phi0 = 0.25 * kappa *
             (4.0 * (ell + nu) * (ell + nu) * id +
              ((2.0 * ell + 2.0) * id - j) * ((2.0 * ell + 1.0) * id - j) * (a * a) +
              2.0 * (j * j) - 4.0 * ell * j - 2.0 * ell * id + (at * j) * (at * j));
    f.psi0 = -0.5 * kappa * (2.0 * ell + 1.0 + 2.0 * nu) *
             (a * (j - 2.0 * ell * id) * (j + nu * id) - at * j * ((2.0 * ell + nu) * id - j));
    return f;
}

inline FamilyInstance build_charlier(int n, double nu, const FamilyParams& p) {
    if (n < 1) throw std::invalid_argument("build_family: N must be at least 1");
    if (nu < 0.0 || std::abs(nu - std::lround(nu)) > 1e-12)
        throw std::invalid_argument("charlier: nu must be a nonnegative integer");
    if (p.a <= 0.0) throw std::invalid_argument("charlier: a must be positive");
    FamilyInstance f;
    f.kind = FamilyKind::charlier;
    f.size = n;
    f.nu = nu;
    f.params = p;
    f.support = SupportTag::nonneg_integers;
    const double a_par = p.a;
    const int nu_i = static_cast<int>(std::lround(nu));

    // (alpha_j / alpha_k)^2 = a^{k-j} (N-k)! / (N-j)!  (1-based)
    f.alpha.resize(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        f.alpha[static_cast<std::size_t>(j - 1)] =
            std::sqrt(std::pow(a_par, 1.0 - j) * detail::factorial(n - 1) / detail::factorial(n - j));
    auto t_of = [&](int v) {
        std::vector<double> t(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k)
            t[static_cast<std::size_t>(k - 1)] = std::pow(a_par / 2.0, v) * pochhammer(k, v);
        return t;
    };
    f.t = t_of(nu_i);

    std::vector<double> sub(static_cast<std::size_t>(n - 1 > 0 ? n - 1 : 0));
    for (int j = 2; j <= n; ++j)
        sub[static_cast<std::size_t>(j - 2)] =
            f.alpha[static_cast<std::size_t>(j - 1)] / f.alpha[static_cast<std::size_t>(j - 2)];
    const Mat a = detail::subdiag_mat(n, sub);
    const Mat at = a.transpose();
    const Mat id = Mat::identity(n);
    const Mat j = detail::row_index_diag(n, 0.0);

    // W(x) = (a^x / x!) (I+A)^{x+nu} diag(t) (I+A^*)^{x+nu}
    const MatPoly b = detail::nilpotent_binomial_power(a, nu);
    std::vector<Mat> dt;
    dt.push_back(Mat::diag(f.t));
    f.Q = b * MatPoly(n, dt) * b.adjoint();
    f.L = b;  // the polynomial lower-triangular factor of the LDU form

    f.has_pearson = true;
    const Mat at_inv = detail::nilpotent_inverse(id + at);  // (I + A^*)^{-1}
    f.phi2 = -0.5 * (at * at_inv);
    f.phi1 = 0.5 * (2.0 * j - (n + 1.0) * id - a_par * at - (2.0 * nu + 1.0) * (at * at_inv));
    f.psi1 = 0.5 * (j - (n + 1.0 + nu) * id - a_par * at - (nu + 1.0) * (at * at_inv));
    // phi0 = psi0 = (A^*+I)^{-nu} T(0)^{-1} (A+I) T^{(nu+1)}(0) (A^*+I)^{nu+1}
    Mat at_pow_neg_nu = Mat::identity(n);
    for (int i = 0; i < nu_i; ++i) at_pow_neg_nu = at_pow_neg_nu * at_inv;
    Mat at_pow_nu1 = Mat::identity(n);
    for (int i = 0; i < nu_i + 1; ++i) at_pow_nu1 = at_pow_nu1 * (id + at);
    std::vector<double> tinv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tinv[static_cast<std::size_t>(i)] = 1.0 / f.t[static_cast<std::size_t>(i)];
    const std::vector<double> t1 = t_of(nu_i + 1);
    f.phi0 = at_pow_neg_nu * Mat::diag(tinv) * (a + id) * Mat::diag(t1) * at_pow_nu1;
    f.psi0 = f.phi0;
    return f;
}

inline FamilyInstance build_family(FamilyKind kind, int n, double nu,
                                   const FamilyParams& p = FamilyParams{}) {
    switch (kind) {
        case FamilyKind::hermite: return build_hermite(n, nu, p, true);
        case FamilyKind::hermite_free: return build_hermite(n, nu, p, false);
        case FamilyKind::laguerre: return build_laguerre(n, nu, p);
        case FamilyKind::gegenbauer: return build_gegenbauer(n, nu);
        case FamilyKind::charlier: return build_charlier(n, nu, p);
    }
    throw std::invalid_argument("build_family: unknown kind");
}

/// Chebyshev-distributed sample points inside the support (integers for the
/// discrete family), used by the polynomial identity checks.
inline std::vector<double> sample_points(const FamilyInstance& f) {
    const int count = 2 * (2 * f.size + 3);
    std::vector<double> pts;
    if (f.is_discrete()) {
        for (int x = 0; x <= 2 * f.size + 6; ++x) pts.push_back(static_cast<double>(x));
        return pts;
    }
    double lo = 0.0, hi = 0.0;
    switch (f.support) {
        case SupportTag::real_line: lo = -3.0, hi = 3.0; break;
        case SupportTag::half_line: lo = 0.3, hi = 8.0; break;
        case SupportTag::interval: lo = -0.95, hi = 0.95; break;
        case SupportTag::nonneg_integers: break;
    }
    for (int i = 0; i < count; ++i) {
        const double u = std::cos(M_PI * (i + 0.5) / count);
        pts.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * u);
    }
    return pts;
}

/// Residuals of the strong Pearson pair, evaluated on the sample grid and
/// normalized by the magnitude of the reference side.
struct PearsonResiduals {
    double res_phi = 0.0;
    double res_psi = 0.0;
};

inline PearsonResiduals pearson_residuals(const FamilyInstance& f) {
    if (!f.has_pearson)
        throw std::invalid_argument("pearson_residuals: family has no Pearson structure");
    FamilyParams shifted = f.params;
    if (f.kind == FamilyKind::laguerre && !shifted.laguerre_l) shifted.laguerre_l = f.nu;
    const FamilyInstance g = build_family(f.kind, f.size, f.nu + 1.0, shifted);
    const MatPoly phi(f.size, {f.phi0, f.phi1, f.phi2});
    const MatPoly psi(f.size, {f.psi0, f.psi1});

    double num_phi = 0.0, den_phi = 0.0, num_psi = 0.0, den_psi = 0.0;
    for (double x : sample_points(f)) {
        const Mat w_next = g.weight_eval(x);
        const Mat w_cur = f.weight_eval(x);
        num_phi = std::max(num_phi, (w_next - w_cur * phi.eval(x)).norm_inf_entry());
        den_phi = std::max(den_phi, w_next.norm_inf_entry());
        Mat lhs(f.size, f.size);
        if (f.is_discrete()) {
            if (x < 1.0) continue;  // the backward difference needs x >= 1
            lhs = w_next - g.weight_eval(x - 1.0);
        } else {
            // W' = w (dlog(w) Q + Q') evaluated analytically
            lhs = g.scalar_weight(x) *
                  (g.scalar_weight_dlog(x) * g.Q.eval(x) + g.Q.derivative().eval(x));
        }
        num_psi = std::max(num_psi, (lhs - w_cur * psi.eval(x)).norm_inf_entry());
        den_psi = std::max(den_psi, lhs.norm_inf_entry());
    }
    PearsonResiduals r;
    r.res_phi = den_phi > 0.0 ? num_phi / den_phi : num_phi;
    r.res_psi = den_psi > 0.0 ? num_psi / den_psi : num_psi;
    return r;
}

/// max normalized residual of W Phi - Phi^* W and W Psi - Psi^* W.
inline double switching_residual(const FamilyInstance& f) {
    if (!f.has_pearson)
        throw std::invalid_argument("switching_residual: family has no Pearson structure");
    const MatPoly phi(f.size, {f.phi0, f.phi1, f.phi2});
    const MatPoly psi(f.size, {f.psi0, f.psi1});
    double num = 0.0, den = 0.0;
    for (double x : sample_points(f)) {
        const Mat w = f.weight_eval(x);
        const Mat p = phi.eval(x), q = psi.eval(x);
        num = std::max(num, (w * p - p.transpose() * w).norm_inf_entry());
        num = std::max(num, (w * q - q.transpose() * w).norm_inf_entry());
        den = std::max(den, (w * p).norm_inf_entry());
        den = std::max(den, (w * q).norm_inf_entry());
    }
    return den > 0.0 ? num / den : num;
}

using detail::nilpotent_binomial_power;

}  // namespace mvoptbl

#endif
