#ifndef MVOPTBL_QUADRATURE_HPP
#define MVOPTBL_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mvoptbl {

enum class SupportTag { real_line, half_line, interval, nonneg_integers };

enum class BaseWeight { gaussian, gamma_type, gegenbauer_type, legendre, poisson };

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    SupportTag support = SupportTag::real_line;
    BaseWeight base = BaseWeight::gaussian;
    int exactness_degree = 0;  // integrates polynomials up to this degree
};

namespace detail {

/// Implicit-shift QL on a symmetric tridiagonal matrix, rotating a single
/// row vector z along. Yields eigenvalues in d and the first components of
/// the normalized eigenvectors in z (up to global sign).
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    const int iter_cap = 30 * n;
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[static_cast<std::size_t>(m)]) +
                                  std::abs(d[static_cast<std::size_t>(m + 1)]);
                if (std::abs(e[static_cast<std::size_t>(m)]) <= 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > iter_cap)
                throw std::runtime_error("tridiag_ql: iteration cap exceeded");
            double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                       (2.0 * e[static_cast<std::size_t>(l)]);
            double r = std::hypot(g, 1.0);
            g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
                e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[static_cast<std::size_t>(i)];
                const double b = c * e[static_cast<std::size_t>(i)];
                r = std::hypot(f, g);
                e[static_cast<std::size_t>(i + 1)] = r;
                if (r == 0.0) {
                    d[static_cast<std::size_t>(i + 1)] -= p;
                    e[static_cast<std::size_t>(m)] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[static_cast<std::size_t>(i + 1)] - p;
                r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
                p = s * r;
                d[static_cast<std::size_t>(i + 1)] = g + p;
                g = c * r - b;
                f = z[static_cast<std::size_t>(i + 1)];
                z[static_cast<std::size_t>(i + 1)] = s * z[static_cast<std::size_t>(i)] + c * f;
                z[static_cast<std::size_t>(i)] = c * z[static_cast<std::size_t>(i)] - s * f;
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[static_cast<std::size_t>(l)] -= p;
            e[static_cast<std::size_t>(l)] = g;
            e[static_cast<std::size_t>(m)] = 0.0;
        }
    }
}

/// Golub--Welsch from monic recurrence coefficients:
/// p_{k+1} = (x - a_k) p_k - b_k p_{k-1}, total mass mu0.
inline Quadrature golub_welsch(const std::vector<double>& a, const std::vector<double>& b,
                               double mu0, SupportTag support, BaseWeight base) {
    const int n = static_cast<int>(a.size());
    std::vector<double> d = a;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = std::sqrt(b[static_cast<std::size_t>(i)]);
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    z[0] = 1.0;
    tridiag_ql(d, e, z);
    Quadrature q;
    q.support = support;
    q.base = base;
    q.exactness_degree = 2 * n - 1;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] <
                d[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n; ++i) {
        const int k = order[static_cast<std::size_t>(i)];
        q.nodes.push_back(d[static_cast<std::size_t>(k)]);
        q.weights.push_back(mu0 * z[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(k)]);
    }
    return q;
}

}  // namespace detail

/// Gauss--Hermite for weight e^{-x^2} on the real line.
inline Quadrature gauss_hermite(int n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    std::vector<double> a(static_cast<std::size_t>(n_nodes), 0.0);
    std::vector<double> b(static_cast<std::size_t>(n_nodes), 0.0);
    for (int i = 1; i < n_nodes; ++i) b[static_cast<std::size_t>(i)] = i / 2.0;
    return detail::golub_welsch(a, b, std::sqrt(M_PI), SupportTag::real_line, BaseWeight::gaussian);
}

/// Generalized Gauss--Laguerre for weight x^nu e^{-x} on (0, inf); nu > -1.
inline Quadrature gauss_laguerre(int n_nodes, double nu) {
    if (n_nodes < 1) throw std::invalid_argument("gauss_laguerre: need at least one node");
    if (nu <= -1.0) throw std::invalid_argument("gauss_laguerre: exponent must exceed -1");
    std::vector<double> a(static_cast<std::size_t>(n_nodes));
    std::vector<double> b(static_cast<std::size_t>(n_nodes), 0.0);
    for (int i = 0; i < n_nodes; ++i) a[static_cast<std::size_t>(i)] = 2.0 * i + nu + 1.0;
    for (int i = 1; i < n_nodes; ++i) b[static_cast<std::size_t>(i)] = i * (i + nu);
    return detail::golub_welsch(a, b, std::tgamma(nu + 1.0), SupportTag::half_line,
                                BaseWeight::gamma_type);
}

/// Gauss rule for weight (1-x^2)^{nu - 1/2} on (-1, 1); nu > -1/2.
inline Quadrature gauss_gegenbauer(int n_nodes, double nu) {
    if (n_nodes < 1) throw std::invalid_argument("gauss_gegenbauer: need at least one node");
    const double s = nu - 0.5;  // Jacobi exponent, alpha = beta = s
    if (s <= -1.0) throw std::invalid_argument("gauss_gegenbauer: exponent must exceed -1");
    std::vector<double> a(static_cast<std::size_t>(n_nodes), 0.0);
    std::vector<double> b(static_cast<std::size_t>(n_nodes), 0.0);
    for (int i = 1; i < n_nodes; ++i) {
        const double n = i, ab = 2.0 * s;
        b[static_cast<std::size_t>(i)] = 4.0 * n * (n + s) * (n + s) * (n + ab) /
                                         ((2.0 * n + ab) * (2.0 * n + ab) * (2.0 * n + ab + 1.0) *
                                          (2.0 * n + ab - 1.0));
    }
    // symmetric Jacobi case: handle n=1 when 2s+... cancels via limit (s=0 gives 1/3)
    if (n_nodes > 1) {
        const double ab = 2.0 * s;
        b[1] = 4.0 * (1.0 + s) * (1.0 + s) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    }
    const double mu0 = std::pow(2.0, 2.0 * s + 1.0) * std::tgamma(s + 1.0) * std::tgamma(s + 1.0) /
                       std::tgamma(2.0 * s + 2.0);
    return detail::golub_welsch(a, b, mu0, SupportTag::interval, BaseWeight::gegenbauer_type);
}

/// Gauss--Legendre on (-1, 1).
inline Quadrature gauss_legendre(int n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    std::vector<double> a(static_cast<std::size_t>(n_nodes), 0.0);
    std::vector<double> b(static_cast<std::size_t>(n_nodes), 0.0);
    for (int i = 1; i < n_nodes; ++i) {
        const double n = i;
        b[static_cast<std::size_t>(i)] = n * n / (4.0 * n * n - 1.0);
    }
    return detail::golub_welsch(a, b, 2.0, SupportTag::interval, BaseWeight::legendre);
}

/// Discrete rule for the Poisson-type weight a^x / x! on the nonnegative
/// integers, truncated so the tail of sum a^x/x! x^degree_cap stays below
/// tail_tol * e^a.
inline Quadrature charlier_sum_rule(double a, double tail_tol, int degree_cap = 10) {
    if (a <= 0.0 || tail_tol <= 0.0)
        throw std::invalid_argument("charlier_sum_rule: a and tail_tol must be positive");
    Quadrature q;
    q.support = SupportTag::nonneg_integers;
    q.base = BaseWeight::poisson;
    q.exactness_degree = degree_cap;
    const double budget = tail_tol * std::exp(a);
    double w = 1.0;  // a^x / x!
    int x = 0;
    while (true) {
        q.nodes.push_back(static_cast<double>(x));
        q.weights.push_back(w);
        ++x;
        w *= a / x;
        // conservative geometric tail bound once the terms are decaying
        const double growth = std::pow(static_cast<double>(x + 1) / std::max(1, x), degree_cap);
        const double ratio = (a / (x + 1.0)) * growth;
        if (x > a && ratio < 0.5) {
            const double tail = w * std::pow(static_cast<double>(x), degree_cap) / (1.0 - ratio);
            if (tail < budget) break;
        }
        if (x > 100000) throw std::runtime_error("charlier_sum_rule: truncation failed");
    }
    return q;
}

}  // namespace mvoptbl

#endif
