#include <doctest.h>

#include <cmath>

#include "mvoptbl/quadrature.hpp"
#include "mvoptbl/scalar_poly.hpp"

using namespace mvoptbl;

namespace {

double moment(const Quadrature& q, int k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * std::pow(q.nodes[i], k);
    return s;
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("pochhammer") {
    CHECK(pochhammer(3.0, 4) == doctest::Approx(360.0));
    CHECK(pochhammer(1.5, 0) == doctest::Approx(1.0));
    CHECK(pochhammer(-2.0, 3) == doctest::Approx(0.0));
}

TEST_CASE("scalar polynomial arithmetic") {
    const ScalarPoly p({1.0, 2.0});       // 1 + 2x
    const ScalarPoly q({0.0, 0.0, 3.0});  // 3x^2
    const ScalarPoly pq = p * q;          // 3x^2 + 6x^3
    CHECK(pq.coeff(2) == doctest::Approx(3.0));
    CHECK(pq.coeff(3) == doctest::Approx(6.0));
    CHECK(pq.eval(2.0) == doctest::Approx(p.eval(2.0) * q.eval(2.0)));
    CHECK(p.times_x().coeff(1) == doctest::Approx(1.0));
    CHECK(ScalarPoly({1.0, 0.0, 0.0}).degree() == 0);  // trailing zeros trimmed
}

TEST_CASE("hermite polynomials (physicists')") {
    CHECK(hermite(0).eval(0.3) == doctest::Approx(1.0));
    CHECK(hermite(1).eval(0.3) == doctest::Approx(0.6));
    // H_3 = 8x^3 - 12x
    const ScalarPoly h3 = hermite(3);
    CHECK(h3.coeff(3) == doctest::Approx(8.0));
    CHECK(h3.coeff(1) == doctest::Approx(-12.0));
    CHECK(h3.coeff(0) == doctest::Approx(0.0));
    // H_4 = 16x^4 - 48x^2 + 12
    CHECK(hermite(4).eval(1.2) == doctest::Approx(16.0 * std::pow(1.2, 4) - 48.0 * 1.44 + 12.0));
}

TEST_CASE("laguerre polynomials") {
    const double a = 0.7;
    // L_2^{(a)} = x^2/2 - (a+2)x + (a+1)(a+2)/2
    const ScalarPoly l2 = laguerre(2, a);
    CHECK(l2.coeff(2) == doctest::Approx(0.5));
    CHECK(l2.coeff(1) == doctest::Approx(-(a + 2.0)));
    CHECK(l2.coeff(0) == doctest::Approx((a + 1.0) * (a + 2.0) / 2.0));
    // leading coefficient (-1)^n / n!
    CHECK(laguerre(5, a).coeff(5) == doctest::Approx(-1.0 / 120.0));
}

TEST_CASE("gegenbauer polynomials") {
    const double nu = 1.3;
    CHECK(gegenbauer(1, nu).coeff(1) == doctest::Approx(2.0 * nu));
    // C_2^{(nu)} = 2 nu (nu+1) x^2 - nu
    const ScalarPoly c2 = gegenbauer(2, nu);
    CHECK(c2.coeff(2) == doctest::Approx(2.0 * nu * (nu + 1.0)));
    CHECK(c2.coeff(0) == doctest::Approx(-nu));
    // nu = 1: Chebyshev of the second kind, U_3(1) = 4
    CHECK(gegenbauer(3, 1.0).eval(1.0) == doctest::Approx(4.0));
}

TEST_CASE("charlier polynomials") {
    const double a = 2.0;
    // c_1 = 1 - x/a, c_2 = 1 - 2x/a + (x^2 - x)/a^2
    CHECK(charlier(1, a).coeff(1) == doctest::Approx(-0.5));
    const ScalarPoly c2 = charlier(2, a);
    CHECK(c2.coeff(0) == doctest::Approx(1.0));
    CHECK(c2.coeff(1) == doctest::Approx(-2.0 / a - 1.0 / (a * a)));
    CHECK(c2.coeff(2) == doctest::Approx(1.0 / (a * a)));
    // orthogonality against the Poisson weight
    const Quadrature q = charlier_sum_rule(a, 1e-16, 8);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * charlier(2, a).eval(q.nodes[i]) * charlier(3, a).eval(q.nodes[i]);
    CHECK(std::abs(s) < 1e-12 * std::exp(a));
}

TEST_CASE("gauss-hermite moments") {
    const Quadrature q = gauss_hermite(12);
    CHECK(q.exactness_degree == 23);
    CHECK(moment(q, 0) == doctest::Approx(std::sqrt(M_PI)));
    CHECK(std::abs(moment(q, 1)) < 1e-14);
    CHECK(moment(q, 2) == doctest::Approx(std::sqrt(M_PI) / 2.0));
    CHECK(moment(q, 6) == doctest::Approx(15.0 * std::sqrt(M_PI) / 8.0));
    CHECK(std::abs(moment(q, 7)) < 1e-10);
}

TEST_CASE("gauss-laguerre moments") {
    const double nu = 1.5;
    const Quadrature q = gauss_laguerre(12, nu);
    for (int k = 0; k <= 8; ++k)
        CHECK(moment(q, k) == doctest::Approx(std::tgamma(nu + 1.0 + k)).epsilon(1e-11));
}

TEST_CASE("gauss rule for the symmetric interval weight") {
    const double nu = 1.5, s = nu - 0.5;
    const Quadrature q = gauss_gegenbauer(12, nu);
    for (int m = 0; m <= 4; ++m) {
        const double exact = std::tgamma(m + 0.5) * std::tgamma(s + 1.0) / std::tgamma(m + s + 1.5);
        CHECK(moment(q, 2 * m) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(std::abs(moment(q, 2 * m + 1)) < 1e-14);
    }
    // nu = 1/2 degenerates to Legendre
    const Quadrature g = gauss_gegenbauer(8, 0.5), l = gauss_legendre(8);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        CHECK(g.nodes[i] == doctest::Approx(l.nodes[i]).epsilon(1e-12));
        CHECK(g.weights[i] == doctest::Approx(l.weights[i]).epsilon(1e-12));
    }
}

TEST_CASE("gauss-legendre moments") {
    const Quadrature q = gauss_legendre(8);
    CHECK(moment(q, 0) == doctest::Approx(2.0));
    CHECK(moment(q, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(moment(q, 4) == doctest::Approx(2.0 / 5.0));
    CHECK(std::abs(moment(q, 3)) < 1e-15);
}

TEST_CASE("poisson sum rule matches direct summation") {
    for (double a : {0.5, 1.0, 3.0}) {
        const Quadrature q = charlier_sum_rule(a, 1e-15, 6);
        for (int k = 0; k <= 6; ++k) {
            double direct = 0.0, w = 1.0;
            for (int x = 0; x <= 300; ++x) {
                direct += w * std::pow(static_cast<double>(x), k);
                w *= a / (x + 1);
            }
            CHECK(moment(q, k) == doctest::Approx(direct).epsilon(1e-12));
        }
        for (double wv : q.weights) CHECK(wv > 0.0);
    }
}

TEST_CASE("quadrature argument validation") {
    CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_laguerre(4, -1.5), std::invalid_argument);
    CHECK_THROWS_AS(charlier_sum_rule(-1.0, 1e-12), std::invalid_argument);
}

}  // TEST_SUITE
