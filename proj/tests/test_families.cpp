#include <doctest.h>

#include <cmath>

#include "mvoptbl/family.hpp"

using namespace mvoptbl;

TEST_SUITE("families") {

TEST_CASE("hermite set 1, N=2, nu=1: frozen parameters") {
    const FamilyInstance f = build_family(FamilyKind::hermite, 2, 1.0);
    REQUIRE(f.alpha.size() == 2);
    CHECK(f.alpha[0] == doctest::Approx(1.0));
    CHECK(f.alpha[1] == doctest::Approx(std::sqrt(0.5)));
    CHECK(f.t[0] == doctest::Approx(1.0));
    CHECK(f.t[1] == doctest::Approx(2.0));
    CHECK(f.psi1(0, 0) == doctest::Approx(-3.0));
    CHECK(f.psi1(1, 1) == doctest::Approx(-2.0));
    CHECK(std::abs(f.psi1(0, 1)) < 1e-14);
    CHECK(std::abs(f.psi1(1, 0)) < 1e-14);
    CHECK(f.Q.degree() == 2);  // 2N - 2
}

TEST_CASE("hermite N=1 reduces to the scalar weight") {
    for (double nu : {0.5, 1.0, 2.0}) {
        const FamilyInstance f = build_family(FamilyKind::hermite, 1, nu);
        // Phi = 1, Psi = -2x for parameter set 1
        CHECK(f.phi0(0, 0) == doctest::Approx(1.0));
        CHECK(std::abs(f.phi1(0, 0)) < 1e-14);
        CHECK(std::abs(f.phi2(0, 0)) < 1e-14);
        CHECK(f.psi1(0, 0) == doctest::Approx(-2.0));
        CHECK(std::abs(f.psi0(0, 0)) < 1e-14);
    }
}

TEST_CASE("laguerre N=1 reduces to the scalar weight") {
    const double nu = 1.3;
    const FamilyInstance f = build_family(FamilyKind::laguerre, 1, nu);
    // Phi = (nu+1) x, Psi = (nu+1)(nu+2) - (nu+1) x for parameter set 1
    CHECK(f.phi1(0, 0) == doctest::Approx(nu + 1.0));
    CHECK(std::abs(f.phi0(0, 0)) < 1e-13);
    CHECK(std::abs(f.phi2(0, 0)) < 1e-13);
    CHECK(f.psi1(0, 0) == doctest::Approx(-(nu + 1.0)));
    CHECK(f.psi0(0, 0) == doctest::Approx((nu + 1.0) * (nu + 2.0)));
}

TEST_CASE("gegenbauer N=1 reduces to the scalar weight") {
    const double nu = 0.8;
    const FamilyInstance f = build_family(FamilyKind::gegenbauer, 1, nu);
    // Phi = (nu+1)/nu (1 - x^2), Psi = -(2nu+1)(nu+1)/nu x
    CHECK(f.phi0(0, 0) == doctest::Approx((nu + 1.0) / nu));
    CHECK(f.phi2(0, 0) == doctest::Approx(-(nu + 1.0) / nu));
    CHECK(std::abs(f.phi1(0, 0)) < 1e-13);
    CHECK(f.psi1(0, 0) == doctest::Approx(-(2.0 * nu + 1.0) * (nu + 1.0) / nu));
    CHECK(std::abs(f.psi0(0, 0)) < 1e-13);
}

TEST_CASE("charlier polynomial factor matches integer matrix powers") {
    const int n = 4, nu_i = 2;
    FamilyParams p;
    p.a = 1.5;
    const FamilyInstance f = build_family(FamilyKind::charlier, n, static_cast<double>(nu_i), p);
    Mat a(n, n);
    for (int j = 1; j < n; ++j) a(j, j - 1) = f.alpha[static_cast<std::size_t>(j)] / f.alpha[static_cast<std::size_t>(j - 1)];
    const MatPoly b = nilpotent_binomial_power(a, static_cast<double>(nu_i));
    for (int x = 0; x <= 5; ++x) {
        Mat pow = Mat::identity(n);
        for (int i = 0; i < x + nu_i; ++i) pow = pow * (Mat::identity(n) + a);
        CHECK((b.eval(static_cast<double>(x)) - pow).norm_inf_entry() < 1e-12 * pow.norm_inf_entry());
    }
}

TEST_CASE("weight is symmetric and positive definite on the support") {
    const std::vector<FamilyInstance> fams = {
        build_family(FamilyKind::hermite, 3, 1.0),
        build_family(FamilyKind::laguerre, 3, 0.5),
        build_family(FamilyKind::gegenbauer, 3, 1.0),
        build_family(FamilyKind::charlier, 3, 1.0),
        build_family(FamilyKind::hermite_free, 3, 0.0),
    };
    for (const FamilyInstance& f : fams) {
        CHECK(f.Q.degree() == 2 * f.size - 2);
        for (double x : sample_points(f)) {
            const Mat w = f.weight_eval(x);
            CHECK(w.is_symmetric(1e-11 * (1.0 + w.norm_inf_entry())));
            CHECK(smallest_eigenvalue(w) > 0.0);
        }
    }
}

TEST_CASE("pearson pair holds across families and parameter sets") {
    std::vector<FamilyInstance> fams;
    for (int set = 1; set <= 3; ++set) {
        FamilyParams p;
        p.param_set = set;
        p.lambda = 1.5;
        p.rho = 0.8;
        p.C = 0.4;
        fams.push_back(build_family(FamilyKind::hermite, 3, 1.0, p));
        fams.push_back(build_family(FamilyKind::laguerre, 3, 2.0, p));
    }
    fams.push_back(build_family(FamilyKind::gegenbauer, 3, 0.5));
    fams.push_back(build_family(FamilyKind::gegenbauer, 5, 2.0));
    FamilyParams pc;
    pc.a = 2.0;
    fams.push_back(build_family(FamilyKind::charlier, 4, 1.0, pc));
    for (const FamilyInstance& f : fams) {
        const PearsonResiduals r = pearson_residuals(f);
        CHECK(r.res_phi < 1e-10);
        CHECK(r.res_psi < 1e-10);
        CHECK(switching_residual(f) < 1e-10);
    }
}

TEST_CASE("free weight accepts custom parameters and has no pearson data") {
    FamilyParams p;
    p.free_alpha = std::vector<double>{1.0, 2.0, 0.5};
    p.free_t = std::vector<double>{3.0, 1.0, 2.0};
    const FamilyInstance f = build_family(FamilyKind::hermite_free, 3, 0.0, p);
    CHECK(!f.has_pearson);
    CHECK(f.alpha[1] == doctest::Approx(2.0));
    CHECK(f.t[0] == doctest::Approx(3.0));
    CHECK_THROWS_AS(pearson_residuals(f), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_family(FamilyKind::hermite, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_family(FamilyKind::hermite, 2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_family(FamilyKind::gegenbauer, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_family(FamilyKind::charlier, 2, 1.5), std::invalid_argument);
    FamilyParams bad;
    bad.a = -1.0;
    CHECK_THROWS_AS(build_family(FamilyKind::charlier, 2, 1.0, bad), std::invalid_argument);
    FamilyParams short_vec;
    short_vec.free_t = std::vector<double>{1.0};
    CHECK_THROWS_AS(build_family(FamilyKind::hermite_free, 3, 0.0, short_vec), std::invalid_argument);
}

TEST_CASE("sample points stay inside the support") {
    for (const FamilyInstance& f : {build_family(FamilyKind::laguerre, 2, 0.5),
                                    build_family(FamilyKind::gegenbauer, 3, 1.0),
                                    build_family(FamilyKind::charlier, 2, 0.0)}) {
        const std::vector<double> pts = sample_points(f);
        CHECK(pts.size() > 2 * static_cast<std::size_t>(f.size) + 3);
        for (double x : pts) CHECK(f.in_support(x));
    }
}

}  // TEST_SUITE
