#include <doctest.h>

#include <cmath>

#include "mvoptbl/regress.hpp"
#include "mvoptbl/rng.hpp"
#include "mvoptbl/tbl.hpp"

using namespace mvoptbl;

namespace {

MatPoly random_poly(Lcg& rng, int n, int deg) {
    std::vector<Mat> c;
    for (int p = 0; p <= deg; ++p) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
        c.push_back(std::move(m));
    }
    return MatPoly(n, std::move(c));
}

}  // namespace

TEST_SUITE("tbl") {

TEST_CASE("closed forms satisfy the commuting condition") {
    FamilyParams pc;
    pc.a = 2.0;
    const std::vector<FamilyInstance> fams = {
        build_family(FamilyKind::hermite, 3, 1.0),
        build_family(FamilyKind::laguerre, 3, 0.5),
        build_family(FamilyKind::gegenbauer, 3, 2.0),
        build_family(FamilyKind::charlier, 3, 1.0, pc),
    };
    for (const FamilyInstance& f : fams)
        for (int m = 0; m <= 3; ++m) {
            const Mat sigma = eigenvalue_matrix(f, m) + eigenvalue_matrix(f, m + 1);
            CHECK(eq9_residual(f, closed_form_R(f, m), sigma) < 1e-10);
        }
}

TEST_CASE("solver recovers the closed form within its solution set") {
    const FamilyInstance f = build_family(FamilyKind::laguerre, 3, 1.0);
    const int m = 1;
    const Mat sigma = eigenvalue_matrix(f, m) + eigenvalue_matrix(f, m + 1);
    const RSolveReport rep = solve_R(f, sigma);
    CHECK(rep.status != RSolveStatus::inconsistent);
    CHECK(rep.status != RSolveStatus::ambiguous);
    CHECK(rep.cols == 9);
    CHECK(rep.rows <= 2 * f.size * f.size * f.size * 2);
    const Mat closed = closed_form_R(f, m);
    CHECK(solution_set_distance(rep, closed) < 1e-7 * (1.0 + closed.norm_fro()));
    CHECK(eq9_residual(f, rep.particular, sigma) < 1e-8);
}

TEST_CASE("solution set distance is zero at the particular solution") {
    const FamilyInstance f = build_family(FamilyKind::hermite, 2, 1.0);
    const Mat sigma = eigenvalue_matrix(f, 0) + eigenvalue_matrix(f, 1);
    const RSolveReport rep = solve_R(f, sigma);
    CHECK(solution_set_distance(rep, rep.particular) < 1e-12);
}

TEST_CASE("assembled operator matches the direct composition") {
    Lcg rng(61);
    FamilyParams pc;
    pc.a = 1.0;
    const std::vector<FamilyInstance> fams = {
        build_family(FamilyKind::hermite, 2, 1.0),
        build_family(FamilyKind::gegenbauer, 3, 1.0),
        build_family(FamilyKind::charlier, 2, 1.0, pc),
    };
    for (const FamilyInstance& f : fams) {
        const TOperator t = build_T(f, 1, 0.4, closed_form_R(f, 1));
        for (int trial = 0; trial < 3; ++trial) {
            const MatPoly g = random_poly(rng, f.size, 4);
            const MatPoly lhs = t.op.apply(g);
            const MatPoly rhs = apply_T_direct(t, g);
            CHECK((lhs - rhs).max_coeff_norm() < 1e-10 * (1.0 + rhs.max_coeff_norm()));
        }
    }
}

TEST_CASE("operator decouples the truncated band at M and only there") {
    const FamilyInstance f = build_family(FamilyKind::hermite, 2, 1.0);
    const MVOPSeq seq = generate_mvop(f, 6);
    for (int m : {0, 1, 2}) {
        const TOperator t = build_T(f, m, 0.3, closed_form_R(f, m));
        const CouplingResult c = check_time_commutation(seq, t);
        CHECK(c.coupling_at_M < 1e-8);
        CHECK(c.reference_coupling > 1e-3);
    }
}

TEST_CASE("band symmetry holds for the commuting operator") {
    const FamilyInstance f = build_family(FamilyKind::laguerre, 2, 1.0);
    const TOperator t = build_T(f, 1, 1.7, closed_form_R(f, 1));
    CHECK(check_band_symmetry(t, 1.7, 3, 7) < 1e-8);
    // a wrong R breaks the symmetry
    const TOperator bad = build_T(f, 1, 1.7, closed_form_R(f, 1) + Mat::identity(2) * 0.5 +
                                                 Mat(2, 2, {0.0, 1.0, 0.0, 0.0}));
    CHECK(check_band_symmetry(bad, 1.7, 3, 7) > 1e-4);
}

TEST_CASE("size-two free weight admits an affine solution family") {
    const FamilyInstance f = build_family(FamilyKind::hermite_free, 2, 0.0);
    const Mat sigma = eigenvalue_matrix(f, 0) + eigenvalue_matrix(f, 1);
    const RSolveReport rep = solve_R(f, sigma);
    CHECK(rep.status == RSolveStatus::affine_family);
    Mat expected(2, 2);
    expected(0, 1) = -1.0;
    expected(1, 0) = -f.t[1] / f.t[0];
    CHECK(solution_set_distance(rep, expected) < 1e-6);
    // the identity spans the homogeneous direction
    RSolveReport homogeneous = rep;
    homogeneous.particular = Mat(2, 2);
    CHECK(solution_set_distance(homogeneous, Mat::identity(2)) < 1e-6);
}

TEST_CASE("larger free weights are inconsistent for every draw") {
    const std::vector<SweepEntry> sweep = counterexample_sweep({3, 4}, 3, 99);
    CHECK(sweep.size() == 8);
    for (const SweepEntry& e : sweep) {
        CHECK(e.report.status == RSolveStatus::inconsistent);
        CHECK(e.report.residual > 1e-3);
    }
}

TEST_CASE("status names") {
    CHECK(to_string(RSolveStatus::unique) == "unique");
    CHECK(to_string(RSolveStatus::affine_family) == "affine_family");
    CHECK(to_string(RSolveStatus::inconsistent) == "inconsistent");
    CHECK(to_string(RSolveStatus::ambiguous) == "ambiguous");
}

TEST_CASE("trapezoid oracle agrees with the gauss machinery") {
    const FamilyInstance f = build_family(FamilyKind::hermite, 2, 1.0);
    const MatPoly id = MatPoly::identity(2);
    const Mat gauss = inner(f, id, id);
    const Mat trap = trapezoid_moment(f, 200000);
    CHECK((gauss - trap).norm_inf_entry() < 1e-9 * gauss.norm_inf_entry());
}

TEST_CASE("omega mapping lands inside each support") {
    FamilyParams pc;
    pc.a = 1.0;
    for (double omega : {-0.5, 0.3, 1.0}) {
        CHECK(build_family(FamilyKind::laguerre, 2, 1.0).in_support(
            map_omega(build_family(FamilyKind::laguerre, 2, 1.0), omega)));
        CHECK(build_family(FamilyKind::gegenbauer, 3, 1.0).in_support(
            map_omega(build_family(FamilyKind::gegenbauer, 3, 1.0), omega)));
        const FamilyInstance ch = build_family(FamilyKind::charlier, 2, 1.0, pc);
        const double mapped = map_omega(ch, omega);
        CHECK(mapped > 0.0);
        CHECK(std::abs(mapped - std::floor(mapped) - 0.5) < 1e-12);  // half-integer cut
    }
}

}  // TEST_SUITE
