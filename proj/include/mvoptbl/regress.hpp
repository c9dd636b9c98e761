#ifndef MVOPTBL_REGRESS_HPP
#define MVOPTBL_REGRESS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mvop.hpp"
#include "mvoptbl/parallel.hpp"
#include "mvoptbl/report.hpp"
#include "mvoptbl/rightop.hpp"
#include "mvoptbl/tbl.hpp"

namespace mvoptbl {

struct GridInstance {
    FamilyKind kind;
    int size;
    double nu;
    FamilyParams params;
    std::string label;
};

/// The verification grid: every Pearson family and parameter set at desk
/// scale. Hermite/Laguerre sets 1-3 with N in 1..5 and nu in {1/2, 1, 2};
/// Gegenbauer N in {1, 3, 5}; Charlier nu in {0, 1, 2} and a in {1/2, 1, 3}.
inline std::vector<GridInstance> acceptance_grid() {
    std::vector<GridInstance> grid;
    const std::vector<double> nus = {0.5, 1.0, 2.0};
    for (int set = 1; set <= 3; ++set)
        for (int n = 1; n <= 5; ++n)
            for (double nu : nus) {
                FamilyParams p;
                p.param_set = set;
                p.lambda = 1.0;
                p.rho = 1.0;
                p.C = 0.5;
                grid.push_back({FamilyKind::hermite, n, nu, p,
                                "hermite set " + std::to_string(set) + " N=" + std::to_string(n) +
                                    " nu=" + std::to_string(nu)});
                grid.push_back({FamilyKind::laguerre, n, nu, p,
                                "laguerre set " + std::to_string(set) + " N=" + std::to_string(n) +
                                    " nu=" + std::to_string(nu)});
            }
    for (int n : {1, 3, 5})
        for (double nu : nus)
            grid.push_back({FamilyKind::gegenbauer, n, nu, FamilyParams{},
                            "gegenbauer N=" + std::to_string(n) + " nu=" + std::to_string(nu)});
    for (double nu : {0.0, 1.0, 2.0})
        for (double a : {0.5, 1.0, 3.0})
            for (int n = 1; n <= 5; ++n) {
                FamilyParams p;
                p.a = a;
                grid.push_back({FamilyKind::charlier, n, nu, p,
                                "charlier N=" + std::to_string(n) + " nu=" + std::to_string(nu) +
                                    " a=" + std::to_string(a)});
            }
    return grid;
}

/// Maps a reference band edge in [-0.5, 1] into the family's support.
inline double map_omega(const FamilyInstance& f, double omega) {
    switch (f.kind) {
        case FamilyKind::hermite:
        case FamilyKind::hermite_free:
            return omega;
        case FamilyKind::laguerre:
            return omega + 1.5;
        case FamilyKind::gegenbauer:
            return omega / 2.0;
        case FamilyKind::charlier:
            // half-integer cut between two lattice points
            return std::floor(omega + 3.0) + 0.5;
    }
    return omega;
}

/// Brute-force zeroth moment by dense trapezoid summation, independent of the
/// Gauss machinery. Continuous families only.
inline Mat trapezoid_moment(const FamilyInstance& f, int steps = 400000) {
    double lo = 0.0, hi = 0.0;
    switch (f.support) {
        case SupportTag::real_line: lo = -12.0, hi = 12.0; break;
        case SupportTag::half_line: lo = 0.0, hi = 60.0; break;
        case SupportTag::interval: lo = -1.0, hi = 1.0; break;
        case SupportTag::nonneg_integers:
            throw std::invalid_argument("trapezoid_moment: continuous families only");
    }
    const double h = (hi - lo) / steps;
    Mat acc(f.size, f.size);
    for (int i = 0; i <= steps; ++i) {
        const double x = lo + h * i;
        double w = f.scalar_weight(x);
        if (!std::isfinite(w)) w = 0.0;  // closed endpoint of an open support
        const double tw = (i == 0 || i == steps) ? 0.5 : 1.0;
        acc += (tw * h * w) * f.Q.eval(x);
    }
    return acc;
}

namespace detail {

struct InstanceResult {
    double pearson_phi = 0.0, pearson_psi = 0.0, switching = 0.0;
    double eigen_identity = 0.0;
    double eq9_closed = 0.0;
    double coupling_worst = 0.0;
    double reference_min = 1e300;
    double band_sym_worst = 0.0;
    double ortho = 0.0;
    double h_min_eig = 1e300;
};

inline InstanceResult run_grid_instance(const GridInstance& gi, std::uint64_t seed) {
    InstanceResult r;
    const FamilyInstance f = build_family(gi.kind, gi.size, gi.nu, gi.params);

    const PearsonResiduals pr = pearson_residuals(f);
    r.pearson_phi = pr.res_phi;
    r.pearson_psi = pr.res_psi;
    r.switching = switching_residual(f);

    for (int m = 0; m <= 4; ++m) {
        const Mat sigma = eigenvalue_matrix(f, m) + eigenvalue_matrix(f, m + 1);
        r.eq9_closed = std::max(r.eq9_closed, eq9_residual(f, closed_form_R(f, m), sigma));
    }

    const int n_max = 9;
    const MVOPSeq seq = generate_mvop(f, n_max);
    const RightOp d = build_D(f);
    for (int n = 0; n <= 8; ++n) {
        const MatPoly& pn = seq.P[static_cast<std::size_t>(n)];
        const MatPoly resid = d.apply(pn) - pn.mat_times(eigenvalue_matrix(f, n));
        r.eigen_identity = std::max(r.eigen_identity, resid.max_coeff_norm() / pn.max_coeff_norm());
        r.h_min_eig = std::min(r.h_min_eig, smallest_eigenvalue(seq.H[static_cast<std::size_t>(n)]));
        for (int m2 = 0; m2 < n; ++m2) {
            const Mat cross = inner(f, seq.rule, seq.P[static_cast<std::size_t>(m2)], pn);
            r.ortho = std::max(r.ortho, cross.norm_inf_entry() /
                                            seq.H[static_cast<std::size_t>(n)].norm_inf_entry());
        }
    }

    for (int m = 0; m <= 2; ++m) {
        const Mat rr = closed_form_R(f, m);
        const TOperator t = build_T(f, m, map_omega(f, 0.3), rr);
        const CouplingResult c = check_time_commutation(seq, t);
        r.coupling_worst = std::max(r.coupling_worst, c.coupling_at_M);
        r.reference_min = std::min(r.reference_min, c.reference_coupling);
    }
    for (double omega_ref : {-0.5, 0.3, 1.0}) {
        const TOperator t = build_T(f, 1, map_omega(f, omega_ref), closed_form_R(f, 1));
        r.band_sym_worst =
            std::max(r.band_sym_worst, check_band_symmetry(t, map_omega(f, omega_ref), 2, seed));
    }
    return r;
}

struct Worst {
    double value = 0.0;
    std::string label = "-";
    void take(double v, const std::string& l) {
        if (v > value) value = v, label = l;
    }
};
struct Least {
    double value = 1e300;
    std::string label = "-";
    void take(double v, const std::string& l) {
        if (v < value) value = v, label = l;
    }
};

}  // namespace detail

/// Runs the full verification suite (criteria over the grid, the closed-form
/// reproduction, the parameter-free solve/counterexample, and the quadrature
/// cross-check) into the report.
inline void run_regress(Report& rep, std::uint64_t seed) {
    const std::vector<GridInstance> grid = acceptance_grid();
    std::vector<detail::InstanceResult> results(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        results[static_cast<std::size_t>(i)] =
            detail::run_grid_instance(grid[static_cast<std::size_t>(i)], seed + static_cast<std::uint64_t>(i));
    });

    detail::Worst pearson, switching, eigen_id, eq9, coupling, band_sym, ortho;
    detail::Least reference, h_eig;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = results[i];
        const std::string& l = grid[i].label;
        pearson.take(std::max(r.pearson_phi, r.pearson_psi), l);
        switching.take(r.switching, l);
        eigen_id.take(r.eigen_identity, l);
        eq9.take(r.eq9_closed, l);
        coupling.take(r.coupling_worst, l);
        reference.take(r.reference_min, l);
        band_sym.take(r.band_sym_worst, l);
        ortho.take(r.ortho, l);
        h_eig.take(r.h_min_eig, l);
    }

    rep.add("c1 pearson residuals [" + pearson.label + "]",
            "W(nu+1) = W(nu) Phi ; dW(nu+1) = W(nu) Psi", pearson.value, 1e-10);
    rep.add("c1 switching residual [" + switching.label + "]", "W Phi = Phi* W ; W Psi = Psi* W",
            switching.value, 1e-10);
    rep.add("c2 eigenvalue identity [" + eigen_id.label + "]", "P_n . D = Lambda_n P_n",
            eigen_id.value, 1e-8);
    rep.add("c3 closed-form R [" + eq9.label + "]", "(R - x Sigma) W = W (R - x Sigma)*", eq9.value,
            1e-10);
    rep.add("c4 coupling at M [" + coupling.label + "]", "<P_M . T, P_{M+1}> = 0", coupling.value,
            1e-8);
    rep.add_flag("c4 reference coupling [" + reference.label + "]",
                 "<P_n . T, P_{n+1}> generically nonzero", reference.value > 1e-3);
    rep.add("c4 band symmetry [" + band_sym.label + "]", "<F.T, G>_Omega = <F, G.T>_Omega",
            band_sym.value, 1e-8);
    rep.add("c7 orthogonality [" + ortho.label + "]", "<P_m, P_n> = 0 for m != n", ortho.value, 1e-9);
    rep.add_flag("c7 norms positive definite [" + h_eig.label + "]", "H_n symmetric positive definite",
                 h_eig.value > 0.0);

    // closed 2x2 solve: affine family with the identity matrix in the null space
    {
        const FamilyInstance f2 = build_family(FamilyKind::hermite_free, 2, 0.0);
        const Mat sigma = eigenvalue_matrix(f2, 0) + eigenvalue_matrix(f2, 1);
        const RSolveReport r2 = solve_R(f2, sigma);
        rep.rsolve.emplace_back("free N=2", r2);
        Mat expected(2, 2);
        expected(0, 1) = -1.0;
        expected(1, 0) = -f2.t[1] / f2.t[0];
        const double dist = solution_set_distance(r2, expected);
        rep.add_flag("c5 free N=2 solvable", "R W - W R* = 2x[J, W] has an affine solution family",
                     r2.status == RSolveStatus::affine_family);
        rep.add("c5 free N=2 solution match", "particular matches [[0,-1],[-t2/t1,0]] mod null space",
                dist / expected.norm_fro(), 1e-6);
        double id_dist = 1e300;
        if (!r2.nullspace.empty()) {
            RSolveReport shifted = r2;
            shifted.particular = Mat(2, 2);
            id_dist = solution_set_distance(shifted, Mat::identity(2)) / std::sqrt(2.0);
        }
        rep.add("c5 identity in null space", "free parameter c I", id_dist, 1e-6);
    }

    // no solution for larger sizes
    {
        const std::vector<SweepEntry> sweep = counterexample_sweep({3, 4, 5, 6}, 5, seed);
        bool all_inconsistent = true, none_ambiguous = true;
        double min_residual = 1e300;
        for (const SweepEntry& e : sweep) {
            if (e.report.status != RSolveStatus::inconsistent) all_inconsistent = false;
            if (e.report.status == RSolveStatus::ambiguous) none_ambiguous = false;
            min_residual = std::min(min_residual, e.report.residual);
            rep.rsolve.emplace_back("free N=" + std::to_string(e.size) +
                                        (e.default_draw ? " default" : " random"),
                                    e.report);
        }
        rep.add_flag("c6 free N in 3..6 unsolvable", "R W - W R* = 2x[J, W] inconsistent",
                     all_inconsistent && none_ambiguous);
        rep.add_flag("c6 residual clear of dead zone",
                     "least-squares residual > 1e-3 on every draw", min_residual > 1e-3);
    }

    // independent quadrature cross-check on a handful of instances
    {
        struct Pick {
            FamilyKind kind;
            int size;
            double nu;
            int set;
        };
        const std::vector<Pick> picks = {{FamilyKind::hermite, 3, 1.0, 1},
                                         {FamilyKind::hermite, 2, 2.0, 2},
                                         {FamilyKind::laguerre, 3, 1.0, 2},
                                         {FamilyKind::gegenbauer, 3, 0.5, 1},
                                         {FamilyKind::hermite_free, 2, 0.0, 1}};
        double worst = 0.0;
        for (const Pick& pk : picks) {
            FamilyParams p;
            p.param_set = pk.set;
            const FamilyInstance f = build_family(pk.kind, pk.size, pk.nu, p);
            const MatPoly id = MatPoly::identity(f.size);
            const Mat gauss = inner(f, id, id);
            const Mat trap = trapezoid_moment(f);
            worst = std::max(worst, (gauss - trap).norm_inf_entry() / gauss.norm_inf_entry());
        }
        rep.add("c7 quadrature vs trapezoid oracle", "zeroth moment, two independent routes", worst,
                1e-9);
    }
}

}  // namespace mvoptbl

#endif
