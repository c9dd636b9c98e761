// mvoptbl: construction and verification workbench for matrix-weight
// orthogonal polynomial families and their commuting time-band operators.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mvop.hpp"
#include "mvoptbl/regress.hpp"
#include "mvoptbl/report.hpp"
#include "mvoptbl/rightop.hpp"
#include "mvoptbl/tbl.hpp"

namespace {

using namespace mvoptbl;

struct CommonOpts {
    std::string family = "hermite";
    int size = 2;
    double nu = 1.0;
    int set = 1;
    double lambda = 1.0;
    double rho = 1.0;
    double C = 0.0;
    double a = 1.0;
    std::string out;
    std::string format = "text";
};

void add_family_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--family", o.family, "hermite | laguerre | gegenbauer | charlier | free")
        ->check(CLI::IsMember({"hermite", "laguerre", "gegenbauer", "charlier", "free"}));
    cmd->add_option("--size", o.size, "matrix size N")->check(CLI::PositiveNumber);
    cmd->add_option("--nu", o.nu, "weight parameter nu");
    cmd->add_option("--set", o.set, "parameter set (hermite/laguerre: 1, 2, 3)")
        ->check(CLI::Range(1, 3));
    cmd->add_option("--lambda", o.lambda, "set 2 scale parameter");
    cmd->add_option("--rho", o.rho, "set 3 scale parameter");
    cmd->add_option("--C", o.C, "set 3 shift parameter");
    cmd->add_option("--a", o.a, "charlier rate parameter");
}

void add_output_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
}

FamilyKind parse_kind(const std::string& s) {
    if (s == "hermite") return FamilyKind::hermite;
    if (s == "laguerre") return FamilyKind::laguerre;
    if (s == "gegenbauer") return FamilyKind::gegenbauer;
    if (s == "charlier") return FamilyKind::charlier;
    if (s == "free") return FamilyKind::hermite_free;
    throw std::invalid_argument("unknown family: " + s);
}

FamilyInstance build_from(const CommonOpts& o) {
    FamilyParams p;
    p.param_set = o.set;
    p.lambda = o.lambda;
    p.rho = o.rho;
    p.C = o.C;
    p.a = o.a;
    return build_family(parse_kind(o.family), o.size, o.nu, p);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

int emit(const Report& rep, const CommonOpts& o, double wall_ms, bool any_ambiguous) {
    std::string body;
    if (o.format == "json")
        body = rep.to_json_doc(wall_ms, utc_timestamp()).dump(2) + "\n";
    else
        body = rep.to_text();
    if (o.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            std::cerr << "mvoptbl: cannot open output file " << o.out << "\n";
            return 1;
        }
        f << body;
    }
    if (any_ambiguous) return 3;
    return rep.overall_pass() ? 0 : 2;
}

bool has_ambiguous(const Report& rep) {
    for (const auto& [label, r] : rep.rsolve)
        if (r.status == RSolveStatus::ambiguous) return true;
    return false;
}

json config_json(const CommonOpts& o) {
    json j;
    j["family"] = o.family;
    j["size"] = o.size;
    if (o.family != "free") j["nu"] = o.nu;
    if (o.family == "hermite" || o.family == "laguerre") {
        j["set"] = o.set;
        if (o.set == 2) j["lambda"] = o.lambda;
        if (o.set == 3) j["rho"] = o.rho, j["C"] = o.C;
    }
    if (o.family == "charlier") j["a"] = o.a;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-weight orthogonal polynomial time-band workbench"};
    app.require_subcommand(1);

    CommonOpts o;
    int m_index = 1;
    double omega = 0.3;
    int n_max = 8;
    std::vector<int> sizes = {3, 4, 5, 6};
    int trials = 5;
    std::uint64_t seed = 7;
    double tol_identity = 1e-10;
    double tol_consistent = 1e-8;
    double tol_inconsistent = 1e-3;

    CLI::App* families = app.add_subcommand("families", "show a resolved family instance");
    add_family_options(families, o);
    add_output_options(families, o);

    CLI::App* verify = app.add_subcommand("verify-pearson", "check the Pearson pair, switching, and eigenvalue identities");
    add_family_options(verify, o);
    add_output_options(verify, o);
    int nodes = 0;
    verify->add_option("--n-max", n_max, "verify the eigenvalue identity up to this degree");
    verify->add_option("--tol-identity", tol_identity, "residual tolerance");
    verify->add_option("--nodes", nodes, "minimum quadrature node count");

    CLI::App* solver = app.add_subcommand("solve-r", "solve the commuting condition for R");
    add_family_options(solver, o);
    add_output_options(solver, o);
    solver->add_option("--M", m_index, "band index M")->check(CLI::NonNegativeNumber);
    solver->add_option("--tol-consistent", tol_consistent, "residual below this means solvable");
    solver->add_option("--tol-inconsistent", tol_inconsistent, "residual above this means unsolvable");

    CLI::App* buildt = app.add_subcommand("build-t", "assemble the commuting operator T and verify it");
    add_family_options(buildt, o);
    add_output_options(buildt, o);
    buildt->add_option("--M", m_index, "band index M")->check(CLI::NonNegativeNumber);
    buildt->add_option("--omega", omega, "band edge Omega (inside the support)");
    buildt->add_option("--tol-identity", tol_identity, "residual tolerance");
    buildt->add_option("--seed", seed, "seed for the random symmetry probes");
    buildt->add_option("--nodes", nodes, "minimum quadrature node count");

    CLI::App* counter = app.add_subcommand("counterexample", "sweep the parameter-free weight for unsolvable sizes");
    add_output_options(counter, o);
    counter->add_option("--sizes", sizes, "matrix sizes to sweep")->delimiter(',');
    counter->add_option("--trials", trials, "random parameter draws per size")->check(CLI::PositiveNumber);
    counter->add_option("--seed", seed, "random seed");
    counter->add_option("--tol-consistent", tol_consistent, "residual below this means solvable");
    counter->add_option("--tol-inconsistent", tol_inconsistent, "residual above this means unsolvable");

    CLI::App* regress = app.add_subcommand("regress", "run the full verification grid");
    add_output_options(regress, o);
    regress->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // any command-line problem is a usage error
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Report rep;
        if (families->parsed()) {
            rep.command = "families";
            rep.config = config_json(o);
            const FamilyInstance f = build_from(o);
            rep.extra = to_json(f);
            rep.add_flag("family resolved", "weight parameters admissible", true);
        } else if (verify->parsed()) {
            rep.command = "verify-pearson";
            rep.config = config_json(o);
            rep.config["n_max"] = n_max;
            const FamilyInstance f = build_from(o);
            if (!f.has_pearson)
                throw std::invalid_argument(
                    "verify-pearson: the parameter-free weight has no Pearson structure");
            {
                const PearsonResiduals pr = pearson_residuals(f);
                rep.add("pearson phi", "W(nu+1) = W(nu) Phi", pr.res_phi, tol_identity);
                rep.add("pearson psi", "dW(nu+1) = W(nu) Psi", pr.res_psi, tol_identity);
                rep.add("switching", "W Phi = Phi* W ; W Psi = Psi* W", switching_residual(f),
                        tol_identity);
            }
            const MVOPSeq seq = generate_mvop(f, n_max + 1, nodes);
            const RightOp d = build_D(f);
            double worst = 0.0;
            for (int n = 0; n <= n_max; ++n) {
                const MatPoly& pn = seq.P[static_cast<std::size_t>(n)];
                const MatPoly resid = d.apply(pn) - pn.mat_times(eigenvalue_matrix(f, n));
                worst = std::max(worst, resid.max_coeff_norm() / pn.max_coeff_norm());
            }
            rep.add("eigenvalue identity", "P_n . D = Lambda_n P_n", worst,
                    std::max(tol_identity, 1e-8));
        } else if (solver->parsed()) {
            rep.command = "solve-r";
            rep.config = config_json(o);
            rep.config["M"] = m_index;
            const FamilyInstance f = build_from(o);
            const Mat sigma = eigenvalue_matrix(f, m_index) + eigenvalue_matrix(f, m_index + 1);
            const RSolveReport r = solve_R(f, sigma, 1e-8, tol_consistent, tol_inconsistent);
            rep.rsolve.emplace_back("solve", r);
            if (f.has_pearson) {
                const Mat closed = closed_form_R(f, m_index);
                rep.add("closed form satisfies the condition",
                        "(R - x Sigma) W = W (R - x Sigma)*", eq9_residual(f, closed, sigma),
                        tol_consistent);
                const double dist = r.status == RSolveStatus::inconsistent
                                        ? 1e300
                                        : solution_set_distance(r, closed) /
                                              std::max(closed.norm_fro(), 1.0);
                rep.add("closed form in solution set", "distance to the solved affine family", dist,
                        1e-6);
            } else {
                rep.add_flag("system solvable", "R W - W R* = 2x[J, W] admits a solution",
                             r.status == RSolveStatus::unique ||
                                 r.status == RSolveStatus::affine_family);
            }
        } else if (buildt->parsed()) {
            rep.command = "build-t";
            rep.config = config_json(o);
            rep.config["M"] = m_index;
            rep.config["omega"] = omega;
            const FamilyInstance f = build_from(o);
            const Mat r = f.has_pearson
                              ? closed_form_R(f, m_index)
                              : [&] {
                                    const Mat sigma = eigenvalue_matrix(f, m_index) +
                                                      eigenvalue_matrix(f, m_index + 1);
                                    const RSolveReport sol = solve_R(f, sigma);
                                    if (sol.status == RSolveStatus::inconsistent ||
                                        sol.status == RSolveStatus::ambiguous)
                                        throw std::runtime_error(
                                            "build-t: the commuting condition has no solution for "
                                            "this weight");
                                    return sol.particular;
                                }();
            const TOperator t = build_T(f, m_index, omega, r);
            rep.add("commuting condition", "(R - x Sigma) W = W (R - x Sigma)*",
                    eq9_residual(f, r, t.sigma), std::max(tol_identity, 1e-8));
            const MVOPSeq seq = generate_mvop(f, m_index + 3, nodes);
            const CouplingResult c = check_time_commutation(seq, t);
            rep.add("coupling at M", "<P_M . T, P_{M+1}> = 0", c.coupling_at_M, 1e-8);
            rep.add_flag("reference coupling", "<P_n . T, P_{n+1}> generically nonzero",
                         c.reference_coupling > 1e-3);
            rep.add("band symmetry", "<F.T, G>_Omega = <F, G.T>_Omega",
                    check_band_symmetry(t, omega, 3, seed), 1e-8);
            json ex;
            ex["R"] = to_json(t.R);
            ex["sigma"] = to_json(t.sigma);
            if (t.op.flavor == RightOp::Flavor::differential) {
                ex["c2"] = to_json(t.op.c2);
                ex["c1"] = to_json(t.op.c1);
                ex["c0"] = to_json(t.op.c0);
            } else {
                for (const auto& [h, g] : t.op.shift_coeff)
                    ex["shift_" + std::to_string(h)] = to_json(g);
            }
            rep.extra = std::move(ex);
        } else if (counter->parsed()) {
            rep.command = "counterexample";
            rep.config["sizes"] = sizes;
            rep.config["trials"] = trials;
            rep.config["seed"] = seed;
            const std::vector<SweepEntry> sweep = counterexample_sweep(sizes, trials, seed);
            bool all_inconsistent = true;
            for (const SweepEntry& e : sweep) {
                if (e.report.status != RSolveStatus::inconsistent) all_inconsistent = false;
                rep.rsolve.emplace_back(
                    "free N=" + std::to_string(e.size) + (e.default_draw ? " default" : " random"),
                    e.report);
            }
            rep.add_flag("all draws unsolvable", "R W - W R* = 2x[J, W] inconsistent",
                         all_inconsistent);
        } else if (regress->parsed()) {
            rep.command = "regress";
            rep.config["seed"] = seed;
            run_regress(rep, seed);
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return emit(rep, o, wall_ms, has_ambiguous(rep));
    } catch (const std::invalid_argument& e) {
        std::cerr << "mvoptbl: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mvoptbl: internal guard: " << e.what() << "\n";
        return 3;
    }
}
