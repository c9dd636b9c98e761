#ifndef MVOPTBL_REPORT_HPP
#define MVOPTBL_REPORT_HPP

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvoptbl/family.hpp"
#include "mvoptbl/mat.hpp"
#include "mvoptbl/matpoly.hpp"
#include "mvoptbl/mvop.hpp"
#include "mvoptbl/tbl.hpp"

namespace mvoptbl {

using json = nlohmann::ordered_json;

inline json to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const MatPoly& p) {
    json coeffs = json::array();
    for (int d = 0; d <= (p.is_zero() ? -1 : p.degree()); ++d) coeffs.push_back(to_json(p.coeff(d)));
    return coeffs;
}

inline json to_json(const FamilyInstance& f) {
    json j;
    j["kind"] = to_string(f.kind);
    j["size"] = f.size;
    if (f.kind != FamilyKind::hermite_free) j["nu"] = f.nu;
    if (f.kind == FamilyKind::hermite || f.kind == FamilyKind::laguerre) {
        j["param_set"] = f.params.param_set;
        if (f.params.param_set == 2) j["lambda"] = f.params.lambda;
        if (f.params.param_set == 3) {
            j["rho"] = f.params.rho;
            j["C"] = f.params.C;
        }
    }
    if (f.kind == FamilyKind::charlier) j["a"] = f.params.a;
    j["alpha"] = f.alpha;
    j["t"] = f.t;
    if (f.has_pearson) {
        j["phi2"] = to_json(f.phi2);
        j["phi1"] = to_json(f.phi1);
        j["phi0"] = to_json(f.phi0);
        j["psi1"] = to_json(f.psi1);
        j["psi0"] = to_json(f.psi0);
    }
    return j;
}

inline json to_json(const MVOPSeq& seq) {
    json j;
    j["family"] = to_json(seq.family);
    j["n_max"] = seq.n_max;
    json polys = json::array(), norms = json::array();
    for (const MatPoly& p : seq.P) polys.push_back(to_json(p));
    for (const Mat& h : seq.H) norms.push_back(to_json(h));
    j["P"] = std::move(polys);
    j["H"] = std::move(norms);
    return j;
}

inline json to_json(const RSolveReport& r) {
    json j;
    j["status"] = to_string(r.status);
    j["residual"] = r.residual;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["rank"] = r.rank;
    j["nullspace_dim"] = r.nullspace.size();
    if (r.status == RSolveStatus::unique || r.status == RSolveStatus::affine_family) {
        j["particular"] = to_json(r.particular);
        json ns = json::array();
        for (const Mat& v : r.nullspace) ns.push_back(to_json(v));
        j["nullspace"] = std::move(ns);
    }
    return j;
}

/// One verified identity: its residual, tolerance, and verdict.
struct CheckRecord {
    std::string name;
    std::string identity;  // which identity is being checked
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string command;
    json config;
    std::vector<CheckRecord> checks;
    std::vector<std::pair<std::string, RSolveReport>> rsolve;
    json extra;  // command-specific payload

    bool overall_pass() const {
        for (const CheckRecord& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(std::string name, std::string identity, double residual, double tolerance) {
        checks.push_back(CheckRecord{std::move(name), std::move(identity), residual, tolerance,
                                     residual < tolerance});
    }

    /// Boolean check expressed in the same record shape: residual 0 or 1.
    void add_flag(std::string name, std::string identity, bool ok) {
        checks.push_back(CheckRecord{std::move(name), std::move(identity), ok ? 0.0 : 1.0, 0.5, ok});
    }

    json to_json_doc(double wall_time_ms, const std::string& timestamp) const {
        json j;
        j["schema"] = 1;
        j["tool"] = "mvoptbl";
        j["version"] = "1.0.0";
        j["command"] = command;
        j["config"] = config;
        json cs = json::array();
        for (const CheckRecord& c : checks) {
            json cj;
            cj["name"] = c.name;
            cj["identity"] = c.identity;
            cj["max_residual"] = c.max_residual;
            cj["tolerance"] = c.tolerance;
            cj["pass"] = c.pass;
            cs.push_back(std::move(cj));
        }
        j["checks"] = std::move(cs);
        if (!rsolve.empty()) {
            json rs = json::array();
            for (const auto& [label, rep] : rsolve) {
                json rj;
                rj["label"] = label;
                rj["report"] = mvoptbl::to_json(rep);
                rs.push_back(std::move(rj));
            }
            j["rsolve"] = std::move(rs);
        }
        if (!extra.is_null()) j["extra"] = extra;
        j["overall_pass"] = overall_pass();
        j["wall_time_ms"] = wall_time_ms;
        j["timestamp"] = timestamp;
        return j;
    }

    std::string to_text() const {
        std::string out;
        char buf[256];
        for (const CheckRecord& c : checks) {
            std::snprintf(buf, sizeof(buf), "%-44s %-38s %9.3e  (tol %7.1e)  %s\n", c.name.c_str(),
                          c.identity.c_str(), c.max_residual, c.tolerance, c.pass ? "PASS" : "FAIL");
            out += buf;
        }
        for (const auto& [label, rep] : rsolve) {
            std::snprintf(buf, sizeof(buf),
                          "%-44s status=%-13s residual=%9.3e rank=%d nullspace_dim=%zu\n",
                          label.c_str(), to_string(rep.status).c_str(), rep.residual, rep.rank,
                          rep.nullspace.size());
            out += buf;
        }
        out += overall_pass() ? "OVERALL: PASS\n" : "OVERALL: FAIL\n";
        return out;
    }
};

}  // namespace mvoptbl

#endif
