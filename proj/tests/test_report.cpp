#include <doctest.h>

#include "mvoptbl/report.hpp"

using namespace mvoptbl;

TEST_SUITE("report") {

TEST_CASE("matrix and polynomial serialization") {
    const Mat m(2, 2, {1.0, 2.0, 3.0, 4.0});
    const json jm = to_json(m);
    CHECK(jm[0][1] == 2.0);
    CHECK(jm[1][0] == 3.0);
    const MatPoly p(2, {Mat::identity(2), m});
    const json jp = to_json(p);
    CHECK(jp.size() == 2);
    CHECK(jp[1][1][1] == 4.0);
    CHECK(to_json(MatPoly(2)).empty());
}

TEST_CASE("report verdicts and document shape") {
    Report rep;
    rep.command = "verify-pearson";
    rep.config["family"] = "hermite";
    rep.add("check a", "lhs = rhs", 1e-12, 1e-10);
    rep.add("check b", "lhs = rhs", 5e-2, 1e-10);
    rep.add_flag("check c", "flag", true);
    CHECK(!rep.overall_pass());
    const json doc = rep.to_json_doc(12.5, "2026-01-01T00:00:00Z");
    CHECK(doc["schema"] == 1);
    CHECK(doc["tool"] == "mvoptbl");
    CHECK(doc["command"] == "verify-pearson");
    CHECK(doc["checks"].size() == 3);
    CHECK(doc["checks"][0]["pass"] == true);
    CHECK(doc["checks"][1]["pass"] == false);
    CHECK(doc["overall_pass"] == false);
    CHECK(doc["timestamp"] == "2026-01-01T00:00:00Z");

    const std::string text = rep.to_text();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("OVERALL: FAIL") != std::string::npos);
}

TEST_CASE("solver reports serialize by status") {
    RSolveReport r;
    r.status = RSolveStatus::affine_family;
    r.particular = Mat::identity(2);
    r.nullspace.push_back(Mat::identity(2) * (1.0 / std::sqrt(2.0)));
    r.rows = 8;
    r.cols = 4;
    r.rank = 3;
    const json j = to_json(r);
    CHECK(j["status"] == "affine_family");
    CHECK(j["nullspace_dim"] == 1);
    CHECK(j.contains("particular"));

    RSolveReport bad;
    bad.status = RSolveStatus::inconsistent;
    bad.residual = 0.2;
    const json jb = to_json(bad);
    CHECK(jb["status"] == "inconsistent");
    CHECK(!jb.contains("particular"));
}

TEST_CASE("family serialization carries the resolved data") {
    const FamilyInstance f = build_family(FamilyKind::hermite, 2, 1.0);
    const json j = to_json(f);
    CHECK(j["kind"] == "hermite");
    CHECK(j["size"] == 2);
    CHECK(j["alpha"].size() == 2);
    CHECK(j.contains("psi1"));
}

}  // TEST_SUITE
