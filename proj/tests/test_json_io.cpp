#include <doctest.h>

#include <cstdio>
#include <string>

#include "pacbarrier/json_io.hpp"

using namespace pacb;

namespace {

Region box1(double lo, double hi) {
    Box b;
    b.axes = {Interval(lo, hi)};
    return Region::box(b);
}

CertificationProblem small_problem() {
    CertificationProblem p;
    p.state_dim = 1;
    p.disturbance_dim = 1;
    p.dynamics = {Polynomial::variable(2, 0) * 0.5 + Polynomial::variable(2, 1) * 0.1};
    p.safe_set = box1(-1, 1);
    p.envelope = box1(-2, 2);
    p.disturbance = DisturbanceModel{{CoordinateDistribution::uniform(-1, 1)}};
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("polynomial json round trip") {
    Polynomial p(2);
    p.add_term({2, 0}, 1.5);
    p.add_term({0, 1}, -2.0);
    Json j = poly_to_json(p);
    Polynomial q = poly_from_json(j, "test");
    CHECK(p == q);
    CHECK(j["arity"] == 2);

    Json bad = {{"arity", 2}, {"terms", {{{"exp", {1}}, {"coef", 1.0}}}}};
    CHECK_THROWS_AS(poly_from_json(bad, "test"), std::invalid_argument);
}

TEST_CASE("region json round trip") {
    Region ball = Region::ball({0.5, -0.5}, 2.0);
    Region rb = region_from_json(region_to_json(ball), "test");
    CHECK(rb.kind() == Region::Kind::Ball);
    CHECK(rb.center() == ball.center());
    CHECK(rb.radius() == ball.radius());

    Region box = box1(-1, 3);
    Region rx = region_from_json(region_to_json(box), "test");
    CHECK(rx.kind() == Region::Kind::Box);
    CHECK(rx.as_box().axes[0].lo == -1.0);
    CHECK(rx.as_box().axes[0].hi == 3.0);

    Json bad = {{"kind", "cone"}};
    CHECK_THROWS_AS(region_from_json(bad, "test"), std::invalid_argument);
}

TEST_CASE("disturbance model json round trip") {
    DisturbanceModel m{{CoordinateDistribution::scaled_beta(20, 20, -0.6, 0.6),
                        CoordinateDistribution::truncated_normal(0, 0.15, -1, 1)}};
    DisturbanceModel r = disturbance_from_json(disturbance_to_json(m), "test");
    CHECK(r.fingerprint() == m.fingerprint());
}

TEST_CASE("problem json round trip preserves the fingerprint") {
    CertificationProblem p = small_problem();
    Json j = problem_to_json(p);
    CertificationProblem q = problem_from_json(j);
    CHECK(q.fingerprint() == p.fingerprint());
}

TEST_CASE("missing envelope is auto-filled with a notice") {
    CertificationProblem p = small_problem();
    Json j = problem_to_json(p);
    j.erase("envelope");
    std::string notice;
    CertificationProblem q = problem_from_json(j, &notice);
    CHECK(!notice.empty());
    CHECK(q.envelope.contains_region(q.safe_set));
}

TEST_CASE("dynamics arity mismatch is rejected by name") {
    CertificationProblem p = small_problem();
    Json j = problem_to_json(p);
    j["dynamics"][0]["arity"] = 3;
    j["dynamics"][0]["terms"][0]["exp"] = {1, 0, 0};
    j["dynamics"][0]["terms"][1]["exp"] = {0, 1, 0};
    CHECK_THROWS_AS(problem_from_json(j), std::invalid_argument);
}

TEST_CASE("certificate json round trip is byte-stable") {
    Certificate c;
    c.kind = "rbf";
    c.tmpl.state_dim = 2;
    c.tmpl.degree = 2;
    c.tmpl.basis = {{0, 0}, {1, 0}, {0, 1}, {2, 0}};
    c.a = {0.25, -1.0, 0.5, 3.0};
    c.gamma = 0.99;
    c.epsilon = 0.1;
    c.delta = 0.001;
    c.sample_count = 439;
    c.route = SampleRoute::Scenario;
    c.seed = 7;
    c.objective = -0.321;
    c.status = CertStatus::Verified;
    c.xs_nonempty = true;
    c.margin = 1.0;
    c.problem_fingerprint = "abc";
    Json j = certificate_to_json(c);
    Certificate r = certificate_from_json(j);
    CHECK(certificate_to_json(r).dump() == j.dump());
    CHECK(r.a == c.a);
    CHECK(r.status == c.status);
    CHECK(r.route == c.route);
    CHECK(r.tmpl.basis == c.tmpl.basis);
}

TEST_CASE("guarantee and budget json carry the key fields") {
    PacGuarantee g;
    g.theorem = "scenario-uniform-kstep";
    g.confidence = 0.999;
    g.horizon = 3;
    g.uniform = true;
    g.uniform_value = 0.729;
    g.accepted = true;
    Json j = guarantee_to_json(g);
    CHECK(j["theorem"] == "scenario-uniform-kstep");
    CHECK(j["horizon"] == 3);
    CHECK(j["confidence"] == doctest::Approx(0.999));

    SampleBudget b;
    b.route = SampleRoute::Scenario;
    b.count = 439;
    b.epsilon = 0.1;
    b.delta = 0.001;
    b.num_params = 15;
    Json bj = sample_budget_to_json(b);
    CHECK(bj["count"] == 439);
}

TEST_CASE("file helpers reject missing and malformed files") {
    CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), std::invalid_argument);
    std::string path = "test_json_io_tmp.json";
    {
        FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f);
        std::fputs("{not json", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_json_file(path), std::invalid_argument);
    std::remove(path.c_str());

    Json j = {{"a", 1}};
    save_json_file(path, j);
    Json r = load_json_file(path);
    CHECK(r == j);
    std::remove(path.c_str());
}
