#include <doctest.h>

#include <cmath>

#include "pacbarrier/bounds.hpp"

using namespace pacb;

TEST_CASE("vc sample size matches hand evaluation") {
    // M = ceil((5/eps)(ln(4/delta) + N ln(40/eps)))
    CHECK(vc_sample_size(0.1, 0.001, 15).count == 4909);
    CHECK(vc_sample_size(0.5, 0.5, 1).count ==
          static_cast<std::size_t>(std::ceil(10.0 * (std::log(8.0) + std::log(80.0)))));
    CHECK_THROWS_AS(vc_sample_size(0.0, 0.001, 15), std::invalid_argument);
    CHECK_THROWS_AS(vc_sample_size(0.1, 1.0, 15), std::invalid_argument);
    CHECK_THROWS_AS(vc_sample_size(1.5, 0.1, 15), std::invalid_argument);
}

TEST_CASE("scenario sample size matches hand evaluation") {
    // M = ceil((2/eps)(ln(1/delta) + m))
    CHECK(scenario_sample_size(0.1, 0.001, 15).count == 439);
    CHECK(scenario_sample_size(0.5, 0.999, 1).count == 5);
    CHECK_THROWS_AS(scenario_sample_size(0.1, 0.0, 15), std::invalid_argument);
}

TEST_CASE("rademacher sample size matches hand evaluation") {
    // M = ceil((Ua^2/tau^2)(2R + sqrt(2 ln(1/delta)))^2)
    double raw = 400.0 * std::pow(2.0 + std::sqrt(2.0 * std::log(1000.0)), 2.0);
    CHECK(rademacher_sample_size(2.0, 0.1, 0.001, 1.0).count ==
          static_cast<std::size_t>(std::ceil(raw)));
    CHECK(rademacher_sample_size(2.0, 0.1, 0.001, 1.0).count == 13074);

    // full-scale preset lands near 2.09e7
    double big = static_cast<double>(rademacher_sample_size(8.0, 0.01, 0.001, 1.0).count);
    CHECK(big == doctest::Approx(2.09e7).epsilon(0.01));

    // doubling Ua quadruples the pre-ceiling bound
    double m1 = static_cast<double>(rademacher_sample_size(2.0, 0.1, 0.01, 1.0).count);
    double m2 = static_cast<double>(rademacher_sample_size(4.0, 0.1, 0.01, 1.0).count);
    CHECK(m2 / m1 == doctest::Approx(4.0).epsilon(1e-3));

    CHECK_THROWS_AS(rademacher_sample_size(2.0, 0.0, 0.001, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(rademacher_sample_size(0.5, 0.1, 0.001, 1.0), std::invalid_argument);
}

TEST_CASE("sample sizes are monotone in every parameter") {
    const double eps[] = {0.05, 0.1, 0.2, 0.4};
    const double del[] = {0.001, 0.01, 0.1};
    const std::size_t dims[] = {1, 5, 15};
    for (double e : eps)
        for (double d : del)
            for (std::size_t n : dims) {
                CHECK(vc_sample_size(e / 2.0, d, n).count >= vc_sample_size(e, d, n).count);
                CHECK(vc_sample_size(e, d / 2.0, n).count >= vc_sample_size(e, d, n).count);
                CHECK(vc_sample_size(e, d, n + 1).count >= vc_sample_size(e, d, n).count);
                CHECK(scenario_sample_size(e / 2.0, d, n).count >=
                      scenario_sample_size(e, d, n).count);
                CHECK(scenario_sample_size(e, d / 2.0, n).count >=
                      scenario_sample_size(e, d, n).count);
                CHECK(scenario_sample_size(e, d, n + 1).count >=
                      scenario_sample_size(e, d, n).count);
            }
    for (double ua : {1.0, 2.0, 8.0})
        for (double tau : {0.1, 0.05})
            for (double r : {0.5, 1.0, 2.0}) {
                CHECK(rademacher_sample_size(ua * 2, tau, 0.01, r).count >=
                      rademacher_sample_size(ua, tau, 0.01, r).count);
                CHECK(rademacher_sample_size(ua, tau / 2, 0.01, r).count >=
                      rademacher_sample_size(ua, tau, 0.01, r).count);
                CHECK(rademacher_sample_size(ua, tau, 0.01, r * 2).count >=
                      rademacher_sample_size(ua, tau, 0.01, r).count);
                CHECK(rademacher_sample_size(ua, tau, 0.001, r).count >=
                      rademacher_sample_size(ua, tau, 0.01, r).count);
            }
}

TEST_CASE("returned counts are minimal for the route inequality") {
    auto vc_ok = [](double M, double e, double d, double N) {
        return M >= (5.0 / e) * (std::log(4.0 / d) + N * std::log(40.0 / e));
    };
    auto sc_ok = [](double M, double e, double d, double m) {
        return M >= (2.0 / e) * (std::log(1.0 / d) + m);
    };
    auto ra_ok = [](double M, double ua, double t, double d, double r) {
        return M >= (ua * ua / (t * t)) *
                        std::pow(2.0 * r + std::sqrt(2.0 * std::log(1.0 / d)), 2.0);
    };
    for (double e : {0.05, 0.1, 0.3})
        for (double d : {0.001, 0.05}) {
            std::size_t mv = vc_sample_size(e, d, 10).count;
            CHECK(vc_ok(static_cast<double>(mv), e, d, 10));
            CHECK(!vc_ok(static_cast<double>(mv - 1), e, d, 10));
            std::size_t ms = scenario_sample_size(e, d, 10).count;
            CHECK(sc_ok(static_cast<double>(ms), e, d, 10));
            CHECK(!sc_ok(static_cast<double>(ms - 1), e, d, 10));
        }
    std::size_t mr = rademacher_sample_size(2.0, 0.1, 0.001, 1.0).count;
    CHECK(ra_ok(static_cast<double>(mr), 2.0, 0.1, 0.001, 1.0));
    CHECK(!ra_ok(static_cast<double>(mr - 1), 2.0, 0.1, 0.001, 1.0));
}

TEST_CASE("scenario bound dominates the vc bound at N = m") {
    for (double e : {0.05, 0.1, 0.2, 0.5})
        for (double d : {0.001, 0.01, 0.1})
            for (std::size_t m : {1ul, 3ul, 15ul, 45ul})
                CHECK(scenario_sample_size(e, d, m).count < vc_sample_size(e, d, m).count);
}

TEST_CASE("feature radius: identity feature") {
    // g = (x), f(x,d) = x, X = [-1,1]: R = 1
    std::vector<Polynomial> g = {Polynomial::variable(1, 0)};
    std::vector<Polynomial> f = {Polynomial::variable(2, 0)};
    Box b1;
    b1.axes = {Interval(-1, 1)};
    Box dsup;
    dsup.axes = {Interval(-0.5, 0.5)};
    FeatureRadius r = feature_radius_bound(g, f, Region::box(b1), dsup);
    CHECK(r.upper >= 1.0 - 1e-9);
    CHECK(r.upper <= 1.0 + 0.1);  // within the default 10% relative gap
    CHECK(r.sampled_lower <= r.upper);
}

TEST_CASE("feature radius: two features") {
    // g = (x, x^2), f = x, X = [-1,1]: sup sqrt(x^2 + x^4) = sqrt(2)
    std::vector<Polynomial> g = {Polynomial::variable(1, 0),
                                 Polynomial::variable(1, 0) * Polynomial::variable(1, 0)};
    std::vector<Polynomial> f = {Polynomial::variable(2, 0)};
    Box b1;
    b1.axes = {Interval(-1, 1)};
    Box dsup;
    dsup.axes = {Interval(-0.5, 0.5)};
    FeatureRadius r = feature_radius_bound(g, f, Region::box(b1), dsup);
    double target = std::sqrt(2.0);
    CHECK(r.upper >= target - 1e-9);
    CHECK(r.upper <= target * 1.1 + 1e-9);
    CHECK(r.sampled_lower <= r.upper);
    CHECK(r.sampled_lower >= target * 0.9);
}

TEST_CASE("feature radius upper bound covers a sampled supremum") {
    // 2D quadratic map over the unit ball with a scalar disturbance
    Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1),
               d = Polynomial::variable(3, 2);
    std::vector<Polynomial> f = {x + (y + x * d) * 0.1,
                                 y + (x * (-1.0) + x * x * x * (1.0 / 3.0) - y) * 0.1};
    std::vector<Polynomial> g;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j) {
            Exponents e = {i, j};
            g.push_back(Polynomial::monomial(2, e, 1.0));
        }
    Box dsup;
    dsup.axes = {Interval(-0.6, 0.6)};
    FeatureRadius r =
        feature_radius_bound(g, f, Region::ball({0.0, 0.0}, 1.0), dsup, 0.10);
    CHECK(r.sampled_lower <= r.upper);
    CHECK((r.upper - r.sampled_lower) / r.upper <= 0.10 + 1e-9);
}
