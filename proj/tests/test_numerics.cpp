#include <doctest.h>

#include <cmath>

#include "pacbarrier/numerics.hpp"

using namespace pacb;

TEST_CASE("substream seeds are deterministic and distinct") {
    CHECK(substream_seed(7, 0) == substream_seed(7, 0));
    CHECK(substream_seed(7, 0) != substream_seed(7, 1));
    CHECK(substream_seed(7, 0) != substream_seed(8, 0));
}

TEST_CASE("rng streams reproduce byte-identical sequences") {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.u01() == b.u01());
}

TEST_CASE("rng u01 lies in [0,1) and has sane mean") {
    RngStream r(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double u = r.u01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::fabs(sum / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("normal inverse cdf inverts the cdf") {
    for (double p : {0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
        double x = normal_inv_cdf(p);
        CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(normal_inv_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gauss-legendre integrates low-degree polynomials exactly") {
    // n nodes integrate degree 2n-1 exactly on [-1,1].
    Quadrature q = gauss_legendre(5);
    double i2 = 0.0, i8 = 0.0, i1 = 0.0;
    for (int i = 0; i < 5; ++i) {
        i1 += q.weights[i];
        i2 += q.weights[i] * q.nodes[i] * q.nodes[i];
        i8 += q.weights[i] * std::pow(q.nodes[i], 8);
    }
    CHECK(i1 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(i2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(i8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("halton points stay in [0,1) and spread out") {
    double mn = 1.0, mx = 0.0;
    for (std::uint64_t i = 1; i <= 1000; ++i) {
        double v = halton(i, 2);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(mn < 0.01);
    CHECK(mx > 0.99);
}

TEST_CASE("clopper-pearson endpoint cases and ordering") {
    auto ci = clopper_pearson(0, 100, 0.99);
    CHECK(ci.lower == 0.0);
    CHECK(ci.upper > 0.0);
    ci = clopper_pearson(100, 100, 0.99);
    CHECK(ci.upper == 1.0);
    CHECK(ci.lower < 1.0);
    ci = clopper_pearson(50, 100, 0.95);
    CHECK(ci.lower <= 0.5);
    CHECK(ci.upper >= 0.5);
    CHECK(ci.lower <= ci.upper);
    CHECK_THROWS_AS(clopper_pearson(5, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(clopper_pearson(-1, 10, 0.95), std::invalid_argument);
}

TEST_CASE("clopper-pearson coverage on known Bernoulli streams") {
    // Interval covers the true p in >= confidence fraction of repetitions.
    const double confidence = 0.9;
    const int reps = 1000, trials = 200;
    for (double p : {0.1, 0.5, 0.9}) {
        int covered = 0;
        for (int r = 0; r < reps; ++r) {
            RngStream rng(substream_seed(9000 + static_cast<int>(p * 10), r));
            long long s = 0;
            for (int t = 0; t < trials; ++t)
                if (rng.u01() < p) ++s;
            auto ci = clopper_pearson(s, trials, confidence);
            if (ci.lower <= p && p <= ci.upper) ++covered;
        }
        double frac = static_cast<double>(covered) / reps;
        CHECK(frac >= confidence - 0.02);
    }
}

TEST_CASE("regularized incomplete beta sanity") {
    CHECK(betainc_reg(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(betainc_reg(2.0, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(betainc_inv(2.0, 1.0, 0.25) == doctest::Approx(0.5).epsilon(1e-9));
}
