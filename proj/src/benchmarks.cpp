#include "pacbarrier/benchmarks.hpp"

#include <sstream>
#include <stdexcept>

namespace pacb {

namespace {

// Expression helpers over a fixed arity (state variables first, then
// disturbance variables).
struct Vars {
    int arity;
    Polynomial x(int i) const { return Polynomial::variable(arity, i); }
    Polynomial c(double v) const { return Polynomial::constant(arity, v); }
};

Region unit_ball(int n) { return Region::ball(std::vector<double>(n, 0.0), 1.0); }

CertificationProblem make_problem(std::vector<Polynomial> dynamics, Region safe,
                                  DisturbanceModel model) {
    CertificationProblem p;
    p.state_dim = static_cast<int>(dynamics.size());
    p.disturbance_dim = model.dim();
    p.dynamics = std::move(dynamics);
    p.safe_set = std::move(safe);
    p.disturbance = std::move(model);
    p.envelope = compute_reach_envelope(p.dynamics, p.safe_set, p.disturbance);
    p.horizon = 1;
    p.validate();
    return p;
}

BenchmarkEntry make_ex1() {
    Vars v{3};  // (x, y, d)
    auto x = v.x(0), y = v.x(1), d = v.x(2);
    std::vector<Polynomial> f = {
        x + (y + x * d) * 0.1,
        y + (x * (-1.0) + x * x * x * (1.0 / 3.0) - y) * 0.1,
    };
    DisturbanceModel m{{CoordinateDistribution::scaled_beta(20, 20, -0.6, 0.6)}};
    BenchmarkEntry e;
    e.name = "ex1-vanderpol";
    e.description = "2D reversed Van der Pol variant with multiplicative beta noise";
    e.problem = make_problem(std::move(f), unit_ball(2), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 8;
    e.sbf_tau = 0.01;
    e.sbf_ua = 8.0;
    e.rbf_epsilon = 0.2;
    e.reference_note =
        "SDP reference: V_Xs=0.7388 (rbf deg 4, eps=0.2), lambda*=0.0107 and "
        "J*=0.1651 (sbf deg 8, Ua=8, tau=0.01)";
    return e;
}

BenchmarkEntry make_ex2() {
    Vars v{3};
    auto x = v.x(0), y = v.x(1), d = v.x(2);
    // Lotka-Volterra: r=0.5, a=1, s=-0.5+d, prey-predator coupling c=1.
    std::vector<Polynomial> f = {
        x * 0.5 - y * x,
        (d - v.c(0.5)) * y + y * x,
    };
    DisturbanceModel m{{CoordinateDistribution::truncated_normal(0.0, 0.15, -1.0, 1.0)}};
    BenchmarkEntry e;
    e.name = "ex2-lotka";
    e.description = "2D Lotka-Volterra model with truncated-normal growth noise";
    e.problem = make_problem(std::move(f), unit_ball(2), std::move(m));
    e.rbf_degree = 6;
    e.sbf_degree = 6;
    e.sbf_tau = 0.02;
    e.sbf_ua = 8.0;
    e.rbf_epsilon = 0.1;
    e.reference_note =
        "SDP reference: V_Xs=0.7270 (rbf deg 6, eps=0.1), J*=0.5277 (sbf deg 6, "
        "Ua=8, tau=0.02)";
    return e;
}

BenchmarkEntry make_ex3() {
    Vars v{3};
    auto x = v.x(0), y = v.x(1), d = v.x(2);
    std::vector<Polynomial> f = {
        x + (y * (-1.0) - x * x * 1.5 - x * x * x * 0.5 + d) * 0.1,
        y + (x * 3.0 - y + d) * 0.1,
    };
    DisturbanceModel m{{CoordinateDistribution::uniform(-1.5, 1.5)}};
    BenchmarkEntry e;
    e.name = "ex3-jet";
    e.description = "Discretized Moore-Greitzer jet engine model";
    e.problem = make_problem(std::move(f), Region::ball({0.0, 0.0}, 0.8), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 10;
    e.sbf_tau = 0.01;
    e.sbf_ua = 30.0;
    e.rbf_epsilon = 0.1;
    e.reference_note =
        "SDP reference: J*=0.4819, lambda*=0.0479 (sbf deg 10, Ua=30, tau=0.01); "
        "rbf route yields empty X_s for eps <= 0.99";
    return e;
}

BenchmarkEntry make_c1() {
    Vars v{3};
    auto x = v.x(0), y = v.x(1), d = v.x(2);
    std::vector<Polynomial> f = {
        x + (x * (-2.0) + x * x + y) * 0.01,
        y + (x - y * 2.0 + y * y + d) * 0.01,
    };
    DisturbanceModel m{{CoordinateDistribution::truncated_normal(0.0, 0.15, -1.0, 1.0)}};
    BenchmarkEntry e;
    e.name = "c1-arch4";
    e.description = "2D system with quadratic cross terms and truncated-normal noise";
    e.problem = make_problem(std::move(f), unit_ball(2), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 10;
    e.sbf_tau = 0.01;
    e.sbf_ua = 10.0;
    e.reference_note = "SDP reference: V_Xs=0.8571 (rbf deg 4, eps=0.1), J*=0.2144 (sbf)";
    return e;
}

BenchmarkEntry make_c2() {
    Vars v{3};
    auto x = v.x(0), y = v.x(1), d = v.x(2);
    std::vector<Polynomial> f = {
        x + (y - x * d) * 0.01,
        y + ((v.c(1.0) - x * x) * x * (-1.0) - y) * 0.01,
    };
    DisturbanceModel m{{CoordinateDistribution::scaled_beta(250, 250, -2.0, 2.0)}};
    BenchmarkEntry e;
    e.name = "c2-vinc";
    e.description = "2D oscillator with highly concentrated beta noise";
    e.problem = make_problem(std::move(f), Region::ball({0.0, 0.0}, 0.8), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 10;
    e.sbf_tau = 0.01;
    e.sbf_ua = 10.0;
    e.reference_note = "SDP reference: V_Xs=0.5286 (rbf deg 4, eps=0.1), J*=0.3798 (sbf)";
    return e;
}

BenchmarkEntry make_c3() {
    Vars v{4};
    auto x = v.x(0), y = v.x(1), d1 = v.x(2), d2 = v.x(3);
    std::vector<Polynomial> f = {
        x + (x * (-1.0) + x * x * y * 2.0 + x * d1) * 0.01,
        y + (y * (-1.0) + y * d2) * 0.01,
    };
    DisturbanceModel m{{CoordinateDistribution::uniform(-0.5, 0.5),
                        CoordinateDistribution::uniform(-0.5, 0.5)}};
    BenchmarkEntry e;
    e.name = "c3-bc4";
    e.description = "2D system with two independent multiplicative uniform noises";
    e.problem = make_problem(std::move(f), unit_ball(2), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 10;
    e.sbf_tau = 0.01;
    e.sbf_ua = 10.0;
    e.reference_note = "SDP reference: V_Xs=0.8521 (rbf deg 4, eps=0.1), J*=0.2351 (sbf)";
    return e;
}

BenchmarkEntry make_c4() {
    Vars v{6};
    auto x = v.x(0), y = v.x(1), z = v.x(2), d1 = v.x(3), d2 = v.x(4), d3 = v.x(5);
    const double ts = 0.01;
    std::vector<Polynomial> f = {
        x + (x * (-1.0) + y - z - d1) * ts,
        y + (x * (z + v.c(1.0)) * (-1.0) - y - d2) * ts,
        z + (x * 0.76524 - z * 4.7037 - d3) * ts,
    };
    DisturbanceModel m{{CoordinateDistribution::uniform(-0.5, 0.5),
                        CoordinateDistribution::uniform(-0.5, 0.5),
                        CoordinateDistribution::uniform(-0.5, 0.5)}};
    BenchmarkEntry e;
    e.name = "c4-stable3d";
    e.description = "3D stable system with three additive uniform noises";
    e.problem = make_problem(std::move(f), unit_ball(3), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 6;
    e.sbf_tau = 0.01;
    e.sbf_ua = 10.0;
    e.reference_note = "SDP reference: V_Xs=0.8633 (rbf deg 4, eps=0.1), J*=0.3565 (sbf)";
    return e;
}

BenchmarkEntry make_c5() {
    Vars v{4};
    auto x = v.x(0), y = v.x(1), z = v.x(2), d = v.x(3);
    const double ts = 0.01;
    std::vector<Polynomial> f = {
        x + (y * (-2.0)) * ts,
        y + (x * 0.8 - y * 2.1 + z + x * x * y * 10.0) * ts,
        z + (z * (-1.0) + z * z * z + d) * ts,
    };
    DisturbanceModel m{{CoordinateDistribution::uniform(-0.5, 0.5)}};
    BenchmarkEntry e;
    e.name = "c5-vdp3d";
    e.description = "3D controlled Van der Pol variant with uniform noise on z";
    e.problem = make_problem(std::move(f), unit_ball(3), std::move(m));
    e.rbf_degree = 4;
    e.sbf_degree = 6;
    e.sbf_tau = 0.01;
    e.sbf_ua = 10.0;
    e.reference_note = "SDP reference: V_Xs=0.0000 (rbf deg 4, eps=0.1), J*=0.1542 (sbf)";
    return e;
}

BenchmarkEntry make_c6() {
    Vars v{5};
    auto x1 = v.x(0), x2 = v.x(1), x3 = v.x(2), x4 = v.x(3), d = v.x(4);
    const double ts = 0.01;
    std::vector<Polynomial> f = {
        x1 + (x1 * (-1.0) + x2 * x2 * x2 - x3 * x4 * 3.0 + d) * ts,
        x2 + (x1 * (-1.0) - x2 * x2 * x2) * ts,
        x3 + (x1 * x4 - x3) * ts,
        x4 + (x1 * x3 - x4 * x4 * x4) * ts,
    };
    DisturbanceModel m{{CoordinateDistribution::uniform(-1.0, 1.0)}};
    BenchmarkEntry e;
    e.name = "c6-sank4d";
    e.description = "4D polynomial system with additive uniform noise";
    e.problem = make_problem(std::move(f), unit_ball(4), std::move(m));
    e.rbf_degree = 2;
    e.sbf_degree = 4;
    e.sbf_tau = 0.01;
    e.sbf_ua = 15.0;
    e.reference_note = "SDP reference: V_Xs=0.0000 (rbf deg 2, eps=0.1), J*=0.3826 (sbf)";
    return e;
}

BenchmarkEntry make_c7() {
    Vars v{7};
    const double ts = 0.01;
    auto X = [&](int i) { return v.x(i); };
    auto d = v.x(6);
    std::vector<Polynomial> f = {
        X(0) + ((X(1) - X(4)) * X(5) - X(0) + d) * ts,
        X(1) + ((X(2) - X(5)) * X(0) - X(1)) * ts,
        X(2) + ((X(3) - X(0)) * X(1) - X(2)) * ts,
        X(3) + ((X(4) - X(1)) * X(2) - X(3)) * ts,
        X(4) + ((X(5) - X(2)) * X(3) - X(4)) * ts,
        X(5) + ((X(0) - X(3)) * X(4) - X(5)) * ts,
    };
    DisturbanceModel m{{CoordinateDistribution::truncated_normal(0.0, 0.5, -3.0, 3.0)}};
    BenchmarkEntry e;
    e.name = "c7-lorenz6d";
    e.description = "6D Lorenz-96 model with truncated-normal noise on the first state";
    e.problem = make_problem(std::move(f), unit_ball(6), std::move(m));
    e.rbf_degree = 2;
    e.sbf_degree = 4;
    e.sbf_tau = 0.01;
    e.sbf_ua = 5.0;
    e.reference_note = "SDP reference: V_Xs=0.9692 (rbf deg 2, eps=0.1), J*=0.1374 (sbf)";
    return e;
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {
        "ex1-vanderpol", "ex2-lotka", "ex3-jet",     "c1-arch4",  "c2-vinc",
        "c3-bc4",        "c4-stable3d", "c5-vdp3d", "c6-sank4d", "c7-lorenz6d"};
    return names;
}

BenchmarkEntry load_benchmark(const std::string& name) {
    if (name == "ex1-vanderpol") return make_ex1();
    if (name == "ex2-lotka") return make_ex2();
    if (name == "ex3-jet") return make_ex3();
    if (name == "c1-arch4") return make_c1();
    if (name == "c2-vinc") return make_c2();
    if (name == "c3-bc4") return make_c3();
    if (name == "c4-stable3d") return make_c4();
    if (name == "c5-vdp3d") return make_c5();
    if (name == "c6-sank4d") return make_c6();
    if (name == "c7-lorenz6d") return make_c7();
    std::ostringstream os;
    os << "unknown benchmark '" << name << "'; valid names:";
    for (const auto& n : benchmark_names()) os << " " << n;
    throw std::invalid_argument(os.str());
}

}  // namespace pacb
