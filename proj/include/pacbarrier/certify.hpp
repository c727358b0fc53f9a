// Collocation-LP synthesis of robust and stochastic barrier certificates.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacbarrier/bounds.hpp"
#include "pacbarrier/lp.hpp"
#include "pacbarrier/poly.hpp"
#include "pacbarrier/problem.hpp"
#include "pacbarrier/stochastics.hpp"

namespace pacb {

// Linear-in-parameters barrier h(a, x) = a . g(x) over a fixed monomial basis.
struct BarrierTemplate {
    int state_dim = 0;
    int degree = 0;
    std::vector<Exponents> basis;  // ordered, distinct, includes the constant

    // All monomials of total degree <= degree, lexicographic exponent order.
    static BarrierTemplate monomials(int state_dim, int degree);

    std::size_t size() const { return basis.size(); }
    std::vector<Polynomial> basis_polys() const;
    Polynomial h_poly(std::span<const double> a) const;
    double eval_h(std::span<const double> a, std::span<const double> x) const;
};

struct SynthesisConfig {
    std::size_t anchor_count = 200;          // objective anchors N_o
    std::size_t x_collocation = 256;         // points in X
    std::size_t annulus_collocation = 0;     // points in closure(envelope \ X);
                                             // 0 = auto (40^n capped at 4096)
    double gamma = 0.99;                     // RBF decay
    double tau = 0.01;                       // SBF slack offset
    double ua = 1e4;                         // parameter cap
    std::uint64_t seed = 1;
    double lp_tolerance = 1e-7;
    double margin = 1e-4;                    // constraint hardening slack
    SampleRoute route = SampleRoute::Scenario;  // RBF sample-size route
    std::size_t refine_rounds = 60;          // verification-guided re-solves
    std::size_t refine_budget = 2000000;     // interval boxes per refine pass
};

enum class CertStatus { Candidate, Verified, Falsified };

std::string cert_status_name(CertStatus s);

struct Certificate {
    std::string kind;  // "rbf" or "sbf"
    BarrierTemplate tmpl;
    std::vector<double> a;
    double lambda = 0.0;   // SBF
    double gamma = 0.0;    // RBF
    double tau = 0.0;      // SBF
    double epsilon = 0.0;  // RBF routes
    double delta = 0.0;
    std::size_t sample_count = 0;
    SampleRoute route = SampleRoute::Scenario;
    std::uint64_t seed = 0;
    double objective = 0.0;
    CertStatus status = CertStatus::Candidate;
    bool xs_nonempty = false;      // RBF acceptance predicate
    double margin = 0.0;
    double feature_radius = 0.0;   // SBF diagnostics
    std::string problem_fingerprint;

    Polynomial h() const { return tmpl.h_poly(a); }
};

// Deterministic collocation and objective-anchor points.
struct CollocationSet {
    std::vector<std::vector<double>> x_points;        // in X
    std::vector<std::vector<double>> annulus_points;  // in closure(envelope\X)
    std::vector<std::vector<double>> anchors;         // objective anchors in X
};

CollocationSet default_collocation(const CertificationProblem& problem,
                                   const SynthesisConfig& config);

// Sample-based RBF program as a collocation LP: variables a, box
// |a_l| <= ua; objective maximizes the mean of h over the anchors; rows demand
// h <= 0 on annulus points and a.(g(f(x,d_j)) - gamma g(x)) >= 0 at every
// (X point, sample) pair, all hardened by the margin.
LinearProgram build_rbf_lp(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, const SampleSet& samples,
                           const SynthesisConfig& config,
                           const CollocationSet& colloc);

// Sample-based SBF program: variables (a, lambda); objective minimizes
// lambda + mean_h(anchors); rows demand h >= 0 on X, h >= 1 on the annulus,
// and mean_j h(a, f(x,d_j)) - h(a,x) - lambda + tau <= 0 at X points, with
// the empirical mean realized exactly through the moment table.
LinearProgram build_sbf_lp(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, const MomentTable& moments,
                           const SynthesisConfig& config,
                           const CollocationSet& colloc);

// Full pipelines: sample-size -> draw -> LP -> verification-guided collocation
// refinement. Returned certificates are Candidates; MODULE verify upgrades.
Certificate synthesize_rbf(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, double epsilon,
                           double delta, const SynthesisConfig& config);

Certificate synthesize_sbf(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, double delta,
                           const SynthesisConfig& config);

// The per-feature empirical-mean polynomials gbar_l(x) = mean_j g_l(f(x,d_j)),
// obtained by symbolic composition plus moment contraction.
std::vector<Polynomial> mean_feature_polys(const CertificationProblem& problem,
                                           const BarrierTemplate& tmpl,
                                           const MomentTable& moments);

}  // namespace pacb
