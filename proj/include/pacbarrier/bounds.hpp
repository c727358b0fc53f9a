// PAC sample-complexity calculators and the feature-radius bound.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacbarrier/poly.hpp"
#include "pacbarrier/stochastics.hpp"

namespace pacb {

enum class SampleRoute { VC, Scenario, Rademacher };

std::string route_name(SampleRoute r);

struct SampleBudget {
    SampleRoute route = SampleRoute::Scenario;
    std::size_t count = 0;  // smallest integer M satisfying the route inequality
    double epsilon = 0.0;
    double delta = 0.0;
    // Route-specific inputs, echoed.
    std::size_t vc_dim = 0;      // VC
    std::size_t num_params = 0;  // Scenario
    double ua = 0.0, tau = 0.0, radius = 0.0;  // Rademacher
};

// M = ceil((5/eps)(ln(4/delta) + N ln(40/eps)))
SampleBudget vc_sample_size(double epsilon, double delta, std::size_t vc_dim);

// M = ceil((2/eps)(ln(1/delta) + m))
SampleBudget scenario_sample_size(double epsilon, double delta, std::size_t num_params);

// M = ceil((Ua^2/tau^2)(2R + sqrt(2 ln(1/delta)))^2)
SampleBudget rademacher_sample_size(double ua, double tau, double delta, double radius);

struct FeatureRadius {
    double upper = 0.0;          // sound bound, the default choice
    double sampled_lower = 0.0;  // diagnostic only
    std::size_t boxes_explored = 0;
};

// Sound upper bound on sup over X x D of ||g(f(x,d))||_2, by interval
// branch-and-bound over the joint box, refined to the requested relative gap
// against a sampled lower bound.
FeatureRadius feature_radius_bound(const std::vector<Polynomial>& basis,
                                   const std::vector<Polynomial>& dynamics,
                                   const Region& safe_set, const Box& dist_support,
                                   double rel_gap = 0.10,
                                   std::size_t max_boxes = 200000,
                                   std::size_t lower_samples = 100000,
                                   std::uint64_t seed = 1);

}  // namespace pacb
