// Assembly of probabilistic safety statements from verified certificates.
#pragma once

#include <string>
#include <vector>

#include "pacbarrier/certify.hpp"
#include "pacbarrier/poly.hpp"

namespace pacb {

struct PacGuarantee {
    std::string theorem;   // vc-pointwise-1step | scenario-uniform-1step |
                           // scenario-uniform-kstep | sbf-pointwise-1step
    double confidence = 0.0;  // 1 - delta
    int horizon = 1;
    bool uniform = false;     // uniform bound over X_s vs pointwise function
    double uniform_value = 0.0;    // (1 - epsilon)^k, uniform routes
    double epsilon = 0.0;          // pointwise VC route
    double lambda = 0.0;           // SBF pointwise bound 1 - lambda - h(x)
    std::vector<double> coeffs;    // barrier coefficients (pointwise forms)
    std::vector<Exponents> basis;
    bool accepted = false;         // acceptance predicate result
    bool vacuous_possible = false; // pointwise bound can clamp to zero
    std::string certificate_kind;
    std::string problem_fingerprint;
};

// Pointwise violation level: epsilon where h(a*, x) > 0, else 1.
double pointwise_epsilon(const Certificate& cert, std::span<const double> x,
                         double epsilon, const Region& safe_set);

// (1 - epsilon)^k.
double multistep_bound(double epsilon, int k);

// max(0, 1 - k*lambda - h_at_x).
double kushner_bound(double lambda, double h_at_x, int k);

// Builds the PAC statement for a Verified certificate; refuses multi-step
// horizons on routes whose theorem only grants one step, and refuses
// certificates that are not Verified (RBF additionally requires a nonempty
// X_s).
PacGuarantee assemble_pac_statement(const Certificate& cert, int k);

}  // namespace pacb
