// Interval branch-and-bound verification and Monte Carlo cross-validation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacbarrier/certify.hpp"
#include "pacbarrier/numerics.hpp"
#include "pacbarrier/poly.hpp"
#include "pacbarrier/problem.hpp"

namespace pacb {

enum class Verdict { Verified, Falsified, Unknown };
enum class IneqSense { Ge, Le };  // poly >= 0 / poly <= 0 over the domain

std::string verdict_name(Verdict v);

struct InequalityResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<double> witness;  // point violating by > tol (Falsified)
    double witness_value = 0.0;
    std::size_t boxes = 0;
    int max_depth = 0;
};

// Verification domain: bounding box of `include`, minus (optionally) the
// interior of `exclude_interior`; the closure(envelope \ X) annulus is the
// include=envelope, exclude=safe-set instance.
struct VerifyDomain {
    const Region* include = nullptr;
    const Region* exclude_interior = nullptr;

    static VerifyDomain whole(const Region& r) { return {&r, nullptr}; }
    static VerifyDomain annulus(const Region& envelope, const Region& safe) {
        return {&envelope, &safe};
    }

    Box root() const { return include->bounding_box(); }
    bool contains(std::span<const double> p) const;
    // +1: box provably disjoint from the domain (prune); 0: keep.
    int classify(const Box& b) const;
    // Shrinks b to a box that still covers b ∩ domain (interval constraint
    // propagation); returns false when the intersection is provably empty.
    // Without this, branch-and-bound subdivides forever along the excluded
    // region's boundary wherever the inequality fails just inside it.
    bool contract(Box& b) const;
};

InequalityResult verify_inequality(const Polynomial& poly, IneqSense sense,
                                   const VerifyDomain& domain, double tol,
                                   std::size_t budget);
InequalityResult verify_inequality(const Polynomial& poly, IneqSense sense,
                                   const Region& region, double tol,
                                   std::size_t budget);

// Best-first search for a near-maximal violation of the inequality over the
// domain; returns true (and fills *witness, *violation) when a point
// violating by more than tol exists within the box budget.
bool worst_violation(const Polynomial& poly, IneqSense sense,
                     const VerifyDomain& domain, double tol, std::size_t budget,
                     std::vector<double>* witness, double* violation,
                     std::size_t* boxes_used = nullptr);

struct ConstraintRecord {
    std::string name;
    InequalityResult result;
};

struct VerificationReport {
    Verdict overall = Verdict::Unknown;
    std::vector<ConstraintRecord> constraints;  // failures and summaries
    std::size_t constraints_checked = 0;
    std::size_t boxes_explored = 0;
    double wall_time_sec = 0.0;
    std::vector<std::string> notes;
};

// Checks every defining inequality of the certificate over the continuous
// regions; upgrades status to Verified, or downgrades to Falsified with a
// witness. RBF certificates need the original SampleSet; SBF certificates
// need the MomentTable used at synthesis time.
VerificationReport verify_certificate(Certificate& cert,
                                      const CertificationProblem& problem,
                                      const SampleSet* samples,
                                      const MomentTable* moments,
                                      std::size_t budget = 1000000);

struct SafetyEstimate {
    std::vector<double> x0;
    int horizon = 1;
    long long trials = 0;
    long long successes = 0;
    double estimate = 0.0;
    double cp_lower = 0.0;
    double cp_upper = 1.0;
    double confidence = 0.99;
    std::uint64_t seed = 0;
};

SafetyEstimate mc_safety_estimate(const CertificationProblem& problem,
                                  std::span<const double> x0, int k, long long trials,
                                  std::uint64_t seed, double confidence);

// Fraction of N uniform X-samples with h(a*, x) > 0.
double estimate_safe_region_volume(const Certificate& cert, const Region& safe_set,
                                   std::size_t n_samples, std::uint64_t seed);

}  // namespace pacb
