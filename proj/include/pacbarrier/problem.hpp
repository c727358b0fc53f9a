// Certification problem data model.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacbarrier/poly.hpp"
#include "pacbarrier/stochastics.hpp"

namespace pacb {

// Dynamics x(j+1) = f(x(j), d(j)) with polynomial f, a safe region X, an
// envelope region containing X and its one-step image, and a disturbance model.
struct CertificationProblem {
    int state_dim = 0;
    int disturbance_dim = 0;
    std::vector<Polynomial> dynamics;  // n polynomials in (x, d)
    Region safe_set;                   // X
    Region envelope;                   // X-hat
    DisturbanceModel disturbance;
    int horizon = 1;

    void validate() const;
    std::string fingerprint() const;

    std::vector<double> step(std::span<const double> x,
                             std::span<const double> d) const;
};

// Sound one-step reach envelope: interval image of f over bbox(X) x support(D),
// unioned with X, returned as a Box.
Region compute_reach_envelope(const std::vector<Polynomial>& dynamics,
                              const Region& safe_set,
                              const DisturbanceModel& disturbance);

}  // namespace pacb
