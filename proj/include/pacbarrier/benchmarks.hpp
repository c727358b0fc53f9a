// Registry of the ten benchmark systems with recommended parameters and
// reference values reported by the SOS/SDP-based implementation (annotations
// only; this codebase uses a different synthesis backend).
#pragma once

#include <string>
#include <vector>

#include "pacbarrier/problem.hpp"

namespace pacb {

struct BenchmarkEntry {
    std::string name;
    std::string description;
    CertificationProblem problem;
    int rbf_degree = 4;
    int sbf_degree = 4;
    double sbf_tau = 0.01;
    double sbf_ua = 10.0;
    double rbf_epsilon = 0.1;
    std::string reference_note;  // reported values from the SDP reference runs
};

const std::vector<std::string>& benchmark_names();
BenchmarkEntry load_benchmark(const std::string& name);

}  // namespace pacb
