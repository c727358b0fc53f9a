// Disturbance models, deterministic sampling, and moment tables.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pacbarrier/numerics.hpp"
#include "pacbarrier/poly.hpp"

namespace pacb {

struct CoordinateDistribution {
    enum class Type { Uniform, ScaledBeta, TruncatedNormal };
    Type type = Type::Uniform;
    double lo = 0.0, hi = 0.0;    // support / scaling interval
    double alpha = 0.0, beta = 0.0;  // ScaledBeta
    double mu = 0.0, sigma = 0.0;    // TruncatedNormal

    static CoordinateDistribution uniform(double lo, double hi);
    static CoordinateDistribution scaled_beta(double alpha, double beta, double lo,
                                              double hi);
    static CoordinateDistribution truncated_normal(double mu, double sigma, double lo,
                                                   double hi);

    double sample(RngStream& rng) const;
    // Exact raw moment E[d^k]; quadrature to high accuracy.
    double moment(int k) const;
};

// Independent coordinates; support is the product box.
struct DisturbanceModel {
    std::vector<CoordinateDistribution> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    Box support() const;
    std::vector<double> sample_one(RngStream& rng) const;
    std::string fingerprint() const;
};

struct SampleSet {
    int dim = 0;
    std::size_t count = 0;
    std::vector<double> data;  // row-major, count x dim
    std::uint64_t seed = 0;
    std::string model_fingerprint;

    std::span<const double> sample(std::size_t i) const {
        return {data.data() + i * dim, static_cast<std::size_t>(dim)};
    }
};

struct MomentTable {
    int dim = 0;
    int max_degree = 0;
    bool empirical = false;
    std::map<Exponents, double> moments;

    double moment(const Exponents& e) const;
};

// Chunked substreams: sample j lives in chunk j / kSampleChunk, each chunk has
// its own RNG keyed by (seed, chunk). Results are independent of thread count.
inline constexpr std::size_t kSampleChunk = 4096;

SampleSet draw_samples(const DisturbanceModel& model, std::size_t count,
                       std::uint64_t seed);

// Uniform states over a Box or Ball region; deterministic given seed.
std::vector<std::vector<double>> sample_states(const Region& region, std::size_t count,
                                               std::uint64_t seed);

// Streaming variant of sample_states for counts too large to materialize;
// visits the exact same points in the same order.
void for_each_state(const Region& region, std::size_t count, std::uint64_t seed,
                    const std::function<void(std::span<const double>)>& fn);

MomentTable empirical_moments(const SampleSet& samples, int max_degree);
// Identical result to draw_samples + empirical_moments without materializing
// the sample set; used when M is large.
MomentTable streamed_empirical_moments(const DisturbanceModel& model,
                                       std::size_t count, std::uint64_t seed,
                                       int max_degree);
MomentTable exact_moments(const DisturbanceModel& model, int max_degree);

// Contract the disturbance variables of a polynomial in (x, d) against a
// moment table, yielding the expectation as a polynomial in x alone.
Polynomial contract_moments(const Polynomial& poly_xd, int state_dim,
                            const MomentTable& table);

}  // namespace pacb
