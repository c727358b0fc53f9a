#include "pacbarrier/stochastics.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace pacb {

CoordinateDistribution CoordinateDistribution::uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform: lo >= hi");
    CoordinateDistribution c;
    c.type = Type::Uniform;
    c.lo = lo;
    c.hi = hi;
    return c;
}

CoordinateDistribution CoordinateDistribution::scaled_beta(double alpha, double beta,
                                                           double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("scaled_beta: lo >= hi");
    if (!(alpha > 0.0 && beta > 0.0))
        throw std::invalid_argument("scaled_beta: alpha, beta must be positive");
    CoordinateDistribution c;
    c.type = Type::ScaledBeta;
    c.alpha = alpha;
    c.beta = beta;
    c.lo = lo;
    c.hi = hi;
    return c;
}

CoordinateDistribution CoordinateDistribution::truncated_normal(double mu, double sigma,
                                                                double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("truncated_normal: lo >= hi");
    if (!(sigma > 0.0)) throw std::invalid_argument("truncated_normal: sigma <= 0");
    CoordinateDistribution c;
    c.type = Type::TruncatedNormal;
    c.mu = mu;
    c.sigma = sigma;
    c.lo = lo;
    c.hi = hi;
    return c;
}

double CoordinateDistribution::sample(RngStream& rng) const {
    switch (type) {
        case Type::Uniform:
            return rng.uniform(lo, hi);
        case Type::ScaledBeta: {
            // Beta via two gammas; support mapped onto [lo, hi].
            double g1 = rng.gamma(alpha);
            double g2 = rng.gamma(beta);
            double t = g1 / (g1 + g2);
            return lo + (hi - lo) * t;
        }
        case Type::TruncatedNormal: {
            // Inverse-CDF on the truncated range; consumes exactly one uniform.
            double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
            double fa = normal_cdf(a), fb = normal_cdf(b);
            double u = rng.u01_open();
            double p = fa + u * (fb - fa);
            double z = normal_inv_cdf(p);
            double d = mu + sigma * z;
            return std::min(hi, std::max(lo, d));
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

// Integrate f over [lo, hi] with composite Gauss-Legendre, doubling panels
// until the relative change drops below rtol.
double adaptive_gl(const std::function<double(double)>& f, double lo, double hi,
                   double rtol) {
    static const Quadrature q = gauss_legendre(40);
    double prev = 0.0;
    for (int panels = 1; panels <= 1 << 12; panels *= 2) {
        double sum = 0.0;
        double w = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            double a = lo + p * w;
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                double x = a + 0.5 * w * (q.nodes[i] + 1.0);
                sum += 0.5 * w * q.weights[i] * f(x);
            }
        }
        if (panels > 1 &&
            std::fabs(sum - prev) <= rtol * std::max(1e-300, std::fabs(sum)))
            return sum;
        prev = sum;
    }
    return prev;
}

}  // namespace

double CoordinateDistribution::moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment: negative order");
    if (k == 0) return 1.0;
    switch (type) {
        case Type::Uniform: {
            // E[d^k] = (hi^{k+1} - lo^{k+1}) / ((k+1)(hi - lo))
            return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) /
                   ((k + 1) * (hi - lo));
        }
        case Type::ScaledBeta: {
            // Integrand is polynomial (degree k + alpha + beta - 2) for integer
            // shape parameters; pick the node count to integrate it exactly,
            // with headroom for non-integer shapes.
            int surrogate = static_cast<int>(std::ceil(alpha + beta));
            int nodes = (k + surrogate) / 2 + 4;
            Quadrature q = gauss_legendre(nodes);
            double lnB = log_beta(alpha, beta);
            double sum = 0.0;
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                double t = 0.5 * (q.nodes[i] + 1.0);  // on (0,1)
                double w = 0.5 * q.weights[i];
                double dens = std::exp((alpha - 1.0) * std::log(t) +
                                       (beta - 1.0) * std::log1p(-t) - lnB);
                double d = lo + (hi - lo) * t;
                sum += w * dens * std::pow(d, k);
            }
            return sum;
        }
        case Type::TruncatedNormal: {
            double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
            double z = normal_cdf(b) - normal_cdf(a);
            auto f = [&](double d) {
                double t = (d - mu) / sigma;
                double dens = std::exp(-0.5 * t * t) /
                              (sigma * std::sqrt(2.0 * M_PI) * z);
                return dens * std::pow(d, k);
            };
            return adaptive_gl(f, lo, hi, 1e-10);
        }
    }
    throw std::logic_error("unreachable");
}

Box DisturbanceModel::support() const {
    Box b;
    b.axes.reserve(coords.size());
    for (const auto& c : coords) b.axes.push_back(Interval(c.lo, c.hi));
    return b;
}

std::vector<double> DisturbanceModel::sample_one(RngStream& rng) const {
    std::vector<double> d(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) d[i] = coords[i].sample(rng);
    return d;
}

std::string DisturbanceModel::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& c : coords) {
        switch (c.type) {
            case CoordinateDistribution::Type::Uniform:
                os << "u(" << c.lo << "," << c.hi << ");";
                break;
            case CoordinateDistribution::Type::ScaledBeta:
                os << "b(" << c.alpha << "," << c.beta << "," << c.lo << "," << c.hi
                   << ");";
                break;
            case CoordinateDistribution::Type::TruncatedNormal:
                os << "n(" << c.mu << "," << c.sigma << "," << c.lo << "," << c.hi
                   << ");";
                break;
        }
    }
    return os.str();
}

double MomentTable::moment(const Exponents& e) const {
    auto it = moments.find(e);
    if (it == moments.end())
        throw std::out_of_range("MomentTable: moment not tabulated");
    return it->second;
}

SampleSet draw_samples(const DisturbanceModel& model, std::size_t count,
                       std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("draw_samples: count must be >= 1");
    SampleSet s;
    s.dim = model.dim();
    s.count = count;
    s.seed = seed;
    s.model_fingerprint = model.fingerprint();
    s.data.resize(count * model.dim());
    std::size_t num_chunks = (count + kSampleChunk - 1) / kSampleChunk;
    for (std::size_t chunk = 0; chunk < num_chunks; ++chunk) {
        RngStream rng(substream_seed(seed, chunk));
        std::size_t begin = chunk * kSampleChunk;
        std::size_t end = std::min(count, begin + kSampleChunk);
        for (std::size_t j = begin; j < end; ++j) {
            for (int i = 0; i < model.dim(); ++i)
                s.data[j * model.dim() + i] = model.coords[i].sample(rng);
        }
    }
    return s;
}

void for_each_state(const Region& region, std::size_t count, std::uint64_t seed,
                    const std::function<void(std::span<const double>)>& fn) {
    int n = region.dim();
    std::vector<double> x(n);
    std::size_t num_chunks = (count + kSampleChunk - 1) / kSampleChunk;
    for (std::size_t chunk = 0; chunk < num_chunks; ++chunk) {
        RngStream rng(substream_seed(seed ^ 0xa5a5a5a5a5a5a5a5ULL, chunk));
        std::size_t begin = chunk * kSampleChunk;
        std::size_t end = std::min(count, begin + kSampleChunk);
        for (std::size_t j = begin; j < end; ++j) {
            if (region.kind() == Region::Kind::Box) {
                for (int i = 0; i < n; ++i)
                    x[i] = rng.uniform(region.as_box().axes[i].lo,
                                       region.as_box().axes[i].hi);
            } else {
                // Direction from normalized gaussians, radius ~ r * u^{1/n}.
                double norm2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    x[i] = rng.normal();
                    norm2 += x[i] * x[i];
                }
                double norm = std::sqrt(norm2);
                if (norm == 0.0) norm = 1.0;
                double r = region.radius() * std::pow(rng.u01_open(), 1.0 / n);
                for (int i = 0; i < n; ++i)
                    x[i] = region.center()[i] + r * x[i] / norm;
            }
            fn(x);
        }
    }
}

std::vector<std::vector<double>> sample_states(const Region& region, std::size_t count,
                                               std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for_each_state(region, count, seed, [&](std::span<const double> x) {
        out.emplace_back(x.begin(), x.end());
    });
    return out;
}

namespace {

void enumerate_exponents(int dim, int max_degree, Exponents& cur, int pos, int left,
                         std::vector<Exponents>& out) {
    if (pos == dim) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[pos] = k;
        enumerate_exponents(dim, max_degree, cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

std::vector<Exponents> all_exponents(int dim, int max_degree) {
    std::vector<Exponents> out;
    Exponents cur(dim, 0);
    enumerate_exponents(dim, max_degree, cur, 0, max_degree, out);
    return out;
}

}  // namespace

MomentTable empirical_moments(const SampleSet& samples, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("empirical_moments: max_degree < 0");
    MomentTable t;
    t.dim = samples.dim;
    t.max_degree = max_degree;
    t.empirical = true;
    std::vector<Exponents> exps = all_exponents(samples.dim, max_degree);
    std::vector<double> acc(exps.size(), 0.0);
    // Single streaming pass in fixed sample order.
    for (std::size_t j = 0; j < samples.count; ++j) {
        auto d = samples.sample(j);
        for (std::size_t m = 0; m < exps.size(); ++m) {
            double v = 1.0;
            for (int i = 0; i < samples.dim; ++i)
                for (int k = 0; k < exps[m][i]; ++k) v *= d[i];
            acc[m] += v;
        }
    }
    for (std::size_t m = 0; m < exps.size(); ++m)
        t.moments[exps[m]] = acc[m] / static_cast<double>(samples.count);
    t.moments[Exponents(samples.dim, 0)] = 1.0;
    return t;
}

MomentTable streamed_empirical_moments(const DisturbanceModel& model,
                                       std::size_t count, std::uint64_t seed,
                                       int max_degree) {
    if (count == 0)
        throw std::invalid_argument("streamed_empirical_moments: count must be >= 1");
    if (max_degree < 0)
        throw std::invalid_argument("streamed_empirical_moments: max_degree < 0");
    MomentTable t;
    t.dim = model.dim();
    t.max_degree = max_degree;
    t.empirical = true;
    std::vector<Exponents> exps = all_exponents(model.dim(), max_degree);
    std::vector<double> acc(exps.size(), 0.0);
    std::vector<double> d(model.dim());
    std::size_t num_chunks = (count + kSampleChunk - 1) / kSampleChunk;
    for (std::size_t chunk = 0; chunk < num_chunks; ++chunk) {
        RngStream rng(substream_seed(seed, chunk));
        std::size_t begin = chunk * kSampleChunk;
        std::size_t end = std::min(count, begin + kSampleChunk);
        for (std::size_t j = begin; j < end; ++j) {
            for (int i = 0; i < model.dim(); ++i) d[i] = model.coords[i].sample(rng);
            for (std::size_t m = 0; m < exps.size(); ++m) {
                double v = 1.0;
                for (int i = 0; i < model.dim(); ++i)
                    for (int k = 0; k < exps[m][i]; ++k) v *= d[i];
                acc[m] += v;
            }
        }
    }
    for (std::size_t m = 0; m < exps.size(); ++m)
        t.moments[exps[m]] = acc[m] / static_cast<double>(count);
    t.moments[Exponents(model.dim(), 0)] = 1.0;
    return t;
}

MomentTable exact_moments(const DisturbanceModel& model, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("exact_moments: max_degree < 0");
    MomentTable t;
    t.dim = model.dim();
    t.max_degree = max_degree;
    t.empirical = false;
    // Per-coordinate raw moments, then products by independence.
    std::vector<std::vector<double>> raw(model.dim());
    for (int i = 0; i < model.dim(); ++i) {
        raw[i].resize(max_degree + 1);
        for (int k = 0; k <= max_degree; ++k) raw[i][k] = model.coords[i].moment(k);
    }
    for (const auto& e : all_exponents(model.dim(), max_degree)) {
        double v = 1.0;
        for (int i = 0; i < model.dim(); ++i) v *= raw[i][e[i]];
        t.moments[e] = v;
    }
    return t;
}

Polynomial contract_moments(const Polynomial& poly_xd, int state_dim,
                            const MomentTable& table) {
    int d_dim = poly_xd.arity() - state_dim;
    if (d_dim != table.dim)
        throw std::invalid_argument("contract_moments: dimension mismatch");
    Polynomial out(state_dim);
    for (const auto& [e, c] : poly_xd.terms()) {
        Exponents ex(e.begin(), e.begin() + state_dim);
        Exponents ed(e.begin() + state_dim, e.end());
        out.add_term(ex, c * table.moment(ed));
    }
    return out;
}

}  // namespace pacb
