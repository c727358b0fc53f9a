#include "pacbarrier/bounds.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include "pacbarrier/numerics.hpp"

namespace pacb {

std::string route_name(SampleRoute r) {
    switch (r) {
        case SampleRoute::VC: return "vc";
        case SampleRoute::Scenario: return "scenario";
        case SampleRoute::Rademacher: return "rademacher";
    }
    return "?";
}

namespace {

std::size_t ceil_to_count(double bound) {
    if (!(bound >= 0.0) || !std::isfinite(bound))
        throw std::invalid_argument("sample bound not finite");
    double c = std::ceil(bound);
    std::size_t m = static_cast<std::size_t>(c);
    return m < 1 ? 1 : m;
}

}  // namespace

SampleBudget vc_sample_size(double epsilon, double delta, std::size_t vc_dim) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("vc_sample_size: epsilon must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("vc_sample_size: delta must be in (0,1)");
    if (vc_dim < 1) throw std::invalid_argument("vc_sample_size: vc_dim must be >= 1");
    double bound = (5.0 / epsilon) *
                   (std::log(4.0 / delta) +
                    static_cast<double>(vc_dim) * std::log(40.0 / epsilon));
    SampleBudget b;
    b.route = SampleRoute::VC;
    b.count = ceil_to_count(bound);
    b.epsilon = epsilon;
    b.delta = delta;
    b.vc_dim = vc_dim;
    return b;
}

SampleBudget scenario_sample_size(double epsilon, double delta,
                                  std::size_t num_params) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("scenario_sample_size: epsilon must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("scenario_sample_size: delta must be in (0,1)");
    if (num_params < 1)
        throw std::invalid_argument("scenario_sample_size: num_params must be >= 1");
    double bound = (2.0 / epsilon) *
                   (std::log(1.0 / delta) + static_cast<double>(num_params));
    SampleBudget b;
    b.route = SampleRoute::Scenario;
    b.count = ceil_to_count(bound);
    b.epsilon = epsilon;
    b.delta = delta;
    b.num_params = num_params;
    return b;
}

SampleBudget rademacher_sample_size(double ua, double tau, double delta,
                                    double radius) {
    if (!(ua >= 1.0)) throw std::invalid_argument("rademacher_sample_size: ua must be >= 1");
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::invalid_argument("rademacher_sample_size: tau must be in (0,1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("rademacher_sample_size: delta must be in (0,1)");
    if (!(radius > 0.0))
        throw std::invalid_argument("rademacher_sample_size: radius must be positive");
    double root = 2.0 * radius + std::sqrt(2.0 * std::log(1.0 / delta));
    double bound = (ua * ua) / (tau * tau) * root * root;
    SampleBudget b;
    b.route = SampleRoute::Rademacher;
    b.count = ceil_to_count(bound);
    b.epsilon = 0.0;
    b.delta = delta;
    b.ua = ua;
    b.tau = tau;
    b.radius = radius;
    return b;
}

FeatureRadius feature_radius_bound(const std::vector<Polynomial>& basis,
                                   const std::vector<Polynomial>& dynamics,
                                   const Region& safe_set, const Box& dist_support,
                                   double rel_gap, std::size_t max_boxes,
                                   std::size_t lower_samples, std::uint64_t seed) {
    const int n = safe_set.dim();
    const int dd = dist_support.dim();
    // Features composed symbolically once: phi_i(x,d) = g_i(f(x,d)).
    std::vector<Polynomial> features;
    features.reserve(basis.size());
    for (const auto& g : basis) features.push_back(g.compose(dynamics));

    auto box_bound = [&](const Box& joint) {
        double s = 0.0;
        for (const auto& phi : features) {
            double m = phi.eval_interval(joint.axes).mag();
            s += m * m;
        }
        return std::sqrt(s);
    };

    // Sampled lower bound for diagnostics and the stopping test.
    FeatureRadius out;
    {
        RngStream rng(substream_seed(seed, 0xfeed));
        auto states = sample_states(safe_set, lower_samples, seed);
        std::vector<double> xd(n + dd);
        for (const auto& x : states) {
            for (int i = 0; i < n; ++i) xd[i] = x[i];
            for (int i = 0; i < dd; ++i)
                xd[n + i] = rng.uniform(dist_support.axes[i].lo,
                                        dist_support.axes[i].hi);
            double s = 0.0;
            for (const auto& phi : features) {
                double v = phi.eval(xd);
                s += v * v;
            }
            out.sampled_lower = std::max(out.sampled_lower, std::sqrt(s));
        }
    }

    Box root;
    root.axes = safe_set.bounding_box().axes;
    root.axes.insert(root.axes.end(), dist_support.axes.begin(),
                     dist_support.axes.end());

    struct Node {
        double bound;
        Box box;
        bool operator<(const Node& o) const { return bound < o.bound; }
    };
    std::priority_queue<Node> queue;
    queue.push({box_bound(root), root});
    std::size_t explored = 1;
    double upper = queue.top().bound;
    while (!queue.empty() && explored < max_boxes) {
        upper = queue.top().bound;
        if (upper <= out.sampled_lower * (1.0 + rel_gap)) break;
        Node node = queue.top();
        queue.pop();
        // Prune subboxes whose x-part misses the safe set.
        Box xpart;
        xpart.axes.assign(node.box.axes.begin(), node.box.axes.begin() + n);
        if (safe_set.classify(xpart) == +1) {
            if (!queue.empty()) upper = queue.top().bound;
            continue;
        }
        int axis = node.box.widest_axis();
        if (node.box.axes[axis].width() < 1e-12) break;
        double mid = node.box.axes[axis].mid();
        Box left = node.box, right = node.box;
        left.axes[axis].hi = mid;
        right.axes[axis].lo = mid;
        queue.push({box_bound(left), left});
        queue.push({box_bound(right), right});
        explored += 2;
    }
    if (!queue.empty()) upper = queue.top().bound;
    out.upper = upper;
    out.boxes_explored = explored;
    return out;
}

}  // namespace pacb
