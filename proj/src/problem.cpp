#include "pacbarrier/problem.hpp"

#include <sstream>
#include <stdexcept>

namespace pacb {

void CertificationProblem::validate() const {
    if (state_dim <= 0) throw std::invalid_argument("problem: state_dim must be positive");
    if (disturbance_dim < 0)
        throw std::invalid_argument("problem: disturbance_dim must be nonnegative");
    if (static_cast<int>(dynamics.size()) != state_dim)
        throw std::invalid_argument("problem: dynamics size must equal state_dim");
    for (std::size_t i = 0; i < dynamics.size(); ++i) {
        if (dynamics[i].arity() != state_dim + disturbance_dim) {
            std::ostringstream os;
            os << "problem: dynamics[" << i << "] arity " << dynamics[i].arity()
               << " != state_dim + disturbance_dim (" << state_dim + disturbance_dim
               << ")";
            throw std::invalid_argument(os.str());
        }
    }
    if (safe_set.dim() != state_dim)
        throw std::invalid_argument("problem: safe_set dimension mismatch");
    if (envelope.dim() != state_dim)
        throw std::invalid_argument("problem: envelope dimension mismatch");
    if (disturbance.dim() != disturbance_dim)
        throw std::invalid_argument("problem: disturbance model dimension mismatch");
    if (horizon < 1) throw std::invalid_argument("problem: horizon must be >= 1");
    if (!envelope.contains_region(safe_set))
        throw std::invalid_argument("problem: envelope does not contain the safe set");
}

std::string CertificationProblem::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    os << state_dim << "|" << disturbance_dim << "|" << horizon << "|";
    for (const auto& p : dynamics) {
        for (const auto& [e, c] : p.terms()) {
            for (int k : e) os << k << ",";
            os << ":" << c << ";";
        }
        os << "|";
    }
    auto region = [&](const Region& r) {
        if (r.kind() == Region::Kind::Ball) {
            os << "ball(";
            for (double c : r.center()) os << c << ",";
            os << r.radius() << ")";
        } else {
            os << "box(";
            for (const auto& a : r.as_box().axes) os << a.lo << "," << a.hi << ";";
            os << ")";
        }
    };
    region(safe_set);
    os << "|";
    region(envelope);
    os << "|" << disturbance.fingerprint();
    // FNV-1a over the canonical text.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : os.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

std::vector<double> CertificationProblem::step(std::span<const double> x,
                                               std::span<const double> d) const {
    std::vector<double> xd(x.begin(), x.end());
    xd.insert(xd.end(), d.begin(), d.end());
    std::vector<double> out(state_dim);
    for (int i = 0; i < state_dim; ++i) out[i] = dynamics[i].eval(xd);
    return out;
}

Region compute_reach_envelope(const std::vector<Polynomial>& dynamics,
                              const Region& safe_set,
                              const DisturbanceModel& disturbance) {
    Box xb = safe_set.bounding_box();
    Box db = disturbance.support();
    for (const auto& a : db.axes)
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi))
            throw std::invalid_argument("compute_reach_envelope: unbounded support");
    std::vector<Interval> joint = xb.axes;
    joint.insert(joint.end(), db.axes.begin(), db.axes.end());
    Box out;
    out.axes.reserve(dynamics.size());
    for (std::size_t i = 0; i < dynamics.size(); ++i) {
        Interval img = dynamics[i].eval_interval(joint);
        Interval axis = xb.axes[i];
        out.axes.push_back(
            Interval(std::min(img.lo, axis.lo), std::max(img.hi, axis.hi)));
    }
    return Region::box(std::move(out));
}

}  // namespace pacb
