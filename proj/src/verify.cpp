#include "pacbarrier/verify.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pacb {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Falsified: return "falsified";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

bool VerifyDomain::contains(std::span<const double> p) const {
    if (!include->contains(p)) return false;
    if (exclude_interior && exclude_interior->strictly_inside(p)) return false;
    return true;
}

namespace {

// Range of (x - c)^2 over an interval.
double sq_lo(const Interval& iv, double c) {
    if (iv.lo <= c && c <= iv.hi) return 0.0;
    double a = (iv.lo - c) * (iv.lo - c), bb = (iv.hi - c) * (iv.hi - c);
    return std::min(a, bb);
}
double sq_hi(const Interval& iv, double c) {
    double a = (iv.lo - c) * (iv.lo - c), bb = (iv.hi - c) * (iv.hi - c);
    return std::max(a, bb);
}

// Natural interval evaluation intersected with the mean-value form
// f(m) + grad f(B) . (B - m). The centered form is second-order tight on
// small boxes, which matters for high-degree certificates whose natural
// enclosure is orders of magnitude too wide.
struct SharpBound {
    const Polynomial* p;
    std::vector<Polynomial> grads;

    explicit SharpBound(const Polynomial& poly) : p(&poly) {
        grads.reserve(poly.arity());
        for (int i = 0; i < poly.arity(); ++i) grads.push_back(poly.derivative(i));
    }

    Interval eval(const Box& b, std::vector<double>& center_buf) const {
        Interval natural = p->eval_interval(b.axes);
        const int n = b.dim();
        for (int i = 0; i < n; ++i) center_buf[i] = b.axes[i].mid();
        Interval mv = Interval::point(p->eval(center_buf));
        for (int i = 0; i < n; ++i) {
            if (b.axes[i].width() == 0.0) continue;
            Interval g = grads[i].eval_interval(b.axes);
            Interval off{b.axes[i].lo - center_buf[i], b.axes[i].hi - center_buf[i]};
            mv = mv + g * off;
        }
        return {std::max(natural.lo, mv.lo), std::min(natural.hi, mv.hi)};
    }
};

// Restricts iv to iv \ (l, r); false when empty. Only contracts when the
// remainder is a single interval.
bool carve_1d(Interval& iv, double l, double r) {
    bool left = iv.lo <= l, right = iv.hi >= r;
    if (left && right) return true;  // both sides survive: no hull shrink
    if (left) {
        iv.hi = std::min(iv.hi, l);
        return true;
    }
    if (right) {
        iv.lo = std::max(iv.lo, r);
        return true;
    }
    return false;  // wholly inside (l, r)
}

}  // namespace

int VerifyDomain::classify(const Box& b) const {
    if (include->classify(b) == +1) return +1;
    // A box entirely inside the closed excluded region meets the domain at
    // most on the boundary; by continuity the closed inequality there is
    // implied by the verified exterior, so pruning is sound.
    if (exclude_interior && exclude_interior->classify(b) == -1) return +1;
    return 0;
}

bool VerifyDomain::contract(Box& b) const {
    const int n = b.dim();
    for (int pass = 0; pass < 2; ++pass) {
        // Intersect with the include region's hull.
        if (include->kind() == Region::Kind::Box) {
            const Box& ib = include->as_box();
            for (int i = 0; i < n; ++i) {
                b.axes[i].lo = std::max(b.axes[i].lo, ib.axes[i].lo);
                b.axes[i].hi = std::min(b.axes[i].hi, ib.axes[i].hi);
                if (b.axes[i].lo > b.axes[i].hi) return false;
            }
        } else {
            const auto& c = include->center();
            double r2 = include->radius() * include->radius();
            for (int i = 0; i < n; ++i) {
                double rest = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) rest += sq_lo(b.axes[j], c[j]);
                double t2 = r2 - rest;
                if (t2 < 0.0) return false;
                double t = std::sqrt(t2);
                b.axes[i].lo = std::max(b.axes[i].lo, c[i] - t);
                b.axes[i].hi = std::min(b.axes[i].hi, c[i] + t);
                if (b.axes[i].lo > b.axes[i].hi) return false;
            }
        }
        if (!exclude_interior) continue;
        // Carve out the excluded interior where a single axis determines
        // membership in the complement.
        if (exclude_interior->kind() == Region::Kind::Ball) {
            const auto& c = exclude_interior->center();
            double r2 = exclude_interior->radius() * exclude_interior->radius();
            for (int i = 0; i < n; ++i) {
                double rest = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) rest += sq_hi(b.axes[j], c[j]);
                double t2 = r2 - rest;
                if (t2 <= 0.0) continue;
                double t = std::sqrt(t2);
                if (!carve_1d(b.axes[i], c[i] - t, c[i] + t)) return false;
            }
        } else {
            const Box& eb = exclude_interior->as_box();
            int free_axis = -1;
            bool multiple = false;
            for (int i = 0; i < n; ++i) {
                if (b.axes[i].lo > eb.axes[i].lo && b.axes[i].hi < eb.axes[i].hi)
                    continue;  // axis range strictly inside the excluded slab
                if (free_axis >= 0) multiple = true;
                free_axis = i;
            }
            if (multiple) continue;
            if (free_axis < 0) return false;  // box strictly inside on all axes
            if (!carve_1d(b.axes[free_axis], eb.axes[free_axis].lo,
                          eb.axes[free_axis].hi))
                return false;
        }
    }
    return true;
}

InequalityResult verify_inequality(const Polynomial& poly, IneqSense sense,
                                   const VerifyDomain& domain, double tol,
                                   std::size_t budget) {
    InequalityResult res;
    SharpBound bound_of(poly);
    std::vector<std::pair<Box, int>> stack;
    stack.emplace_back(domain.root(), 0);
    std::vector<double> center(poly.arity());
    while (!stack.empty()) {
        if (res.boxes >= budget) {
            res.verdict = Verdict::Unknown;
            return res;
        }
        auto [box, depth] = std::move(stack.back());
        stack.pop_back();
        ++res.boxes;
        res.max_depth = std::max(res.max_depth, depth);
        if (domain.classify(box) == +1) continue;
        if (!domain.contract(box)) continue;
        Interval bound = bound_of.eval(box, center);
        bool ok = sense == IneqSense::Ge ? bound.lo >= -tol : bound.hi <= tol;
        if (ok) continue;
        for (int i = 0; i < box.dim(); ++i) center[i] = box.axes[i].mid();
        if (domain.contains(center)) {
            double v = poly.eval(center);
            bool violated = sense == IneqSense::Ge ? v < -tol : v > tol;
            if (violated) {
                res.verdict = Verdict::Falsified;
                res.witness = center;
                res.witness_value = v;
                return res;
            }
        }
        int axis = box.widest_axis();
        if (box.axes[axis].width() <= 1e-13) continue;  // point-like, bound ~= value
        double mid = box.axes[axis].mid();
        Box left = box, right = box;
        left.axes[axis].hi = mid;
        right.axes[axis].lo = mid;
        stack.emplace_back(std::move(left), depth + 1);
        stack.emplace_back(std::move(right), depth + 1);
    }
    res.verdict = Verdict::Verified;
    return res;
}

InequalityResult verify_inequality(const Polynomial& poly, IneqSense sense,
                                   const Region& region, double tol,
                                   std::size_t budget) {
    return verify_inequality(poly, sense, VerifyDomain::whole(region), tol, budget);
}

bool worst_violation(const Polynomial& poly, IneqSense sense,
                     const VerifyDomain& domain, double tol, std::size_t budget,
                     std::vector<double>* witness, double* violation,
                     std::size_t* boxes_used) {
    // Best-first maximization of the violation (p for Le, -p for Ge): the
    // queue is keyed on the interval upper bound of the violation, so the
    // returned point is near the global maximizer, which is what exchange-style
    // collocation refinement needs (an arbitrary violated point barely helps).
    SharpBound bound_of(poly);
    std::vector<double> buf(poly.arity());
    auto viol_bound = [&](const Box& b) {
        Interval iv = bound_of.eval(b, buf);
        return sense == IneqSense::Le ? iv.hi : -iv.lo;
    };
    std::priority_queue<std::pair<double, std::size_t>> queue;
    std::vector<Box> boxes;
    boxes.push_back(domain.root());
    queue.emplace(viol_bound(boxes[0]), 0);
    double best = tol;
    bool found = false;
    std::vector<double> center(poly.arity());
    std::size_t popped = 0;
    while (!queue.empty() && popped < budget) {
        auto [ub, id] = queue.top();
        queue.pop();
        ++popped;
        if (ub <= best * (1.0 + 1e-6) + 1e-12) break;  // converged onto the max
        Box box = std::move(boxes[id]);
        if (domain.classify(box) == +1) continue;
        if (!domain.contract(box)) continue;
        for (int i = 0; i < box.dim(); ++i) center[i] = box.axes[i].mid();
        if (domain.contains(center)) {
            double v = poly.eval(center);
            double viol = sense == IneqSense::Le ? v : -v;
            if (viol > best) {
                best = viol;
                *witness = center;
                found = true;
            }
        }
        int axis = box.widest_axis();
        if (box.axes[axis].width() <= 1e-13) continue;
        double mid = box.axes[axis].mid();
        Box left = box, right = box;
        left.axes[axis].hi = mid;
        right.axes[axis].lo = mid;
        double lub = viol_bound(left), rub = viol_bound(right);
        if (lub > best) {
            boxes.push_back(std::move(left));
            queue.emplace(lub, boxes.size() - 1);
        }
        if (rub > best) {
            boxes.push_back(std::move(right));
            queue.emplace(rub, boxes.size() - 1);
        }
    }
    if (violation) *violation = found ? best : 0.0;
    if (boxes_used) *boxes_used = popped;
    return found;
}

VerificationReport verify_certificate(Certificate& cert,
                                      const CertificationProblem& problem,
                                      const SampleSet* samples,
                                      const MomentTable* moments,
                                      std::size_t budget) {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    double tol = std::max(cert.margin / 2.0, 1e-12);
    std::size_t budget_left = budget;
    bool falsified = false, unknown = false;

    auto run = [&](const std::string& name, const Polynomial& p, IneqSense sense,
                   const VerifyDomain& dom, bool record_always) {
        if (falsified) return;
        InequalityResult r =
            verify_inequality(p, sense, dom, tol, budget_left);
        budget_left -= std::min(r.boxes, budget_left);
        report.boxes_explored += r.boxes;
        ++report.constraints_checked;
        if (r.verdict == Verdict::Falsified) falsified = true;
        if (r.verdict == Verdict::Unknown) unknown = true;
        if (record_always || r.verdict != Verdict::Verified)
            report.constraints.push_back({name, std::move(r)});
    };

    Polynomial h = cert.h();
    VerifyDomain safe_dom = VerifyDomain::whole(problem.safe_set);
    VerifyDomain ann_dom = VerifyDomain::annulus(problem.envelope, problem.safe_set);

    if (cert.kind == "rbf") {
        if (!samples)
            throw std::invalid_argument("verify_certificate: rbf needs the sample set");
        if (samples->count != cert.sample_count)
            throw std::invalid_argument("verify_certificate: sample count mismatch");
        run("annulus: h <= 0", h, IneqSense::Le, ann_dom, true);
        Polynomial hf = h.compose(problem.dynamics);
        Polynomial gh = h * cert.gamma;
        std::size_t verified_samples = 0;
        for (std::size_t j = 0; j < samples->count && !falsified && !unknown; ++j) {
            Polynomial q = hf.substitute_tail(samples->sample(j)) - gh;
            std::ostringstream name;
            name << "sample " << j << ": h(f(x,d)) >= gamma h(x)";
            run(name.str(), q, IneqSense::Ge, safe_dom, false);
            if (!falsified && !unknown) ++verified_samples;
        }
        std::ostringstream note;
        note << "per-sample decrease constraints verified: " << verified_samples
             << " of " << samples->count;
        report.notes.push_back(note.str());
    } else if (cert.kind == "sbf") {
        if (!moments)
            throw std::invalid_argument("verify_certificate: sbf needs the moment table");
        run("safe set: h >= 0", h, IneqSense::Ge, safe_dom, true);
        run("annulus: h >= 1",
            h - Polynomial::constant(problem.state_dim, 1.0), IneqSense::Ge, ann_dom,
            true);
        Polynomial hbar =
            contract_moments(h.compose(problem.dynamics), problem.state_dim, *moments);
        Polynomial drift =
            hbar - h -
            Polynomial::constant(problem.state_dim, cert.lambda - cert.tau);
        run("safe set: mean drift <= lambda - tau", drift, IneqSense::Le, safe_dom,
            true);
    } else {
        throw std::invalid_argument("verify_certificate: unknown certificate kind");
    }

    if (falsified) {
        report.overall = Verdict::Falsified;
        cert.status = CertStatus::Falsified;
    } else if (unknown) {
        report.overall = Verdict::Unknown;
        report.notes.push_back("budget exhausted; certificate left as candidate");
    } else {
        report.overall = Verdict::Verified;
        cert.status = CertStatus::Verified;
    }
    report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SafetyEstimate mc_safety_estimate(const CertificationProblem& problem,
                                  std::span<const double> x0, int k, long long trials,
                                  std::uint64_t seed, double confidence) {
    if (!problem.safe_set.contains(x0))
        throw std::invalid_argument("mc_safety_estimate: x0 outside the safe set");
    if (k < 1) throw std::invalid_argument("mc_safety_estimate: horizon must be >= 1");
    if (trials < 1) throw std::invalid_argument("mc_safety_estimate: trials must be >= 1");
    SafetyEstimate est;
    est.x0.assign(x0.begin(), x0.end());
    est.horizon = k;
    est.trials = trials;
    est.seed = seed;
    est.confidence = confidence;
    std::vector<double> x, next;
    for (long long t = 0; t < trials; ++t) {
        RngStream rng(substream_seed(seed, static_cast<std::uint64_t>(t)));
        x.assign(x0.begin(), x0.end());
        bool safe = true;
        for (int step = 0; step < k && safe; ++step) {
            std::vector<double> d = problem.disturbance.sample_one(rng);
            next = problem.step(x, d);
            x = next;
            safe = problem.safe_set.contains(x);
        }
        if (safe) ++est.successes;
    }
    est.estimate = static_cast<double>(est.successes) / static_cast<double>(trials);
    BinomialInterval ci = clopper_pearson(est.successes, trials, confidence);
    est.cp_lower = ci.lower;
    est.cp_upper = ci.upper;
    return est;
}

double estimate_safe_region_volume(const Certificate& cert, const Region& safe_set,
                                   std::size_t n_samples, std::uint64_t seed) {
    if (cert.kind != "rbf")
        throw std::invalid_argument("estimate_safe_region_volume: needs an rbf certificate");
    Polynomial h = cert.h();
    std::size_t inside = 0;
    for_each_state(safe_set, n_samples, seed, [&](std::span<const double> x) {
        if (h.eval(x) > 0.0) ++inside;
    });
    return static_cast<double>(inside) / static_cast<double>(n_samples);
}

}  // namespace pacb
