#include "pacbarrier/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pacbarrier/verify.hpp"

namespace pacb {

namespace {

void enumerate(int dim, Exponents& cur, int pos, int left, std::vector<Exponents>& out) {
    if (pos == dim) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[pos] = k;
        enumerate(dim, cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

std::vector<double> halton_point(std::uint64_t index, const Box& box) {
    std::vector<double> p(box.dim());
    for (int i = 0; i < box.dim(); ++i)
        p[i] = box.axes[i].lo + halton(index, halton_prime(i)) * box.axes[i].width();
    return p;
}

}  // namespace

BarrierTemplate BarrierTemplate::monomials(int state_dim, int degree) {
    if (state_dim < 1) throw std::invalid_argument("BarrierTemplate: state_dim < 1");
    if (degree < 0) throw std::invalid_argument("BarrierTemplate: negative degree");
    BarrierTemplate t;
    t.state_dim = state_dim;
    t.degree = degree;
    Exponents cur(state_dim, 0);
    enumerate(state_dim, cur, 0, degree, t.basis);
    return t;
}

std::vector<Polynomial> BarrierTemplate::basis_polys() const {
    std::vector<Polynomial> out;
    out.reserve(basis.size());
    for (const auto& e : basis) out.push_back(Polynomial::monomial(state_dim, e, 1.0));
    return out;
}

Polynomial BarrierTemplate::h_poly(std::span<const double> a) const {
    if (a.size() != basis.size())
        throw std::invalid_argument("BarrierTemplate::h_poly: parameter size mismatch");
    Polynomial h(state_dim);
    for (std::size_t l = 0; l < basis.size(); ++l) h.add_term(basis[l], a[l]);
    return h;
}

double BarrierTemplate::eval_h(std::span<const double> a,
                               std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t l = 0; l < basis.size(); ++l) {
        double t = a[l];
        for (int i = 0; i < state_dim; ++i)
            for (int k = 0; k < basis[l][i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

std::string cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::Candidate: return "candidate";
        case CertStatus::Verified: return "verified";
        case CertStatus::Falsified: return "falsified";
    }
    return "?";
}

CollocationSet default_collocation(const CertificationProblem& problem,
                                   const SynthesisConfig& config) {
    CollocationSet c;
    const Region& safe = problem.safe_set;
    const Region& env = problem.envelope;
    const int n = problem.state_dim;

    c.anchors = sample_states(safe, config.anchor_count,
                              substream_seed(config.seed, 0xa7c));

    Box safe_bbox = safe.bounding_box();
    std::uint64_t idx = 1;
    std::uint64_t tries = 0;
    while (c.x_points.size() < config.x_collocation &&
           tries < 1000 * config.x_collocation) {
        auto p = halton_point(idx++, safe_bbox);
        ++tries;
        if (safe.contains(p)) c.x_points.push_back(std::move(p));
    }
    if (c.x_points.empty())
        throw std::invalid_argument("default_collocation: no points found in X");

    // Annulus interior points plus explicit boundary-of-X points (the
    // closure includes the boundary).
    Box env_bbox = env.bounding_box();
    std::size_t annulus_target = config.annulus_collocation;
    if (annulus_target == 0) {
        double grid = std::pow(40.0, n);
        annulus_target = grid < 4096.0 ? static_cast<std::size_t>(grid) : 4096;
    }
    std::size_t boundary_count = std::max<std::size_t>(annulus_target / 4, 8);
    std::size_t interior_target = annulus_target;
    idx = 1;
    tries = 0;
    while (c.annulus_points.size() < interior_target &&
           tries < 1000 * std::max<std::size_t>(interior_target, 1)) {
        auto p = halton_point(idx++, env_bbox);
        ++tries;
        if (env.contains(p) && !safe.strictly_inside(p))
            c.annulus_points.push_back(std::move(p));
    }
    if (safe.kind() == Region::Kind::Ball) {
        for (std::size_t b = 0; b < boundary_count; ++b) {
            std::vector<double> dir(n);
            double norm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                dir[i] = 2.0 * halton(b + 1, halton_prime(i)) - 1.0;
                norm2 += dir[i] * dir[i];
            }
            if (norm2 < 1e-12) continue;
            double norm = std::sqrt(norm2);
            for (int i = 0; i < n; ++i)
                dir[i] = safe.center()[i] + safe.radius() * dir[i] / norm;
            c.annulus_points.push_back(std::move(dir));
        }
    } else {
        const Box& sb = safe.as_box();
        for (std::size_t b = 0; b < boundary_count; ++b) {
            auto p = halton_point(b + 1, sb);
            int face = static_cast<int>(b % (2 * n));
            int axis = face / 2;
            p[axis] = (face % 2 == 0) ? sb.axes[axis].lo : sb.axes[axis].hi;
            c.annulus_points.push_back(std::move(p));
        }
    }
    return c;
}

LinearProgram build_rbf_lp(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, const SampleSet& samples,
                           const SynthesisConfig& config,
                           const CollocationSet& colloc) {
    if (samples.count == 0) throw std::invalid_argument("build_rbf_lp: empty sample set");
    if (colloc.x_points.empty() || colloc.annulus_points.empty())
        throw std::invalid_argument("build_rbf_lp: empty collocation set");
    const int m = static_cast<int>(tmpl.size());
    const int n = problem.state_dim;

    LinearProgram lp(m);
    for (int l = 0; l < m; ++l) {
        lp.var_lo[l] = -config.ua;
        lp.var_hi[l] = config.ua;
    }
    // Objective: maximize the anchor mean of h => minimize its negation.
    for (const auto& x : colloc.anchors)
        for (int l = 0; l < m; ++l) {
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < tmpl.basis[l][i]; ++k) t *= x[i];
            lp.objective[l] -= t / static_cast<double>(colloc.anchors.size());
        }

    // The rbf constraints are homogeneous in a, so the optimum saturates the
    // +-ua box; an absolute hardening margin would vanish relative to the
    // coefficient scale. Harden proportionally to the cap instead.
    const double margin = config.margin * config.ua;
    // h(a, x) <= -margin on the annulus.
    for (const auto& x : colloc.annulus_points) {
        std::vector<double> row(m);
        for (int l = 0; l < m; ++l) {
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < tmpl.basis[l][i]; ++k) t *= x[i];
            row[l] = t;
        }
        lp.add_row(std::move(row), RowSense::Le, -margin);
    }

    // a . (g(f(x, d_j)) - gamma g(x)) >= margin for every (x point, sample).
    std::vector<Polynomial> phi;  // g_l(f(x,d)) symbolically in (x, d)
    phi.reserve(m);
    for (const auto& g : tmpl.basis_polys()) phi.push_back(g.compose(problem.dynamics));
    for (const auto& x : colloc.x_points) {
        std::vector<Polynomial> phi_at_x;  // now polynomials in d
        phi_at_x.reserve(m);
        for (int l = 0; l < m; ++l) phi_at_x.push_back(phi[l].substitute_head(x));
        std::vector<double> gx(m);
        for (int l = 0; l < m; ++l) {
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < tmpl.basis[l][i]; ++k) t *= x[i];
            gx[l] = t;
        }
        for (std::size_t j = 0; j < samples.count; ++j) {
            auto d = samples.sample(j);
            std::vector<double> row(m);
            for (int l = 0; l < m; ++l)
                row[l] = phi_at_x[l].eval(d) - config.gamma * gx[l];
            lp.add_row(std::move(row), RowSense::Ge, margin);
        }
    }
    return lp;
}

std::vector<Polynomial> mean_feature_polys(const CertificationProblem& problem,
                                           const BarrierTemplate& tmpl,
                                           const MomentTable& moments) {
    std::vector<Polynomial> out;
    out.reserve(tmpl.size());
    for (const auto& g : tmpl.basis_polys()) {
        Polynomial comp = g.compose(problem.dynamics);
        if (comp.degree_in(problem.state_dim, problem.disturbance_dim) >
            moments.max_degree)
            throw std::invalid_argument("mean_feature_polys: moment table degree too low");
        out.push_back(contract_moments(comp, problem.state_dim, moments));
    }
    return out;
}

LinearProgram build_sbf_lp(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, const MomentTable& moments,
                           const SynthesisConfig& config,
                           const CollocationSet& colloc) {
    if (colloc.x_points.empty() || colloc.annulus_points.empty())
        throw std::invalid_argument("build_sbf_lp: empty collocation set");
    const int m = static_cast<int>(tmpl.size());
    const int n = problem.state_dim;
    const int lam = m;  // lambda variable index

    LinearProgram lp(m + 1);
    double coef_cap = config.ua / std::sqrt(static_cast<double>(m));
    for (int l = 0; l < m; ++l) {
        lp.var_lo[l] = -coef_cap;
        lp.var_hi[l] = coef_cap;
    }
    lp.var_lo[lam] = 0.0;
    lp.var_hi[lam] = 1.0;

    // Objective: lambda + anchor mean of h.
    lp.objective[lam] = 1.0;
    for (const auto& x : colloc.anchors)
        for (int l = 0; l < m; ++l) {
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < tmpl.basis[l][i]; ++k) t *= x[i];
            lp.objective[l] += t / static_cast<double>(colloc.anchors.size());
        }

    auto gvals = [&](std::span<const double> x) {
        std::vector<double> g(m);
        for (int l = 0; l < m; ++l) {
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < tmpl.basis[l][i]; ++k) t *= x[i];
            g[l] = t;
        }
        return g;
    };

    // h >= margin on X.
    for (const auto& x : colloc.x_points) {
        std::vector<double> row = gvals(x);
        row.push_back(0.0);
        lp.add_row(std::move(row), RowSense::Ge, config.margin);
    }
    // h >= 1 + margin on the annulus.
    for (const auto& x : colloc.annulus_points) {
        std::vector<double> row = gvals(x);
        row.push_back(0.0);
        lp.add_row(std::move(row), RowSense::Ge, 1.0 + config.margin);
    }
    // mean_j h(a, f(x,d_j)) - h(a,x) - lambda <= -tau - margin on X.
    std::vector<Polynomial> gbar = mean_feature_polys(problem, tmpl, moments);
    for (const auto& x : colloc.x_points) {
        std::vector<double> g = gvals(x);
        std::vector<double> row(m + 1);
        for (int l = 0; l < m; ++l) row[l] = gbar[l].eval(x) - g[l];
        row[lam] = -1.0;
        lp.add_row(std::move(row), RowSense::Le, -config.tau - config.margin);
    }
    return lp;
}

namespace {

// Shared LP solve with a margin-free retry so hardened programs degrade
// gracefully instead of failing outright.
LpResult solve_with_fallback(const CertificationProblem& problem,
                             const BarrierTemplate& tmpl, const SynthesisConfig& config,
                             const CollocationSet& colloc, const SampleSet* samples,
                             const MomentTable* moments, bool rbf, bool* dropped_margin) {
    auto build = [&](const SynthesisConfig& cfg) {
        return rbf ? build_rbf_lp(problem, tmpl, *samples, cfg, colloc)
                   : build_sbf_lp(problem, tmpl, *moments, cfg, colloc);
    };
    LpResult res = solve_lp(build(config), config.lp_tolerance);
    if (res.status == LpStatus::Infeasible && config.margin > 0.0) {
        SynthesisConfig soft = config;
        soft.margin = 0.0;
        res = solve_lp(build(soft), config.lp_tolerance);
        if (dropped_margin) *dropped_margin = true;
    }
    if (res.status != LpStatus::Optimal) {
        std::ostringstream os;
        os << "synthesis LP solve failed: status="
           << (res.status == LpStatus::Infeasible
                   ? "infeasible"
                   : res.status == LpStatus::Unbounded ? "unbounded" : "failure")
           << " (iterations=" << res.iterations << ", rounds=" << res.outer_rounds
           << ", residual=" << res.max_residual << ")";
        throw std::runtime_error(os.str());
    }
    return res;
}

bool xs_nonempty_check(const CertificationProblem& problem, const BarrierTemplate& tmpl,
                       std::span<const double> a, const CollocationSet& colloc,
                       std::uint64_t seed) {
    for (const auto& x : colloc.anchors)
        if (tmpl.eval_h(a, x) > 0.0) return true;
    for (const auto& x : colloc.x_points)
        if (tmpl.eval_h(a, x) > 0.0) return true;
    for (const auto& x : sample_states(problem.safe_set, 4096, seed))
        if (tmpl.eval_h(a, x) > 0.0) return true;
    return false;
}

}  // namespace

Certificate synthesize_rbf(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, double epsilon, double delta,
                           const SynthesisConfig& config) {
    problem.validate();
    if (tmpl.state_dim != problem.state_dim)
        throw std::invalid_argument("synthesize_rbf: template dimension mismatch");
    const std::size_t m = tmpl.size();
    SampleBudget budget;
    switch (config.route) {
        case SampleRoute::Scenario:
            budget = scenario_sample_size(epsilon, delta, m);
            break;
        case SampleRoute::VC:
            budget = vc_sample_size(epsilon, delta, m);
            break;
        default:
            throw std::invalid_argument(
                "synthesize_rbf: sample route must be scenario or vc");
    }
    SampleSet samples =
        draw_samples(problem.disturbance, budget.count, substream_seed(config.seed, 1));
    CollocationSet colloc = default_collocation(problem, config);

    Certificate cert;
    cert.kind = "rbf";
    cert.tmpl = tmpl;
    cert.gamma = config.gamma;
    cert.epsilon = epsilon;
    cert.delta = delta;
    cert.sample_count = budget.count;
    cert.route = config.route;
    cert.seed = config.seed;
    cert.margin = config.margin * config.ua;  // matches the hardened LP rows
    cert.problem_fingerprint = problem.fingerprint();

    // Hunt refinement witnesses at a stricter tolerance than verification
    // later uses, so the accepted candidate clears verification with headroom.
    double tol = std::max(cert.margin / 8.0, 1e-9);
    for (std::size_t round = 0; round <= config.refine_rounds; ++round) {
        bool soft = false;
        LpResult res = solve_with_fallback(problem, tmpl, config, colloc, &samples,
                                           nullptr, true, &soft);
        if (soft) cert.margin = 0.0;
        cert.a = res.values;
        cert.objective = res.objective;

        // Verification-guided refinement: add witnesses of continuous-domain
        // violations as new collocation points and re-solve.
        std::size_t added = 0;
        Polynomial h = cert.h();
        VerifyDomain ann = VerifyDomain::annulus(problem.envelope, problem.safe_set);
        std::size_t budget_left = config.refine_budget;
        std::vector<double> w;
        double viol = 0.0;
        std::size_t used = 0;
        if (worst_violation(h, IneqSense::Le, ann, tol,
                            std::min<std::size_t>(budget_left, 100000), &w, &viol,
                            &used)) {
            colloc.annulus_points.push_back(w);
            ++added;
        }
        budget_left -= std::min(used, budget_left);
        Polynomial hf = h.compose(problem.dynamics);
        VerifyDomain dom = VerifyDomain::whole(problem.safe_set);
        // Rotate the starting sample between rounds so that a tight per-pass
        // budget still covers every decrease constraint eventually.
        for (std::size_t jj = 0; jj < samples.count && budget_left > 0 && added < 32; ++jj) {
            std::size_t j = (jj + round * 131) % samples.count;
            Polynomial q = hf.substitute_tail(samples.sample(j)) - h * config.gamma;
            std::size_t slice = std::min<std::size_t>(budget_left, 20000);
            if (worst_violation(q, IneqSense::Ge, dom, tol, slice, &w, &viol, &used)) {
                colloc.x_points.push_back(w);
                ++added;
            }
            budget_left -= std::min(used, budget_left);
        }
        if (added == 0) break;
    }
    cert.xs_nonempty = xs_nonempty_check(problem, tmpl, cert.a, colloc,
                                         substream_seed(config.seed, 0x5e));
    return cert;
}

Certificate synthesize_sbf(const CertificationProblem& problem,
                           const BarrierTemplate& tmpl, double delta,
                           const SynthesisConfig& config) {
    problem.validate();
    if (tmpl.state_dim != problem.state_dim)
        throw std::invalid_argument("synthesize_sbf: template dimension mismatch");
    FeatureRadius radius = feature_radius_bound(
        tmpl.basis_polys(), problem.dynamics, problem.safe_set,
        problem.disturbance.support(), 0.10, 50000, 20000, config.seed);
    SampleBudget budget =
        rademacher_sample_size(config.ua, config.tau, delta, radius.upper);

    int moment_degree = 0;
    for (const auto& g : tmpl.basis_polys()) {
        Polynomial comp = g.compose(problem.dynamics);
        moment_degree = std::max(
            moment_degree, comp.degree_in(problem.state_dim, problem.disturbance_dim));
    }
    MomentTable moments = streamed_empirical_moments(
        problem.disturbance, budget.count, substream_seed(config.seed, 1), moment_degree);
    CollocationSet colloc = default_collocation(problem, config);

    Certificate cert;
    cert.kind = "sbf";
    cert.tmpl = tmpl;
    cert.tau = config.tau;
    cert.delta = delta;
    cert.sample_count = budget.count;
    cert.route = SampleRoute::Rademacher;
    cert.seed = config.seed;
    cert.margin = config.margin;
    cert.feature_radius = radius.upper;
    cert.problem_fingerprint = problem.fingerprint();

    // Hunt refinement witnesses at a stricter tolerance than verification
    // later uses, so the accepted candidate clears verification with headroom.
    double tol = std::max(config.margin / 8.0, 1e-9);
    for (std::size_t round = 0; round <= config.refine_rounds; ++round) {
        bool soft = false;
        LpResult res = solve_with_fallback(problem, tmpl, config, colloc, nullptr,
                                           &moments, false, &soft);
        if (soft) cert.margin = 0.0;
        cert.a.assign(res.values.begin(), res.values.end() - 1);
        cert.lambda = res.values.back();
        cert.objective = res.objective;

        std::size_t added = 0;
        Polynomial h = cert.h();
        VerifyDomain dom = VerifyDomain::whole(problem.safe_set);
        VerifyDomain ann = VerifyDomain::annulus(problem.envelope, problem.safe_set);
        std::size_t budget_left = config.refine_budget;
        auto check = [&](const Polynomial& p, IneqSense sense, const VerifyDomain& d,
                         std::vector<std::vector<double>>& sink) {
            if (budget_left == 0) return;
            std::vector<double> w;
            double viol = 0.0;
            std::size_t used = 0;
            if (worst_violation(p, sense, d, tol,
                                std::min<std::size_t>(budget_left, 200000), &w, &viol,
                                &used)) {
                sink.push_back(w);
                ++added;
            }
            budget_left -= std::min(used, budget_left);
        };
        check(h, IneqSense::Ge, dom, colloc.x_points);
        check(h - Polynomial::constant(problem.state_dim, 1.0), IneqSense::Ge, ann,
              colloc.annulus_points);
        Polynomial hbar = contract_moments(h.compose(problem.dynamics),
                                           problem.state_dim, moments);
        Polynomial drift = hbar - h -
                           Polynomial::constant(problem.state_dim,
                                                cert.lambda - config.tau);
        check(drift, IneqSense::Le, dom, colloc.x_points);
        if (added == 0) break;
    }
    return cert;
}

}  // namespace pacb
