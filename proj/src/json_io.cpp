#include "pacbarrier/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace pacb {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw std::invalid_argument(where + ": " + msg);
}

const Json& need(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where + "/" + key, "missing field");
    return *it;
}

double need_num(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number()) fail(where + "/" + key, "expected a number");
    return v.get<double>();
}

}  // namespace

Json poly_to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coef", c}});
    return {{"arity", p.arity()}, {"terms", terms}};
}

Polynomial poly_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a polynomial object");
    int arity = static_cast<int>(need_num(j, "arity", where));
    Polynomial p(arity);
    const Json& terms = need(j, "terms", where);
    if (!terms.is_array()) fail(where + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string tw = where + "/terms/" + std::to_string(i);
        const Json& t = terms[i];
        const Json& ej = need(t, "exp", tw);
        if (!ej.is_array() || static_cast<int>(ej.size()) != arity)
            fail(tw + "/exp", "expected an exponent array of length arity");
        Exponents e;
        for (const auto& v : ej) {
            int k = v.get<int>();
            if (k < 0) fail(tw + "/exp", "negative exponent");
            e.push_back(k);
        }
        p.add_term(e, need_num(t, "coef", tw));
    }
    return p;
}

Json region_to_json(const Region& r) {
    if (r.kind() == Region::Kind::Ball)
        return {{"kind", "ball"}, {"center", r.center()}, {"radius", r.radius()}};
    Json lo = Json::array(), hi = Json::array();
    for (const auto& a : r.as_box().axes) {
        lo.push_back(a.lo);
        hi.push_back(a.hi);
    }
    return {{"kind", "box"}, {"lo", lo}, {"hi", hi}};
}

Region region_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a region object");
    std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "ball") {
        std::vector<double> center =
            need(j, "center", where).get<std::vector<double>>();
        double radius = need_num(j, "radius", where);
        if (radius <= 0.0) fail(where + "/radius", "radius must be positive");
        return Region::ball(std::move(center), radius);
    }
    if (kind == "box") {
        std::vector<double> lo = need(j, "lo", where).get<std::vector<double>>();
        std::vector<double> hi = need(j, "hi", where).get<std::vector<double>>();
        if (lo.size() != hi.size()) fail(where, "lo/hi length mismatch");
        Box b;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] <= hi[i]))
                fail(where + "/lo/" + std::to_string(i), "lo > hi");
            b.axes.push_back(Interval(lo[i], hi[i]));
        }
        return Region::box(std::move(b));
    }
    fail(where + "/kind", "expected 'ball' or 'box'");
}

Json disturbance_to_json(const DisturbanceModel& m) {
    Json coords = Json::array();
    for (const auto& c : m.coords) {
        switch (c.type) {
            case CoordinateDistribution::Type::Uniform:
                coords.push_back({{"type", "uniform"}, {"lo", c.lo}, {"hi", c.hi}});
                break;
            case CoordinateDistribution::Type::ScaledBeta:
                coords.push_back({{"type", "scaled_beta"},
                                  {"alpha", c.alpha},
                                  {"beta", c.beta},
                                  {"lo", c.lo},
                                  {"hi", c.hi}});
                break;
            case CoordinateDistribution::Type::TruncatedNormal:
                coords.push_back({{"type", "truncated_normal"},
                                  {"mu", c.mu},
                                  {"sigma", c.sigma},
                                  {"lo", c.lo},
                                  {"hi", c.hi}});
                break;
        }
    }
    return {{"coords", coords}};
}

DisturbanceModel disturbance_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a disturbance object");
    const Json& coords = need(j, "coords", where);
    if (!coords.is_array()) fail(where + "/coords", "expected an array");
    DisturbanceModel m;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        std::string cw = where + "/coords/" + std::to_string(i);
        const Json& c = coords[i];
        std::string type = need(c, "type", cw).get<std::string>();
        if (type == "uniform")
            m.coords.push_back(CoordinateDistribution::uniform(
                need_num(c, "lo", cw), need_num(c, "hi", cw)));
        else if (type == "scaled_beta")
            m.coords.push_back(CoordinateDistribution::scaled_beta(
                need_num(c, "alpha", cw), need_num(c, "beta", cw),
                need_num(c, "lo", cw), need_num(c, "hi", cw)));
        else if (type == "truncated_normal")
            m.coords.push_back(CoordinateDistribution::truncated_normal(
                need_num(c, "mu", cw), need_num(c, "sigma", cw),
                need_num(c, "lo", cw), need_num(c, "hi", cw)));
        else
            fail(cw + "/type", "expected uniform | scaled_beta | truncated_normal");
    }
    return m;
}

Json problem_to_json(const CertificationProblem& p) {
    Json dynamics = Json::array();
    for (const auto& f : p.dynamics) dynamics.push_back(poly_to_json(f));
    return {{"state_dim", p.state_dim},
            {"disturbance_dim", p.disturbance_dim},
            {"dynamics", dynamics},
            {"safe_set", region_to_json(p.safe_set)},
            {"envelope", region_to_json(p.envelope)},
            {"disturbance", disturbance_to_json(p.disturbance)},
            {"horizon", p.horizon}};
}

CertificationProblem problem_from_json(const Json& j, std::string* notice) {
    const std::string where = "";
    if (!j.is_object()) fail("/", "expected a problem object");
    CertificationProblem p;
    p.state_dim = static_cast<int>(need_num(j, "state_dim", where));
    p.disturbance_dim = static_cast<int>(need_num(j, "disturbance_dim", where));
    const Json& dyn = need(j, "dynamics", where);
    if (!dyn.is_array()) fail("/dynamics", "expected an array");
    for (std::size_t i = 0; i < dyn.size(); ++i)
        p.dynamics.push_back(poly_from_json(dyn[i], "/dynamics/" + std::to_string(i)));
    p.safe_set = region_from_json(need(j, "safe_set", where), "/safe_set");
    p.disturbance =
        disturbance_from_json(need(j, "disturbance", where), "/disturbance");
    p.horizon = j.contains("horizon") ? static_cast<int>(need_num(j, "horizon", where)) : 1;
    if (j.contains("envelope")) {
        p.envelope = region_from_json(j["envelope"], "/envelope");
    } else {
        p.envelope = compute_reach_envelope(p.dynamics, p.safe_set, p.disturbance);
        if (notice)
            *notice = "envelope not provided; auto-filled from the one-step reach envelope";
    }
    p.validate();
    return p;
}

Json certificate_to_json(const Certificate& c) {
    Json basis = Json::array();
    for (const auto& e : c.tmpl.basis) basis.push_back(e);
    return {{"kind", c.kind},
            {"degree", c.tmpl.degree},
            {"basis", basis},
            {"a", c.a},
            {"lambda", c.lambda},
            {"gamma", c.gamma},
            {"tau", c.tau},
            {"epsilon", c.epsilon},
            {"delta", c.delta},
            {"sample_count", c.sample_count},
            {"route", route_name(c.route)},
            {"seed", c.seed},
            {"objective", c.objective},
            {"status", cert_status_name(c.status)},
            {"xs_nonempty", c.xs_nonempty},
            {"margin", c.margin},
            {"feature_radius", c.feature_radius},
            {"problem_fingerprint", c.problem_fingerprint}};
}

Certificate certificate_from_json(const Json& j) {
    const std::string where = "";
    Certificate c;
    c.kind = need(j, "kind", where).get<std::string>();
    if (c.kind != "rbf" && c.kind != "sbf") fail("/kind", "expected rbf | sbf");
    const Json& basis = need(j, "basis", where);
    c.tmpl.degree = static_cast<int>(need_num(j, "degree", where));
    for (const auto& e : basis) c.tmpl.basis.push_back(e.get<Exponents>());
    if (c.tmpl.basis.empty()) fail("/basis", "empty basis");
    c.tmpl.state_dim = static_cast<int>(c.tmpl.basis[0].size());
    c.a = need(j, "a", where).get<std::vector<double>>();
    if (c.a.size() != c.tmpl.basis.size()) fail("/a", "length mismatch with basis");
    c.lambda = need_num(j, "lambda", where);
    c.gamma = need_num(j, "gamma", where);
    c.tau = need_num(j, "tau", where);
    c.epsilon = need_num(j, "epsilon", where);
    c.delta = need_num(j, "delta", where);
    c.sample_count = static_cast<std::size_t>(need_num(j, "sample_count", where));
    std::string route = need(j, "route", where).get<std::string>();
    if (route == "vc") c.route = SampleRoute::VC;
    else if (route == "scenario") c.route = SampleRoute::Scenario;
    else if (route == "rademacher") c.route = SampleRoute::Rademacher;
    else fail("/route", "expected vc | scenario | rademacher");
    c.seed = need(j, "seed", where).get<std::uint64_t>();
    c.objective = need_num(j, "objective", where);
    std::string status = need(j, "status", where).get<std::string>();
    if (status == "candidate") c.status = CertStatus::Candidate;
    else if (status == "verified") c.status = CertStatus::Verified;
    else if (status == "falsified") c.status = CertStatus::Falsified;
    else fail("/status", "expected candidate | verified | falsified");
    c.xs_nonempty = need(j, "xs_nonempty", where).get<bool>();
    c.margin = need_num(j, "margin", where);
    c.feature_radius = need_num(j, "feature_radius", where);
    c.problem_fingerprint = need(j, "problem_fingerprint", where).get<std::string>();
    return c;
}

Json guarantee_to_json(const PacGuarantee& g) {
    Json bound;
    if (g.uniform) {
        bound = {{"type", "uniform"}, {"value", g.uniform_value}, {"epsilon", g.epsilon}};
    } else {
        Json basis = Json::array();
        for (const auto& e : g.basis) basis.push_back(e);
        bound = {{"type", "pointwise"},
                 {"lambda", g.lambda},
                 {"epsilon", g.epsilon},
                 {"coeffs", g.coeffs},
                 {"basis", basis}};
    }
    return {{"theorem", g.theorem},
            {"confidence", g.confidence},
            {"horizon", g.horizon},
            {"bound", bound},
            {"accepted", g.accepted},
            {"vacuous_possible", g.vacuous_possible},
            {"certificate_id", g.problem_fingerprint + ":" + g.certificate_kind}};
}

Json report_to_json(const VerificationReport& r) {
    Json constraints = Json::array();
    for (const auto& c : r.constraints) {
        Json item = {{"name", c.name},
                     {"verdict", verdict_name(c.result.verdict)},
                     {"boxes", c.result.boxes},
                     {"max_depth", c.result.max_depth}};
        if (c.result.verdict == Verdict::Falsified) {
            item["witness"] = c.result.witness;
            item["witness_value"] = c.result.witness_value;
        }
        constraints.push_back(std::move(item));
    }
    return {{"overall", verdict_name(r.overall)},
            {"constraints", constraints},
            {"constraints_checked", r.constraints_checked},
            {"boxes_explored", r.boxes_explored},
            {"wall_time_sec", r.wall_time_sec},
            {"notes", r.notes}};
}

Json sample_budget_to_json(const SampleBudget& b) {
    Json j = {{"route", route_name(b.route)},
              {"count", b.count},
              {"delta", b.delta}};
    switch (b.route) {
        case SampleRoute::VC:
            j["epsilon"] = b.epsilon;
            j["vc_dim"] = b.vc_dim;
            break;
        case SampleRoute::Scenario:
            j["epsilon"] = b.epsilon;
            j["num_params"] = b.num_params;
            break;
        case SampleRoute::Rademacher:
            j["ua"] = b.ua;
            j["tau"] = b.tau;
            j["radius"] = b.radius;
            break;
    }
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace pacb
