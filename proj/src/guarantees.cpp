#include "pacbarrier/guarantees.hpp"

#include <cmath>
#include <stdexcept>

namespace pacb {

double pointwise_epsilon(const Certificate& cert, std::span<const double> x,
                         double epsilon, const Region& safe_set) {
    if (!safe_set.contains(x))
        throw std::invalid_argument("pointwise_epsilon: x outside the safe set");
    // Strict inequality defines X_s; the boundary gets the trivial level.
    return cert.tmpl.eval_h(cert.a, x) > 0.0 ? epsilon : 1.0;
}

double multistep_bound(double epsilon, int k) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("multistep_bound: epsilon must be in [0,1]");
    if (k < 1) throw std::invalid_argument("multistep_bound: k must be >= 1");
    return std::pow(1.0 - epsilon, k);
}

double kushner_bound(double lambda, double h_at_x, int k) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("kushner_bound: lambda must be in [0,1]");
    if (k < 1) throw std::invalid_argument("kushner_bound: k must be >= 1");
    return std::max(0.0, 1.0 - static_cast<double>(k) * lambda - h_at_x);
}

PacGuarantee assemble_pac_statement(const Certificate& cert, int k) {
    if (k < 1) throw std::invalid_argument("assemble_pac_statement: k must be >= 1");
    if (cert.status != CertStatus::Verified)
        throw std::domain_error(
            "assemble_pac_statement: only Verified certificates yield guarantees "
            "(status is " + cert_status_name(cert.status) + ")");
    if (cert.kind == "rbf" && !cert.xs_nonempty)
        throw std::domain_error(
            "assemble_pac_statement: rbf certificate rejected, X_s is empty");

    PacGuarantee g;
    g.confidence = 1.0 - cert.delta;
    g.horizon = k;
    g.accepted = true;
    g.certificate_kind = cert.kind;
    g.problem_fingerprint = cert.problem_fingerprint;

    if (cert.kind == "rbf" && cert.route == SampleRoute::Scenario) {
        g.theorem = k > 1 ? "scenario-uniform-kstep" : "scenario-uniform-1step";
        g.uniform = true;
        g.uniform_value = multistep_bound(cert.epsilon, k);
        g.epsilon = cert.epsilon;
        return g;
    }
    if (cert.kind == "rbf" && cert.route == SampleRoute::VC) {
        if (k > 1)
            throw std::invalid_argument(
                "assemble_pac_statement: the vc route grants one-step guarantees "
                "only; multi-step composition requires the scenario route");
        g.theorem = "vc-pointwise-1step";
        g.epsilon = cert.epsilon;
        g.coeffs = cert.a;
        g.basis = cert.tmpl.basis;
        return g;
    }
    if (cert.kind == "sbf") {
        if (k > 1)
            throw std::invalid_argument(
                "assemble_pac_statement: the sbf route grants one-step guarantees "
                "only; multi-step composition requires the scenario route");
        g.theorem = "sbf-pointwise-1step";
        g.lambda = cert.lambda;
        g.coeffs = cert.a;
        g.basis = cert.tmpl.basis;
        g.vacuous_possible = true;
        return g;
    }
    throw std::invalid_argument("assemble_pac_statement: unsupported route/kind");
}

}  // namespace pacb
