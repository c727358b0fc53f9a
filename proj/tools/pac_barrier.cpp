// pac-barrier: synthesize, verify, and validate probabilistic safety
// certificates for discrete-time polynomial stochastic systems.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pacbarrier/benchmarks.hpp"
#include "pacbarrier/bounds.hpp"
#include "pacbarrier/certify.hpp"
#include "pacbarrier/guarantees.hpp"
#include "pacbarrier/json_io.hpp"
#include "pacbarrier/verify.hpp"

namespace fs = std::filesystem;
using namespace pacb;

namespace {

// Exit codes: 0 ok, 2 input error, 3 certificate rejected, 4 budget exhausted.
struct RejectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemSource {
    std::string benchmark;
    std::string path;

    CertificationProblem load(std::string* note = nullptr) const {
        if (!benchmark.empty() && !path.empty())
            throw std::invalid_argument("give either --benchmark or --problem, not both");
        if (!benchmark.empty()) return load_benchmark(benchmark).problem;
        if (!path.empty()) return problem_from_json(load_json_file(path), note);
        throw std::invalid_argument("one of --benchmark or --problem is required");
    }
};

int threads_env() {
    // Recorded for provenance; all outputs are independent of it.
    const char* t = std::getenv("THREADS");
    return t ? std::atoi(t) : 1;
}

// Re-derives the synthesis-time sample set / moment table from the
// certificate's recorded seed so that verification is self-contained.
SampleSet rederive_samples(const Certificate& cert, const CertificationProblem& problem) {
    return draw_samples(problem.disturbance, cert.sample_count,
                        substream_seed(cert.seed, 1));
}

MomentTable rederive_moments(const Certificate& cert, const CertificationProblem& problem) {
    int degree = 0;
    for (const auto& e : cert.tmpl.basis) {
        Polynomial g = Polynomial::monomial(cert.tmpl.state_dim, e, 1.0);
        degree = std::max(degree,
                          g.compose(problem.dynamics)
                              .degree_in(problem.state_dim, problem.disturbance_dim));
    }
    return streamed_empirical_moments(problem.disturbance, cert.sample_count,
                                      substream_seed(cert.seed, 1), degree);
}

VerificationReport verify_with_problem(Certificate& cert,
                                       const CertificationProblem& problem,
                                       std::size_t budget) {
    if (cert.problem_fingerprint != problem.fingerprint())
        throw std::invalid_argument(
            "certificate was synthesized for a different problem (fingerprint mismatch)");
    if (cert.kind == "rbf") {
        SampleSet samples = rederive_samples(cert, problem);
        return verify_certificate(cert, problem, &samples, nullptr, budget);
    }
    MomentTable moments = rederive_moments(cert, problem);
    return verify_certificate(cert, problem, nullptr, &moments, budget);
}

double certified_bound_at(const Certificate& cert, std::span<const double> x, int k) {
    double h = cert.tmpl.eval_h(cert.a, x);
    if (cert.kind == "rbf")
        return h > 0.0 ? multistep_bound(cert.epsilon, k) : 0.0;
    return kushner_bound(cert.lambda, h, k);
}

void write_validation_csv(const std::string& path, const Certificate& cert,
                          const CertificationProblem& problem,
                          const std::vector<std::vector<double>>& states, int k,
                          long long trials, double confidence, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(12);
    for (int i = 0; i < problem.state_dim; ++i) out << "x" << i << ",";
    out << "certified_bound,mc_estimate,cp_lower,cp_upper,pass\n";
    for (std::size_t s = 0; s < states.size(); ++s) {
        SafetyEstimate est = mc_safety_estimate(problem, states[s], k, trials,
                                                substream_seed(seed, s), confidence);
        double bound = certified_bound_at(cert, states[s], k);
        bool pass = est.cp_upper >= bound;
        for (double c : states[s]) out << c << ",";
        out << bound << "," << est.estimate << "," << est.cp_lower << ","
            << est.cp_upper << "," << (pass ? 1 : 0) << "\n";
    }
}

void emit_contour_grid(const std::string& path, const Certificate& cert,
                       const Region& region, int resolution) {
    if (region.dim() != 2)
        throw std::invalid_argument(
            "contour output needs a 2D state space (no slice specified)");
    if (resolution < 2) throw std::invalid_argument("contour resolution must be >= 2");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(12);
    Box b = region.bounding_box();
    if (cert.kind == "rbf")
        out << "x0,x1,h,xs_indicator\n";
    else
        out << "x0,x1,certified_bound\n";
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            double x = b.axes[0].lo + b.axes[0].width() * i / (resolution - 1);
            double y = b.axes[1].lo + b.axes[1].width() * j / (resolution - 1);
            std::vector<double> p = {x, y};
            double h = cert.tmpl.eval_h(cert.a, p);
            if (cert.kind == "rbf")
                out << x << "," << y << "," << h << "," << (h > 0.0 ? 1 : 0) << "\n";
            else
                out << x << "," << y << ","
                    << kushner_bound(cert.lambda, h, 1) << "\n";
        }
    }
}

std::vector<std::vector<double>> pick_validation_states(const Certificate& cert,
                                                        const CertificationProblem& problem,
                                                        std::size_t count,
                                                        std::uint64_t seed) {
    // RBF guarantees cover X_s = {h > 0}; SBF covers all of X.
    std::vector<std::vector<double>> out;
    std::size_t tries = 0;
    std::uint64_t salt = 0;
    while (out.size() < count && tries < 200 * count + 1000) {
        auto batch = sample_states(problem.safe_set, count, substream_seed(seed, salt++));
        for (auto& x : batch) {
            if (out.size() >= count) break;
            ++tries;
            if (cert.kind == "rbf" && !(cert.tmpl.eval_h(cert.a, x) > 0.0)) continue;
            out.push_back(std::move(x));
        }
        if (cert.kind != "rbf") break;
    }
    return out;
}

int cmd_run(const ProblemSource& src, const std::string& route_name_in, double epsilon,
            double delta, double tau, double gamma, double ua, int degree,
            int horizon, std::uint64_t seed, std::size_t collocation,
            std::size_t budget, std::size_t mc_states, long long mc_trials,
            double confidence, const std::string& out_dir) {
    std::string note;
    CertificationProblem problem = src.load(&note);
    fs::create_directories(out_dir);

    SynthesisConfig config;
    config.seed = seed;
    config.gamma = gamma;
    config.tau = tau;
    config.ua = ua;
    if (collocation > 0) {
        config.x_collocation = collocation;
        config.annulus_collocation = collocation;
    }

    bool sbf = route_name_in == "rademacher";
    if (sbf && horizon > 1)
        throw std::invalid_argument(
            "the rademacher (sbf) route grants one-step guarantees only; "
            "use --horizon 1 or the scenario route");
    config.route = route_name_in == "vc" ? SampleRoute::VC : SampleRoute::Scenario;

    BarrierTemplate tmpl = BarrierTemplate::monomials(problem.state_dim, degree);
    std::ostringstream summary;
    summary << "pac-barrier run summary\n";
    if (!src.benchmark.empty()) {
        BenchmarkEntry entry = load_benchmark(src.benchmark);
        summary << "benchmark: " << entry.name << " (" << entry.description << ")\n"
                << "reference values (different backend, annotation only): "
                << entry.reference_note << "\n";
    }
    if (!note.empty()) summary << "notice: " << note << "\n";
    summary << "threads: " << threads_env() << " (outputs are independent of it)\n";

    Certificate cert = sbf ? synthesize_sbf(problem, tmpl, delta, config)
                           : synthesize_rbf(problem, tmpl, epsilon, delta, config);
    save_json_file(out_dir + "/cert.json", certificate_to_json(cert));
    summary << "stage synth: ok, kind=" << cert.kind << ", M=" << cert.sample_count
            << ", objective=" << cert.objective << "\n";

    VerificationReport report = verify_with_problem(cert, problem, budget);
    save_json_file(out_dir + "/cert.json", certificate_to_json(cert));
    save_json_file(out_dir + "/report.json", report_to_json(report));
    summary << "stage verify: " << verdict_name(report.overall) << " ("
            << report.boxes_explored << " boxes)\n";
    if (report.overall == Verdict::Unknown) {
        std::ofstream(out_dir + "/summary.txt") << summary.str();
        throw BudgetError("verification budget exhausted at stage verify");
    }
    if (report.overall == Verdict::Falsified) {
        std::ofstream(out_dir + "/summary.txt") << summary.str();
        throw RejectedError("certificate falsified at stage verify");
    }
    if (cert.kind == "rbf" && !cert.xs_nonempty) {
        std::ofstream(out_dir + "/summary.txt") << summary.str();
        throw RejectedError("certificate rejected: X_s is empty");
    }

    PacGuarantee pac = assemble_pac_statement(cert, horizon);
    save_json_file(out_dir + "/pac.json", guarantee_to_json(pac));
    summary << "stage guarantee: " << pac.theorem << ", confidence=" << pac.confidence
            << "\n";

    auto states = pick_validation_states(cert, problem, mc_states,
                                         substream_seed(seed, 0xccf));
    write_validation_csv(out_dir + "/validation.csv", cert, problem, states, horizon,
                         mc_trials, confidence, substream_seed(seed, 0x3c));
    summary << "stage mc-validate: " << states.size() << " states x " << mc_trials
            << " trajectories -> validation.csv\n";

    if (problem.state_dim == 2) {
        emit_contour_grid(out_dir + "/contour.csv", cert, problem.safe_set, 101);
        summary << "stage contour: contour.csv (101x101)\n";
    } else {
        summary << "stage contour: skipped (state dimension != 2)\n";
    }

    if (cert.kind == "rbf") {
        double vol = estimate_safe_region_volume(cert, problem.safe_set, 1000000,
                                                 substream_seed(seed, 0x701));
        summary << "V_Xs (1e6 samples): " << vol << "\n";
    }
    std::ofstream(out_dir + "/summary.txt") << summary.str();
    std::cout << summary.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC barrier-certificate toolkit for stochastic polynomial systems"};
    app.require_subcommand(1);

    try {
        // ---- sample-size ----
        auto* ss = app.add_subcommand("sample-size", "compute a PAC sample budget");
        std::string ss_route;
        double ss_eps = 0.1, ss_delta = 0.001, ss_ua = 2.0, ss_tau = 0.1, ss_radius = 1.0;
        std::size_t ss_vc = 0, ss_params = 0;
        ss->add_option("--route", ss_route, "vc | scenario | rademacher")->required();
        ss->add_option("--epsilon", ss_eps);
        ss->add_option("--delta", ss_delta)->required();
        ss->add_option("--vc-dim", ss_vc);
        ss->add_option("--num-params", ss_params);
        ss->add_option("--ua", ss_ua);
        ss->add_option("--tau", ss_tau);
        ss->add_option("--radius", ss_radius);

        // ---- synth-rbf / synth-sbf ----
        ProblemSource rbf_src, sbf_src, ver_src, mcv_src, run_src;
        auto add_source = [](CLI::App* cmd, ProblemSource& src) {
            cmd->add_option("--benchmark", src.benchmark, "registered benchmark name");
            cmd->add_option("--problem", src.path, "problem JSON file");
        };
        auto* srb = app.add_subcommand("synth-rbf", "synthesize a robust barrier");
        int srb_degree = 4;
        double srb_eps = 0.1, srb_delta = 0.001, srb_gamma = 0.99, srb_ua = 1e4;
        std::uint64_t srb_seed = 1;
        std::size_t srb_colloc = 0;
        std::string srb_route = "scenario", srb_out = "cert.json";
        add_source(srb, rbf_src);
        srb->add_option("--degree", srb_degree);
        srb->add_option("--epsilon", srb_eps);
        srb->add_option("--delta", srb_delta);
        srb->add_option("--gamma", srb_gamma);
        srb->add_option("--ua", srb_ua);
        srb->add_option("--seed", srb_seed);
        srb->add_option("--collocation", srb_colloc, "points per region (0 = default)");
        srb->add_option("--route", srb_route, "scenario | vc");
        srb->add_option("--out", srb_out);

        auto* ssb = app.add_subcommand("synth-sbf", "synthesize a stochastic barrier");
        int ssb_degree = 4;
        double ssb_delta = 0.001, ssb_tau = 0.1, ssb_ua = 2.0;
        std::uint64_t ssb_seed = 1;
        std::size_t ssb_colloc = 0;
        std::string ssb_out = "cert.json";
        add_source(ssb, sbf_src);
        ssb->add_option("--degree", ssb_degree);
        ssb->add_option("--delta", ssb_delta);
        ssb->add_option("--tau", ssb_tau);
        ssb->add_option("--ua", ssb_ua);
        ssb->add_option("--seed", ssb_seed);
        ssb->add_option("--collocation", ssb_colloc);
        ssb->add_option("--out", ssb_out);

        // ---- verify ----
        auto* ver = app.add_subcommand("verify", "verify a candidate certificate");
        std::string ver_cert = "cert.json", ver_out;
        std::size_t ver_budget = 1000000;
        add_source(ver, ver_src);
        ver->add_option("--cert", ver_cert)->required();
        ver->add_option("--budget", ver_budget);
        ver->add_option("--out", ver_out, "report JSON path");

        // ---- mc-validate ----
        auto* mcv = app.add_subcommand("mc-validate", "Monte Carlo cross-validation");
        std::string mcv_cert = "cert.json", mcv_states = "sampled", mcv_out = "results.csv";
        long long mcv_trials = 10000;
        int mcv_horizon = 1;
        double mcv_conf = 0.99;
        std::size_t mcv_count = 100;
        std::uint64_t mcv_seed = 1;
        add_source(mcv, mcv_src);
        mcv->add_option("--cert", mcv_cert)->required();
        mcv->add_option("--states", mcv_states, "sampled | <file with one state per line>");
        mcv->add_option("--trials", mcv_trials);
        mcv->add_option("--horizon", mcv_horizon);
        mcv->add_option("--confidence", mcv_conf);
        mcv->add_option("--count", mcv_count);
        mcv->add_option("--seed", mcv_seed);
        mcv->add_option("--out", mcv_out);

        // ---- guarantee ----
        auto* gua = app.add_subcommand("guarantee", "assemble the PAC statement");
        std::string gua_cert = "cert.json", gua_out = "pac.json";
        int gua_horizon = 1;
        gua->add_option("--cert", gua_cert)->required();
        gua->add_option("--horizon", gua_horizon);
        gua->add_option("--out", gua_out);

        // ---- run ----
        auto* run = app.add_subcommand("run", "full pipeline into a run directory");
        std::string run_route = "scenario", run_out = "run-out";
        double run_eps = 0.1, run_delta = 0.001, run_tau = 0.1, run_gamma = 0.99,
               run_ua = -1.0, run_conf = 0.99;
        int run_degree = 4, run_horizon = 1;
        std::uint64_t run_seed = 1;
        std::size_t run_colloc = 0, run_budget = 1000000, run_states = 20;
        long long run_trials = 2000;
        add_source(run, run_src);
        run->add_option("--route", run_route, "scenario | vc | rademacher (sbf)");
        run->add_option("--epsilon", run_eps);
        run->add_option("--delta", run_delta);
        run->add_option("--tau", run_tau);
        run->add_option("--gamma", run_gamma);
        run->add_option("--ua", run_ua, "parameter cap (default: 1e4 rbf, 2 sbf)");
        run->add_option("--degree", run_degree);
        run->add_option("--horizon", run_horizon);
        run->add_option("--seed", run_seed)->required();
        run->add_option("--collocation", run_colloc);
        run->add_option("--budget", run_budget);
        run->add_option("--mc-states", run_states);
        run->add_option("--mc-trials", run_trials);
        run->add_option("--confidence", run_conf);
        run->add_option("--out-dir", run_out);

        auto* bl = app.add_subcommand("bench-list", "list registered benchmarks");

        CLI11_PARSE(app, argc, argv);

        if (ss->parsed()) {
            SampleBudget b;
            if (ss_route == "vc") {
                if (ss_vc == 0) throw std::invalid_argument("--vc-dim is required for the vc route");
                b = vc_sample_size(ss_eps, ss_delta, ss_vc);
            } else if (ss_route == "scenario") {
                if (ss_params == 0)
                    throw std::invalid_argument("--num-params is required for the scenario route");
                b = scenario_sample_size(ss_eps, ss_delta, ss_params);
            } else if (ss_route == "rademacher") {
                b = rademacher_sample_size(ss_ua, ss_tau, ss_delta, ss_radius);
            } else {
                throw std::invalid_argument("unknown route: " + ss_route);
            }
            std::cout << sample_budget_to_json(b).dump(2) << "\n";
            return 0;
        }
        if (srb->parsed()) {
            std::string note;
            CertificationProblem problem = rbf_src.load(&note);
            if (!note.empty()) std::cerr << "notice: " << note << "\n";
            SynthesisConfig config;
            config.seed = srb_seed;
            config.gamma = srb_gamma;
            config.ua = srb_ua;
            if (srb_colloc > 0) {
                config.x_collocation = srb_colloc;
                config.annulus_collocation = srb_colloc;
            }
            if (srb_route == "vc") config.route = SampleRoute::VC;
            else if (srb_route == "scenario") config.route = SampleRoute::Scenario;
            else throw std::invalid_argument("rbf route must be scenario or vc");
            BarrierTemplate tmpl = BarrierTemplate::monomials(problem.state_dim, srb_degree);
            Certificate cert = synthesize_rbf(problem, tmpl, srb_eps, srb_delta, config);
            save_json_file(srb_out, certificate_to_json(cert));
            std::cout << "wrote " << srb_out << " (M=" << cert.sample_count
                      << ", objective=" << cert.objective
                      << ", xs_nonempty=" << (cert.xs_nonempty ? "yes" : "no") << ")\n";
            return 0;
        }
        if (ssb->parsed()) {
            std::string note;
            CertificationProblem problem = sbf_src.load(&note);
            if (!note.empty()) std::cerr << "notice: " << note << "\n";
            SynthesisConfig config;
            config.seed = ssb_seed;
            config.tau = ssb_tau;
            config.ua = ssb_ua;
            if (ssb_colloc > 0) {
                config.x_collocation = ssb_colloc;
                config.annulus_collocation = ssb_colloc;
            }
            BarrierTemplate tmpl = BarrierTemplate::monomials(problem.state_dim, ssb_degree);
            Certificate cert = synthesize_sbf(problem, tmpl, ssb_delta, config);
            save_json_file(ssb_out, certificate_to_json(cert));
            std::cout << "wrote " << ssb_out << " (M=" << cert.sample_count
                      << ", lambda=" << cert.lambda << ", objective=" << cert.objective
                      << ")\n";
            return 0;
        }
        if (ver->parsed()) {
            CertificationProblem problem = ver_src.load();
            Certificate cert = certificate_from_json(load_json_file(ver_cert));
            VerificationReport report = verify_with_problem(cert, problem, ver_budget);
            save_json_file(ver_cert, certificate_to_json(cert));
            if (!ver_out.empty()) save_json_file(ver_out, report_to_json(report));
            std::cout << "verdict: " << verdict_name(report.overall) << " ("
                      << report.boxes_explored << " boxes)\n";
            if (report.overall == Verdict::Unknown)
                throw BudgetError("verification budget exhausted");
            if (report.overall == Verdict::Falsified)
                throw RejectedError("certificate falsified");
            return 0;
        }
        if (mcv->parsed()) {
            CertificationProblem problem = mcv_src.load();
            Certificate cert = certificate_from_json(load_json_file(mcv_cert));
            std::vector<std::vector<double>> states;
            if (mcv_states == "sampled") {
                states = pick_validation_states(cert, problem, mcv_count,
                                                substream_seed(mcv_seed, 0xccf));
            } else {
                std::ifstream in(mcv_states);
                if (!in) throw std::invalid_argument("cannot open state file: " + mcv_states);
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    std::istringstream ls(line);
                    std::vector<double> x;
                    double v;
                    while (ls >> v) x.push_back(v);
                    if (static_cast<int>(x.size()) != problem.state_dim)
                        throw std::invalid_argument("state file row has wrong dimension");
                    states.push_back(std::move(x));
                }
            }
            write_validation_csv(mcv_out, cert, problem, states, mcv_horizon, mcv_trials,
                                 mcv_conf, substream_seed(mcv_seed, 0x3c));
            std::cout << "wrote " << mcv_out << " (" << states.size() << " states)\n";
            return 0;
        }
        if (gua->parsed()) {
            Certificate cert = certificate_from_json(load_json_file(gua_cert));
            PacGuarantee pac = assemble_pac_statement(cert, gua_horizon);
            save_json_file(gua_out, guarantee_to_json(pac));
            std::cout << "wrote " << gua_out << " (" << pac.theorem << ")\n";
            return 0;
        }
        if (run->parsed()) {
            bool sbf = run_route == "rademacher";
            if (run_ua < 0.0) run_ua = sbf ? 2.0 : 1e4;
            return cmd_run(run_src, run_route, run_eps, run_delta, run_tau, run_gamma,
                           run_ua, run_degree, run_horizon, run_seed, run_colloc,
                           run_budget, run_states, run_trials, run_conf, run_out);
        }
        if (bl->parsed()) {
            for (const auto& name : benchmark_names()) {
                BenchmarkEntry e = load_benchmark(name);
                std::cout << name << ": " << e.description << "\n    n=" << e.problem.state_dim
                          << ", rbf degree " << e.rbf_degree << " (eps=" << e.rbf_epsilon
                          << "), sbf degree " << e.sbf_degree << " (tau=" << e.sbf_tau
                          << ", Ua=" << e.sbf_ua << ")\n    " << e.reference_note << "\n";
            }
            return 0;
        }
        return 0;
    } catch (const RejectedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
