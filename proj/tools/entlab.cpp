// Command-line front door: analyze operator files, run the named
// scenarios, and execute the verification suites.
//
//   entlab analyze <operator.json> [--tol 1e-9]
//   entlab run <config> [--seed N] [--out DIR]
//   entlab verify [--suite theorems|appendix|regimes|all] [--seed N]
//
// Exit codes: 0 success, 1 verification failure, 2 bad input/config.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entlab/scenarios.hpp"
#include "entlab/state_io.hpp"
#include "entlab/verify.hpp"

namespace {

using entlab::ScenarioConfig;
using nlohmann::json;

json matrix_json(const entlab::Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            rows.push_back({m(r, c).real(), m(r, c).imag()});
    return rows;
}

int cmd_analyze(const std::string& input, double tol) {
    const entlab::BipartiteOperator op = entlab::load_operator(input);
    if (!op.hermitian) {
        std::cerr << "error: invariant: operator is not Hermitian\n";
        return 2;
    }
    const entlab::LocalSplit split = entlab::local_split(op);
    json report;
    report["residual_hs_norm"] = split.residual_hs_norm;
    report["is_non_entangling"] = entlab::is_non_entangling(op, tol);
    report["h_a"] = matrix_json(split.h_a);
    report["h_b"] = matrix_json(split.h_b);
    std::cout << report.dump(2) << "\n";
    return 0;
}

void write_summary(const std::string& path, const std::string& scenario,
                   const ScenarioConfig& parameters, const json& metrics) {
    json summary;
    summary["scenario"] = scenario;
    summary["parameters"] = parameters;
    summary["metrics"] = metrics;
    entlab::atomic_write(path, summary.dump(2) + "\n");
}

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
    ScenarioConfig config = entlab::load_scenario_config(config_path);
    if (const char* hbar_env = std::getenv("ENTLAB_HBAR"); hbar_env && !config.count("hbar"))
        config["hbar"] = hbar_env;
    const std::string scenario = entlab::config_string(config, "scenario", "");
    if (scenario.empty()) {
        std::cerr << "error: config: missing 'scenario' key\n";
        return 2;
    }
    if (config.count("seed")) seed = static_cast<std::uint64_t>(entlab::config_int(config, "seed", 0));

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto out = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    if (scenario == "test_particle") {
        const auto cfg = entlab::two_particle_config_from(config);
        const auto spec = entlab::grid_run_spec_from(config);
        const auto report = entlab::run_test_particle(cfg, spec);
        entlab::save_trajectory_csv(out("test_particle_trajectory.csv"),
                                    report.trajectory_main);
        entlab::save_trajectory_csv(out("test_particle_control_trajectory.csv"),
                                    report.trajectory_control);
        json metrics;
        metrics["max_linear_entropy"] = report.max_linear_entropy_main;
        metrics["max_linear_entropy_control"] = report.max_linear_entropy_control;
        metrics["suppression_factor"] = report.suppression_factor;
        metrics["marginal_fidelity"] = report.marginal_fidelity_main;
        metrics["marginal_fidelity_control"] = report.marginal_fidelity_control;
        write_summary(out("test_particle_summary.json"), scenario, config, metrics);
    } else if (scenario == "material_point") {
        const auto cfg = entlab::two_particle_config_from(config);
        const auto spec = entlab::grid_run_spec_from(config);
        const auto report = entlab::run_material_point(cfg, spec);
        entlab::save_trajectory_csv(out("material_point_trajectory.csv"), report.trajectory);
        std::string centers = "t,center_a,center_b,center_a_classical,center_b_classical\n";
        for (std::size_t i = 0; i < report.times.size(); ++i) {
            centers += entlab::format_double(report.times[i]) + "," +
                       entlab::format_double(report.center_a_quantum[i]) + "," +
                       entlab::format_double(report.center_b_quantum[i]) + "," +
                       entlab::format_double(report.center_a_classical[i]) + "," +
                       entlab::format_double(report.center_b_classical[i]) + "\n";
        }
        entlab::atomic_write(out("material_point_centers.csv"), centers);
        json metrics;
        metrics["fidelity_min"] = report.fidelity_min;
        metrics["max_center_error_a"] = report.max_center_error_a;
        metrics["max_center_error_b"] = report.max_center_error_b;
        metrics["potential_scale"] = report.potential_scale;
        metrics["regime_warning"] = report.regime_warning;
        if (report.regime_warning)
            std::cerr << "warning: packet width is not small against the potential scale; "
                         "the material-point assumption is violated\n";
        write_summary(out("material_point_summary.json"), scenario, config, metrics);
    } else if (scenario == "hartree") {
        const auto cfg = entlab::two_particle_config_from(config);
        entlab::HartreeOptions options;
        options.scf_tol = entlab::config_double(config, "scf_tol", options.scf_tol);
        options.max_iterations =
            entlab::config_int(config, "scf_max_iterations", options.max_iterations);
        options.compute_exact = entlab::config_string(config, "exact", "true") == "true";
        const auto result = entlab::hartree_static(cfg, options);
        std::string orbitals = "x,density_a,density_b\n";
        for (int i = 0; i < cfg.grid.n; ++i) {
            orbitals += entlab::format_double(cfg.grid.x(i)) + "," +
                        entlab::format_double(std::norm(result.orbital_a(i))) + "," +
                        entlab::format_double(std::norm(result.orbital_b(i))) + "\n";
        }
        entlab::atomic_write(out("hartree_orbitals.csv"), orbitals);
        json metrics;
        metrics["energy"] = result.energy;
        metrics["scf_iterations"] = result.scf_iterations;
        metrics["consistency_residual"] = result.consistency_residual;
        metrics["converged"] = result.converged;
        if (result.exact_energy) {
            metrics["exact_energy"] = *result.exact_energy;
            metrics["exact_gap"] = *result.exact_gap;
        }
        write_summary(out("hartree_summary.json"), scenario, config, metrics);
        if (!result.converged) {
            std::cerr << "error: scf: did not converge within "
                      << options.max_iterations << " iterations\n";
            return 1;
        }
    } else if (scenario == "coupled_oscillators") {
        const auto cfg = entlab::oscillator_config_from(config);
        entlab::OscillatorRunSpec spec;
        spec.dt = entlab::config_double(config, "dt", spec.dt);
        spec.t_final = entlab::config_double(config, "t_final", spec.t_final);
        spec.record_every = entlab::config_int(config, "record_every", spec.record_every);
        const auto report = entlab::run_coupled_oscillators(cfg, spec);
        entlab::save_trajectory_csv(out("coupled_oscillators_trajectory.csv"),
                                    report.coherent_trajectory);
        entlab::save_trajectory_csv(out("coupled_oscillators_fock_trajectory.csv"),
                                    report.fock_trajectory);
        json metrics;
        metrics["coherent_max_entropy"] = report.coherent_max_entropy;
        metrics["coherent_min_meanfield_fidelity"] = report.coherent_min_meanfield_fidelity;
        metrics["fock_max_entropy"] = report.fock_max_entropy;
        metrics["fock_entropy_at_half_swap"] = report.fock_entropy_at_half_swap;
        write_summary(out("coupled_oscillators_summary.json"), scenario, config, metrics);
    } else if (scenario == "theorem2_counterexample") {
        const entlab::BipartiteDims dims{entlab::config_int(config, "d_a", 2),
                                         entlab::config_int(config, "d_b", 2)};
        const double t_final = entlab::config_double(config, "t_final", 5.0);
        const int steps = entlab::config_int(config, "steps", 50);
        const auto report = entlab::run_theorem2_counterexample(dims, seed, t_final, steps);
        entlab::save_trajectory_csv(out("theorem2_counterexample_trajectory.csv"),
                                    report.trajectory);
        json metrics;
        metrics["seed_used"] = report.seed_used;
        metrics["purity_a"] = report.purity_a;
        metrics["purity_b"] = report.purity_b;
        metrics["max_state_drift"] = report.max_state_drift;
        metrics["theorem2_residual"] = report.theorem2_residual;
        metrics["theorem3_residual"] = report.theorem3_residual;
        metrics["action_trace_a"] = report.action_trace_a;
        metrics["action_trace_b"] = report.action_trace_b;
        write_summary(out("theorem2_counterexample_summary.json"), scenario, config, metrics);
    } else {
        std::string known;
        for (const auto& name : entlab::known_scenarios()) known += " " + name;
        std::cerr << "error: config: unknown scenario '" << scenario << "'; known:" << known
                  << "\n";
        return 2;
    }
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& fault) {
    entlab::FaultInjection faults;
    if (fault == "split-gauge") {
        faults.split_gauge = true;
    } else if (!fault.empty()) {
        std::cerr << "error: usage: unknown fault '" << fault << "'\n";
        return 2;
    }
    const auto lines = entlab::run_verification(suite, seed, faults);
    bool all_pass = true;
    std::printf("%-10s %-36s %10s %14s %14s %6s\n", "suite", "check", "instances", "observed",
                "tolerance", "state");
    for (const auto& line : lines) {
        std::printf("%-10s %-36s %10d %14.6g %s%13.6g %6s\n", line.suite.c_str(),
                    line.name.c_str(), line.instances, line.observed,
                    line.upper_bound ? "<=" : ">=", line.threshold,
                    line.pass ? "PASS" : "FAIL");
        all_pass = all_pass && line.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entlab: entanglement generation under interaction, at desk scale"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_dir = "./out";
    double tol = 1e-9;
    int threads = 1;
    app.add_option("--seed", seed, "random seed (default 0)");
    app.add_option("--out", out_dir, "output directory (default ./out)");
    app.add_option("--tol", tol, "tolerance for analyze (default 1e-9)");
    app.add_option("--threads", threads,
                   "worker threads (suites currently run serially; reserved)");

    auto* analyze = app.add_subcommand("analyze", "split an operator file and classify it");
    std::string input;
    analyze->add_option("input", input, "operator JSON file")->required();

    auto* run = app.add_subcommand("run", "run a scenario config");
    std::string config_path;
    run->add_option("config", config_path, "scenario config file (key=value or JSON)")
        ->required();

    auto* verify = app.add_subcommand("verify", "run the verification suites");
    std::string suite = "all";
    std::string fault;
    verify->add_option("--suite", suite, "theorems|appendix|regimes|all");
    verify->add_option("--inject-fault", fault, "fault-injection hook (testing only)")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(input, tol);
        if (run->parsed()) return cmd_run(config_path, seed, out_dir);
        if (verify->parsed()) return cmd_verify(suite, seed, fault);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invariant: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
