#pragma once

// Named, reproducible experiments: the test-particle and material-point
// regimes on the two-particle grid, the static Hartree bound state, the
// coupled-oscillator coherent-state case, and the mixed-state
// counterexample that motivates the commutator form of the factorization
// condition.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entlab/dynamics.hpp"
#include "entlab/grid.hpp"
#include "entlab/oscillators.hpp"

namespace entlab {

struct GridRunSpec {
    double dt = 0.005;
    int steps = 4000;
    int record_every = 20;
    double hbar = 1.0;
};

// --- test-particle regime -------------------------------------------------

struct TestParticleReport {
    double max_linear_entropy_main = 0.0;
    double max_linear_entropy_control = 0.0;
    double suppression_factor = 0.0;  // control / main
    double marginal_fidelity_main = 1.0;
    double marginal_fidelity_control = 1.0;
    Trajectory trajectory_main;
    Trajectory trajectory_control;
};

// Exact grid propagation at the configured mass ratio plus a 1:1 control;
// the A marginal of each is compared against a single-particle run in the
// frozen potential V(x - x_b0).
TestParticleReport run_test_particle(const TwoParticleConfig& config, const GridRunSpec& spec);

// --- material-point regime ------------------------------------------------

struct MaterialPointReport {
    double fidelity_min = 1.0;          // linearized product vs exact
    double max_center_error_a = 0.0;    // vs classical two-body trajectory
    double max_center_error_b = 0.0;
    double potential_scale = 0.0;
    bool regime_warning = false;        // packet width >= potential scale
    Trajectory trajectory;              // exact run, fidelity in meanfield column
    std::vector<double> times;
    std::vector<double> center_a_quantum, center_b_quantum;
    std::vector<double> center_a_classical, center_b_classical;
};

MaterialPointReport run_material_point(const TwoParticleConfig& config, const GridRunSpec& spec);

// Classical two-body integrator for the same pair potential (RK4).
struct ClassicalTwoBody {
    std::vector<double> times, x_a, x_b;
};

ClassicalTwoBody classical_two_body(const TwoParticleConfig& config, double dt, int steps,
                                    int record_every);

// --- Hartree static -------------------------------------------------------

struct HartreeOptions {
    double scf_tol = 1e-9;
    int max_iterations = 500;
    bool compute_exact = false;
    double imaginary_dtau = 0.05;
};

struct HartreeResult {
    Vector orbital_a;
    Vector orbital_b;
    double energy = 0.0;
    int scf_iterations = 0;
    double consistency_residual = 0.0;
    bool converged = false;
    std::optional<double> exact_energy;
    std::optional<double> exact_gap;  // energy - exact_energy
};

// Alternating self-consistent field loop for a factorized bound state in
// external wells with a repulsive pair interaction.
HartreeResult hartree_static(const TwoParticleConfig& config, const HartreeOptions& options = {});

// --- coupled oscillators ----------------------------------------------------

struct OscillatorRunSpec {
    double dt = 1e-3;
    double t_final = 0.0;  // 0 = one full swap period
    int record_every = 25;
};

struct OscillatorReport {
    double coherent_max_entropy = 0.0;
    double coherent_min_meanfield_fidelity = 1.0;
    double fock_max_entropy = 0.0;
    double fock_entropy_at_half_swap = 0.0;  // at gt = pi/4 (50:50 point)
    Trajectory coherent_trajectory;          // mean-field fidelity column filled
    Trajectory fock_trajectory;
};

OscillatorReport run_coupled_oscillators(const OscillatorConfig& config,
                                         const OscillatorRunSpec& spec);

// --- mixed-state counterexample --------------------------------------------

struct Theorem2CounterexampleReport {
    std::uint64_t seed_used = 0;
    double purity_a = 0.0;
    double purity_b = 0.0;
    double max_state_drift = 0.0;    // max_t |rho(t) - rho(0)|_HS
    double theorem2_residual = 0.0;  // > 0 despite the stationary state
    double theorem3_residual = 0.0;  // ~ 0: the commutator form holds
    double action_trace_a = 0.0;     // |Tr Tr_B([H,rho])|
    double action_trace_b = 0.0;
    Trajectory trajectory;
};

// H = rho_A (x) rho_B for genuinely mixed factors (purity < 0.95; the seed
// advances on an accidental near-pure draw).
Theorem2CounterexampleReport run_theorem2_counterexample(const BipartiteDims& dims,
                                                         std::uint64_t seed, double t_final = 5.0,
                                                         int steps = 50);

// --- declarative configs ----------------------------------------------------

// Flat key=value configuration (either "key = value" lines with '#'
// comments, or a JSON object whose nested keys flatten with '.').
using ScenarioConfig = std::map<std::string, std::string>;

ScenarioConfig parse_scenario_config_text(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

double config_double(const ScenarioConfig& c, const std::string& key, double fallback);
int config_int(const ScenarioConfig& c, const std::string& key, int fallback);
std::string config_string(const ScenarioConfig& c, const std::string& key,
                          const std::string& fallback);

TwoParticleConfig two_particle_config_from(const ScenarioConfig& c);
OscillatorConfig oscillator_config_from(const ScenarioConfig& c);
GridRunSpec grid_run_spec_from(const ScenarioConfig& c);

const std::vector<std::string>& known_scenarios();

// Reference parameter sets used by the verification suites and as CLI
// examples: a soft-Coulomb scattering setup for the test-particle regime,
// narrow packets in a shallow well for the material-point regime, harmonic
// wells with soft-Coulomb repulsion for the Hartree bound state, and the
// cutoff-30 beamsplitter.
TwoParticleConfig default_test_particle_config();
GridRunSpec default_test_particle_run();
TwoParticleConfig default_material_point_config();
GridRunSpec default_material_point_run();
TwoParticleConfig default_hartree_config(double coupling_strength);
OscillatorConfig default_oscillator_config();
OscillatorRunSpec default_oscillator_run();

}  // namespace entlab
