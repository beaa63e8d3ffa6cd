#include "entlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include <nlohmann/json.hpp>

#include "entlab/hamiltonian.hpp"
#include "entlab/hilbert.hpp"

namespace entlab {

namespace {

// Diagnostics of a two-particle grid state. The Schmidt spectrum comes from
// the reduced density matrix, which is cheaper than a full SVD at grid
// sizes; gamma is evaluated at the dominant product pair through the
// matrix-free operator.
TimeSeriesRecord grid_record(double t, const Vector& psi, const TwoParticleOperator& op) {
    const int n = op.config().grid.n;
    TimeSeriesRecord rec;
    rec.t = t;
    rec.norm_or_trace = psi.norm();

    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), n, n);
    Matrix rho_a = (m * m.adjoint()) / psi.squaredNorm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_a);

    double purity = 0.0;
    for (int i = 0; i < n; ++i) purity += es.eigenvalues()(i) * es.eigenvalues()(i);
    rec.purity_a = purity;
    rec.linear_entropy = 1.0 - purity;
    for (int i = 0; i < 4 && i < n; ++i) {
        const double lam = std::max(0.0, es.eigenvalues()(n - 1 - i));
        rec.top_schmidt.push_back(std::sqrt(lam));
    }

    Vector u = es.eigenvectors().col(n - 1);
    Vector v = m.transpose() * u.conjugate();  // v_j = sum_i conj(u_i) M(i,j)
    const double vn = v.norm();
    if (vn > 0) {
        v /= vn;
        rec.gamma = biorthogonal_rate_apply(
                        [&op](const Vector& x) { return op.apply(x); },
                        BipartiteDims{n, n}, u, v)
                        .gamma;
    }
    return rec;
}

RealVector frozen_potential_diagonal(const TwoParticleConfig& config) {
    const Grid1D& g = config.grid;
    RealVector v(g.n);
    for (int i = 0; i < g.n; ++i) {
        double val = config.potential.eval(g.wrap(g.x(i) - config.packet_b.x0));
        if (config.external_a)
            val += config.external_a->eval(g.wrap(g.x(i) - config.external_center_a));
        v(i) = val;
    }
    return v;
}

// <phi| rho_A |phi> without forming rho_A.
double marginal_fidelity(const Vector& psi2d, const Vector& phi, int n) {
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi2d.data(), n, n);
    const Vector w = m.adjoint() * phi;
    return w.squaredNorm() / psi2d.squaredNorm();
}

struct GridRunOutput {
    Trajectory trajectory;
    double marginal_fidelity_min = 1.0;
};

GridRunOutput grid_run_with_frozen_marginal(const TwoParticleConfig& config,
                                            const GridRunSpec& spec) {
    const TwoParticleOperator op(config);
    const SplitStep2D stepper(config, spec.dt);
    const SplitStep1D frozen(config.grid, config.m_a, spec.dt, config.hbar, config.kinetic);
    const RealVector v_frozen = frozen_potential_diagonal(config);

    Vector psi = initial_product(config);
    Vector phi = build_packet(config.grid, config.packet_a);

    GridRunOutput out;
    out.trajectory.records.push_back(grid_record(0.0, psi, op));
    for (int step = 1; step <= spec.steps; ++step) {
        stepper.step(psi);
        frozen.step(phi, v_frozen);
        if (step % spec.record_every == 0 || step == spec.steps) {
            out.trajectory.records.push_back(grid_record(step * spec.dt, psi, op));
            out.marginal_fidelity_min = std::min(
                out.marginal_fidelity_min, marginal_fidelity(psi, phi, config.grid.n));
        }
    }
    return out;
}

}  // namespace

TestParticleReport run_test_particle(const TwoParticleConfig& config, const GridRunSpec& spec) {
    validate_config(config);
    TestParticleReport report;

    const GridRunOutput main_run = grid_run_with_frozen_marginal(config, spec);
    report.trajectory_main = main_run.trajectory;
    report.max_linear_entropy_main = report.trajectory_main.max_linear_entropy();
    report.marginal_fidelity_main = main_run.marginal_fidelity_min;

    TwoParticleConfig control = config;
    control.m_b = control.m_a;
    const GridRunOutput control_run = grid_run_with_frozen_marginal(control, spec);
    report.trajectory_control = control_run.trajectory;
    report.max_linear_entropy_control = report.trajectory_control.max_linear_entropy();
    report.marginal_fidelity_control = control_run.marginal_fidelity_min;

    const double denom = std::max(report.max_linear_entropy_main, 1e-300);
    report.suppression_factor = report.max_linear_entropy_control / denom;
    return report;
}

ClassicalTwoBody classical_two_body(const TwoParticleConfig& config, double dt, int steps,
                                    int record_every) {
    struct State {
        double x_a, v_a, x_b, v_b;
    };
    const auto accel = [&config](const State& s, double& a_a, double& a_b) {
        const double f = -config.potential.deriv(s.x_a - s.x_b);  // force on A
        a_a = f / config.m_a;
        a_b = -f / config.m_b;
    };
    const auto rhs = [&](const State& s) {
        State d;
        d.x_a = s.v_a;
        d.x_b = s.v_b;
        accel(s, d.v_a, d.v_b);
        return d;
    };
    const auto add = [](const State& s, const State& d, double h) {
        return State{s.x_a + h * d.x_a, s.v_a + h * d.v_a, s.x_b + h * d.x_b, s.v_b + h * d.v_b};
    };

    State s{config.packet_a.x0, config.hbar * config.packet_a.k0 / config.m_a,
            config.packet_b.x0, config.hbar * config.packet_b.k0 / config.m_b};

    ClassicalTwoBody out;
    out.times.push_back(0.0);
    out.x_a.push_back(s.x_a);
    out.x_b.push_back(s.x_b);
    for (int step = 1; step <= steps; ++step) {
        const State k1 = rhs(s);
        const State k2 = rhs(add(s, k1, 0.5 * dt));
        const State k3 = rhs(add(s, k2, 0.5 * dt));
        const State k4 = rhs(add(s, k3, dt));
        s.x_a += dt / 6.0 * (k1.x_a + 2 * k2.x_a + 2 * k3.x_a + k4.x_a);
        s.v_a += dt / 6.0 * (k1.v_a + 2 * k2.v_a + 2 * k3.v_a + k4.v_a);
        s.x_b += dt / 6.0 * (k1.x_b + 2 * k2.x_b + 2 * k3.x_b + k4.x_b);
        s.v_b += dt / 6.0 * (k1.v_b + 2 * k2.v_b + 2 * k3.v_b + k4.v_b);
        if (step % record_every == 0 || step == steps) {
            out.times.push_back(step * dt);
            out.x_a.push_back(s.x_a);
            out.x_b.push_back(s.x_b);
        }
    }
    return out;
}

MaterialPointReport run_material_point(const TwoParticleConfig& config, const GridRunSpec& spec) {
    validate_config(config);
    const Grid1D& g = config.grid;
    MaterialPointReport report;
    report.potential_scale = config.potential.scale_length();
    report.regime_warning =
        std::max(config.packet_a.sigma, config.packet_b.sigma) >= report.potential_scale;

    const TwoParticleOperator op(config);
    const SplitStep2D stepper(config, spec.dt);
    Vector psi = initial_product(config);

    const SplitStep1D step_a(g, config.m_a, spec.dt, config.hbar, config.kinetic);
    const SplitStep1D step_b(g, config.m_b, spec.dt, config.hbar, config.kinetic);
    Vector psi_a = build_packet(g, config.packet_a);
    Vector psi_b = build_packet(g, config.packet_b);

    const ClassicalTwoBody classical =
        classical_two_body(config, spec.dt, spec.steps, spec.record_every);

    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m_exact(psi.data(), g.n, g.n);

    RealVector va(g.n), vb(g.n);
    std::size_t rec_index = 0;
    const auto record = [&](int step) {
        const double t = step * spec.dt;
        TimeSeriesRecord rec = grid_record(t, psi, op);
        const Complex overlap = (psi_a.transpose() * m_exact.conjugate() * psi_b)(0, 0);
        rec.meanfield_fidelity = std::norm(overlap) / psi.squaredNorm();
        report.fidelity_min = std::min(report.fidelity_min, *rec.meanfield_fidelity);
        report.trajectory.records.push_back(std::move(rec));

        const double xa = position_expectation(g, psi_a);
        const double xb = position_expectation(g, psi_b);
        report.times.push_back(t);
        report.center_a_quantum.push_back(xa);
        report.center_b_quantum.push_back(xb);
        report.center_a_classical.push_back(classical.x_a[rec_index]);
        report.center_b_classical.push_back(classical.x_b[rec_index]);
        report.max_center_error_a =
            std::max(report.max_center_error_a, std::abs(xa - classical.x_a[rec_index]));
        report.max_center_error_b =
            std::max(report.max_center_error_b, std::abs(xb - classical.x_b[rec_index]));
        ++rec_index;
    };

    record(0);
    for (int step = 1; step <= spec.steps; ++step) {
        // Linearize the pair potential around the current packet centers
        // (first-order Taylor expansion; the constant rides with A).
        const double xa_c = position_expectation(g, psi_a);
        const double xb_c = position_expectation(g, psi_b);
        const double delta = xa_c - xb_c;
        const double v0 = config.potential.eval(delta);
        const double dv = config.potential.deriv(delta);
        for (int i = 0; i < g.n; ++i) {
            va(i) = v0 + dv * g.wrap(g.x(i) - xa_c);
            vb(i) = -dv * g.wrap(g.x(i) - xb_c);
        }
        step_a.step(psi_a, va);
        step_b.step(psi_b, vb);
        stepper.step(psi);
        if (step % spec.record_every == 0 || step == spec.steps) record(step);
    }
    return report;
}

HartreeResult hartree_static(const TwoParticleConfig& config, const HartreeOptions& options) {
    validate_config(config);
    if (!config.external_a || !config.external_b)
        throw std::invalid_argument("hartree_static: external wells are required");
    const Grid1D& g = config.grid;
    const int n = g.n;

    Matrix h_ext_a = dense_kinetic_1d(g, config.m_a, config.hbar, config.kinetic);
    Matrix h_ext_b = dense_kinetic_1d(g, config.m_b, config.hbar, config.kinetic);
    for (int i = 0; i < n; ++i) {
        h_ext_a(i, i) += config.external_a->eval(g.wrap(g.x(i) - config.external_center_a));
        h_ext_b(i, i) += config.external_b->eval(g.wrap(g.x(i) - config.external_center_b));
    }

    RealMatrix w(n, n);  // W(i,j) = V_AB(x_i - x_j)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = config.potential.eval(g.wrap(g.x(i) - g.x(j)));

    const auto ground = [](const Matrix& h) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        return Vector(es.eigenvectors().col(0));
    };

    HartreeResult result;
    result.orbital_a = ground(h_ext_a);
    result.orbital_b = ground(h_ext_b);

    const auto density = [n](const Vector& v) {
        RealVector d(n);
        for (int i = 0; i < n; ++i) d(i) = std::norm(v(i));
        return d;
    };
    const auto energy_of = [&](const Vector& a, const Vector& b) {
        const double e_a = (a.adjoint() * h_ext_a * a)(0, 0).real();
        const double e_b = (b.adjoint() * h_ext_b * b)(0, 0).real();
        const double e_int = density(a).dot(w * density(b));
        return e_a + e_b + e_int;
    };

    double energy = energy_of(result.orbital_a, result.orbital_b);
    for (int it = 1; it <= options.max_iterations; ++it) {
        const RealVector u_b = w * density(result.orbital_b);  // field felt by A
        Matrix h_a = h_ext_a;
        for (int i = 0; i < n; ++i) h_a(i, i) += u_b(i);
        result.orbital_a = ground(h_a);

        const RealVector u_a = w.transpose() * density(result.orbital_a);
        Matrix h_b = h_ext_b;
        for (int i = 0; i < n; ++i) h_b(i, i) += u_a(i);
        result.orbital_b = ground(h_b);

        const double e = energy_of(result.orbital_a, result.orbital_b);
        result.scf_iterations = it;
        if (std::abs(e - energy) <= options.scf_tol) {
            energy = e;
            result.converged = true;
            break;
        }
        energy = e;
    }
    result.energy = energy;

    // Weighted violation of the static factorization condition.
    {
        const RealVector da = density(result.orbital_a);
        const RealVector db = density(result.orbital_b);
        const RealVector u_b = w * db;            // <V>_B as a function of x_a
        const RealVector u_a = w.transpose() * da;  // <V>_A as a function of x_b
        const double mean = da.dot(w * db);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double viol = w(i, j) - u_b(i) - u_a(j) + mean;
                acc += viol * viol * da(i) * db(j);
            }
        result.consistency_residual = std::sqrt(acc);
    }

    if (options.compute_exact) {
        const GroundStateResult exact =
            two_body_ground_imaginary_time(config, options.imaginary_dtau);
        result.exact_energy = exact.energy;
        result.exact_gap = result.energy - exact.energy;
    }
    return result;
}

OscillatorReport run_coupled_oscillators(const OscillatorConfig& config,
                                         const OscillatorRunSpec& spec) {
    validate_oscillator_config(config);
    const ProductOperatorSum h = coupled_oscillator_hamiltonian(config);

    const double t_final = spec.t_final > 0.0 ? spec.t_final : swap_period(config);
    PropagatorSpec pspec;
    pspec.method = PropagationMethod::rk4;
    pspec.dt = spec.dt;
    pspec.steps = static_cast<int>(std::ceil(t_final / spec.dt));
    pspec.hbar = config.hbar;
    pspec.record_every = spec.record_every;

    OscillatorReport report;

    const Vector a0 = coherent_state(config.cutoff, config.alpha_a);
    const Vector b0 = coherent_state(config.cutoff, config.alpha_b);

    PurePropagation exact = propagate_pure_structured(h, tensor_product(a0, b0), pspec);
    MeanFieldPropagation mf = propagate_mean_field(h, a0, b0, pspec, /*with_exact_reference=*/false);

    // Fidelity of the mean-field product against the exact run (identical
    // record schedules).
    for (std::size_t i = 0; i < exact.states.size() && i < mf.states_a.size(); ++i) {
        const Vector product = tensor_product(mf.states_a[i], mf.states_b[i]).amplitudes;
        const double fid = fidelity(exact.states[i] / exact.states[i].norm(), product);
        exact.trajectory.records[i].meanfield_fidelity = fid;
        report.coherent_min_meanfield_fidelity =
            std::min(report.coherent_min_meanfield_fidelity, fid);
    }
    report.coherent_trajectory = std::move(exact.trajectory);
    report.coherent_max_entropy = report.coherent_trajectory.max_linear_entropy();

    const PurePropagation fock = propagate_pure_structured(
        h, tensor_product(fock_state(config.cutoff, 1), fock_state(config.cutoff, 0)), pspec);
    report.fock_trajectory = fock.trajectory;
    report.fock_max_entropy = report.fock_trajectory.max_linear_entropy();

    // Entropy at the 50:50 point gt = pi/4 (nearest record; the entropy is
    // stationary there, so the time snap is second order).
    const double t_star = M_PI / (4.0 * std::abs(config.g));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : report.fock_trajectory.records) {
        const double d = std::abs(rec.t - t_star);
        if (d < best) {
            best = d;
            report.fock_entropy_at_half_swap = rec.linear_entropy;
        }
    }
    return report;
}

Theorem2CounterexampleReport run_theorem2_counterexample(const BipartiteDims& dims,
                                                         std::uint64_t seed, double t_final,
                                                         int steps) {
    check_dims(dims);
    Theorem2CounterexampleReport report;

    // Draw genuinely mixed factors; advance the seed on a near-pure draw.
    DensityMatrix rho_a{Matrix()}, rho_b{Matrix()};
    std::uint64_t s = seed;
    for (int attempt = 0; attempt < 64; ++attempt, ++s) {
        rho_a = random_density_matrix(dims.d_a, s);
        rho_b = random_density_matrix(dims.d_b, s + 0x51ed270b9a4ddfd1ull);
        report.purity_a = purity_and_linear_entropy(rho_a).purity;
        report.purity_b = purity_and_linear_entropy(rho_b).purity;
        if (report.purity_a < 0.95 && report.purity_b < 0.95) break;
    }
    report.seed_used = s;

    const BipartiteOperator h =
        make_bipartite_operator(dims, kron(rho_a.entries, rho_b.entries));
    const DensityMatrix rho0{kron(rho_a.entries, rho_b.entries)};

    PropagatorSpec spec;
    spec.method = PropagationMethod::exact_eigen;
    spec.steps = steps;
    spec.dt = t_final / steps;

    const DensityPropagation run = propagate_density(h, rho0, spec);
    for (const Matrix& rho_t : run.states)
        report.max_state_drift = std::max(report.max_state_drift, hs_norm(rho_t - rho0.entries));
    report.trajectory = run.trajectory;

    report.theorem2_residual = check_theorem2_condition(h, rho_a, rho_b);
    report.theorem3_residual = check_theorem3_condition(h, rho_a, rho_b);
    const CommutatorActions actions = theorem3_actions(h, rho_a, rho_b);
    report.action_trace_a = std::abs(actions.action_a.trace());
    report.action_trace_b = std::abs(actions.action_b.trace());
    return report;
}

// --- declarative configs ----------------------------------------------------

namespace {

void flatten_json(const nlohmann::json& j, const std::string& prefix, ScenarioConfig& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_string()) {
        out[prefix] = j.get<std::string>();
    } else {
        out[prefix] = j.dump();
    }
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ScenarioConfig parse_scenario_config_text(const std::string& text) {
    ScenarioConfig config;
    const std::string trimmed = trim(text);
    if (!trimmed.empty() && trimmed.front() == '{') {
        nlohmann::json j = nlohmann::json::parse(trimmed);  // throws on malformed input
        if (!j.is_object()) throw std::invalid_argument("scenario config must be a JSON object");
        flatten_json(j, "", config);
        return config;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario config line is not key=value: " + line);
        config[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_config_text(buffer.str());
}

double config_double(const ScenarioConfig& c, const std::string& key, double fallback) {
    const auto it = c.find(key);
    if (it == c.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' is not a number: " + it->second);
    }
}

int config_int(const ScenarioConfig& c, const std::string& key, int fallback) {
    const double v = config_double(c, key, fallback);
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
        throw std::invalid_argument("config key '" + key + "' is not an integer");
    return i;
}

std::string config_string(const ScenarioConfig& c, const std::string& key,
                          const std::string& fallback) {
    const auto it = c.find(key);
    return it == c.end() ? fallback : it->second;
}

namespace {

PotentialSpec potential_from(const ScenarioConfig& c, const std::string& prefix) {
    PotentialSpec spec;
    const std::string kind = config_string(c, prefix + ".kind", "none");
    if (kind == "none") {
        spec.kind = PotentialSpec::Kind::none;
    } else if (kind == "constant") {
        spec.kind = PotentialSpec::Kind::constant;
        spec.strength = config_double(c, prefix + ".strength", 0.0);
    } else if (kind == "soft-coulomb") {
        spec.kind = PotentialSpec::Kind::soft_coulomb;
        spec.strength = config_double(c, prefix + ".strength", 1.0);
        spec.softening = config_double(c, prefix + ".softening", 1.0);
        if (spec.softening <= 0.0)
            throw std::invalid_argument("soft-coulomb softening must be positive");
    } else if (kind == "gaussian-well") {
        spec.kind = PotentialSpec::Kind::gaussian_well;
        spec.depth = config_double(c, prefix + ".depth", 1.0);
        spec.width = config_double(c, prefix + ".width", 1.0);
        if (spec.width <= 0.0) throw std::invalid_argument("gaussian-well width must be positive");
    } else if (kind == "harmonic") {
        spec.kind = PotentialSpec::Kind::harmonic;
        spec.spring = config_double(c, prefix + ".spring", 1.0);
    } else {
        throw std::invalid_argument("unknown potential kind: " + kind);
    }
    return spec;
}

GaussianPacketSpec packet_from(const ScenarioConfig& c, const std::string& prefix) {
    GaussianPacketSpec p;
    p.x0 = config_double(c, prefix + ".x0", 0.0);
    p.sigma = config_double(c, prefix + ".sigma", 1.0);
    p.k0 = config_double(c, prefix + ".k0", 0.0);
    p.humps = config_int(c, prefix + ".humps", 1);
    p.separation = config_double(c, prefix + ".separation", 0.0);
    return p;
}

}  // namespace

TwoParticleConfig two_particle_config_from(const ScenarioConfig& c) {
    TwoParticleConfig config;
    config.grid.n = config_int(c, "grid.n", 64);
    config.grid.dx = config_double(c, "grid.dx", 1.0);
    config.grid.origin = config_double(c, "grid.origin", 0.0);
    config.m_a = config_double(c, "mass_a", 1.0);
    config.m_b = config_double(c, "mass_b", 1.0);
    config.hbar = config_double(c, "hbar", 1.0);
    config.potential = potential_from(c, "potential");
    if (c.count("external_a.kind")) {
        config.external_a = potential_from(c, "external_a");
        config.external_center_a = config_double(c, "external_a.center", 0.0);
    }
    if (c.count("external_b.kind")) {
        config.external_b = potential_from(c, "external_b");
        config.external_center_b = config_double(c, "external_b.center", 0.0);
    }
    config.packet_a = packet_from(c, "packet_a");
    config.packet_b = packet_from(c, "packet_b");
    const std::string kinetic = config_string(c, "kinetic", "spectral");
    if (kinetic == "spectral") {
        config.kinetic = KineticScheme::spectral;
    } else if (kinetic == "fd") {
        config.kinetic = KineticScheme::finite_difference;
    } else {
        throw std::invalid_argument("unknown kinetic scheme: " + kinetic);
    }
    return config;
}

OscillatorConfig oscillator_config_from(const ScenarioConfig& c) {
    OscillatorConfig config;
    config.cutoff = config_int(c, "cutoff", 30);
    config.omega_a = config_double(c, "omega_a", 1.0);
    config.omega_b = config_double(c, "omega_b", 1.0);
    config.g = config_double(c, "g", 0.25);
    config.alpha_a = Complex(config_double(c, "alpha_a_re", 1.0),
                             config_double(c, "alpha_a_im", 0.0));
    config.alpha_b = Complex(config_double(c, "alpha_b_re", 0.0),
                             config_double(c, "alpha_b_im", 0.0));
    config.hbar = config_double(c, "hbar", 1.0);
    return config;
}

GridRunSpec grid_run_spec_from(const ScenarioConfig& c) {
    GridRunSpec spec;
    spec.dt = config_double(c, "dt", spec.dt);
    if (c.count("t_final")) {
        spec.steps = static_cast<int>(std::ceil(config_double(c, "t_final", 0.0) / spec.dt));
    } else {
        spec.steps = config_int(c, "steps", spec.steps);
    }
    spec.record_every = config_int(c, "record_every", spec.record_every);
    spec.hbar = config_double(c, "hbar", 1.0);
    if (spec.dt <= 0.0 || spec.steps < 1 || spec.record_every < 1)
        throw std::invalid_argument("run spec requires dt > 0, steps >= 1, record_every >= 1");
    return spec;
}

const std::vector<std::string>& known_scenarios() {
    static const std::vector<std::string> names = {
        "test_particle", "material_point", "hartree", "coupled_oscillators",
        "theorem2_counterexample"};
    return names;
}

TwoParticleConfig default_test_particle_config() {
    TwoParticleConfig config;
    config.grid = Grid1D{64, 1.0, 0.0};
    config.m_a = 1.0;
    config.m_b = 1000.0;
    // Above-barrier scattering: V_max ~ E/10, so the packet transmits as a
    // single channel and the entanglement handle is the recoil, not a
    // reflected/transmitted branching that any partner mass would record.
    config.potential.kind = PotentialSpec::Kind::soft_coulomb;
    config.potential.strength = 0.15;
    config.potential.softening = 3.0;
    config.packet_a = GaussianPacketSpec{12.0, 3.0, 1.0};
    config.packet_b = GaussianPacketSpec{34.0, 2.0, 0.0};
    return config;
}

GridRunSpec default_test_particle_run() {
    GridRunSpec spec;
    spec.dt = 0.005;
    spec.steps = 5600;  // t_final = 28, A fully past B
    spec.record_every = 28;
    return spec;
}

TwoParticleConfig default_material_point_config() {
    TwoParticleConfig config;
    config.grid = Grid1D{64, 1.0, 0.0};
    config.m_a = 1.0;
    config.m_b = 1.0;
    config.potential.kind = PotentialSpec::Kind::gaussian_well;
    config.potential.depth = 0.05;
    config.potential.width = 16.0;
    config.packet_a = GaussianPacketSpec{20.0, 4.0, 0.5};
    config.packet_b = GaussianPacketSpec{44.0, 4.0, -0.5};
    return config;
}

GridRunSpec default_material_point_run() {
    GridRunSpec spec;
    spec.dt = 0.004;
    spec.steps = 5000;  // t_final = 20; packets approach without meeting
    spec.record_every = 25;
    return spec;
}

TwoParticleConfig default_hartree_config(double coupling_strength) {
    TwoParticleConfig config;
    config.grid = Grid1D{32, 0.5, 0.0};
    config.m_a = 1.0;
    config.m_b = 1.0;
    config.potential.kind = PotentialSpec::Kind::soft_coulomb;
    config.potential.strength = coupling_strength;
    config.potential.softening = 1.0;
    PotentialSpec well;
    well.kind = PotentialSpec::Kind::harmonic;
    well.spring = 1.0;
    config.external_a = well;
    config.external_b = well;
    config.external_center_a = 8.0;
    config.external_center_b = 8.0;
    // Packets are only used as fallbacks; the solvers start from the well
    // ground states.
    config.packet_a = GaussianPacketSpec{8.0, 1.0, 0.0};
    config.packet_b = GaussianPacketSpec{8.0, 1.0, 0.0};
    return config;
}

OscillatorConfig default_oscillator_config() {
    OscillatorConfig config;
    config.cutoff = 30;
    config.omega_a = 1.0;
    config.omega_b = 1.0;
    config.g = 0.25;
    config.alpha_a = Complex{1.0, 0.0};
    config.alpha_b = Complex{0.0, 0.0};
    return config;
}

OscillatorRunSpec default_oscillator_run() {
    OscillatorRunSpec spec;
    spec.dt = 1e-3;
    spec.t_final = 0.0;  // full swap period
    spec.record_every = 25;
    return spec;
}

}  // namespace entlab
