#include "entlab/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace entlab {

namespace {

void check_spec(const PropagatorSpec& spec) {
    if (spec.dt <= 0.0) throw std::invalid_argument("propagator: dt must be positive");
    if (spec.steps < 1) throw std::invalid_argument("propagator: steps must be >= 1");
    if (spec.hbar <= 0.0) throw std::invalid_argument("propagator: hbar must be positive");
}

bool should_record(int step, const PropagatorSpec& spec) {
    const int every = std::max(1, spec.record_every);
    return step % every == 0 || step == spec.steps;
}

// Diagnostics of a pure global state; gamma is evaluated at the dominant
// Schmidt pair, which coincides with the exact product rate whenever the
// state is factorized.
TimeSeriesRecord pure_record(double t, const Vector& psi, const BipartiteDims& dims,
                             const std::function<Vector(double, const Vector&)>& apply_h) {
    TimeSeriesRecord rec;
    rec.t = t;
    rec.norm_or_trace = psi.norm();
    Vector normalized = psi / rec.norm_or_trace;
    const SchmidtDecomposition sd = schmidt_decompose(PureState{dims, normalized});
    const int n_top = std::min<int>(4, static_cast<int>(sd.coefficients.size()));
    rec.top_schmidt.assign(sd.coefficients.data(), sd.coefficients.data() + n_top);
    double purity = 0.0;
    for (int i = 0; i < sd.coefficients.size(); ++i) purity += std::pow(sd.coefficients(i), 4);
    rec.purity_a = purity;
    rec.linear_entropy = 1.0 - purity;
    if (apply_h) {
        Vector u = sd.left_basis.col(0);
        Vector v = sd.right_basis.col(0);
        u /= u.norm();
        v /= v.norm();
        rec.gamma = biorthogonal_rate_apply(
                        [&](const Vector& x) { return apply_h(t, x); }, dims, u, v)
                        .gamma;
    }
    return rec;
}

TimeSeriesRecord density_record(double t, const Matrix& rho, const BipartiteDims& dims) {
    TimeSeriesRecord rec;
    rec.t = t;
    rec.norm_or_trace = rho.trace().real();
    const Matrix rho_a = partial_trace_matrix(rho, dims, Side::A);
    rec.purity_a = (rho_a * rho_a).trace().real();
    rec.linear_entropy = 1.0 - rec.purity_a;
    return rec;
}

struct EigenPropagator {
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    double hbar;

    EigenPropagator(const Matrix& h, double hbar_) : es(h), hbar(hbar_) {
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigendecomposition failed");
    }

    Vector evolve(const Vector& psi0, double t) const {
        const Vector coeffs = es.eigenvectors().adjoint() * psi0;
        Vector phased(coeffs.size());
        for (int k = 0; k < coeffs.size(); ++k)
            phased(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t / hbar)) * coeffs(k);
        return es.eigenvectors() * phased;
    }

    Matrix evolve_density(const Matrix& rho0, double t) const {
        const int n = static_cast<int>(rho0.rows());
        Matrix u(n, n);
        for (int k = 0; k < n; ++k)
            u.col(k) = es.eigenvectors().col(k) *
                       std::exp(Complex(0.0, -es.eigenvalues()(k) * t / hbar));
        return u * (es.eigenvectors().adjoint() * rho0 * es.eigenvectors()) * u.adjoint();
    }
};

void check_hermitian_sample(const Matrix& h, double t) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("propagator: non-Hermitian Hamiltonian sample at t = " +
                                    std::to_string(t));
}

// One classic RK4 step of dy/dt = f(t, y) for Eigen vectors/matrices.
template <typename State, typename Rhs>
State rk4_step(const State& y, double t, double dt, const Rhs& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * dt, State(y + 0.5 * dt * k1));
    const State k3 = f(t + 0.5 * dt, State(y + 0.5 * dt * k2));
    const State k4 = f(t + dt, State(y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double Trajectory::max_linear_entropy() const {
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.linear_entropy);
    return m;
}

double Trajectory::max_gamma() const {
    double m = 0.0;
    for (const auto& r : records)
        if (r.gamma) m = std::max(m, *r.gamma);
    return m;
}

double Trajectory::min_meanfield_fidelity() const {
    double m = 1.0;
    for (const auto& r : records)
        if (r.meanfield_fidelity) m = std::min(m, *r.meanfield_fidelity);
    return m;
}

PurePropagation propagate_pure(const BipartiteOperator& h, const PureState& psi0,
                               const PropagatorSpec& spec) {
    check_spec(spec);
    if (!h.hermitian) throw std::invalid_argument("propagate_pure: Hamiltonian must be Hermitian");
    if (psi0.dims != h.dims) throw std::invalid_argument("propagate_pure: dims mismatch");

    const auto apply_h = [&h](double, const Vector& v) { return Vector(h.entries * v); };
    PurePropagation out;

    if (spec.method == PropagationMethod::exact_eigen) {
        const EigenPropagator prop(h.entries, spec.hbar);
        for (int step = 0; step <= spec.steps; ++step) {
            if (!should_record(step, spec)) continue;
            const double t = step * spec.dt;
            const Vector psi = prop.evolve(psi0.amplitudes, t);
            out.trajectory.records.push_back(pure_record(t, psi, h.dims, apply_h));
            out.times.push_back(t);
            out.states.push_back(psi);
        }
        out.final_state = prop.evolve(psi0.amplitudes, spec.steps * spec.dt);
        return out;
    }

    return propagate_pure_td([&h](double) { return h.entries; }, h.dims, psi0, spec);
}

PurePropagation propagate_pure_td(const TimeDependentHamiltonian& h, const BipartiteDims& dims,
                                  const PureState& psi0, const PropagatorSpec& spec) {
    check_spec(spec);
    if (spec.method == PropagationMethod::exact_eigen)
        throw std::invalid_argument(
            "propagate_pure_td: exact method requires a time-independent Hamiltonian");

    const double hbar = spec.hbar;
    const auto rhs = [&](double t, const Vector& v) -> Vector {
        const Matrix ht = h(t);
        check_hermitian_sample(ht, t);
        return Vector((-kImag / hbar) * (ht * v));
    };
    const auto apply_h = [&](double t, const Vector& v) { return Vector(h(t) * v); };

    PurePropagation out;
    Vector psi = psi0.amplitudes;
    out.trajectory.records.push_back(pure_record(0.0, psi, dims, apply_h));
    out.times.push_back(0.0);
    out.states.push_back(psi);
    for (int step = 1; step <= spec.steps; ++step) {
        psi = rk4_step(psi, (step - 1) * spec.dt, spec.dt, rhs);
        if (should_record(step, spec)) {
            const double t = step * spec.dt;
            out.trajectory.records.push_back(pure_record(t, psi, dims, apply_h));
            out.times.push_back(t);
            out.states.push_back(psi);
        }
    }
    out.final_state = std::move(psi);
    return out;
}

PurePropagation propagate_pure_structured(const ProductOperatorSum& h, const PureState& psi0,
                                          const PropagatorSpec& spec) {
    check_spec(spec);
    if (spec.method == PropagationMethod::exact_eigen)
        throw std::invalid_argument(
            "propagate_pure_structured: factored operators use the explicit method");
    if (psi0.dims != h.dims)
        throw std::invalid_argument("propagate_pure_structured: dims mismatch");

    const double hbar = spec.hbar;
    const auto rhs = [&](double, const Vector& v) -> Vector {
        return Vector((-kImag / hbar) * h.apply(v));
    };
    const auto apply_h = [&](double, const Vector& v) { return h.apply(v); };

    PurePropagation out;
    Vector psi = psi0.amplitudes;
    out.trajectory.records.push_back(pure_record(0.0, psi, h.dims, apply_h));
    out.times.push_back(0.0);
    out.states.push_back(psi);
    for (int step = 1; step <= spec.steps; ++step) {
        psi = rk4_step(psi, (step - 1) * spec.dt, spec.dt, rhs);
        if (should_record(step, spec)) {
            const double t = step * spec.dt;
            out.trajectory.records.push_back(pure_record(t, psi, h.dims, apply_h));
            out.times.push_back(t);
            out.states.push_back(psi);
        }
    }
    out.final_state = std::move(psi);
    return out;
}

DensityPropagation propagate_density(const BipartiteOperator& h, const DensityMatrix& rho0,
                                     const PropagatorSpec& spec) {
    check_spec(spec);
    if (!h.hermitian)
        throw std::invalid_argument("propagate_density: Hamiltonian must be Hermitian");
    if (rho0.dim() != h.dims.total())
        throw std::invalid_argument("propagate_density: dims mismatch");

    DensityPropagation out;
    if (spec.method == PropagationMethod::exact_eigen) {
        const EigenPropagator prop(h.entries, spec.hbar);
        for (int step = 0; step <= spec.steps; ++step) {
            if (!should_record(step, spec)) continue;
            const double t = step * spec.dt;
            const Matrix rho = prop.evolve_density(rho0.entries, t);
            out.trajectory.records.push_back(density_record(t, rho, h.dims));
            out.times.push_back(t);
            out.states.push_back(rho);
        }
        out.final_state = prop.evolve_density(rho0.entries, spec.steps * spec.dt);
        return out;
    }

    const double hbar = spec.hbar;
    const auto rhs = [&](double, const Matrix& rho) -> Matrix {
        return Matrix((-kImag / hbar) * (h.entries * rho - rho * h.entries));
    };
    Matrix rho = rho0.entries;
    out.trajectory.records.push_back(density_record(0.0, rho, h.dims));
    out.times.push_back(0.0);
    out.states.push_back(rho);
    for (int step = 1; step <= spec.steps; ++step) {
        rho = rk4_step(rho, (step - 1) * spec.dt, spec.dt, rhs);
        if (should_record(step, spec)) {
            const double t = step * spec.dt;
            out.trajectory.records.push_back(density_record(t, rho, h.dims));
            out.times.push_back(t);
            out.states.push_back(rho);
        }
    }
    out.final_state = std::move(rho);
    return out;
}

namespace {

// Local-state pair for the coupled nonlinear mean-field system.
struct LocalPair {
    Vector a;
    Vector b;
    LocalPair operator+(const LocalPair& o) const { return LocalPair{a + o.a, b + o.b}; }
};

LocalPair operator*(double s, const LocalPair& p) { return LocalPair{s * p.a, s * p.b}; }

// Mean-field stepping shared by the dense and factored representations.
// Ops must provide: dims(), k_a(psi_b), k_b(psi_a) (partial expectations of
// H normalized by the partner norm) and reference states at record times.
template <typename KaFn, typename KbFn>
MeanFieldPropagation mean_field_run(const BipartiteDims&, const KaFn& k_a_of,
                                    const KbFn& k_b_of, const Vector& psi_a0,
                                    const Vector& psi_b0, const PropagatorSpec& spec,
                                    const std::vector<Vector>* reference_states,
                                    const std::function<double(const Vector&, const Vector&)>&
                                        gamma_at) {
    const double hbar = spec.hbar;
    using Pair = LocalPair;

    const auto rhs = [&](double, const Pair& y) -> Pair {
        const Matrix k_a = k_a_of(y.b);
        const Matrix k_b = k_b_of(y.a);
        const double mean =
            (y.a.adjoint() * k_a * y.a)(0, 0).real() / y.a.squaredNorm();
        Pair d;
        d.a = (-kImag / hbar) * (k_a * y.a);
        d.b = (-kImag / hbar) * (k_b * y.b - mean * y.b);
        return d;
    };

    MeanFieldPropagation out;
    Pair y{psi_a0, psi_b0};
    std::size_t ref_index = 0;

    const auto record = [&](int step) {
        const double t = step * spec.dt;
        TimeSeriesRecord rec;
        rec.t = t;
        rec.norm_or_trace = y.a.norm() * y.b.norm();
        rec.purity_a = 1.0;  // exact product by construction
        rec.linear_entropy = 0.0;
        rec.top_schmidt = {1.0};
        if (gamma_at) rec.gamma = gamma_at(y.a, y.b);
        if (reference_states && ref_index < reference_states->size()) {
            const Vector product = tensor_product(y.a, y.b).amplitudes;
            const Vector& ref = (*reference_states)[ref_index];
            rec.meanfield_fidelity = fidelity(ref / ref.norm(), product);
        }
        ++ref_index;
        out.trajectory.records.push_back(std::move(rec));
        out.times.push_back(t);
        out.states_a.push_back(y.a);
        out.states_b.push_back(y.b);
    };

    record(0);
    for (int step = 1; step <= spec.steps; ++step) {
        y = rk4_step(y, (step - 1) * spec.dt, spec.dt, rhs);
        // Keep the local states on the unit sphere; the generators are
        // Hermitian so any drift is integrator error.
        y.a /= y.a.norm();
        y.b /= y.b.norm();
        if (should_record(step, spec)) record(step);
    }
    out.final_a = y.a;
    out.final_b = y.b;
    return out;
}

}  // namespace

MeanFieldPropagation propagate_mean_field(const BipartiteOperator& h, const Vector& psi_a0,
                                          const Vector& psi_b0, const PropagatorSpec& spec,
                                          bool with_exact_reference) {
    check_spec(spec);
    if (!h.hermitian)
        throw std::invalid_argument("propagate_mean_field: Hamiltonian must be Hermitian");
    if (std::abs(psi_a0.norm() - 1.0) > 1e-9 || std::abs(psi_b0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("propagate_mean_field: local states must be normalized");

    const BipartiteDims& dims = h.dims;
    const auto k_a_of = [&](const Vector& psi_b) {
        Matrix k = Matrix::Zero(dims.d_a, dims.d_a);
        for (int i = 0; i < dims.d_a; ++i)
            for (int kcol = 0; kcol < dims.d_a; ++kcol)
                k(i, kcol) = (psi_b.adjoint() *
                              h.entries.block(i * dims.d_b, kcol * dims.d_b, dims.d_b, dims.d_b) *
                              psi_b)(0, 0);
        return Matrix(k / psi_b.squaredNorm());
    };
    const auto k_b_of = [&](const Vector& psi_a) {
        Matrix k = Matrix::Zero(dims.d_b, dims.d_b);
        for (int i = 0; i < dims.d_a; ++i)
            for (int kcol = 0; kcol < dims.d_a; ++kcol)
                k += std::conj(psi_a(i)) * psi_a(kcol) *
                     h.entries.block(i * dims.d_b, kcol * dims.d_b, dims.d_b, dims.d_b);
        return Matrix(k / psi_a.squaredNorm());
    };
    const auto gamma_at = [&](const Vector& a, const Vector& b) {
        return biorthogonal_rate(h, a, b).gamma;
    };

    std::vector<Vector> reference;
    const std::vector<Vector>* ref_ptr = nullptr;
    if (with_exact_reference) {
        PropagatorSpec exact_spec = spec;
        exact_spec.method = PropagationMethod::exact_eigen;
        const PureState psi0 = tensor_product(psi_a0, psi_b0);
        reference = propagate_pure(h, psi0, exact_spec).states;
        ref_ptr = &reference;
    }
    return mean_field_run(dims, k_a_of, k_b_of, psi_a0, psi_b0, spec, ref_ptr, gamma_at);
}

MeanFieldPropagation propagate_mean_field(const ProductOperatorSum& h, const Vector& psi_a0,
                                          const Vector& psi_b0, const PropagatorSpec& spec,
                                          bool with_exact_reference) {
    check_spec(spec);
    if (std::abs(psi_a0.norm() - 1.0) > 1e-9 || std::abs(psi_b0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("propagate_mean_field: local states must be normalized");

    const auto k_a_of = [&](const Vector& psi_b) { return h.partial_expectation_b(psi_b); };
    const auto k_b_of = [&](const Vector& psi_a) { return h.partial_expectation_a(psi_a); };
    const auto gamma_at = [&](const Vector& a, const Vector& b) {
        return biorthogonal_rate_apply([&](const Vector& v) { return h.apply(v); }, h.dims, a, b)
            .gamma;
    };

    std::vector<Vector> reference;
    const std::vector<Vector>* ref_ptr = nullptr;
    if (with_exact_reference) {
        // Full-space reference with the same explicit stepper; the factored
        // form keeps the applications cheap.
        PropagatorSpec ref_spec = spec;
        ref_spec.method = PropagationMethod::rk4;
        reference =
            propagate_pure_structured(h, tensor_product(psi_a0, psi_b0), ref_spec).states;
        ref_ptr = &reference;
    }
    return mean_field_run(h.dims, k_a_of, k_b_of, psi_a0, psi_b0, spec, ref_ptr, gamma_at);
}

PurityDecayFit purity_decay_coefficient(const BipartiteOperator& h, const PureState& psi0,
                                        const PropagatorSpec& spec) {
    if (!is_product_state(psi0))
        throw std::invalid_argument("purity_decay_coefficient: initial state is not a product");
    if (!h.hermitian)
        throw std::invalid_argument("purity_decay_coefficient: Hamiltonian must be Hermitian");

    const SchmidtDecomposition sd = schmidt_decompose(psi0);
    Vector psi_a = sd.left_basis.col(0);
    Vector psi_b = sd.right_basis.col(0);
    psi_a /= psi_a.norm();
    psi_b /= psi_b.norm();

    PurityDecayFit fit;
    fit.gamma = biorthogonal_rate(h, psi_a, psi_b).gamma;

    const double scale = std::max(1e-12, hs_norm(h.entries));
    const EigenPropagator prop(h.entries, spec.hbar);
    const auto purity_at = [&](double t) {
        const Vector psi = prop.evolve(psi0.amplitudes, t);
        return reduced_purity(PureState{h.dims, psi / psi.norm()});
    };

    // Shrinking ladder; Richardson extrapolation of (1 - purity)/dt^2
    // removes the cubic term of the short-time expansion.
    const int levels = 7;
    const double dt0 = 0.1 / scale;
    std::vector<double> ratio(levels);
    for (int k = 0; k < levels; ++k) {
        const double dt = dt0 / std::pow(2.0, k);
        ratio[k] = (1.0 - purity_at(dt)) / (dt * dt);
    }
    fit.fitted_coefficient = 2.0 * ratio[levels - 1] - ratio[levels - 2];

    const double dt_d = 1e-5 / scale;
    fit.derivative_at_zero = (purity_at(dt_d) - purity_at(-dt_d)) / (2.0 * dt_d);
    return fit;
}

PurityDecayFit purity_decay_coefficient(const BipartiteOperator& h, const Vector& psi_a,
                                        const Vector& psi_b, const PropagatorSpec& spec) {
    return purity_decay_coefficient(h, tensor_product(psi_a, psi_b), spec);
}

double energy_expectation(const BipartiteOperator& h, const Vector& psi) {
    return (psi.adjoint() * h.entries * psi)(0, 0).real() / psi.squaredNorm();
}

}  // namespace entlab
