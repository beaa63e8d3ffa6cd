#pragma once

// Time evolution of bipartite systems: exact (eigendecomposition) and
// fourth-order explicit propagation of the Schroedinger and von Neumann
// equations, the nonlinear mean-field (factorized) propagator, and the
// short-time purity-decay diagnostics.

#include <functional>
#include <optional>
#include <vector>

#include "entlab/hamiltonian.hpp"
#include "entlab/hilbert.hpp"
#include "entlab/types.hpp"

namespace entlab {

enum class PropagationMethod { exact_eigen, rk4 };

struct PropagatorSpec {
    PropagationMethod method = PropagationMethod::exact_eigen;
    double dt = 0.01;
    int steps = 100;
    double hbar = 1.0;
    int record_every = 1;  // diagnostics every k-th step (t = 0 always recorded)
};

struct TimeSeriesRecord {
    double t = 0.0;
    double norm_or_trace = 0.0;
    double purity_a = 0.0;
    double linear_entropy = 0.0;
    std::optional<double> gamma;
    std::vector<double> top_schmidt;  // up to 4, descending
    std::optional<double> meanfield_fidelity;
};

struct Trajectory {
    std::vector<TimeSeriesRecord> records;

    double max_linear_entropy() const;
    double max_gamma() const;
    double min_meanfield_fidelity() const;
};

using TimeDependentHamiltonian = std::function<Matrix(double)>;

struct PurePropagation {
    Trajectory trajectory;
    std::vector<double> times;   // record times
    std::vector<Vector> states;  // at record times
    Vector final_state;
};

PurePropagation propagate_pure(const BipartiteOperator& h, const PureState& psi0,
                               const PropagatorSpec& spec);

// Time-dependent Hamiltonians require the explicit method; samples must be
// Hermitian at every stage time.
PurePropagation propagate_pure_td(const TimeDependentHamiltonian& h, const BipartiteDims& dims,
                                  const PureState& psi0, const PropagatorSpec& spec);

// Explicit stepping against a factored operator; applications stay cheap
// even when the dense matrix would be large.
PurePropagation propagate_pure_structured(const ProductOperatorSum& h, const PureState& psi0,
                                          const PropagatorSpec& spec);

struct DensityPropagation {
    Trajectory trajectory;
    std::vector<double> times;
    std::vector<Matrix> states;
    Matrix final_state;
};

DensityPropagation propagate_density(const BipartiteOperator& h, const DensityMatrix& rho0,
                                     const PropagatorSpec& spec);

// Self-consistent factorized evolution: the local generators are rebuilt
// from the instantaneous product at every integrator stage, so the state
// is an exact product throughout. When a reference is requested the exact
// trajectory is propagated alongside and |<Psi_exact|psi_a (x) psi_b>|^2
// is recorded as meanfield_fidelity.
struct MeanFieldPropagation {
    Trajectory trajectory;
    std::vector<double> times;
    std::vector<Vector> states_a;
    std::vector<Vector> states_b;
    Vector final_a;
    Vector final_b;
};

MeanFieldPropagation propagate_mean_field(const BipartiteOperator& h, const Vector& psi_a0,
                                          const Vector& psi_b0, const PropagatorSpec& spec,
                                          bool with_exact_reference = true);

MeanFieldPropagation propagate_mean_field(const ProductOperatorSum& h, const Vector& psi_a0,
                                          const Vector& psi_b0, const PropagatorSpec& spec,
                                          bool with_exact_reference = true);

// Short-time law of the reduced purity at a product state:
// 1 - Tr rho_A^2(dt) = (2 gamma / hbar^2) dt^2 + O(dt^3).
// The dt^2 coefficient is extracted from an exactly propagated ladder of
// shrinking time steps by Richardson extrapolation; the first time
// derivative of the purity at t = 0 is estimated by a symmetric difference
// and must vanish for any Hamiltonian.
struct PurityDecayFit {
    double fitted_coefficient = 0.0;
    double gamma = 0.0;
    double derivative_at_zero = 0.0;
};

PurityDecayFit purity_decay_coefficient(const BipartiteOperator& h, const PureState& psi0,
                                        const PropagatorSpec& spec);

PurityDecayFit purity_decay_coefficient(const BipartiteOperator& h, const Vector& psi_a,
                                        const Vector& psi_b, const PropagatorSpec& spec);

// <psi|H|psi> for a normalized state.
double energy_expectation(const BipartiteOperator& h, const Vector& psi);

}  // namespace entlab
