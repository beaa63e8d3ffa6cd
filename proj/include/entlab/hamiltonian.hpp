#pragma once

// Operator-level analysis: canonical local/coupling split of a bipartite
// Hamiltonian, the bi-orthogonal coupling rate at a product state, the
// effective (mean-field) Hamiltonians, and the factorization conditions
// for mixed product states.

#include <cstdint>
#include <functional>
#include <vector>

#include "entlab/hilbert.hpp"
#include "entlab/types.hpp"

namespace entlab {

struct BipartiteOperator {
    BipartiteDims dims;
    Matrix entries;  // (d_a*d_b) x (d_a*d_b), energy units
    bool hermitian = false;
};

BipartiteOperator make_bipartite_operator(BipartiteDims dims, Matrix entries,
                                          bool require_hermitian = true);

double hs_norm(const Matrix& m);
double hs_inner_real(const Matrix& x, const Matrix& y);  // Re Tr(X^+ Y)

// H = h_a (x) I + I (x) h_b + residual, with the residual Hilbert-Schmidt
// orthogonal to every A (x) I and I (x) B, and the identity component of H
// shared equally between h_a and h_b (trace gauge).
struct LocalSplit {
    Matrix h_a;
    Matrix h_b;
    BipartiteOperator residual;
    double residual_hs_norm = 0.0;

    Matrix reconstruct() const;
};

LocalSplit local_split(const BipartiteOperator& h);

// Relative Hilbert-Schmidt test: residual <= tol * |H|_HS.
bool is_non_entangling(const BipartiteOperator& h, double tol);

// gamma = |(P_A^perp (x) P_B^perp) H (psi_a (x) psi_b)|^2, the squared norm
// of the component of H psi that is bi-orthogonal to the product state.
struct RateReport {
    double gamma = 0.0;
    Vector biorthogonal_vector;  // unnormalized, on the full product space
};

RateReport biorthogonal_rate(const BipartiteOperator& h, const Vector& psi_a,
                             const Vector& psi_b);

// Same rate for a matrix-free operator action (used by the grid scenarios).
RateReport biorthogonal_rate_apply(const std::function<Vector(const Vector&)>& apply_h,
                                   const BipartiteDims& dims, const Vector& psi_a,
                                   const Vector& psi_b);

// Mean-field generators at a pure product state. For a normalized product
// the A generator is the B-side partial expectation of H; the B generator
// carries the scalar gauge term so that the factorized evolution
// reproduces H psi exactly whenever gamma vanishes.
struct EffectivePair {
    Matrix mat_a;                 // acts on A states
    Matrix mat_b;                 // acts on B states, gauge term included
    double gauge_constant = 0.0;  // <H> at the product state

    Vector eff_a_action(const Vector& v) const { return mat_a * v; }
    Vector eff_b_action(const Vector& v) const { return mat_b * v; }
};

EffectivePair effective_hamiltonians_pure(const BipartiteOperator& h, const Vector& psi_a,
                                          const Vector& psi_b);

// |H psi - (eff_a psi_a)(x)psi_b - psi_a(x)(eff_b psi_b)|; equals
// sqrt(gamma) at any normalized product state.
double factorized_action_residual(const BipartiteOperator& h, const Vector& psi_a,
                                  const Vector& psi_b);

// Factorization condition for mixed product states,
// |H rho - Tr_B(H rho)(x)rho_b - rho_a(x)(Tr_A(H rho) - Tr(H rho) rho_b)|_HS
// with rho = rho_a (x) rho_b. Zero within tolerance means the product is
// preserved at this instant; not necessary for mixed inputs.
double check_theorem2_condition(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                const DensityMatrix& rho_b);

// Commutator form: |[H,rho] - Tr_B([H,rho])(x)rho_b - rho_a(x)Tr_A([H,rho])|_HS.
// The effective generators exist only through these partial-trace actions;
// no operator for them is ever constructed.
double check_theorem3_condition(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                const DensityMatrix& rho_b);

// The two partial-trace actions of the commutator, Tr_B([H,rho]) and
// Tr_A([H,rho]); both are trace-free.
struct CommutatorActions {
    Matrix action_a;
    Matrix action_b;
};

CommutatorActions theorem3_actions(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                   const DensityMatrix& rho_b);

enum class HamiltonianEnsemble { gaussian, separable, separable_plus_coupling };

BipartiteOperator random_hermitian(const BipartiteDims& dims, std::uint64_t seed,
                                   HamiltonianEnsemble ensemble, double coupling_strength = 0.0);

Matrix random_hermitian_local(int dim, Rng& rng);

// H = sum_k a_k (x) b_k, kept in factored form so that mean-field partial
// expectations and applications cost O(d^2) instead of O(d^4).
struct KronTerm {
    Matrix a;
    Matrix b;
};

struct ProductOperatorSum {
    BipartiteDims dims;
    std::vector<KronTerm> terms;

    Matrix to_dense() const;
    Vector apply(const Vector& psi) const;
    // K_A = sum_k <psi_b|b_k|psi_b> a_k (input need not be normalized; the
    // expectation is divided by |psi_b|^2). K_B likewise.
    Matrix partial_expectation_b(const Vector& psi_b) const;
    Matrix partial_expectation_a(const Vector& psi_a) const;
};

}  // namespace entlab
