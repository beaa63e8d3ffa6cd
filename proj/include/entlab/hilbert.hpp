#pragma once

// Tensor-product state and density-matrix algebra: construction, partial
// traces, Schmidt decomposition, entropy/purity diagnostics, and seeded
// random inputs for tests.

#include <cstdint>
#include <utility>
#include <variant>

#include "entlab/rng.hpp"
#include "entlab/types.hpp"

namespace entlab {

enum class Side { A, B };

// amplitudes[i*d_b + j] = a[i]*b[j], normalized. Throws on zero input.
PureState tensor_product(const Vector& a, const Vector& b);

// Partial trace over the complement of `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteDims& dims, Side keep);

// Same, for an arbitrary square matrix on the product space (no density
// matrix invariants enforced on input or output).
Matrix partial_trace_matrix(const Matrix& m, const BipartiteDims& dims, Side keep);

SchmidtDecomposition schmidt_decompose(const PureState& psi);

struct PurityReport {
    double purity;
    double linear_entropy;
};

PurityReport purity_and_linear_entropy(const DensityMatrix& rho);

// Purity of the reduced A state of a pure global state, via the Schmidt
// spectrum of the coefficient matrix.
double reduced_purity(const PureState& psi);

// True iff the second Schmidt coefficient is below kProductTol.
bool is_product_state(const PureState& psi, double tol = kProductTol);

// |<phi|psi>|^2 for normalized pure states of equal total dimension.
double fidelity(const Vector& phi, const Vector& psi);

enum class RandomStateKind { product, global, mixed_product };

Vector random_local_state(int dim, Rng& rng);
PureState random_product_state(const BipartiteDims& dims, std::uint64_t seed);
PureState random_global_state(const BipartiteDims& dims, std::uint64_t seed);

// Full-rank random density matrix (Wishart construction G G^+ / Tr).
DensityMatrix random_density_matrix(int dim, std::uint64_t seed);

// rho_A (x) rho_B with independent random mixed factors.
DensityMatrix random_mixed_product(const BipartiteDims& dims, std::uint64_t seed);

// Kind-dispatching wrapper matching the seeded-generation contract.
std::variant<PureState, DensityMatrix> random_state(const BipartiteDims& dims,
                                                    std::uint64_t seed,
                                                    RandomStateKind kind);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace entlab
