#pragma once

// File formats shared across tools:
//   * state/operator JSON: {"d_a": int, "d_b": int,
//     "kind": "pure"|"density"|"operator",
//     "data": row-major array of [re, im] pairs}
//   * trajectory CSV with the fixed header
//     t,norm,purity_a,linear_entropy,gamma,schmidt1..schmidt4,meanfield_fidelity
// Writes go to a temporary file first and are renamed into place.

#include <string>

#include "entlab/dynamics.hpp"
#include "entlab/hamiltonian.hpp"
#include "entlab/types.hpp"

namespace entlab {

PureState load_pure_state(const std::string& path);
DensityMatrix load_density_matrix(const std::string& path, BipartiteDims* dims_out = nullptr);
BipartiteOperator load_operator(const std::string& path);

void save_pure_state(const std::string& path, const PureState& psi);
void save_density_matrix(const std::string& path, const BipartiteDims& dims,
                         const DensityMatrix& rho);
void save_operator(const std::string& path, const BipartiteOperator& op);

std::string trajectory_csv(const Trajectory& trajectory);
void save_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// Serialize a double with full round-trip precision.
std::string format_double(double x);

void atomic_write(const std::string& path, const std::string& content);

}  // namespace entlab
