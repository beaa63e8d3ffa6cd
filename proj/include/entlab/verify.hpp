#pragma once

// Verification suites: the module invariants run as batched checks with a
// one-line result each. Used by the CLI `verify` verb and by the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "entlab/hamiltonian.hpp"

namespace entlab {

struct SuiteLine {
    std::string suite;
    std::string name;
    int instances = 0;
    double observed = 0.0;   // worst value seen
    double threshold = 0.0;
    bool upper_bound = true;  // pass iff observed <= threshold (else >=)
    bool pass = false;
};

struct FaultInjection {
    // Perturbs the trace gauge of the local split (test hook proving that
    // the gauge-invariance line actually trips on a broken split).
    bool split_gauge = false;
};

// suite is one of: theorems, appendix, regimes, all.
std::vector<SuiteLine> run_verification(const std::string& suite, std::uint64_t seed,
                                        const FaultInjection& faults = {});

// Gamma through an explicitly constructed product basis with psi_a, psi_b
// first (Gram-Schmidt completion): sum_{i>=2, j>=2} |H_{i1j1}|^2.
// Independent of the projector route used by biorthogonal_rate.
double appendix_basis_gamma(const BipartiteOperator& h, const Vector& psi_a,
                            const Vector& psi_b);

// Orthonormal basis whose first column is the given unit vector.
Matrix complete_orthonormal_basis(const Vector& first);

}  // namespace entlab
