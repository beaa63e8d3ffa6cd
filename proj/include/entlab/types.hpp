#pragma once

// Core value types shared across the library: bipartite dimensions, pure
// states, density matrices and Schmidt decompositions, all over dense
// complex linear algebra (Eigen).

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace entlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kImag{0.0, 1.0};

// Tolerances used by the type invariants.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = -1e-8;     // integrator round-off allowance
inline constexpr double kProductTol = 1e-8;  // second Schmidt coefficient

struct BipartiteDims {
    int d_a = 0;
    int d_b = 0;

    int total() const { return d_a * d_b; }

    // Global index convention (A-major): k = i*d_b + j.
    int flat(int i, int j) const { return i * d_b + j; }

    bool operator==(const BipartiteDims&) const = default;
};

inline void check_dims(const BipartiteDims& dims) {
    if (dims.d_a < 1 || dims.d_b < 1)
        throw std::invalid_argument("bipartite dims must be >= 1");
}

// Normalized state vector on C^{d_a} (x) C^{d_b}, flattened A-major.
struct PureState {
    BipartiteDims dims;
    Vector amplitudes;

    // View the amplitude vector as the d_a x d_b coefficient matrix
    // M(i,j) = amplitudes[i*d_b + j].
    Matrix as_matrix() const {
        Matrix m(dims.d_a, dims.d_b);
        for (int i = 0; i < dims.d_a; ++i)
            for (int j = 0; j < dims.d_b; ++j) m(i, j) = amplitudes(dims.flat(i, j));
        return m;
    }

    static PureState from_matrix(const Matrix& m) {
        BipartiteDims dims{static_cast<int>(m.rows()), static_cast<int>(m.cols())};
        Vector amps(dims.total());
        for (int i = 0; i < dims.d_a; ++i)
            for (int j = 0; j < dims.d_b; ++j) amps(dims.flat(i, j)) = m(i, j);
        return PureState{dims, std::move(amps)};
    }
};

inline PureState make_pure_state(BipartiteDims dims, Vector amplitudes) {
    check_dims(dims);
    if (amplitudes.size() != dims.total())
        throw std::invalid_argument("amplitude vector length does not match dims");
    const double nrm = amplitudes.norm();
    if (std::abs(nrm - 1.0) > kNormTol)
        throw std::invalid_argument("pure state not normalized: |norm-1| = " +
                                    std::to_string(std::abs(nrm - 1.0)));
    return PureState{dims, std::move(amplitudes)};
}

// Hermitian, unit-trace, positive-semidefinite (within tolerance) operator.
struct DensityMatrix {
    Matrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

inline DensityMatrix make_density_matrix(Matrix entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw std::invalid_argument("density matrix must be square and nonempty");
    const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol)
        throw std::invalid_argument("density matrix not Hermitian: max |rho - rho^+| = " +
                                    std::to_string(herm));
    const double tr_err = std::abs(entries.trace().real() - 1.0) + std::abs(entries.trace().imag());
    if (tr_err > kTraceTol)
        throw std::invalid_argument("density matrix trace != 1: deviation = " +
                                    std::to_string(tr_err));
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTol)
        throw std::invalid_argument("density matrix not positive semidefinite: min eigenvalue = " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    return DensityMatrix{std::move(entries)};
}

// Projector onto a pure global state.
inline DensityMatrix projector(const PureState& psi) {
    return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint()};
}

// Bi-orthogonal decomposition: descending nonnegative coefficients with
// orthonormal local bases stored column-wise.
struct SchmidtDecomposition {
    RealVector coefficients;  // length min(d_a, d_b), descending
    Matrix left_basis;        // d_a x r
    Matrix right_basis;       // d_b x r

    int rank_at(double tol) const {
        int r = 0;
        for (int i = 0; i < coefficients.size(); ++i)
            if (coefficients(i) > tol) ++r;
        return r;
    }

    Vector reconstruct(const BipartiteDims& dims) const {
        Vector out = Vector::Zero(dims.total());
        for (int k = 0; k < coefficients.size(); ++k)
            for (int i = 0; i < dims.d_a; ++i)
                for (int j = 0; j < dims.d_b; ++j)
                    out(dims.flat(i, j)) += coefficients(k) * left_basis(i, k) * right_basis(j, k);
        return out;
    }
};

}  // namespace entlab
