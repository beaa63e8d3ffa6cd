#include "entlab/hilbert.hpp"

#include <Eigen/SVD>

namespace entlab {

PureState tensor_product(const Vector& a, const Vector& b) {
    if (a.norm() == 0.0 || b.norm() == 0.0)
        throw std::invalid_argument("tensor_product: zero-vector input");
    BipartiteDims dims{static_cast<int>(a.size()), static_cast<int>(b.size())};
    Vector amps(dims.total());
    for (int i = 0; i < dims.d_a; ++i)
        for (int j = 0; j < dims.d_b; ++j) amps(dims.flat(i, j)) = a(i) * b(j);
    amps /= amps.norm();
    return PureState{dims, std::move(amps)};
}

Matrix partial_trace_matrix(const Matrix& m, const BipartiteDims& dims, Side keep) {
    check_dims(dims);
    if (m.rows() != dims.total() || m.cols() != dims.total())
        throw std::invalid_argument("partial_trace: matrix dimension does not match dims");
    if (keep == Side::A) {
        Matrix out = Matrix::Zero(dims.d_a, dims.d_a);
        for (int i = 0; i < dims.d_a; ++i)
            for (int ip = 0; ip < dims.d_a; ++ip)
                for (int j = 0; j < dims.d_b; ++j)
                    out(i, ip) += m(dims.flat(i, j), dims.flat(ip, j));
        return out;
    }
    Matrix out = Matrix::Zero(dims.d_b, dims.d_b);
    for (int j = 0; j < dims.d_b; ++j)
        for (int jp = 0; jp < dims.d_b; ++jp)
            for (int i = 0; i < dims.d_a; ++i)
                out(j, jp) += m(dims.flat(i, j), dims.flat(i, jp));
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteDims& dims, Side keep) {
    Matrix out = partial_trace_matrix(rho.entries, dims, keep);
    // The reduction of a valid state is again a valid state up to round-off;
    // symmetrize to keep the Hermiticity invariant tight.
    out = 0.5 * (out + out.adjoint().eval());
    return DensityMatrix{std::move(out)};
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
    const Matrix m = psi.as_matrix();
    // M = U S V^+ gives psi = sum_k s_k u_k (x) conj(v_k).
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues();
    out.left_basis = svd.matrixU();
    out.right_basis = svd.matrixV().conjugate();
    return out;
}

PurityReport purity_and_linear_entropy(const DensityMatrix& rho) {
    const double purity = (rho.entries * rho.entries).trace().real();
    return PurityReport{purity, 1.0 - purity};
}

double reduced_purity(const PureState& psi) {
    const Matrix m = psi.as_matrix();
    const Matrix rho_a = m * m.adjoint();
    return (rho_a * rho_a).trace().real();
}

bool is_product_state(const PureState& psi, double tol) {
    const SchmidtDecomposition sd = schmidt_decompose(psi);
    return sd.coefficients.size() < 2 || sd.coefficients(1) <= tol;
}

double fidelity(const Vector& phi, const Vector& psi) {
    const Complex overlap = phi.dot(psi);
    return std::norm(overlap);
}

Vector random_local_state(int dim, Rng& rng) {
    Vector v = rng.complex_normal_vector(dim);
    v /= v.norm();
    return v;
}

PureState random_product_state(const BipartiteDims& dims, std::uint64_t seed) {
    check_dims(dims);
    Rng rng(seed);
    const Vector a = random_local_state(dims.d_a, rng);
    const Vector b = random_local_state(dims.d_b, rng);
    return tensor_product(a, b);
}

PureState random_global_state(const BipartiteDims& dims, std::uint64_t seed) {
    check_dims(dims);
    Rng rng(seed);
    Vector v = rng.complex_normal_vector(dims.total());
    v /= v.norm();
    return PureState{dims, std::move(v)};
}

DensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
    Rng rng(seed);
    const Matrix g = rng.complex_normal_matrix(dim, dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix{std::move(rho)};
}

DensityMatrix random_mixed_product(const BipartiteDims& dims, std::uint64_t seed) {
    check_dims(dims);
    const DensityMatrix rho_a = random_density_matrix(dims.d_a, seed);
    const DensityMatrix rho_b = random_density_matrix(dims.d_b, seed + 0x9e3779b97f4a7c15ull);
    return DensityMatrix{kron(rho_a.entries, rho_b.entries)};
}

std::variant<PureState, DensityMatrix> random_state(const BipartiteDims& dims,
                                                    std::uint64_t seed,
                                                    RandomStateKind kind) {
    switch (kind) {
        case RandomStateKind::product: return random_product_state(dims, seed);
        case RandomStateKind::global: return random_global_state(dims, seed);
        case RandomStateKind::mixed_product: return random_mixed_product(dims, seed);
    }
    throw std::invalid_argument("random_state: unknown kind");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace entlab
