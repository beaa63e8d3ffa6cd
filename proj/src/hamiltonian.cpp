#include "entlab/hamiltonian.hpp"

namespace entlab {

namespace {

void check_normalized(const Vector& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(what) + ": input state not normalized");
}

// Reshape of a product-space vector to its d_a x d_b coefficient matrix and
// back; (A (x) B) psi corresponds to A Psi B^T.
Matrix to_coeff_matrix(const Vector& psi, const BipartiteDims& dims) {
    Matrix m(dims.d_a, dims.d_b);
    for (int i = 0; i < dims.d_a; ++i)
        for (int j = 0; j < dims.d_b; ++j) m(i, j) = psi(dims.flat(i, j));
    return m;
}

Vector from_coeff_matrix(const Matrix& m, const BipartiteDims& dims) {
    Vector v(dims.total());
    for (int i = 0; i < dims.d_a; ++i)
        for (int j = 0; j < dims.d_b; ++j) v(dims.flat(i, j)) = m(i, j);
    return v;
}

// a (x) b without normalization.
Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

}  // namespace

BipartiteOperator make_bipartite_operator(BipartiteDims dims, Matrix entries,
                                          bool require_hermitian) {
    check_dims(dims);
    if (entries.rows() != dims.total() || entries.cols() != dims.total())
        throw std::invalid_argument("operator dimension does not match dims");
    bool hermitian = (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol;
    if (require_hermitian && !hermitian)
        throw std::invalid_argument("operator is not Hermitian");
    return BipartiteOperator{dims, std::move(entries), hermitian};
}

double hs_norm(const Matrix& m) { return m.norm(); }

double hs_inner_real(const Matrix& x, const Matrix& y) {
    return (x.adjoint() * y).trace().real();
}

Matrix LocalSplit::reconstruct() const {
    const int d_a = static_cast<int>(h_a.rows());
    const int d_b = static_cast<int>(h_b.rows());
    return kron(h_a, Matrix::Identity(d_b, d_b)) + kron(Matrix::Identity(d_a, d_a), h_b) +
           residual.entries;
}

LocalSplit local_split(const BipartiteOperator& h) {
    if (!h.hermitian) throw std::invalid_argument("local_split: operator must be Hermitian");
    const BipartiteDims& dims = h.dims;
    const Complex tr = h.entries.trace();
    const Complex shared = tr / (2.0 * dims.total());

    LocalSplit split;
    split.h_a = partial_trace_matrix(h.entries, dims, Side::A) / static_cast<double>(dims.d_b) -
                shared * Matrix::Identity(dims.d_a, dims.d_a);
    split.h_b = partial_trace_matrix(h.entries, dims, Side::B) / static_cast<double>(dims.d_a) -
                shared * Matrix::Identity(dims.d_b, dims.d_b);
    Matrix residual = h.entries -
                      kron(split.h_a, Matrix::Identity(dims.d_b, dims.d_b)) -
                      kron(Matrix::Identity(dims.d_a, dims.d_a), split.h_b);
    split.residual_hs_norm = hs_norm(residual);
    split.residual = BipartiteOperator{dims, std::move(residual), h.hermitian};
    return split;
}

bool is_non_entangling(const BipartiteOperator& h, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("is_non_entangling: tol must be positive");
    const LocalSplit split = local_split(h);
    return split.residual_hs_norm <= tol * hs_norm(h.entries);
}

RateReport biorthogonal_rate(const BipartiteOperator& h, const Vector& psi_a,
                             const Vector& psi_b) {
    return biorthogonal_rate_apply([&h](const Vector& v) { return Vector(h.entries * v); },
                                   h.dims, psi_a, psi_b);
}

RateReport biorthogonal_rate_apply(const std::function<Vector(const Vector&)>& apply_h,
                                   const BipartiteDims& dims, const Vector& psi_a,
                                   const Vector& psi_b) {
    check_normalized(psi_a, "biorthogonal_rate");
    check_normalized(psi_b, "biorthogonal_rate");
    const PureState product = tensor_product(psi_a, psi_b);
    const Vector h_psi = apply_h(product.amplitudes);
    // Project both sides onto the orthogonal complements of psi_a, psi_b:
    // Y = (I - P_a) X (I - P_b)^T on the coefficient matrix.
    Matrix x = to_coeff_matrix(h_psi, dims);
    x -= psi_a * (psi_a.adjoint() * x);
    x -= (x * psi_b.conjugate()) * psi_b.transpose();
    RateReport report;
    report.biorthogonal_vector = from_coeff_matrix(x, dims);
    report.gamma = report.biorthogonal_vector.squaredNorm();
    return report;
}

EffectivePair effective_hamiltonians_pure(const BipartiteOperator& h, const Vector& psi_a,
                                          const Vector& psi_b) {
    check_normalized(psi_a, "effective_hamiltonians_pure");
    check_normalized(psi_b, "effective_hamiltonians_pure");
    const BipartiteDims& dims = h.dims;
    // In d_b x d_b blocks: K_A(i,k) = <psi_b| H_blk(i,k) |psi_b> and
    // K_B = sum_{i,k} conj(psi_a_i) psi_a_k H_blk(i,k).
    Matrix k_a = Matrix::Zero(dims.d_a, dims.d_a);
    Matrix k_b = Matrix::Zero(dims.d_b, dims.d_b);
    for (int i = 0; i < dims.d_a; ++i) {
        for (int k = 0; k < dims.d_a; ++k) {
            const auto blk = h.entries.block(i * dims.d_b, k * dims.d_b, dims.d_b, dims.d_b);
            k_a(i, k) = (psi_b.adjoint() * blk * psi_b)(0, 0);
            k_b += std::conj(psi_a(i)) * psi_a(k) * blk;
        }
    }
    const double mean_energy = (psi_a.adjoint() * k_a * psi_a)(0, 0).real();
    EffectivePair pair;
    pair.mat_a = std::move(k_a);
    pair.mat_b = k_b - mean_energy * Matrix::Identity(dims.d_b, dims.d_b);
    pair.gauge_constant = mean_energy;
    return pair;
}

double factorized_action_residual(const BipartiteOperator& h, const Vector& psi_a,
                                  const Vector& psi_b) {
    const EffectivePair pair = effective_hamiltonians_pure(h, psi_a, psi_b);
    const Vector h_psi = h.entries * kron_vec(psi_a, psi_b);
    const Vector mean_field =
        kron_vec(pair.eff_a_action(psi_a), psi_b) + kron_vec(psi_a, pair.eff_b_action(psi_b));
    return (h_psi - mean_field).norm();
}

double check_theorem2_condition(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                const DensityMatrix& rho_b) {
    const BipartiteDims& dims = h.dims;
    if (rho_a.dim() != dims.d_a || rho_b.dim() != dims.d_b)
        throw std::invalid_argument("check_theorem2_condition: dims mismatch");
    const Matrix rho = kron(rho_a.entries, rho_b.entries);
    const Matrix h_rho = h.entries * rho;
    const Matrix eff_a = partial_trace_matrix(h_rho, dims, Side::A);
    const Matrix eff_b = partial_trace_matrix(h_rho, dims, Side::B) -
                         h_rho.trace() * rho_b.entries;
    const Matrix residual = h_rho - kron(eff_a, rho_b.entries) - kron(rho_a.entries, eff_b);
    return hs_norm(residual);
}

CommutatorActions theorem3_actions(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                   const DensityMatrix& rho_b) {
    const BipartiteDims& dims = h.dims;
    if (rho_a.dim() != dims.d_a || rho_b.dim() != dims.d_b)
        throw std::invalid_argument("theorem3_actions: dims mismatch");
    const Matrix rho = kron(rho_a.entries, rho_b.entries);
    const Matrix comm = h.entries * rho - rho * h.entries;
    return CommutatorActions{partial_trace_matrix(comm, dims, Side::A),
                             partial_trace_matrix(comm, dims, Side::B)};
}

double check_theorem3_condition(const BipartiteOperator& h, const DensityMatrix& rho_a,
                                const DensityMatrix& rho_b) {
    const Matrix rho = kron(rho_a.entries, rho_b.entries);
    const Matrix comm = h.entries * rho - rho * h.entries;
    const CommutatorActions actions = theorem3_actions(h, rho_a, rho_b);
    const Matrix residual =
        comm - kron(actions.action_a, rho_b.entries) - kron(rho_a.entries, actions.action_b);
    return hs_norm(residual);
}

Matrix random_hermitian_local(int dim, Rng& rng) {
    const Matrix g = rng.complex_normal_matrix(dim, dim);
    return 0.5 * (g + g.adjoint().eval());
}

BipartiteOperator random_hermitian(const BipartiteDims& dims, std::uint64_t seed,
                                   HamiltonianEnsemble ensemble, double coupling_strength) {
    check_dims(dims);
    Rng rng(seed);
    switch (ensemble) {
        case HamiltonianEnsemble::gaussian: {
            Matrix h = random_hermitian_local(dims.total(), rng);
            return BipartiteOperator{dims, std::move(h), true};
        }
        case HamiltonianEnsemble::separable: {
            const Matrix h_a = random_hermitian_local(dims.d_a, rng);
            const Matrix h_b = random_hermitian_local(dims.d_b, rng);
            Matrix h = kron(h_a, Matrix::Identity(dims.d_b, dims.d_b)) +
                       kron(Matrix::Identity(dims.d_a, dims.d_a), h_b);
            return BipartiteOperator{dims, std::move(h), true};
        }
        case HamiltonianEnsemble::separable_plus_coupling: {
            if (coupling_strength <= 0.0)
                throw std::invalid_argument("random_hermitian: coupling strength must be > 0");
            const Matrix h_a = random_hermitian_local(dims.d_a, rng);
            const Matrix h_b = random_hermitian_local(dims.d_b, rng);
            Matrix sep = kron(h_a, Matrix::Identity(dims.d_b, dims.d_b)) +
                         kron(Matrix::Identity(dims.d_a, dims.d_a), h_b);
            // Pure coupling: strip the local component of a Gaussian draw and
            // rescale its HS norm to the requested strength.
            BipartiteOperator g{dims, random_hermitian_local(dims.total(), rng), true};
            Matrix coupling = local_split(g).residual.entries;
            coupling *= coupling_strength / hs_norm(coupling);
            return BipartiteOperator{dims, sep + coupling, true};
        }
    }
    throw std::invalid_argument("random_hermitian: unknown ensemble");
}

Matrix ProductOperatorSum::to_dense() const {
    Matrix out = Matrix::Zero(dims.total(), dims.total());
    for (const KronTerm& term : terms) out += kron(term.a, term.b);
    return out;
}

Vector ProductOperatorSum::apply(const Vector& psi) const {
    const Matrix x = to_coeff_matrix(psi, dims);
    Matrix y = Matrix::Zero(dims.d_a, dims.d_b);
    for (const KronTerm& term : terms) y += term.a * x * term.b.transpose();
    return from_coeff_matrix(y, dims);
}

Matrix ProductOperatorSum::partial_expectation_b(const Vector& psi_b) const {
    Matrix k_a = Matrix::Zero(dims.d_a, dims.d_a);
    const double norm2 = psi_b.squaredNorm();
    for (const KronTerm& term : terms)
        k_a += ((psi_b.adjoint() * term.b * psi_b)(0, 0) / norm2) * term.a;
    return k_a;
}

Matrix ProductOperatorSum::partial_expectation_a(const Vector& psi_a) const {
    Matrix k_b = Matrix::Zero(dims.d_b, dims.d_b);
    const double norm2 = psi_a.squaredNorm();
    for (const KronTerm& term : terms)
        k_b += ((psi_a.adjoint() * term.a * psi_a)(0, 0) / norm2) * term.b;
    return k_b;
}

}  // namespace entlab
