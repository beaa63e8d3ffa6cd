#include "entlab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "entlab/dynamics.hpp"
#include "entlab/oscillators.hpp"
#include "entlab/scenarios.hpp"

namespace entlab {

Matrix complete_orthonormal_basis(const Vector& first) {
    const int d = static_cast<int>(first.size());
    Matrix u(d, d);
    u.col(0) = first / first.norm();
    int col = 1;
    for (int i = 0; i < d && col < d; ++i) {
        Vector v = Vector::Zero(d);
        v(i) = 1.0;
        for (int k = 0; k < col; ++k) v -= (u.col(k).adjoint() * v)(0, 0) * u.col(k);
        if (v.norm() > 1e-6) u.col(col++) = v / v.norm();
    }
    if (col != d) throw std::runtime_error("orthonormal completion failed");
    return u;
}

double appendix_basis_gamma(const BipartiteOperator& h, const Vector& psi_a,
                            const Vector& psi_b) {
    const BipartiteDims& dims = h.dims;
    const Matrix u = complete_orthonormal_basis(psi_a);
    const Matrix v = complete_orthonormal_basis(psi_b);
    const Vector h_psi = h.entries * tensor_product(psi_a, psi_b).amplitudes;
    Matrix y(dims.d_a, dims.d_b);
    for (int i = 0; i < dims.d_a; ++i)
        for (int j = 0; j < dims.d_b; ++j) y(i, j) = h_psi(dims.flat(i, j));
    const Matrix z = u.adjoint() * y * v.conjugate();
    if (dims.d_a < 2 || dims.d_b < 2) return 0.0;
    return z.block(1, 1, dims.d_a - 1, dims.d_b - 1).squaredNorm();
}

namespace {

LocalSplit split_with_fault(const BipartiteOperator& h, const FaultInjection& faults) {
    LocalSplit split = local_split(h);
    if (faults.split_gauge) {
        // Misplace part of the trace gauge on the A side; the residual is
        // recomputed so the perturbation leaks into the gauge-dependent
        // quantities.
        const Complex shift = 0.01 * h.entries.trace() / static_cast<double>(h.dims.d_a);
        split.h_a += shift * Matrix::Identity(h.dims.d_a, h.dims.d_a);
        Matrix residual = h.entries -
                          kron(split.h_a, Matrix::Identity(h.dims.d_b, h.dims.d_b)) -
                          kron(Matrix::Identity(h.dims.d_a, h.dims.d_a), split.h_b);
        split.residual_hs_norm = hs_norm(residual);
        split.residual = BipartiteOperator{h.dims, std::move(residual), true};
    }
    return split;
}

struct LineBuilder {
    std::vector<SuiteLine>& out;
    std::string suite;

    void upper(const std::string& name, int instances, double observed, double threshold) {
        out.push_back(
            {suite, name, instances, observed, threshold, true, observed <= threshold});
    }
    void lower(const std::string& name, int instances, double observed, double threshold) {
        out.push_back(
            {suite, name, instances, observed, threshold, false, observed >= threshold});
    }
};

BipartiteDims dims_cycle(std::uint64_t i) {
    switch (i % 4) {
        case 0: return {2, 2};
        case 1: return {2, 3};
        case 2: return {3, 3};
        default: return {3, 4};
    }
}

void theorems_suite(std::vector<SuiteLine>& lines, std::uint64_t seed,
                    const FaultInjection& faults) {
    LineBuilder build{lines, "theorems"};

    // Projection property of the split residual.
    {
        double worst = 0.0;
        int instances = 0;
        for (int i = 0; i < 20; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + i, HamiltonianEnsemble::gaussian);
            const LocalSplit split = split_with_fault(h, faults);
            Rng rng(seed + 1000 + i);
            for (int k = 0; k < 25; ++k) {
                const Matrix a = random_hermitian_local(dims.d_a, rng);
                const Matrix b = random_hermitian_local(dims.d_b, rng);
                const Matrix a_ext = kron(a, Matrix::Identity(dims.d_b, dims.d_b));
                const Matrix b_ext = kron(Matrix::Identity(dims.d_a, dims.d_a), b);
                const double na = hs_norm(a_ext) * hs_norm(split.residual.entries);
                const double nb = hs_norm(b_ext) * hs_norm(split.residual.entries);
                worst = std::max(
                    worst, std::abs(hs_inner_real(a_ext, split.residual.entries)) /
                               std::max(na, 1e-300));
                worst = std::max(
                    worst, std::abs(hs_inner_real(b_ext, split.residual.entries)) /
                               std::max(nb, 1e-300));
                instances += 2;
            }
        }
        build.upper("split-residual-orthogonality", instances, worst, 1e-9);
    }

    // Reconstruction and idempotence under the trace gauge.
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + 40 + i, HamiltonianEnsemble::gaussian);
            const LocalSplit split = split_with_fault(h, faults);
            worst = std::max(worst, (split.reconstruct() - h.entries).cwiseAbs().maxCoeff());
            const BipartiteOperator local_part = make_bipartite_operator(
                dims, kron(split.h_a, Matrix::Identity(dims.d_b, dims.d_b)) +
                          kron(Matrix::Identity(dims.d_a, dims.d_a), split.h_b));
            const LocalSplit again = local_split(local_part);
            worst = std::max(worst, (again.h_a - split.h_a).cwiseAbs().maxCoeff());
            worst = std::max(worst, (again.h_b - split.h_b).cwiseAbs().maxCoeff());
        }
        build.upper("split-reconstruction-idempotence", 20, worst, 1e-10);
    }

    // Main theorem, sufficient direction: separable H never entangles.
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + 100 + i, HamiltonianEnsemble::separable);
            Rng rng(seed + 10000 + i);
            for (int k = 0; k < 100; ++k) {
                const Vector a = random_local_state(dims.d_a, rng);
                const Vector b = random_local_state(dims.d_b, rng);
                worst = std::max(worst, biorthogonal_rate(h, a, b).gamma);
            }
        }
        build.upper("main-theorem-sufficient-gamma", 100 * 100, worst, 1e-12);
    }

    // Main theorem, necessary direction: a coupled H always shows a product
    // state with a nonzero rate under random search.
    {
        double worst_best = std::numeric_limits<double>::infinity();
        int instances = 0;
        for (int i = 0; i < 100; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            BipartiteOperator h =
                random_hermitian(dims, seed + 300 + i, HamiltonianEnsemble::gaussian);
            const LocalSplit split = local_split(h);
            if (split.residual_hs_norm <= 0.1 * hs_norm(h.entries)) continue;  // not expected
            ++instances;
            double best = 0.0;
            Rng rng(seed + 50000 + i);
            for (int k = 0; k < 500 && best <= 1e-6; ++k) {
                const Vector a = random_local_state(dims.d_a, rng);
                const Vector b = random_local_state(dims.d_b, rng);
                best = std::max(best, biorthogonal_rate(h, a, b).gamma);
            }
            worst_best = std::min(worst_best, best);
        }
        build.lower("main-theorem-necessary-search", instances, worst_best, 1e-6);
    }

    // Projector route against the explicit Gram-Schmidt basis of the
    // short-time expansion.
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + 400 + i, HamiltonianEnsemble::gaussian);
            Rng rng(seed + 600 + i);
            const Vector a = random_local_state(dims.d_a, rng);
            const Vector b = random_local_state(dims.d_b, rng);
            worst = std::max(worst, std::abs(biorthogonal_rate(h, a, b).gamma -
                                             appendix_basis_gamma(h, a, b)));
        }
        build.upper("gamma-basis-independence", 50, worst, 1e-10);
    }

    // Adding c*I never changes gamma or the residual norm.
    {
        double worst = 0.0;
        Rng rng(seed + 700);
        for (int i = 0; i < 50; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + 700 + i, HamiltonianEnsemble::gaussian);
            const double c = 10.0 * (rng.uniform01() - 0.5);
            const BipartiteOperator shifted = make_bipartite_operator(
                dims, h.entries + c * Matrix::Identity(dims.total(), dims.total()));
            const Vector a = random_local_state(dims.d_a, rng);
            const Vector b = random_local_state(dims.d_b, rng);
            worst = std::max(worst, std::abs(biorthogonal_rate(h, a, b).gamma -
                                             biorthogonal_rate(shifted, a, b).gamma));
            worst = std::max(worst, std::abs(split_with_fault(h, faults).residual_hs_norm -
                                             split_with_fault(shifted, faults).residual_hs_norm));
        }
        build.upper("gauge-invariance", 50, worst, 1e-10);
    }

    // Trace-free partial-trace actions of the commutator.
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const BipartiteDims dims = dims_cycle(i);
            const BipartiteOperator h =
                random_hermitian(dims, seed + 800 + i, HamiltonianEnsemble::gaussian);
            const DensityMatrix rho_a = random_density_matrix(dims.d_a, seed + 900 + i);
            const DensityMatrix rho_b = random_density_matrix(dims.d_b, seed + 950 + i);
            const CommutatorActions actions = theorem3_actions(h, rho_a, rho_b);
            worst = std::max(worst, std::abs(actions.action_a.trace()));
            worst = std::max(worst, std::abs(actions.action_b.trace()));
        }
        build.upper("theorem3-trace-free", 50, worst, 1e-10);
    }

    // The stationary mixed product that violates the product-form condition
    // while satisfying the commutator form.
    {
        const Theorem2CounterexampleReport report =
            run_theorem2_counterexample(BipartiteDims{2, 2}, seed + 11);
        build.upper("counterexample-stationarity", 1, report.max_state_drift, 1e-9);
        build.lower("counterexample-theorem2-violated", 1, report.theorem2_residual, 1e-3);
        build.upper("counterexample-theorem3-holds", 1, report.theorem3_residual, 1e-9);
    }
}

void appendix_suite(std::vector<SuiteLine>& lines, std::uint64_t seed) {
    LineBuilder build{lines, "appendix"};

    // Quadratic purity-decay coefficient against the bi-orthogonal rate.
    {
        double worst_rel = 0.0;
        double worst_deriv = 0.0;
        PropagatorSpec spec;
        for (int i = 0; i < 20; ++i) {
            const BipartiteDims dims{3, 3};
            const BipartiteOperator h =
                random_hermitian(dims, seed + 2000 + i, HamiltonianEnsemble::gaussian);
            const PureState psi = random_product_state(dims, seed + 2100 + i);
            const PurityDecayFit fit = purity_decay_coefficient(h, psi, spec);
            if (fit.gamma > 1e-6)
                worst_rel = std::max(
                    worst_rel, std::abs(fit.fitted_coefficient /
                                            (2.0 * fit.gamma / (spec.hbar * spec.hbar)) -
                                        1.0));
            worst_deriv = std::max(worst_deriv, std::abs(fit.derivative_at_zero));
        }
        build.upper("purity-decay-coefficient", 20, worst_rel, 0.01);
        build.upper("purity-derivative-zero", 20, worst_deriv, 1e-8);
    }

    // Schmidt reconstruction up to a global phase.
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const BipartiteDims dims{2 + static_cast<int>(i % 5), 2 + static_cast<int>(i % 4)};
            const PureState psi = random_global_state(dims, seed + 3000 + i);
            const SchmidtDecomposition sd = schmidt_decompose(psi);
            const Vector recon = sd.reconstruct(dims);
            const Complex overlap = recon.dot(psi.amplitudes);
            const Complex phase =
                std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
            worst = std::max(worst, (recon * phase - psi.amplitudes).norm());
        }
        build.upper("schmidt-reconstruction", 200, worst, 1e-9);
    }

    // Tr rho_A^2 = Tr rho_B^2 for pure global states.
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const BipartiteDims dims{2 + static_cast<int>(i % 5), 2 + static_cast<int>(i % 3)};
            const PureState psi = random_global_state(dims, seed + 4000 + i);
            const DensityMatrix rho = projector(psi);
            const double pa =
                purity_and_linear_entropy(partial_trace(rho, dims, Side::A)).purity;
            const double pb =
                purity_and_linear_entropy(partial_trace(rho, dims, Side::B)).purity;
            worst = std::max(worst, std::abs(pa - pb));
        }
        build.upper("purity-symmetry", 200, worst, 1e-10);
    }

    // The factorisability detector separates products from generic states.
    {
        double worst_product = 0.0;
        double best_global = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 100; ++i) {
            const BipartiteDims dims{3, 3};
            const SchmidtDecomposition sd_p =
                schmidt_decompose(random_product_state(dims, seed + 5000 + i));
            worst_product = std::max(worst_product, sd_p.coefficients(1));
            const SchmidtDecomposition sd_g =
                schmidt_decompose(random_global_state(dims, seed + 5100 + i));
            best_global = std::min(best_global, sd_g.coefficients(1));
        }
        build.upper("product-second-schmidt", 100, worst_product, 1e-8);
        build.lower("generic-second-schmidt", 100, best_global, 1e-6);
    }
}

void regimes_suite(std::vector<SuiteLine>& lines, std::uint64_t seed) {
    LineBuilder build{lines, "regimes"};

    // Coupled oscillators: coherent states stay factorized, a single
    // excitation does not.
    {
        const OscillatorReport report =
            run_coupled_oscillators(default_oscillator_config(), default_oscillator_run());
        build.upper("oscillator-coherent-entropy", 1, report.coherent_max_entropy, 1e-6);
        build.lower("oscillator-meanfield-fidelity", 1, report.coherent_min_meanfield_fidelity,
                    1.0 - 1e-5);
        build.upper("oscillator-fock-5050-entropy", 1,
                    std::abs(report.fock_entropy_at_half_swap - 0.5), 1e-3);
        build.lower("oscillator-fock-max-entropy", 1, report.fock_max_entropy, 0.4);
    }

    // Truncation robustness: the coherent-run entropy bound improves with
    // the cutoff (ties at the round-off floor allowed).
    {
        const double g = 0.25;
        const Complex alpha{2.2, 0.0};
        std::vector<double> entropies;
        for (const int cutoff : {20, 30, 40}) {
            ProductOperatorSum h;
            h.dims = BipartiteDims{cutoff, cutoff};
            const Matrix a = destroy_operator(cutoff);
            const Matrix id = Matrix::Identity(cutoff, cutoff);
            h.terms.push_back({number_operator(cutoff), id});
            h.terms.push_back({id, number_operator(cutoff)});
            h.terms.push_back({g * a.adjoint(), a});
            h.terms.push_back({g * a, a.adjoint()});
            PropagatorSpec spec;
            spec.method = PropagationMethod::rk4;
            spec.dt = 1e-3;
            spec.steps = static_cast<int>(std::ceil(0.5 * M_PI / g / spec.dt));
            spec.record_every = 50;
            const PurePropagation run = propagate_pure_structured(
                h,
                tensor_product(coherent_state(cutoff, alpha), coherent_state(cutoff, Complex{})),
                spec);
            entropies.push_back(run.trajectory.max_linear_entropy());
        }
        const double worst_increase = std::max(entropies[1] - entropies[0],
                                               entropies[2] - entropies[1]);
        build.upper("oscillator-truncation-robustness", 3, worst_increase, 1e-13);
    }

    // Test-particle regime.
    {
        const TestParticleReport report =
            run_test_particle(default_test_particle_config(), default_test_particle_run());
        build.lower("test-particle-suppression", 2, report.suppression_factor, 10.0);
        build.lower("test-particle-marginal-fidelity", 1, report.marginal_fidelity_main, 0.99);
        build.lower("test-particle-control-entropy", 1, report.max_linear_entropy_control, 1e-4);
    }

    // Material-point regime.
    {
        const MaterialPointReport report =
            run_material_point(default_material_point_config(), default_material_point_run());
        build.lower("material-point-fidelity", 1, report.fidelity_min, 0.99);
        const double center_err =
            std::max(report.max_center_error_a, report.max_center_error_b);
        build.upper("material-point-centers", 2, center_err, 0.02 * report.potential_scale);
    }

    // Hartree statics: identity couplings, variational bound, gap growth.
    {
        HartreeOptions options;
        options.compute_exact = false;
        TwoParticleConfig zero = default_hartree_config(0.0);
        zero.potential.kind = PotentialSpec::Kind::none;
        const HartreeResult r_zero = hartree_static(zero, options);
        TwoParticleConfig constant = default_hartree_config(0.0);
        constant.potential.kind = PotentialSpec::Kind::constant;
        constant.potential.strength = 0.7;
        const HartreeResult r_const = hartree_static(constant, options);
        build.upper("hartree-identity-residual", 2,
                    std::max(r_zero.consistency_residual, r_const.consistency_residual), 1e-10);

        HartreeOptions exact_options;
        exact_options.compute_exact = true;
        double min_gap = std::numeric_limits<double>::infinity();
        double prev_gap = -std::numeric_limits<double>::infinity();
        double worst_step = std::numeric_limits<double>::infinity();
        for (const double strength : {0.2, 0.5, 1.0}) {
            const HartreeResult r = hartree_static(default_hartree_config(strength), exact_options);
            min_gap = std::min(min_gap, *r.exact_gap);
            if (prev_gap > -std::numeric_limits<double>::infinity())
                worst_step = std::min(worst_step, *r.exact_gap - prev_gap);
            prev_gap = *r.exact_gap;
        }
        build.lower("hartree-variational-bound", 3, min_gap, -1e-6);
        build.lower("hartree-gap-monotone", 3, worst_step, 0.0);
    }

    // Momentum conservation for a translation-invariant coupling. The
    // packets stay well clear of the minimum-image seam where the wrapped
    // harmonic potential has a derivative kink.
    {
        TwoParticleConfig config = default_material_point_config();
        config.potential.kind = PotentialSpec::Kind::harmonic;
        config.potential.spring = 0.005;
        config.packet_a = GaussianPacketSpec{26.0, 3.0, 0.3};
        config.packet_b = GaussianPacketSpec{38.0, 3.0, -0.2};
        const TwoParticleOperator op(config);
        const SplitStep2D stepper(config, 0.01);
        Vector psi = initial_product(config);
        const double p0 = op.total_momentum(psi);
        double worst = 0.0;
        for (int step = 1; step <= 1000; ++step) {
            stepper.step(psi);
            if (step % 100 == 0)
                worst = std::max(worst, std::abs(op.total_momentum(psi) - p0));
        }
        build.upper("momentum-conservation", 10, worst, 1e-7);
    }

    // A bilocated partner entangles far more than a localized one of the
    // same total width, even when it is heavy: the scattering position is
    // recorded in the light particle itself. A slightly stronger barrier
    // gives a small reflected branch that makes the record permanent.
    {
        TwoParticleConfig two_hump = default_test_particle_config();
        two_hump.potential.strength = 0.4;
        two_hump.potential.softening = 2.0;
        two_hump.packet_a = GaussianPacketSpec{10.0, 3.0, 1.0};
        two_hump.packet_b = GaussianPacketSpec{34.0, 2.0, 0.0, 2, 10.0};
        TwoParticleConfig one_hump = two_hump;
        one_hump.packet_b.humps = 1;
        one_hump.packet_b.separation = 0.0;
        // Same total width: sigma^2 + (separation/2)^2.
        one_hump.packet_b.sigma = std::sqrt(2.0 * 2.0 + 5.0 * 5.0);
        GridRunSpec spec = default_test_particle_run();
        spec.steps = 6400;
        const TestParticleReport two = run_test_particle(two_hump, spec);
        const TestParticleReport one = run_test_particle(one_hump, spec);
        const double ratio = two.max_linear_entropy_main /
                             std::max(one.max_linear_entropy_main, 1e-300);
        build.lower("bilocation-entanglement-ratio", 2, ratio, 5.0);
    }

    (void)seed;
}

}  // namespace

std::vector<SuiteLine> run_verification(const std::string& suite, std::uint64_t seed,
                                        const FaultInjection& faults) {
    std::vector<SuiteLine> lines;
    const bool all = suite == "all";
    if (all || suite == "theorems") theorems_suite(lines, seed, faults);
    if (all || suite == "appendix") appendix_suite(lines, seed);
    if (all || suite == "regimes") regimes_suite(lines, seed);
    if (lines.empty()) throw std::invalid_argument("unknown suite: " + suite);
    return lines;
}

}  // namespace entlab
