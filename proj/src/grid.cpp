#include "entlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>

#include "entlab/hilbert.hpp"
#include "entlab/rng.hpp"

namespace entlab {

namespace {
// The FFTW planner mutates global state; executing distinct plans is safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

// In-place complex transforms of fixed size (1D of length n, or n x n with
// rows = particle A). Plans use FFTW_ESTIMATE so that results do not depend
// on runtime plan selection.
class Fft {
  public:
    Fft(int n, bool two_dim) : size_(two_dim ? n * n : n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
        if (two_dim) {
            fwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }

    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    void forward(Vector& v) const { run(fwd_, v); }

    // Includes the 1/size normalization so forward+backward is the identity.
    void backward(Vector& v) const {
        run(bwd_, v);
        v /= static_cast<double>(size_);
    }

  private:
    void run(fftw_plan plan, Vector& v) const {
        for (int i = 0; i < size_; ++i) {
            buf_[i][0] = v(i).real();
            buf_[i][1] = v(i).imag();
        }
        fftw_execute(plan);
        for (int i = 0; i < size_; ++i) v(i) = Complex(buf_[i][0], buf_[i][1]);
    }

    int size_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

void validate_grid(const Grid1D& g) {
    if (g.n < 16) throw std::invalid_argument("grid: n must be >= 16");
    if (g.dx <= 0.0) throw std::invalid_argument("grid: dx must be positive");
}

double PotentialSpec::eval(double r) const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::constant: return strength;
        case Kind::soft_coulomb: return strength / std::sqrt(r * r + softening * softening);
        case Kind::gaussian_well: return -depth * std::exp(-r * r / (2.0 * width * width));
        case Kind::harmonic: return 0.5 * spring * r * r;
    }
    return 0.0;
}

double PotentialSpec::deriv(double r) const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::constant: return 0.0;
        case Kind::soft_coulomb: {
            const double d2 = r * r + softening * softening;
            return -strength * r / (d2 * std::sqrt(d2));
        }
        case Kind::gaussian_well:
            return depth * r / (width * width) * std::exp(-r * r / (2.0 * width * width));
        case Kind::harmonic: return spring * r;
    }
    return 0.0;
}

double PotentialSpec::scale_length() const {
    switch (kind) {
        case Kind::none: return std::numeric_limits<double>::infinity();
        case Kind::constant: return std::numeric_limits<double>::infinity();
        case Kind::soft_coulomb: return softening;
        case Kind::gaussian_well: return width;
        case Kind::harmonic: return 1.0;  // no intrinsic scale; curvature is global
    }
    return std::numeric_limits<double>::infinity();
}

Vector build_packet(const Grid1D& g, const GaussianPacketSpec& p) {
    validate_grid(g);
    if (p.sigma < 2.0 * g.dx)
        throw std::invalid_argument("packet width must be at least 2*dx for the grid to resolve it");
    if (p.humps != 1 && p.humps != 2)
        throw std::invalid_argument("packet humps must be 1 or 2");
    Vector psi(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        Complex amp{0.0, 0.0};
        const Complex phase = std::exp(Complex(0.0, p.k0 * x));
        if (p.humps == 1) {
            const double d = g.wrap(x - p.x0);
            amp = std::exp(-d * d / (4.0 * p.sigma * p.sigma)) * phase;
        } else {
            const double d1 = g.wrap(x - (p.x0 - 0.5 * p.separation));
            const double d2 = g.wrap(x - (p.x0 + 0.5 * p.separation));
            amp = (std::exp(-d1 * d1 / (4.0 * p.sigma * p.sigma)) +
                   std::exp(-d2 * d2 / (4.0 * p.sigma * p.sigma))) *
                  phase;
        }
        psi(i) = amp;
    }
    const double nrm = psi.norm();
    if (nrm == 0.0) throw std::invalid_argument("packet vanishes on the grid");
    return psi / nrm;
}

void validate_config(const TwoParticleConfig& config) {
    validate_grid(config.grid);
    if (config.m_a <= 0.0 || config.m_b <= 0.0)
        throw std::invalid_argument("particle masses must be positive");
    if (config.hbar <= 0.0) throw std::invalid_argument("hbar must be positive");
    if (config.packet_a.sigma < 2.0 * config.grid.dx ||
        config.packet_b.sigma < 2.0 * config.grid.dx)
        throw std::invalid_argument("grid too coarse for the requested packet widths");
}

Vector initial_product(const TwoParticleConfig& config) {
    const Vector a = build_packet(config.grid, config.packet_a);
    const Vector b = build_packet(config.grid, config.packet_b);
    return tensor_product(a, b).amplitudes;
}

double kinetic_multiplier(double k, double mass, double dx, double hbar, KineticScheme scheme) {
    if (scheme == KineticScheme::spectral) return hbar * hbar * k * k / (2.0 * mass);
    // 3-point finite differences diagonalize in the same Fourier basis.
    return hbar * hbar * (2.0 - 2.0 * std::cos(k * dx)) / (2.0 * mass * dx * dx);
}

namespace {

RealVector potential_diagonal_for(const TwoParticleConfig& config) {
    const Grid1D& g = config.grid;
    RealVector v(g.n * g.n);
    for (int ia = 0; ia < g.n; ++ia) {
        const double xa = g.x(ia);
        double ext_a = 0.0;
        if (config.external_a)
            ext_a = config.external_a->eval(g.wrap(xa - config.external_center_a));
        for (int ib = 0; ib < g.n; ++ib) {
            const double xb = g.x(ib);
            double val = config.potential.eval(g.wrap(xa - xb)) + ext_a;
            if (config.external_b)
                val += config.external_b->eval(g.wrap(xb - config.external_center_b));
            v(ia * g.n + ib) = val;
        }
    }
    return v;
}

RealVector kinetic_diagonal_for(const TwoParticleConfig& config) {
    const Grid1D& g = config.grid;
    RealVector t(g.n * g.n);
    for (int ja = 0; ja < g.n; ++ja) {
        const double ta =
            kinetic_multiplier(g.k(ja), config.m_a, g.dx, config.hbar, config.kinetic);
        for (int jb = 0; jb < g.n; ++jb)
            t(ja * g.n + jb) =
                ta + kinetic_multiplier(g.k(jb), config.m_b, g.dx, config.hbar, config.kinetic);
    }
    return t;
}

}  // namespace

TwoParticleOperator::TwoParticleOperator(const TwoParticleConfig& config) : config_(config) {
    validate_config(config);
    t_mult_ = kinetic_diagonal_for(config);
    v_diag_ = potential_diagonal_for(config);
    fft_ = std::make_unique<Fft>(config.grid.n, true);
}

TwoParticleOperator::~TwoParticleOperator() = default;

BipartiteDims TwoParticleOperator::dims() const { return {config_.grid.n, config_.grid.n}; }

Vector TwoParticleOperator::apply(const Vector& psi) const {
    Vector kinetic = psi;
    fft_->forward(kinetic);
    kinetic.array() *= t_mult_.cast<Complex>().array();
    fft_->backward(kinetic);
    return kinetic + (v_diag_.cast<Complex>().array() * psi.array()).matrix();
}

double TwoParticleOperator::energy(const Vector& psi) const {
    return (psi.adjoint() * apply(psi))(0, 0).real() / psi.squaredNorm();
}

double TwoParticleOperator::total_momentum(const Vector& psi) const {
    const Grid1D& g = config_.grid;
    Vector hat = psi;
    fft_->forward(hat);
    double num = 0.0;
    double den = 0.0;
    for (int ja = 0; ja < g.n; ++ja)
        for (int jb = 0; jb < g.n; ++jb) {
            const double w = std::norm(hat(ja * g.n + jb));
            num += w * config_.hbar * (g.k(ja) + g.k(jb));
            den += w;
        }
    return num / den;
}

SplitStep2D::SplitStep2D(const TwoParticleConfig& config, double dt, bool imaginary_time)
    : n_(config.grid.n), imaginary_(imaginary_time) {
    validate_config(config);
    if (dt <= 0.0) throw std::invalid_argument("split-step: dt must be positive");
    const RealVector v = potential_diagonal_for(config);
    const RealVector t = kinetic_diagonal_for(config);
    const Complex factor =
        imaginary_time ? Complex(-dt / config.hbar, 0.0) : Complex(0.0, -dt / config.hbar);
    v_half_ = (0.5 * factor * v.cast<Complex>().array()).exp().matrix();
    t_full_ = (factor * t.cast<Complex>().array()).exp().matrix();
    fft_ = std::make_unique<Fft>(n_, true);
}

SplitStep2D::~SplitStep2D() = default;

void SplitStep2D::step(Vector& psi) const {
    psi.array() *= v_half_.array();
    fft_->forward(psi);
    psi.array() *= t_full_.array();
    fft_->backward(psi);
    psi.array() *= v_half_.array();
    if (imaginary_) psi /= psi.norm();
}

SplitStep1D::SplitStep1D(const Grid1D& grid, double mass, double dt, double hbar,
                         KineticScheme scheme)
    : grid_(grid), dt_(dt), hbar_(hbar) {
    validate_grid(grid);
    if (dt <= 0.0) throw std::invalid_argument("split-step: dt must be positive");
    t_full_.resize(grid.n);
    for (int j = 0; j < grid.n; ++j)
        t_full_(j) = std::exp(Complex(0.0, -dt / hbar) *
                              kinetic_multiplier(grid.k(j), mass, grid.dx, hbar, scheme));
    fft_ = std::make_unique<Fft>(grid.n, false);
}

SplitStep1D::~SplitStep1D() = default;

void SplitStep1D::step(Vector& psi, const RealVector& v_diag) const {
    const auto v_half =
        (Complex(0.0, -0.5 * dt_ / hbar_) * v_diag.cast<Complex>().array()).exp();
    psi.array() *= v_half;
    fft_->forward(psi);
    psi.array() *= t_full_.array();
    fft_->backward(psi);
    psi.array() *= v_half;
}

Matrix dense_kinetic_1d(const Grid1D& g, double mass, double hbar, KineticScheme scheme) {
    validate_grid(g);
    const int n = g.n;
    // T = F^-1 diag(t) F with the unnormalized DFT matrix.
    Matrix f(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            f(j, l) = std::exp(Complex(0.0, -2.0 * M_PI * j * l / n));
    RealVector t(n);
    for (int j = 0; j < n; ++j) t(j) = kinetic_multiplier(g.k(j), mass, g.dx, hbar, scheme);
    Matrix out = f.adjoint() * t.cast<Complex>().asDiagonal() * f / static_cast<double>(n);
    return 0.5 * (out + out.adjoint().eval());
}

double position_expectation(const Grid1D& g, const Vector& psi1d) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double w = std::norm(psi1d(i));
        num += w * g.x(i);
        den += w;
    }
    return num / den;
}

double momentum_expectation(const Grid1D& g, const Vector& psi1d, double hbar) {
    Vector hat = psi1d;
    Fft fft(g.n, false);
    fft.forward(hat);
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double w = std::norm(hat(j));
        num += w * hbar * g.k(j);
        den += w;
    }
    return num / den;
}

double position_expectation_a(const Grid1D& g, const Vector& psi2d) {
    double num = 0.0;
    double den = 0.0;
    for (int ia = 0; ia < g.n; ++ia) {
        double w = 0.0;
        for (int ib = 0; ib < g.n; ++ib) w += std::norm(psi2d(ia * g.n + ib));
        num += w * g.x(ia);
        den += w;
    }
    return num / den;
}

double position_expectation_b(const Grid1D& g, const Vector& psi2d) {
    double num = 0.0;
    double den = 0.0;
    for (int ib = 0; ib < g.n; ++ib) {
        double w = 0.0;
        for (int ia = 0; ia < g.n; ++ia) w += std::norm(psi2d(ia * g.n + ib));
        num += w * g.x(ib);
        den += w;
    }
    return num / den;
}

GroundStateResult two_body_ground_imaginary_time(const TwoParticleConfig& config, double dtau,
                                                 double tol, int max_steps) {
    const TwoParticleOperator op(config);
    // Start from the product of the single-particle external-well ground
    // states when wells are present, otherwise from the configured packets.
    Vector psi;
    if (config.external_a && config.external_b) {
        const Grid1D& g = config.grid;
        auto well_ground = [&](const PotentialSpec& well, double center, double mass) {
            Matrix h = dense_kinetic_1d(g, mass, config.hbar, config.kinetic);
            for (int i = 0; i < g.n; ++i) h(i, i) += well.eval(g.wrap(g.x(i) - center));
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            return Vector(es.eigenvectors().col(0));
        };
        psi = tensor_product(well_ground(*config.external_a, config.external_center_a, config.m_a),
                             well_ground(*config.external_b, config.external_center_b, config.m_b))
                  .amplitudes;
    } else {
        psi = initial_product(config);
    }

    GroundStateResult result;
    double energy = op.energy(psi);
    int total = 0;
    double step_size = dtau;
    for (int stage = 0; stage < 3 && !result.converged; ++stage) {
        const SplitStep2D stepper(config, step_size, /*imaginary_time=*/true);
        for (int i = 0; i < max_steps; ++i) {
            stepper.step(psi);
            ++total;
            if (total % 5 == 0) {
                const double e = op.energy(psi);
                if (std::abs(e - energy) < tol * std::max(1.0, std::abs(e))) {
                    energy = e;
                    result.converged = true;
                    break;
                }
                energy = e;
            }
        }
        step_size *= 0.2;
        if (stage < 2) result.converged = false;  // refine with a smaller step
    }
    result.psi = psi;
    result.energy = op.energy(psi);
    result.iterations = total;
    return result;
}

double lanczos_ground_energy(const std::function<Vector(const Vector&)>& apply, int dim,
                             int max_iter, double tol, std::uint64_t seed) {
    Rng rng(seed);
    Vector q = rng.complex_normal_vector(dim);
    q /= q.norm();

    std::vector<Vector> basis;
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[k] couples q_k and q_{k+1}
    basis.push_back(q);

    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        Vector w = apply(basis.back());
        const double a = (basis.back().adjoint() * w)(0, 0).real();
        alpha.push_back(a);
        w -= a * basis.back();
        if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
        // Full reorthogonalization keeps the basis clean at these sizes.
        for (const Vector& v : basis) w -= (v.adjoint() * w)(0, 0) * v;
        const double b = w.norm();

        if ((it + 1) % 5 == 0 || b < 1e-13 || it == max_iter - 1) {
            const int m = static_cast<int>(alpha.size());
            RealMatrix tri = RealMatrix::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                tri(i, i) = alpha[i];
                if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<RealMatrix> es(tri, Eigen::EigenvaluesOnly);
            const double e0 = es.eigenvalues()(0);
            if (std::abs(e0 - last) < tol * std::max(1.0, std::abs(e0))) return e0;
            last = e0;
        }
        if (b < 1e-13) break;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return last;
}

}  // namespace entlab
