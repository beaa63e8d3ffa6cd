#pragma once

// 1D two-particle grid machinery: periodic grids, translation-invariant
// pair potentials, Gaussian packets, a matrix-free two-body Hamiltonian
// (spectral or finite-difference kinetic), split-step Fourier propagation
// in real and imaginary time, and ground-state solvers (imaginary time
// and Lanczos) used as mutual cross-checks.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "entlab/types.hpp"

namespace entlab {

struct Grid1D {
    int n = 64;
    double dx = 1.0;
    double origin = 0.0;

    double x(int i) const { return origin + i * dx; }
    double length() const { return n * dx; }

    // Angular frequency of FFT bin j (periodic convention).
    double k(int j) const {
        const int m = (j <= n / 2) ? j : j - n;
        return 2.0 * M_PI * m / (n * dx);
    }

    // Displacement wrapped to [-L/2, L/2) (minimum image on the torus).
    double wrap(double r) const {
        const double l = length();
        r = std::fmod(r, l);
        if (r < -0.5 * l) r += l;
        if (r >= 0.5 * l) r -= l;
        return r;
    }
};

void validate_grid(const Grid1D& g);

struct PotentialSpec {
    enum class Kind { none, constant, soft_coulomb, gaussian_well, harmonic };
    Kind kind = Kind::none;
    double strength = 0.0;   // constant value, or soft_coulomb strength / sqrt(r^2 + soft^2)
    double softening = 1.0;
    double depth = 0.0;      // gaussian_well: -depth * exp(-r^2 / (2 width^2))
    double width = 1.0;
    double spring = 0.0;     // harmonic: spring * r^2 / 2

    double eval(double r) const;
    double deriv(double r) const;
    // Characteristic length over which the potential varies (for the
    // material-point regime warning).
    double scale_length() const;
};

struct GaussianPacketSpec {
    double x0 = 0.0;
    double sigma = 1.0;
    double k0 = 0.0;
    int humps = 1;            // 2 = bilocated packet
    double separation = 0.0;  // distance between hump centers when humps == 2
};

// l2-normalized packet on the grid.
Vector build_packet(const Grid1D& g, const GaussianPacketSpec& p);

enum class KineticScheme { spectral, finite_difference };

struct TwoParticleConfig {
    Grid1D grid;
    double m_a = 1.0;
    double m_b = 1.0;
    PotentialSpec potential;  // V_AB(x_a - x_b)
    std::optional<PotentialSpec> external_a;
    std::optional<PotentialSpec> external_b;
    double external_center_a = 0.0;
    double external_center_b = 0.0;
    GaussianPacketSpec packet_a;
    GaussianPacketSpec packet_b;
    double hbar = 1.0;
    KineticScheme kinetic = KineticScheme::spectral;

    double reduced_mass() const { return m_a * m_b / (m_a + m_b); }
};

void validate_config(const TwoParticleConfig& config);

// Initial product state psi_a (x) psi_b on the n^2 grid (A-major layout).
Vector initial_product(const TwoParticleConfig& config);

// Kinetic multiplier for one particle at angular frequency k.
double kinetic_multiplier(double k, double mass, double dx, double hbar, KineticScheme scheme);

class Fft;  // opaque FFTW wrapper

// Matrix-free H = T_a + T_b + V_AB(x_a - x_b) [+ external wells].
class TwoParticleOperator {
  public:
    explicit TwoParticleOperator(const TwoParticleConfig& config);
    ~TwoParticleOperator();
    TwoParticleOperator(const TwoParticleOperator&) = delete;
    TwoParticleOperator& operator=(const TwoParticleOperator&) = delete;

    BipartiteDims dims() const;
    const TwoParticleConfig& config() const { return config_; }

    Vector apply(const Vector& psi) const;
    double energy(const Vector& psi) const;          // <H> (psi normalized)
    double total_momentum(const Vector& psi) const;  // <P_a + P_b>
    const RealVector& potential_diagonal() const { return v_diag_; }

  private:
    TwoParticleConfig config_;
    RealVector t_mult_;  // combined kinetic multiplier over the n^2 k-grid
    RealVector v_diag_;
    std::unique_ptr<Fft> fft_;
};

// Strang-split propagator exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2) with
// spectral kinetic factors; exact norm preservation in real time. In
// imaginary time the factors are real and the state is renormalized after
// every step.
class SplitStep2D {
  public:
    SplitStep2D(const TwoParticleConfig& config, double dt, bool imaginary_time = false);
    ~SplitStep2D();
    SplitStep2D(const SplitStep2D&) = delete;
    SplitStep2D& operator=(const SplitStep2D&) = delete;

    void step(Vector& psi) const;

  private:
    int n_;
    Vector v_half_;
    Vector t_full_;
    bool imaginary_;
    std::unique_ptr<Fft> fft_;
};

// Same scheme for a single particle; the potential diagonal is supplied at
// every step so time-dependent (self-consistent) potentials are supported.
class SplitStep1D {
  public:
    SplitStep1D(const Grid1D& grid, double mass, double dt, double hbar,
                KineticScheme scheme = KineticScheme::spectral);
    ~SplitStep1D();
    SplitStep1D(const SplitStep1D&) = delete;
    SplitStep1D& operator=(const SplitStep1D&) = delete;

    void step(Vector& psi, const RealVector& v_diag) const;

  private:
    Grid1D grid_;
    double dt_;
    double hbar_;
    Vector t_full_;
    std::unique_ptr<Fft> fft_;
};

// Dense single-particle Hamiltonian (for the Hartree SCF eigenproblems and
// small cross-checks).
Matrix dense_kinetic_1d(const Grid1D& g, double mass, double hbar, KineticScheme scheme);

// Position/momentum diagnostics. 2D vectors are A-major (k = i_a*n + i_b).
double position_expectation(const Grid1D& g, const Vector& psi1d);
double momentum_expectation(const Grid1D& g, const Vector& psi1d, double hbar);
double position_expectation_a(const Grid1D& g, const Vector& psi2d);
double position_expectation_b(const Grid1D& g, const Vector& psi2d);

struct GroundStateResult {
    Vector psi;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Imaginary-time relaxation of the full two-body problem, matrix-free.
GroundStateResult two_body_ground_imaginary_time(const TwoParticleConfig& config,
                                                 double dtau = 0.05, double tol = 1e-11,
                                                 int max_steps = 20000);

// Lanczos ground energy with full reorthogonalization; independent
// cross-check for the imaginary-time solver.
double lanczos_ground_energy(const std::function<Vector(const Vector&)>& apply, int dim,
                             int max_iter = 250, double tol = 1e-11, std::uint64_t seed = 12345);

}  // namespace entlab
