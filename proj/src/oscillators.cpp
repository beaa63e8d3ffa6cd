#include "entlab/oscillators.hpp"

#include <cmath>

namespace entlab {

void validate_oscillator_config(const OscillatorConfig& config) {
    if (config.cutoff < 2) throw std::invalid_argument("oscillator cutoff must be >= 2");
    if (config.g != config.g || config.hbar <= 0.0)
        throw std::invalid_argument("oscillator parameters invalid");
    const double needed =
        4.0 * std::max(std::norm(config.alpha_a), std::norm(config.alpha_b)) + 10.0;
    if (config.cutoff < needed)
        throw std::invalid_argument("oscillator cutoff " + std::to_string(config.cutoff) +
                                    " below truncation adequacy bound " +
                                    std::to_string(needed));
}

Matrix destroy_operator(int cutoff) {
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix number_operator(int cutoff) {
    Matrix n = Matrix::Zero(cutoff, cutoff);
    for (int k = 0; k < cutoff; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Vector coherent_state(int cutoff, Complex alpha) {
    Vector psi(cutoff);
    Complex amp{1.0, 0.0};
    psi(0) = amp;
    for (int n = 1; n < cutoff; ++n) {
        amp *= alpha / std::sqrt(static_cast<double>(n));
        psi(n) = amp;
    }
    return psi / psi.norm();
}

Vector fock_state(int cutoff, int n) {
    if (n < 0 || n >= cutoff) throw std::invalid_argument("fock level outside cutoff");
    Vector psi = Vector::Zero(cutoff);
    psi(n) = 1.0;
    return psi;
}

ProductOperatorSum coupled_oscillator_hamiltonian(const OscillatorConfig& config) {
    validate_oscillator_config(config);
    const int d = config.cutoff;
    const Matrix a = destroy_operator(d);
    const Matrix num = number_operator(d);
    const Matrix id = Matrix::Identity(d, d);

    ProductOperatorSum h;
    h.dims = BipartiteDims{d, d};
    h.terms.push_back({config.omega_a * num, id});
    h.terms.push_back({id, config.omega_b * num});
    h.terms.push_back({config.g * a.adjoint(), a});
    h.terms.push_back({config.g * a, a.adjoint()});
    return h;
}

double swap_period(const OscillatorConfig& config) {
    if (config.g == 0.0) throw std::invalid_argument("swap period undefined for g = 0");
    return M_PI / std::abs(config.g);
}

}  // namespace entlab
