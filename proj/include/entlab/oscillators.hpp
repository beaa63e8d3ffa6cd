#pragma once

// Truncated Fock-space ladder operators and the two coupled oscillators
// with beamsplitter coupling g(a^+ b + a b^+).

#include "entlab/hamiltonian.hpp"
#include "entlab/types.hpp"

namespace entlab {

struct OscillatorConfig {
    int cutoff = 30;
    double omega_a = 1.0;
    double omega_b = 1.0;
    double g = 0.25;
    Complex alpha_a{1.0, 0.0};
    Complex alpha_b{0.0, 0.0};
    double hbar = 1.0;
};

// Truncation adequacy: cutoff >= 4 max|alpha|^2 + 10.
void validate_oscillator_config(const OscillatorConfig& config);

Matrix destroy_operator(int cutoff);
Matrix number_operator(int cutoff);

// Truncated coherent state, renormalized after the cutoff.
Vector coherent_state(int cutoff, Complex alpha);
Vector fock_state(int cutoff, int n);

// H = omega_a a^+a (x) I + I (x) omega_b b^+b + g (a^+ (x) b + a (x) b^+),
// kept as a sum of product terms.
ProductOperatorSum coupled_oscillator_hamiltonian(const OscillatorConfig& config);

// Time of a full amplitude swap cycle, 2 pi / (2 g).
double swap_period(const OscillatorConfig& config);

}  // namespace entlab
