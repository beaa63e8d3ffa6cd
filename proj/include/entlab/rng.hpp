#pragma once

// Deterministic random source. Gaussian and uniform variates are produced
// from raw mt19937_64 output so that streams are reproducible bit-for-bit
// for a fixed seed, independent of the standard library's distribution
// implementations.

#include <cmath>
#include <cstdint>
#include <random>

#include "entlab/types.hpp"

namespace entlab {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (polar form avoided to keep the
    // draw count per variate fixed).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return Complex{re, im};
    }

    Vector complex_normal_vector(int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = complex_normal();
        return v;
    }

    Matrix complex_normal_matrix(int rows, int cols) {
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
        return m;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace entlab
