#pragma once

#include <complex>

namespace fortsim {

using Complex = std::complex<double>;

// Amplitudes of the two hyperfine clock states.
struct QubitState {
    Complex c0{1.0, 0.0};
    Complex c1{0.0, 0.0};

    static QubitState ground() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static QubitState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }

    double p0() const { return std::norm(c0); }
    double p1() const { return std::norm(c1); }
    double norm_squared() const { return p0() + p1(); }

    bool operator==(const QubitState&) const = default;
};

}  // namespace fortsim
