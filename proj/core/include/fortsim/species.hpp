#pragma once

#include "fortsim/units.hpp"

namespace fortsim {

// Alkali species constants needed by the trap and drive models. The qubit is
// encoded in the two ground hyperfine clock states |0> = |F=1, mF=0> and
// |1> = |F=2, mF=0>.
struct AtomSpecies {
    double hyperfine_splitting_hz = 6'834'683e3;
    double d2_wavelength = 780.24e-9;   // m
    double d1_wavelength = 794.98e-9;   // m
    double d2_linewidth = kTwoPi * 6.07e6;  // rad/s
    double g_f_lower = -0.5;            // F = 1
    double g_f_upper = 0.5;             // F = 2
    double bohr_magneton_over_h = constants::kBohrMagnetonOverH;  // Hz/G
    // D2 cycling-transition saturation intensity, W/m^2.
    double saturation_intensity = 16.6933;

    // Throws std::invalid_argument if any constant is non-positive or the
    // ground-state g-factors are not one unit apart.
    void validate() const;

    bool operator==(const AtomSpecies&) const = default;
};

AtomSpecies rubidium87();

}  // namespace fortsim
