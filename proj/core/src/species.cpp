#include "fortsim/species.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fortsim {

namespace {

void require_positive(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw std::invalid_argument(std::string("AtomSpecies: ") + name +
                                    " must be finite and positive");
    }
}

}  // namespace

void AtomSpecies::validate() const {
    require_positive(hyperfine_splitting_hz, "hyperfine_splitting_hz");
    require_positive(d2_wavelength, "d2_wavelength");
    require_positive(d1_wavelength, "d1_wavelength");
    require_positive(d2_linewidth, "d2_linewidth");
    require_positive(bohr_magneton_over_h, "bohr_magneton_over_h");
    require_positive(saturation_intensity, "saturation_intensity");
    if (std::abs((g_f_upper - g_f_lower) - 1.0) > 1e-12) {
        throw std::invalid_argument(
            "AtomSpecies: g_f_upper - g_f_lower must equal 1");
    }
}

AtomSpecies rubidium87() { return AtomSpecies{}; }

}  // namespace fortsim
