#include "fortsim/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fortsim {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

}  // namespace

RamanDrive::RamanDrive(double omega1, double omega2, double delta_big,
                       double delta_two_photon, double decay_rate)
    : omega1_(omega1),
      omega2_(omega2),
      delta_big_(delta_big),
      delta_two_photon_(delta_two_photon),
      decay_rate_(decay_rate) {
    require_finite(omega1, "RamanDrive: omega1");
    require_finite(omega2, "RamanDrive: omega2");
    require_finite(delta_big, "RamanDrive: delta_big");
    require_finite(delta_two_photon, "RamanDrive: delta_two_photon");
    if (!(std::isfinite(decay_rate) && decay_rate > 0.0)) {
        throw std::invalid_argument("RamanDrive: decay_rate must be > 0");
    }
    if (delta_big == 0.0) {
        throw std::invalid_argument("RamanDrive: delta_big must be nonzero");
    }
    if (std::abs(delta_big) < 100.0 * decay_rate) {
        throw std::invalid_argument(
            "RamanDrive: |delta_big| must be at least 100 x the excited-state "
            "decay rate for the effective two-level model");
    }
}

RamanDrive RamanDrive::from_rabi(double omega_r, double delta_big,
                                 double delta_two_photon, double decay_rate) {
    require_finite(omega_r, "RamanDrive: omega_r");
    require_finite(delta_big, "RamanDrive: delta_big");
    const double magnitude = std::sqrt(2.0 * std::abs(delta_big) * std::abs(omega_r));
    const bool same_sign = (omega_r >= 0.0) == (delta_big >= 0.0);
    return RamanDrive(magnitude, same_sign ? magnitude : -magnitude, delta_big,
                      delta_two_photon, decay_rate);
}

double RamanDrive::two_photon_rabi() const {
    return omega1_ * omega2_ / (2.0 * delta_big_);
}

double RamanDrive::differential_light_shift() const {
    if (!light_shift_) return 0.0;
    return (omega1_ * omega1_ - omega2_ * omega2_) / (4.0 * delta_big_);
}

double RamanDrive::effective_detuning() const {
    return delta_two_photon_ + differential_light_shift();
}

RamanDrive RamanDrive::with_two_photon_detuning(double delta) const {
    require_finite(delta, "RamanDrive: delta_two_photon");
    RamanDrive copy = *this;
    copy.delta_two_photon_ = delta;
    return copy;
}

RamanDrive RamanDrive::with_light_shift(bool enabled) const {
    RamanDrive copy = *this;
    copy.light_shift_ = enabled;
    return copy;
}

RamanDrive RamanDrive::with_sideband_power(double watts) const {
    if (!(std::isfinite(watts) && watts >= 0.0)) {
        throw std::invalid_argument("RamanDrive: sideband power must be >= 0");
    }
    RamanDrive copy = *this;
    copy.total_sideband_power_ = watts;
    return copy;
}

double two_photon_rabi(const RamanDrive& drive) { return drive.two_photon_rabi(); }

double estimate_single_photon_rabi(double power, double waist,
                                   const AtomSpecies& species) {
    if (!(power >= 0.0 && waist > 0.0)) {
        throw std::invalid_argument(
            "estimate_single_photon_rabi: need power >= 0 and waist > 0");
    }
    const double intensity = 2.0 * power / (kPi * waist * waist);
    return species.d2_linewidth *
           std::sqrt(intensity / (2.0 * species.saturation_intensity));
}

Propagator Propagator::after(const Propagator& rhs) const {
    return {u00 * rhs.u00 + u01 * rhs.u10, u00 * rhs.u01 + u01 * rhs.u11,
            u10 * rhs.u00 + u11 * rhs.u10, u10 * rhs.u01 + u11 * rhs.u11};
}

Propagator rotation(double omega_r, double delta, double phase, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("rotation: duration must be finite and >= 0");
    }
    const double generalized = std::hypot(omega_r, delta);
    if (generalized == 0.0 || t == 0.0) return {};

    const double half_angle = 0.5 * generalized * t;
    const double c = std::cos(half_angle);
    const double s = std::sin(half_angle);
    const double nz = delta / generalized;
    const double nxy = omega_r / generalized;
    const Complex minus_i{0.0, -1.0};
    const Complex e_minus = std::polar(1.0, -phase);
    const Complex e_plus = std::polar(1.0, phase);
    return {Complex{c, -nz * s}, minus_i * (nxy * s) * e_minus,
            minus_i * (nxy * s) * e_plus, Complex{c, nz * s}};
}

QubitState propagate(const QubitState& state, double omega_r, double delta,
                     double phase, double t) {
    return rotation(omega_r, delta, phase, t).apply(state);
}

double pi_over_two_time(double omega_r) {
    if (omega_r == 0.0 || !std::isfinite(omega_r)) {
        throw std::invalid_argument("pi_over_two_time: omega_r must be nonzero");
    }
    return kPi / (2.0 * std::abs(omega_r));
}

double ramsey_probability(double delta, double gap, double t2) {
    if (!(gap >= 0.0) || !std::isfinite(gap)) {
        throw std::invalid_argument("ramsey_probability: gap must be >= 0");
    }
    if (!(t2 > 0.0)) {
        throw std::invalid_argument("ramsey_probability: t2 must be > 0");
    }
    const double contrast = std::exp(-gap / t2);
    return 0.5 * (1.0 + contrast * std::cos(delta * gap));
}

double finite_pulse_effective_gap(double gap, double omega_r) {
    return gap + 4.0 * pi_over_two_time(omega_r) / kPi;
}

}  // namespace fortsim
