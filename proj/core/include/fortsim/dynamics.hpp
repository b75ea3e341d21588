#pragma once

// Effective two-level dynamics of the Raman-driven hyperfine qubit.
//
// Rotating-frame Hamiltonian, basis (|0>, |1>):
//
//     H / hbar = 1/2 [ delta            Omega e^{-i phi} ]
//                    [ Omega e^{i phi}  -delta           ]
//
// with delta = omega_drive - omega_hyperfine (red detuning negative). The
// single-photon detuning Delta is stored signed; Omega_R = Omega1 Omega2 / 2 Delta
// carries its sign, so a red-detuned Raman pair has negative Omega_R. Only
// |Omega_R| enters transition probabilities. Spontaneous emission during the
// Raman pulse is neglected (|Delta| / Gamma ~ 7000 at the default settings).

#include <array>

#include "fortsim/qubit_state.hpp"
#include "fortsim/species.hpp"

namespace fortsim {

// Two-photon Raman drive through a far-detuned excited state.
class RamanDrive {
  public:
    // Rabi frequencies and detunings in rad/s. Throws std::invalid_argument
    // unless |delta_big| >= 100 * decay_rate (the adiabatic-elimination regime).
    RamanDrive(double omega1, double omega2, double delta_big,
               double delta_two_photon = 0.0,
               double decay_rate = AtomSpecies{}.d2_linewidth);

    // Symmetric beams (|Omega1| = |Omega2|) producing the requested Omega_R.
    static RamanDrive from_rabi(double omega_r, double delta_big,
                                double delta_two_photon = 0.0,
                                double decay_rate = AtomSpecies{}.d2_linewidth);

    double omega1() const { return omega1_; }
    double omega2() const { return omega2_; }
    double delta_big() const { return delta_big_; }
    double delta_two_photon() const { return delta_two_photon_; }
    double decay_rate() const { return decay_rate_; }
    double total_sideband_power() const { return total_sideband_power_; }
    bool light_shift_enabled() const { return light_shift_; }

    // Omega1 Omega2 / (2 Delta).
    double two_photon_rabi() const;

    // (Omega1^2 - Omega2^2) / (4 Delta) when enabled, otherwise exactly 0.
    double differential_light_shift() const;

    // delta plus the differential light shift; what the two-level model sees.
    double effective_detuning() const;

    RamanDrive with_two_photon_detuning(double delta) const;
    RamanDrive with_light_shift(bool enabled) const;
    // Informational only; Rabi frequencies are calibration inputs.
    RamanDrive with_sideband_power(double watts) const;

    bool operator==(const RamanDrive&) const = default;

  private:
    double omega1_;
    double omega2_;
    double delta_big_;
    double delta_two_photon_;
    double decay_rate_;
    double total_sideband_power_ = 45e-6;
    bool light_shift_ = false;
};

double two_photon_rabi(const RamanDrive& drive);

// Order-of-magnitude single-photon Rabi frequency Gamma * sqrt(I / 2 I_sat) for
// one beam of the given power and waist at its focus. Ignores the dipole matrix
// elements of the actual Raman path, so only the order of magnitude is
// meaningful.
double estimate_single_photon_rabi(double power, double waist,
                                   const AtomSpecies& species);

// 2x2 unitary acting on (c0, c1).
struct Propagator {
    Complex u00{1.0, 0.0};
    Complex u01{0.0, 0.0};
    Complex u10{0.0, 0.0};
    Complex u11{1.0, 0.0};

    QubitState apply(const QubitState& s) const {
        return {u00 * s.c0 + u01 * s.c1, u10 * s.c0 + u11 * s.c1};
    }
    // this * rhs: rhs acts first.
    Propagator after(const Propagator& rhs) const;
};

// Exact propagator for constant (omega_r, delta, phase) over duration t >= 0.
Propagator rotation(double omega_r, double delta, double phase, double t);

// From |0> with delta = 0: P1 = sin^2(Omega_R t / 2). With detuning:
// P1 = (Omega_R^2 / Omega'^2) sin^2(Omega' t / 2), Omega' = sqrt(Omega_R^2 + delta^2).
QubitState propagate(const QubitState& state, double omega_r, double delta,
                     double phase, double t);

// Duration of a pi/2 rotation, pi / (2 |Omega_R|).
double pi_over_two_time(double omega_r);

// Two ideal pi/2 pulses separated by free evolution T, with the fringe
// contrast decaying as exp(-T / T2):
//     P1 = 1/2 [1 + exp(-T/T2) cos(delta T)].
// t2 may be +infinity.
double ramsey_probability(double delta, double gap, double t2);

// Free-evolution gap at which the hard-pulse closed form matches a sequence of
// two square pi/2 pulses of Rabi frequency omega_r: T + 4 tau / pi, tau being
// the pi/2 time. Detuning during the pulses advances the fringe phase by that
// much extra.
double finite_pulse_effective_gap(double gap, double omega_r);

}  // namespace fortsim
