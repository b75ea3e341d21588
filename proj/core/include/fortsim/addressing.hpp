#pragma once

// Site-selective addressing: crosstalk bounds, Zeeman isolation of the clock
// transition, and the field gradient a magnetic addressing scheme would need
// to match a given optical crosstalk.

#include <string>
#include <string_view>
#include <vector>

#include "fortsim/dynamics.hpp"
#include "fortsim/optics.hpp"
#include "fortsim/species.hpp"

namespace fortsim {

// A null measurement on the monitored site: no excitation observed for drive
// pulses up to max_pulse_duration, with a detection floor expressed as a
// pulse area.
struct CrosstalkExperiment {
    std::string driven_site = "A";
    std::string monitored_site = "B";
    double max_pulse_duration = 43e-6;          // s
    double detection_sensitivity = kPi / 6.0;   // rad
    double drive_rabi = kTwoPi * 1.36e6;        // rad/s

    void validate() const;
};

// Smallest Rabi-frequency ratio the null result can exclude:
// sensitivity / (|drive_rabi| * max_pulse_duration).
double crosstalk_bound(const CrosstalkExperiment& exp);

struct HyperfineLevel {
    int f = 1;
    int m = 0;

    bool operator==(const HyperfineLevel&) const = default;
};

struct ZeemanConfig {
    double bias_field_gauss = 10.7;
    HyperfineLevel lower{1, 0};
    HyperfineLevel upper{2, 0};

    void validate() const;
};

// First-order shift of the lower -> upper transition frequency, Hz:
// (g_F' m' - g_F m) (mu_B / h) B. Only F = 1 and F = 2 are known levels.
// Second-order shifts are not modelled.
double zeeman_shift(const ZeemanConfig& cfg, const AtomSpecies& species);

enum class CrosstalkDefinition {
    // Neighbour coupling ratio Omega / delta.
    amplitude_ratio,
    // Off-resonant excitation probability (Omega / delta)^2.
    probability_ratio,
};

// Field gradient (T/cm) that detunes a neighbouring site at distance d far
// enough that a drive of Rabi frequency target_rabi produces at most the
// given crosstalk there. dfdb is the transition's field sensitivity in Hz/T.
// Throws std::invalid_argument unless all inputs are positive and
// crosstalk < 1.
double magnetic_gradient_required(
    double target_rabi, double crosstalk, double d, double dfdb,
    CrosstalkDefinition definition = CrosstalkDefinition::amplitude_ratio);

struct SiteDrive {
    std::string label;
    double omega_r = 0.0;  // rad/s
    double distance = 0.0; // from the steered beam axis, m

    bool operator==(const SiteDrive&) const = default;
};

// Effective Omega_R at every site once the addressing beam is steered onto
// `target`, in array order.
std::vector<SiteDrive> site_drive_map(const TrapArray& array,
                                      const GaussianBeam& beam,
                                      const RamanDrive& drive,
                                      std::string_view target,
                                      Vec2 pointing_offset = {});

// Convenience lookup into a site_drive_map result.
double site_rabi(const std::vector<SiteDrive>& map, std::string_view label);

}  // namespace fortsim
