#include "fortsim/addressing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fortsim {

void CrosstalkExperiment::validate() const {
    if (!(detection_sensitivity > 0.0 && detection_sensitivity <= kPi)) {
        throw std::invalid_argument(
            "CrosstalkExperiment: detection_sensitivity must be in (0, pi]");
    }
    if (!(std::isfinite(max_pulse_duration) && max_pulse_duration > 0.0)) {
        throw std::invalid_argument(
            "CrosstalkExperiment: max_pulse_duration must be > 0");
    }
    if (!std::isfinite(drive_rabi) || drive_rabi == 0.0) {
        throw std::invalid_argument(
            "CrosstalkExperiment: drive_rabi must be nonzero");
    }
}

double crosstalk_bound(const CrosstalkExperiment& exp) {
    exp.validate();
    return exp.detection_sensitivity /
           (std::abs(exp.drive_rabi) * exp.max_pulse_duration);
}

namespace {

void validate_level(const HyperfineLevel& level) {
    if (level.f != 1 && level.f != 2) {
        throw std::invalid_argument("ZeemanConfig: F must be 1 or 2");
    }
    if (std::abs(level.m) > level.f) {
        throw std::invalid_argument("ZeemanConfig: |m| must not exceed F");
    }
}

double g_factor(const HyperfineLevel& level, const AtomSpecies& species) {
    return level.f == 1 ? species.g_f_lower : species.g_f_upper;
}

}  // namespace

void ZeemanConfig::validate() const {
    if (!std::isfinite(bias_field_gauss)) {
        throw std::invalid_argument("ZeemanConfig: bias field must be finite");
    }
    validate_level(lower);
    validate_level(upper);
}

double zeeman_shift(const ZeemanConfig& cfg, const AtomSpecies& species) {
    cfg.validate();
    const double dm = g_factor(cfg.upper, species) * cfg.upper.m -
                      g_factor(cfg.lower, species) * cfg.lower.m;
    return dm * species.bohr_magneton_over_h * cfg.bias_field_gauss;
}

double magnetic_gradient_required(double target_rabi, double crosstalk, double d,
                                  double dfdb, CrosstalkDefinition definition) {
    if (!(target_rabi > 0.0 && crosstalk > 0.0 && d > 0.0 && dfdb > 0.0)) {
        throw std::invalid_argument(
            "magnetic_gradient_required: inputs must be positive");
    }
    if (!(crosstalk < 1.0)) {
        throw std::invalid_argument(
            "magnetic_gradient_required: crosstalk must be < 1");
    }
    const double rabi_hz = angular_to_hz(target_rabi);
    const double required_detuning_hz =
        definition == CrosstalkDefinition::amplitude_ratio
            ? rabi_hz / crosstalk
            : rabi_hz / std::sqrt(crosstalk);
    const double tesla_per_m = required_detuning_hz / (dfdb * d);
    return tesla_per_m_to_tesla_per_cm(tesla_per_m);
}

std::vector<SiteDrive> site_drive_map(const TrapArray& array,
                                      const GaussianBeam& beam,
                                      const RamanDrive& drive,
                                      std::string_view target,
                                      Vec2 pointing_offset) {
    const GaussianBeam steered = steer_beam(array, target, beam, pointing_offset);
    const double omega_r = drive.two_photon_rabi();
    std::vector<SiteDrive> out;
    out.reserve(array.sites().size());
    for (const auto& site : array.sites()) {
        const double d = distance(site.position, steered.focus);
        out.push_back({site.label, omega_r * crosstalk_ratio(d, steered.waist), d});
    }
    return out;
}

double site_rabi(const std::vector<SiteDrive>& map, std::string_view label) {
    auto it = std::find_if(map.begin(), map.end(),
                           [&](const SiteDrive& s) { return s.label == label; });
    if (it == map.end()) {
        throw std::out_of_range("site_rabi: unknown site '" + std::string(label) + "'");
    }
    return it->omega_r;
}

}  // namespace fortsim
