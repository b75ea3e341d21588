#include "fortsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace fortsim {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void GaussianBeam::validate() const {
    if (!(std::isfinite(power) && power >= 0.0)) {
        throw std::invalid_argument("GaussianBeam: power must be >= 0");
    }
    if (!(std::isfinite(waist) && waist > 0.0)) {
        throw std::invalid_argument("GaussianBeam: waist must be > 0");
    }
    if (!(std::isfinite(wavelength) && wavelength > 0.0)) {
        throw std::invalid_argument("GaussianBeam: wavelength must be > 0");
    }
}

double GaussianBeam::rayleigh_range() const {
    return kPi * waist * waist / wavelength;
}

double GaussianBeam::waist_at(double z) const {
    const double zr = rayleigh_range();
    return waist * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double GaussianBeam::peak_intensity() const {
    return 2.0 * power / (kPi * waist * waist);
}

double beam_intensity(const GaussianBeam& beam, double r, double z) {
    beam.validate();
    const double wz = beam.waist_at(z);
    return 2.0 * beam.power / (kPi * wz * wz) * std::exp(-2.0 * r * r / (wz * wz));
}

double intensity_at(const GaussianBeam& beam, Vec2 point, double z) {
    return beam_intensity(beam, distance(point, beam.focus), z);
}

double dipole_potential(const GaussianBeam& beam, const AtomSpecies& species) {
    beam.validate();
    species.validate();
    if (!(beam.wavelength > species.d1_wavelength)) {
        throw std::invalid_argument(
            "dipole_potential: trap wavelength must be red of the D1 line");
    }
    using constants::kSpeedOfLight;
    const double omega_laser = kTwoPi * kSpeedOfLight / beam.wavelength;
    const double omega_d2 = kTwoPi * kSpeedOfLight / species.d2_wavelength;
    const double omega_d1 = kTwoPi * kSpeedOfLight / species.d1_wavelength;
    const double detuning_d2 = omega_laser - omega_d2;
    const double detuning_d1 = omega_laser - omega_d1;
    const double prefactor = kPi * kSpeedOfLight * kSpeedOfLight *
                             species.d2_linewidth /
                             (2.0 * omega_d2 * omega_d2 * omega_d2);
    return prefactor * (2.0 / detuning_d2 + 1.0 / detuning_d1) *
           beam.peak_intensity();
}

double trap_depth(const GaussianBeam& beam, const AtomSpecies& species) {
    return energy_to_temperature(std::abs(dipole_potential(beam, species)));
}

double crosstalk_ratio(double d, double w) {
    if (!(std::isfinite(w) && w > 0.0)) {
        throw std::invalid_argument("crosstalk_ratio: waist must be > 0");
    }
    if (!std::isfinite(d)) {
        throw std::invalid_argument("crosstalk_ratio: distance must be finite");
    }
    return std::exp(-2.0 * d * d / (w * w));
}

double relative_two_photon_coupling(const GaussianBeam& beam, Vec2 point) {
    return crosstalk_ratio(distance(point, beam.focus), beam.waist);
}

TrapArray::TrapArray(std::vector<TrapSite> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) {
        throw std::invalid_argument("TrapArray: at least one site required");
    }
    std::unordered_set<std::string> seen;
    for (const auto& s : sites_) {
        if (s.label.empty()) {
            throw std::invalid_argument("TrapArray: empty site label");
        }
        if (!seen.insert(s.label).second) {
            throw std::invalid_argument("TrapArray: duplicate site label '" +
                                        s.label + "'");
        }
    }
    if (sites_.size() > 1) {
        separation_ = distance(sites_[0].position, sites_[1].position);
        for (std::size_t i = 2; i < sites_.size(); ++i) {
            const double d = distance(sites_[i - 1].position, sites_[i].position);
            if (std::abs(d - separation_) > 1e-9 * std::max(separation_, 1e-12)) {
                throw std::invalid_argument(
                    "TrapArray: adjacent sites must be uniformly spaced");
            }
        }
    }
}

TrapArray TrapArray::linear(std::span<const std::string> labels,
                            double separation) {
    if (!(std::isfinite(separation) && separation >= 0.0)) {
        throw std::invalid_argument("TrapArray: separation must be >= 0");
    }
    std::vector<TrapSite> sites;
    sites.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sites.push_back({labels[i], {static_cast<double>(i) * separation, 0.0}});
    }
    return TrapArray(std::move(sites));
}

TrapArray TrapArray::pair(double separation) {
    const std::string labels[] = {"A", "B"};
    return linear(labels, separation);
}

const TrapSite& TrapArray::site(std::string_view label) const {
    auto it = std::find_if(sites_.begin(), sites_.end(),
                           [&](const TrapSite& s) { return s.label == label; });
    if (it == sites_.end()) {
        throw std::out_of_range("TrapArray: unknown site '" +
                                std::string(label) + "'");
    }
    return *it;
}

bool TrapArray::contains(std::string_view label) const {
    return std::any_of(sites_.begin(), sites_.end(),
                       [&](const TrapSite& s) { return s.label == label; });
}

GaussianBeam steer_beam(const TrapArray& array, std::string_view target,
                        const GaussianBeam& beam, Vec2 pointing_offset) {
    const Vec2 pos = array.site(target).position;
    GaussianBeam steered = beam;
    steered.focus = {pos.x + pointing_offset.x, pos.y + pointing_offset.y};
    return steered;
}

}  // namespace fortsim
