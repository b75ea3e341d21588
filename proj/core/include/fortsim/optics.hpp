#pragma once

// Gaussian beam geometry for the dipole traps and the Raman addressing beam.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fortsim/species.hpp"

namespace fortsim {

// Transverse position in the focal plane, meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

double distance(Vec2 a, Vec2 b);

struct GaussianBeam {
    double power = 0.0;       // W
    double waist = 1e-6;      // 1/e^2 intensity radius at focus, m
    double wavelength = 1e-6; // m
    Vec2 focus{};             // transverse focus position, m

    void validate() const;
    double rayleigh_range() const;
    double waist_at(double z) const;
    double peak_intensity() const;

    bool operator==(const GaussianBeam&) const = default;
};

// I(r, z) = 2P / (pi w(z)^2) * exp(-2 r^2 / w(z)^2), r measured from the axis.
double beam_intensity(const GaussianBeam& beam, double r, double z);

// Intensity at an absolute transverse position, using the beam's focus as axis.
double intensity_at(const GaussianBeam& beam, Vec2 point, double z);

// Ground-state dipole potential at the focus of a linearly polarised,
// red-detuned beam, in joules (negative for an attractive trap). Uses the
// fine-structure-resolved rotating-wave expression with D2:D1 weights 2:1;
// hyperfine structure is ignored.
double dipole_potential(const GaussianBeam& beam, const AtomSpecies& species);

// |U| / k_B at the focus, kelvin. Throws std::invalid_argument if the beam is
// not red of the D1 line.
double trap_depth(const GaussianBeam& beam, const AtomSpecies& species);

// Ratio of two-photon Rabi frequencies at transverse distance d from the
// addressing-beam axis relative to on-axis: exp(-2 d^2 / w^2). Each beam's
// field amplitude falls as exp(-d^2/w^2) and the Raman coupling is a product
// of two amplitudes.
double crosstalk_ratio(double d, double w);

// Two-photon coupling of `beam` at `point` relative to its axis.
double relative_two_photon_coupling(const GaussianBeam& beam, Vec2 point);

struct TrapSite {
    std::string label;
    Vec2 position;

    bool operator==(const TrapSite&) const = default;
};

// Ordered set of trap sites with uniform spacing between neighbours.
class TrapArray {
  public:
    // Throws std::invalid_argument on duplicate labels or non-uniform spacing.
    explicit TrapArray(std::vector<TrapSite> sites);

    // Sites along x, first site at the origin.
    static TrapArray linear(std::span<const std::string> labels,
                            double separation);
    // The two-site "A"/"B" layout.
    static TrapArray pair(double separation);

    const std::vector<TrapSite>& sites() const { return sites_; }
    const TrapSite& site(std::string_view label) const;
    bool contains(std::string_view label) const;
    // Distance between adjacent sites; 0 for a single-site array.
    double separation() const { return separation_; }

  private:
    std::vector<TrapSite> sites_;
    double separation_ = 0.0;
};

// Retargets the addressing beam onto `target` (the acousto-optic deflector
// step). The beam's frequency shift is irrelevant to the two-photon process and
// not modelled. `pointing_offset` models a residual pointing error.
// Throws std::out_of_range for an unknown label.
GaussianBeam steer_beam(const TrapArray& array, std::string_view target,
                        const GaussianBeam& beam, Vec2 pointing_offset = {});

}  // namespace fortsim
