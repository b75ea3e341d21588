#pragma once

// Everything random: fluorescence counting, the normalization calibration,
// atom loading, trap loss and quasi-static dephasing.

#include <cstdint>

#include "fortsim/rng.hpp"

namespace fortsim {

// State-selective fluorescence detection of the F=2 atoms in one site.
struct DetectionModel {
    double photoelectron_rate = 2100.0;   // per atom, 1/s
    double exposure = 10e-3;              // s
    double background_rate = 0.0;         // 1/s
    // Half-width of the uniform multiplicative error on the calibration.
    double normalization_systematic = 0.10;
    // Atom number per shot drawn Poisson around the nominal load.
    bool poisson_loading = true;

    void validate() const;
    double counts_per_atom() const { return photoelectron_rate * exposure; }
    double background_counts() const { return background_rate * exposure; }
};

enum class DephasingMode {
    // Contrast exp(-T / T2), no sampling.
    exponential,
    // Per-shot static detuning drawn from a spread set by the temperature.
    quasi_static,
};

enum class SpreadShape { lorentzian, gaussian };

struct NoiseModel {
    DephasingMode dephasing = DephasingMode::exponential;
    double t2 = 870e-6;              // s
    SpreadShape spread_shape = SpreadShape::lorentzian;
    // Detuning spread per kelvin of atom temperature (rad/s/K). The spread is
    // the half-width for a Lorentzian and the standard deviation for a
    // Gaussian. The default puts the Lorentzian half-width at 1/T2 for 70 uK.
    double spread_per_kelvin = (1.0 / 870e-6) / 70e-6;
    double atom_temperature = 70e-6; // K
    double trap_lifetime = 0.780;    // 1/e, s

    void validate() const;
    // rad/s
    double detuning_spread() const { return spread_per_kelvin * atom_temperature; }
    // Ensemble-averaged Ramsey contrast at gap T in the active mode.
    double ensemble_contrast(double gap) const;
};

// Poisson photoelectron count with mean n * rate * exposure + background.
std::uint64_t simulate_counts(std::uint64_t n_atoms, const DetectionModel& model,
                              RngStream& rng);

// (counts - background) / (rate * exposure), clamped at 0.
double estimate_atoms(std::uint64_t counts, const DetectionModel& model);

// Multiplicative calibration error, uniform in [1 - s, 1 + s]. Drawn once
// per experiment.
double draw_calibration_scale(const DetectionModel& model, RngStream& rng);

// One shot: load atoms, transfer each with probability p_true, count the
// fluorescence and normalise by the (mis)calibrated full-transfer signal.
double measure_shot(double p_true, double mean_atoms, const DetectionModel& model,
                    double calibration_scale, RngStream& rng);

struct MeasuredFraction {
    double fraction = 0.0;
    // Standard error of the shot average (sample spread / sqrt(shots)).
    double shot_stderr = 0.0;
    // Calibration contribution, fraction * normalization_systematic.
    double systematic = 0.0;
};

// Average of n_shots independent shots. Can leave [0, 1] through noise.
MeasuredFraction measure_fraction(double p_true, int n_shots, double mean_atoms,
                                  const DetectionModel& model,
                                  double calibration_scale, RngStream& rng);

// exp(-t / lifetime).
double survival(double t, const NoiseModel& model);

// Requires quasi-static mode.
double sample_quasi_static_detuning(const NoiseModel& model, RngStream& rng);

}  // namespace fortsim
