#pragma once

// Experiment runners: Rabi flopping on the addressed site, the crosstalk null
// measurement on the neighbour, Ramsey fringes, and the fringe-contrast decay
// that yields T2. Each runner evaluates the closed-form model on its grid and,
// with noise enabled, samples every point through the detection model.
//
// Randomness: every point draws from its own stream derived from
// (seed, experiment, point index in the sorted grid), and the normalization
// calibration is drawn once per experiment. Results therefore do not depend on
// the input grid order or on evaluation order.

#include <cstdint>
#include <string>
#include <vector>

#include "fortsim/addressing.hpp"
#include "fortsim/dataset.hpp"
#include "fortsim/dynamics.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/optics.hpp"
#include "fortsim/stochastics.hpp"

namespace fortsim {

enum class ScanVariable { pulse_duration, two_photon_detuning };

struct ScanConfig {
    ScanVariable variable = ScanVariable::pulse_duration;
    // SI values: seconds for pulse durations, rad/s for detunings. Sorted by
    // the runners; duplicates are rejected.
    std::vector<double> grid;
    int shots_per_point = 12;
    double atoms_per_site = 10.0;

    RamanDrive drive = RamanDrive::from_rabi(kTwoPi * 1.36e6, -kTwoPi * 41e9);
    TrapArray array = TrapArray::pair(8e-6);
    // Single effective Gaussian carrying both Raman sidebands; the wavelength
    // only sets the Rayleigh range.
    GaussianBeam raman_beam{45e-6, 4.1e-6, 780.24e-9, {}};
    std::string target_site = "A";
    std::string measured_site = "A";
    Vec2 pointing_offset{};
    double detection_sensitivity = kPi / 6.0;  // rad, crosstalk null floor

    DetectionModel detection{};
    NoiseModel noise{};
    bool noise_enabled = true;
    std::uint64_t seed = 1;

    // Fraction of atoms left outside |0> by state preparation; they never
    // take part in the drive.
    double residual_population = 0.0;
    // Multiply by the probability of surviving the probe exposure.
    bool trap_loss_correction = false;

    void validate() const;
};

// Rabi flopping versus pulse duration on cfg.measured_site with the beam on
// cfg.target_site.
ScanDataset run_rabi_scan(const ScanConfig& cfg);

struct CrosstalkScan {
    ScanDataset data;
    double driven_rabi = 0.0;       // rad/s at the addressed site
    double monitored_rabi = 0.0;    // rad/s at the monitored site
    double theoretical_ratio = 0.0; // monitored / driven
    double bound = 0.0;             // from the null result over the grid
};

// Pulse-duration scan of the monitored site while driving cfg.target_site.
CrosstalkScan run_crosstalk_scan(const ScanConfig& cfg, const std::string& monitored);

// Fringes versus two-photon detuning at gap T, for an ideal pi/2-T-pi/2
// sequence with the contrast set by the noise model.
ScanDataset run_ramsey_scan(const ScanConfig& cfg, double gap);

// Symmetric detuning grid (rad/s) covering `fringes` fringe periods at gap T.
std::vector<double> ramsey_detuning_grid(double gap, double fringes, int points);

struct RamseyGridSpec {
    double fringes = 3.0;
    int points = 181;  // 60 per fringe keeps the 3 ms contrast above shot noise
};

struct ContrastDecay {
    std::vector<double> gaps;
    std::vector<ScanDataset> fringes;
    std::vector<FitResult> fringe_fits;
    // x = gap (s), fraction = fitted contrast 2|C|, std_error from the fit.
    ScanDataset contrasts;
    FitResult decay_fit;
    bool converged = false;
};

// Ramsey scan per gap on the grid from `grid_spec` (cfg.grid is ignored),
// cosine-with-offset fit of each fringe, exponential fit of the contrasts.
// One calibration draw is shared by every gap. Needs at least 3 gaps.
ContrastDecay run_contrast_decay(const ScanConfig& cfg, std::vector<double> gaps,
                                 const RamseyGridSpec& grid_spec = {});

// T2 divided by the pi/2 time.
double figure_of_merit(double t2, double omega_r);

// Summary quantities with the inputs that produced them.
struct HeadlineInputs {
    double omega_r = kTwoPi * 1.36e6;
    double separation = 8e-6;
    double raman_waist = 4.1e-6;
    CrosstalkExperiment crosstalk{};
    double t2 = 870e-6;
    GaussianBeam fort_beam{80e-3, 2.7e-6, 1010e-9, {}};
    AtomSpecies species{};
    double gradient_target_rabi = kTwoPi * 1e6;
    double gradient_crosstalk = 1e-3;
    double gradient_dfdb = 1.4e10;  // Hz/T
    CrosstalkDefinition gradient_definition = CrosstalkDefinition::amplitude_ratio;
    ZeemanConfig zeeman{};
};

struct Headline {
    double pi_over_two_time = 0.0;   // s
    double crosstalk_theory = 0.0;
    double crosstalk_bound = 0.0;
    double t2 = 0.0;                 // s
    double figure_of_merit = 0.0;
    double trap_depth = 0.0;         // K
    double gradient_required = 0.0;  // T/cm
    double clock_zeeman_shift = 0.0; // Hz, first order
    double neighbour_zeeman_shift = 0.0;  // Hz, |1,+1> -> |2,+1>
};

Headline compute_headline(const HeadlineInputs& in);

}  // namespace fortsim
