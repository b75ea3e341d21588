#pragma once

// Nonlinear least squares for the three curve shapes in the analysis:
//
//   rabi            y = A sin^2(omega x / 2)
//   cosine_offset   y = B + C cos(omega x + phi)
//   exponential     y = C0 exp(-x / tau)
//
// Damped Gauss-Newton: each iteration solves the linearised problem by
// column-pivoted QR and halves the step (up to max_halvings times) until the
// residual sum of squares decreases. Points are weighted by 1/stderr^2 when
// every point carries a positive standard error, otherwise unweighted.
// Internally x is rescaled by max|x|, so results are invariant under a change
// of x units combined with the inverse rescaling of the parameters.

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fortsim/dataset.hpp"

namespace fortsim {

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FitParameter {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    // std_error combined in quadrature with a relative normalization systematic
    // for parameters that scale with the signal; equal to std_error otherwise.
    double std_error_with_systematic = 0.0;
    bool scales_with_signal = false;
};

struct FitResult {
    std::string model;
    std::vector<FitParameter> parameters;
    double rss = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    int points = 0;
    bool converged = false;

    const FitParameter& parameter(std::string_view name) const;
    double value(std::string_view name) const { return parameter(name).value; }
    double error(std::string_view name) const { return parameter(name).std_error; }
};

struct FitOptions {
    double relative_step_tolerance = 1e-10;
    double gradient_tolerance = 1e-12;
    double relative_rss_tolerance = 1e-12;
    int max_iterations = 200;
    int max_halvings = 30;
};

enum class SinusoidModel {
    rabi,           // parameters: amplitude, omega
    cosine_offset,  // parameters: offset, amplitude, omega, phase
};

// Fits one of the sinusoid models, seeded from the periodogram. omega is in
// rad per x unit. For cosine_offset the amplitude is reported non-negative
// and the phase wrapped into (-pi, pi].
// Throws FitError on fewer than 8 points, non-uniform spacing or constant data.
// Non-convergence is reported through FitResult::converged.
FitResult fit_sinusoid(std::span<const DataPoint> data, SinusoidModel model,
                       const FitOptions& options = {});
FitResult fit_sinusoid(const ScanDataset& data, SinusoidModel model,
                       const FitOptions& options = {});

// C0 exp(-x / tau); parameters: amplitude, decay_time. A log-linear fit seeds
// the nonlinear refinement. decay_time is +inf for a flat series.
// Throws FitError on fewer than 3 points or any non-positive y.
FitResult fit_exponential(std::span<const DataPoint> points,
                          const FitOptions& options = {});

struct PeriodogramPeak {
    double frequency = 0.0;   // cycles per x unit
    int bin = 0;
    double peak_to_mean = 0.0;
    bool low_confidence = false;
};

// Peak of the discrete power spectrum of the mean-removed series, excluding
// the zero bin; the lowest frequency wins ties. Flags the peak as low
// confidence when its power over the mean bin power is below
// periodogram_threshold(bins), the level white noise exceeds about 1% of the
// time.
// Throws FitError on fewer than 8 points, non-uniform spacing or constant data.
PeriodogramPeak periodogram_peak(std::span<const DataPoint> data);

double periodogram_threshold(int bins);

// Adds a relative normalization systematic in quadrature to the errors of
// signal-scaled parameters.
FitResult with_normalization_systematic(FitResult fit, double relative);

}  // namespace fortsim
