#include "fortsim/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fortsim {

void DetectionModel::validate() const {
    if (!(photoelectron_rate >= 0.0 && std::isfinite(photoelectron_rate))) {
        throw std::invalid_argument("DetectionModel: photoelectron_rate must be >= 0");
    }
    if (!(exposure > 0.0 && std::isfinite(exposure))) {
        throw std::invalid_argument("DetectionModel: exposure must be > 0");
    }
    if (!(background_rate >= 0.0 && std::isfinite(background_rate))) {
        throw std::invalid_argument("DetectionModel: background_rate must be >= 0");
    }
    if (!(normalization_systematic >= 0.0 && normalization_systematic < 1.0)) {
        throw std::invalid_argument(
            "DetectionModel: normalization_systematic must be in [0, 1)");
    }
}

void NoiseModel::validate() const {
    if (!(t2 > 0.0)) throw std::invalid_argument("NoiseModel: t2 must be > 0");
    if (!(trap_lifetime > 0.0)) {
        throw std::invalid_argument("NoiseModel: trap_lifetime must be > 0");
    }
    if (!(atom_temperature >= 0.0 && std::isfinite(atom_temperature))) {
        throw std::invalid_argument("NoiseModel: atom_temperature must be >= 0");
    }
    if (!(spread_per_kelvin >= 0.0 && std::isfinite(spread_per_kelvin))) {
        throw std::invalid_argument("NoiseModel: spread_per_kelvin must be >= 0");
    }
}

double NoiseModel::ensemble_contrast(double gap) const {
    switch (dephasing) {
        case DephasingMode::exponential:
            return std::exp(-gap / t2);
        case DephasingMode::quasi_static: {
            const double w = detuning_spread();
            // Characteristic functions of the spread distribution.
            return spread_shape == SpreadShape::lorentzian
                       ? std::exp(-w * std::abs(gap))
                       : std::exp(-0.5 * w * w * gap * gap);
        }
    }
    return 1.0;
}

std::uint64_t simulate_counts(std::uint64_t n_atoms, const DetectionModel& model,
                              RngStream& rng) {
    model.validate();
    const double mean = static_cast<double>(n_atoms) * model.counts_per_atom() +
                        model.background_counts();
    return rng.poisson(mean);
}

double estimate_atoms(std::uint64_t counts, const DetectionModel& model) {
    model.validate();
    if (model.counts_per_atom() == 0.0) {
        throw std::invalid_argument("estimate_atoms: zero photoelectron rate");
    }
    const double signal = static_cast<double>(counts) - model.background_counts();
    return std::max(0.0, signal / model.counts_per_atom());
}

double draw_calibration_scale(const DetectionModel& model, RngStream& rng) {
    model.validate();
    const double s = model.normalization_systematic;
    return rng.uniform(1.0 - s, 1.0 + s);
}

double measure_shot(double p_true, double mean_atoms, const DetectionModel& model,
                    double calibration_scale, RngStream& rng) {
    if (!(p_true >= 0.0 && p_true <= 1.0)) {
        throw std::invalid_argument("measure_shot: p_true must be in [0, 1]");
    }
    if (!(mean_atoms > 0.0 && std::isfinite(mean_atoms))) {
        throw std::invalid_argument("measure_shot: mean_atoms must be > 0");
    }
    if (!(calibration_scale > 0.0)) {
        throw std::invalid_argument("measure_shot: calibration_scale must be > 0");
    }
    const std::uint64_t loaded = model.poisson_loading
                                     ? rng.poisson(mean_atoms)
                                     : static_cast<std::uint64_t>(std::llround(mean_atoms));
    const std::uint64_t bright = rng.binomial(loaded, p_true);
    const std::uint64_t counts = simulate_counts(bright, model, rng);
    const double reference = mean_atoms * model.counts_per_atom() * calibration_scale;
    return (static_cast<double>(counts) - model.background_counts()) / reference;
}

MeasuredFraction measure_fraction(double p_true, int n_shots, double mean_atoms,
                                  const DetectionModel& model,
                                  double calibration_scale, RngStream& rng) {
    if (n_shots < 1) {
        throw std::invalid_argument("measure_fraction: n_shots must be >= 1");
    }
    // Welford running mean/variance.
    double mean = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n_shots; ++i) {
        const double x = measure_shot(p_true, mean_atoms, model, calibration_scale, rng);
        const double d = x - mean;
        mean += d / (i + 1);
        m2 += d * (x - mean);
    }
    MeasuredFraction out;
    out.fraction = mean;
    out.shot_stderr = n_shots > 1 ? std::sqrt(m2 / (n_shots - 1) / n_shots) : 0.0;
    out.systematic = std::abs(mean) * model.normalization_systematic;
    return out;
}

double survival(double t, const NoiseModel& model) {
    if (!(t >= 0.0)) throw std::invalid_argument("survival: t must be >= 0");
    model.validate();
    return std::exp(-t / model.trap_lifetime);
}

double sample_quasi_static_detuning(const NoiseModel& model, RngStream& rng) {
    if (model.dephasing != DephasingMode::quasi_static) {
        throw std::logic_error(
            "sample_quasi_static_detuning: quasi-static dephasing not active");
    }
    model.validate();
    const double w = model.detuning_spread();
    return model.spread_shape == SpreadShape::lorentzian ? rng.cauchy(w)
                                                         : rng.normal(0.0, w);
}

}  // namespace fortsim
