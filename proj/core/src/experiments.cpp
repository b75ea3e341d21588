#include "fortsim/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fortsim/io.hpp"

namespace fortsim {

namespace {

enum StreamTag : std::uint64_t {
    kRabiStream = 1,
    kCrosstalkStream = 2,
    kRamseyStream = 3,
    kContrastStream = 4,
};
constexpr std::uint64_t kCalibrationChild = ~std::uint64_t{0};

std::vector<double> sorted_grid(const std::vector<double>& grid) {
    std::vector<double> g = grid;
    std::sort(g.begin(), g.end());
    return g;
}

// Averages n shots of measure_shot, with a per-shot transfer probability.
MeasuredFraction measure_with(const std::function<double(RngStream&)>& probability,
                              const ScanConfig& cfg, double scale, RngStream& rng) {
    double mean = 0.0;
    double m2 = 0.0;
    const int n = cfg.shots_per_point;
    for (int i = 0; i < n; ++i) {
        const double p = probability(rng);
        const double x = measure_shot(p, cfg.atoms_per_site, cfg.detection, scale, rng);
        const double d = x - mean;
        mean += d / (i + 1);
        m2 += d * (x - mean);
    }
    MeasuredFraction out;
    out.fraction = mean;
    out.shot_stderr = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
    out.systematic = std::abs(mean) * cfg.detection.normalization_systematic;
    return out;
}

// Transfer probability seen by the detector: residual population never
// participates, trap loss optionally removes atoms before the probe ends.
double observed(const ScanConfig& cfg, double p) {
    double q = (1.0 - cfg.residual_population) * p;
    if (cfg.trap_loss_correction) q *= survival(cfg.detection.exposure, cfg.noise);
    return std::clamp(q, 0.0, 1.0);
}

void annotate(ScanDataset& data, const ScanConfig& cfg, const std::string& experiment,
              double scale) {
    data.metadata.emplace_back("experiment", experiment);
    data.metadata.emplace_back("seed", std::to_string(cfg.seed));
    data.metadata.emplace_back("noise", cfg.noise_enabled ? "on" : "off");
    data.metadata.emplace_back("shots_per_point", std::to_string(cfg.shots_per_point));
    if (cfg.noise_enabled) {
        data.metadata.emplace_back("calibration_scale", format_number(scale));
    }
}

double draw_scale(const ScanConfig& cfg, const RngStream& root) {
    if (!cfg.noise_enabled) return 1.0;
    RngStream calib = root.child(kCalibrationChild);
    return draw_calibration_scale(cfg.detection, calib);
}

// Pulse-duration scan at `site` with the beam on cfg.target_site.
ScanDataset duration_scan(const ScanConfig& cfg, const std::string& site,
                          const RngStream& root, const std::string& experiment) {
    const auto drives = site_drive_map(cfg.array, cfg.raman_beam, cfg.drive,
                                       cfg.target_site, cfg.pointing_offset);
    const double omega = site_rabi(drives, site);
    const double delta = cfg.drive.effective_detuning();
    const bool quasi_static = cfg.noise.dephasing == DephasingMode::quasi_static;
    const double scale = draw_scale(cfg, root);

    ScanDataset data;
    data.x_label = "pulse duration";
    data.x_unit = "us";
    data.x_unit_scale = 1e-6;
    annotate(data, cfg, experiment, scale);

    const auto grid = sorted_grid(cfg.grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double p = propagate(QubitState::ground(), omega, delta, 0.0, t).p1();
        if (!cfg.noise_enabled) {
            data.points.push_back({t, observed(cfg, p), 0.0});
            continue;
        }
        RngStream rng = root.child(i);
        const auto m = measure_with(
            [&](RngStream& r) {
                if (!quasi_static) return observed(cfg, p);
                const double offset = sample_quasi_static_detuning(cfg.noise, r);
                return observed(
                    cfg, propagate(QubitState::ground(), omega, delta + offset, 0.0, t).p1());
            },
            cfg, scale, rng);
        data.points.push_back({t, m.fraction, m.shot_stderr});
    }
    return data;
}

ScanDataset ramsey_scan(const ScanConfig& cfg, double gap, const RngStream& root,
                        double scale) {
    ScanDataset data;
    data.x_label = "two-photon detuning";
    data.x_unit = "kHz";
    data.x_unit_scale = kTwoPi * 1e3;
    annotate(data, cfg, "ramsey", scale);
    data.metadata.emplace_back("ramsey_gap_us", format_number(gap / 1e-6));

    const bool quasi_static = cfg.noise.dephasing == DephasingMode::quasi_static;
    const double contrast = cfg.noise.ensemble_contrast(gap);
    const auto grid = sorted_grid(cfg.grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double delta = grid[i];
        // Closed form with the active mode's ensemble contrast.
        const double p = 0.5 * (1.0 + contrast * std::cos(delta * gap));
        if (!cfg.noise_enabled) {
            data.points.push_back({delta, observed(cfg, p), 0.0});
            continue;
        }
        RngStream rng = root.child(i);
        const auto m = measure_with(
            [&](RngStream& r) {
                if (!quasi_static) return observed(cfg, p);
                const double offset = sample_quasi_static_detuning(cfg.noise, r);
                return observed(cfg, ramsey_probability(delta + offset, gap,
                                                        std::numeric_limits<double>::infinity()));
            },
            cfg, scale, rng);
        data.points.push_back({delta, m.fraction, m.shot_stderr});
    }
    return data;
}

RngStream ramsey_root(const ScanConfig& cfg, double gap) {
    return RngStream(cfg.seed, kRamseyStream).child(std::bit_cast<std::uint64_t>(gap));
}

}  // namespace

void ScanConfig::validate() const {
    if (grid.empty()) throw std::invalid_argument("ScanConfig: grid must be nonempty");
    auto g = sorted_grid(grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) throw std::invalid_argument("ScanConfig: grid values must be finite");
        if (i > 0 && g[i] == g[i - 1]) {
            throw std::invalid_argument("ScanConfig: duplicate grid value");
        }
    }
    if (variable == ScanVariable::pulse_duration && g.front() < 0.0) {
        throw std::invalid_argument("ScanConfig: pulse durations must be >= 0");
    }
    if (shots_per_point < 1) throw std::invalid_argument("ScanConfig: shots_per_point must be >= 1");
    if (!(atoms_per_site > 0.0 && std::isfinite(atoms_per_site))) {
        throw std::invalid_argument("ScanConfig: atoms_per_site must be > 0");
    }
    if (!(residual_population >= 0.0 && residual_population < 1.0)) {
        throw std::invalid_argument("ScanConfig: residual_population must be in [0, 1)");
    }
    raman_beam.validate();
    detection.validate();
    noise.validate();
    array.site(target_site);
    array.site(measured_site);
}

ScanDataset run_rabi_scan(const ScanConfig& cfg) {
    cfg.validate();
    if (cfg.variable != ScanVariable::pulse_duration) {
        throw std::invalid_argument("run_rabi_scan: scan variable must be pulse duration");
    }
    return duration_scan(cfg, cfg.measured_site, RngStream(cfg.seed, kRabiStream), "rabi");
}

CrosstalkScan run_crosstalk_scan(const ScanConfig& cfg, const std::string& monitored) {
    ScanConfig c = cfg;
    c.measured_site = monitored;
    c.validate();
    if (c.variable != ScanVariable::pulse_duration) {
        throw std::invalid_argument("run_crosstalk_scan: scan variable must be pulse duration");
    }
    if (monitored == c.target_site) {
        throw std::invalid_argument("run_crosstalk_scan: monitored site is the driven site");
    }
    const auto drives = site_drive_map(c.array, c.raman_beam, c.drive, c.target_site,
                                       c.pointing_offset);
    CrosstalkScan out;
    out.data = duration_scan(c, monitored, RngStream(c.seed, kCrosstalkStream), "crosstalk");
    out.driven_rabi = site_rabi(drives, c.target_site);
    out.monitored_rabi = site_rabi(drives, monitored);
    out.theoretical_ratio = out.monitored_rabi / out.driven_rabi;

    CrosstalkExperiment exp;
    exp.driven_site = c.target_site;
    exp.monitored_site = monitored;
    exp.max_pulse_duration = *std::max_element(c.grid.begin(), c.grid.end());
    exp.detection_sensitivity = c.detection_sensitivity;
    exp.drive_rabi = out.driven_rabi;
    out.bound = crosstalk_bound(exp);

    out.data.metadata.emplace_back("driven_site", c.target_site);
    out.data.metadata.emplace_back("monitored_site", monitored);
    out.data.metadata.emplace_back("crosstalk_theory", format_number(out.theoretical_ratio));
    out.data.metadata.emplace_back("crosstalk_bound", format_number(out.bound));
    return out;
}

ScanDataset run_ramsey_scan(const ScanConfig& cfg, double gap) {
    cfg.validate();
    if (cfg.variable != ScanVariable::two_photon_detuning) {
        throw std::invalid_argument("run_ramsey_scan: scan variable must be two-photon detuning");
    }
    if (!(gap >= 0.0 && std::isfinite(gap))) {
        throw std::invalid_argument("run_ramsey_scan: gap must be >= 0");
    }
    const RngStream root = ramsey_root(cfg, gap);
    return ramsey_scan(cfg, gap, root, draw_scale(cfg, root));
}

std::vector<double> ramsey_detuning_grid(double gap, double fringes, int points) {
    if (!(gap > 0.0) || !(fringes > 0.0) || points < 2) {
        throw std::invalid_argument("ramsey_detuning_grid: need gap > 0, fringes > 0, points >= 2");
    }
    const double half_span = 0.5 * fringes * kTwoPi / gap;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            -half_span + 2.0 * half_span * i / (points - 1);
    }
    return grid;
}

ContrastDecay run_contrast_decay(const ScanConfig& cfg, std::vector<double> gaps,
                                 const RamseyGridSpec& grid_spec) {
    if (gaps.size() < 3) throw std::invalid_argument("run_contrast_decay: need at least 3 gaps");
    std::sort(gaps.begin(), gaps.end());
    if (std::adjacent_find(gaps.begin(), gaps.end()) != gaps.end()) {
        throw std::invalid_argument("run_contrast_decay: duplicate gap");
    }

    ScanConfig base = cfg;
    base.variable = ScanVariable::two_photon_detuning;
    const RngStream root(cfg.seed, kContrastStream);
    const double scale = draw_scale(base, root);

    ContrastDecay out;
    out.gaps = gaps;
    out.contrasts.x_label = "Ramsey gap";
    out.contrasts.x_unit = "us";
    out.contrasts.x_unit_scale = 1e-6;
    annotate(out.contrasts, base, "contrast-decay", scale);
    out.converged = true;

    for (double gap : gaps) {
        ScanConfig c = base;
        c.grid = ramsey_detuning_grid(gap, grid_spec.fringes, grid_spec.points);
        c.validate();
        auto data = ramsey_scan(c, gap, ramsey_root(c, gap), scale);
        auto fit = fit_sinusoid(data, SinusoidModel::cosine_offset);
        if (c.noise_enabled) {
            fit = with_normalization_systematic(fit, c.detection.normalization_systematic);
        }
        out.converged = out.converged && fit.converged;
        const auto& amp = fit.parameter("amplitude");
        out.contrasts.points.push_back({gap, 2.0 * amp.value, 2.0 * amp.std_error});
        out.fringes.push_back(std::move(data));
        out.fringe_fits.push_back(std::move(fit));
    }
    out.decay_fit = fit_exponential(out.contrasts.points);
    if (base.noise_enabled) {
        out.decay_fit = with_normalization_systematic(
            out.decay_fit, base.detection.normalization_systematic);
    }
    out.converged = out.converged && out.decay_fit.converged;
    return out;
}

double figure_of_merit(double t2, double omega_r) {
    if (!(t2 > 0.0)) throw std::invalid_argument("figure_of_merit: t2 must be > 0");
    return t2 / pi_over_two_time(omega_r);
}

Headline compute_headline(const HeadlineInputs& in) {
    Headline h;
    h.pi_over_two_time = pi_over_two_time(in.omega_r);
    h.crosstalk_theory = crosstalk_ratio(in.separation, in.raman_waist);
    h.crosstalk_bound = crosstalk_bound(in.crosstalk);
    h.t2 = in.t2;
    h.figure_of_merit = figure_of_merit(in.t2, in.omega_r);
    h.trap_depth = trap_depth(in.fort_beam, in.species);
    h.gradient_required =
        magnetic_gradient_required(in.gradient_target_rabi, in.gradient_crosstalk,
                                   in.separation, in.gradient_dfdb, in.gradient_definition);
    h.clock_zeeman_shift = zeeman_shift(in.zeeman, in.species);
    ZeemanConfig stretched = in.zeeman;
    stretched.lower = {1, 1};
    stretched.upper = {2, 1};
    h.neighbour_zeeman_shift = zeeman_shift(stretched, in.species);
    return h;
}

}  // namespace fortsim
