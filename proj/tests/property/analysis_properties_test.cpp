// Invariants of the random streams, the fitter and the experiment runners.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

#include "fortsim/experiments.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/io.hpp"
#include "fortsim/stochastics.hpp"
#include "oracles.hpp"

using namespace fortsim;

namespace {

constexpr double kOmega = kTwoPi * 1.36e6;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

double model(SinusoidModel m, const std::vector<double>& p, double x) {
    if (m == SinusoidModel::rabi) {
        const double s = std::sin(0.5 * p[1] * x);
        return p[0] * s * s;
    }
    return p[0] + p[1] * std::cos(p[2] * x + p[3]);
}

}  // namespace

TEST(rng_property, identical_keys_give_identical_draws) {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, ~0ULL}) {
        for (std::uint64_t idx : {0ULL, 7ULL, 1ULL << 40}) {
            RngStream a(seed, idx);
            RngStream b(seed, idx);
            for (int i = 0; i < 100; ++i) {
                ASSERT_EQ(a.next_u64(), b.next_u64());
                ASSERT_EQ(a.poisson(21.0), b.poisson(21.0));
                ASSERT_EQ(a.normal(0, 1), b.normal(0, 1));
            }
        }
    }
}

TEST(rng_property, poisson_mean_and_variance) {
    for (double mean : {0.5, 21.0, 210.0}) {
        RngStream rng(11, static_cast<std::uint64_t>(mean * 10));
        std::vector<double> xs(100000);
        for (auto& x : xs) x = static_cast<double>(rng.poisson(mean));
        const auto m = oracle::moments(xs);
        EXPECT_NEAR(m.mean / mean, 1.0, 0.01);
        EXPECT_NEAR(m.variance / mean, 1.0, 0.01 + 3.0 * std::sqrt(2.0 / xs.size()));
    }
}

TEST(stochastics_property, detection_counts_match_rate_times_exposure) {
    const DetectionModel det{};
    for (std::uint64_t n : {1ULL, 10ULL}) {
        RngStream rng(5, n);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = static_cast<double>(simulate_counts(n, det, rng));
        const auto m = oracle::moments(xs);
        const double expected = n * 2100.0 * 10e-3;
        EXPECT_NEAR(m.mean / expected, 1.0, 0.01);
        EXPECT_NEAR(m.variance / expected, 1.0, 0.02);
    }
}

TEST(stochastics_property, measure_fraction_unbiased_without_systematic) {
    const DetectionModel det{};
    for (double p : {0.0, 0.13, 0.5, 0.87, 1.0}) {
        RngStream rng(17, static_cast<std::uint64_t>(p * 100));
        const int shots = 100000;
        const auto m = measure_fraction(p, shots, 10.0, det, 1.0, rng);
        const double sigma = std::max(m.shot_stderr, 1e-12);
        EXPECT_LE(std::abs(m.fraction - p), 3.0 * sigma + 1e-12) << "p=" << p;
    }
}

TEST(stochastics_property, exponential_contrast_is_exact) {
    NoiseModel nm;
    for (double gap : {0.0, 1e-4, 3e-4, 1e-3, 3e-3}) {
        EXPECT_EQ(nm.ensemble_contrast(gap), std::exp(-gap / nm.t2));
    }
}

TEST(fit_property, sinusoid_round_trip) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const bool rabi = trial % 2 == 0;
        const auto m = rabi ? SinusoidModel::rabi : SinusoidModel::cosine_offset;
        std::vector<double> p;
        const double periods = 1.5 + 4.0 * u(gen);
        const double x_max = 1e-6 + 1e-5 * u(gen);
        const double omega = kTwoPi * periods / x_max;
        if (rabi) {
            p = {0.5 + 0.5 * u(gen), omega};
        } else {
            p = {0.3 + 0.4 * u(gen), 0.1 + 0.3 * u(gen), omega, (2.0 * u(gen) - 1.0) * 3.0};
        }
        std::vector<DataPoint> pts;
        for (double x : linspace(0.0, x_max, 41)) pts.push_back({x, model(m, p, x), 0.0});
        const auto fit = fit_sinusoid(pts, m);
        ASSERT_TRUE(fit.converged) << trial;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double v = fit.parameters[k].value;
            if (fit.parameters[k].name == "phase") {
                EXPECT_NEAR(v, p[k], 1e-6) << trial;
            } else {
                EXPECT_NEAR(v / p[k], 1.0, 1e-6) << trial << ' ' << fit.parameters[k].name;
            }
        }
    }
}

TEST(fit_property, exponential_round_trip) {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double c0 = 0.2 + u(gen);
        const double tau = 1e-4 * std::exp(4.0 * u(gen));
        std::vector<DataPoint> pts;
        for (double x : {0.3 * tau, tau, 2.0 * tau, 4.0 * tau}) {
            pts.push_back({x, c0 * std::exp(-x / tau), 0.0});
        }
        const auto fit = fit_exponential(pts);
        EXPECT_NEAR(fit.value("amplitude") / c0, 1.0, 1e-6);
        EXPECT_NEAR(fit.value("decay_time") / tau, 1.0, 1e-6);
    }
}

TEST(fit_property, rss_never_increases) {
    // The fit after k iterations is a prefix of the fit after k+1.
    std::mt19937_64 gen(23);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DataPoint> pts;
        for (double x : linspace(0.0, 1.5e-6, 40)) {
            const double s = std::sin(0.5 * kOmega * x);
            pts.push_back({x, s * s + noise(gen), 0.0});
        }
        const auto full = fit_sinusoid(pts, SinusoidModel::rabi);
        double prev = INFINITY;
        for (int k = 1; k <= full.iterations; ++k) {
            FitOptions opt;
            opt.max_iterations = k;
            const double rss = fit_sinusoid(pts, SinusoidModel::rabi, opt).rss;
            EXPECT_LE(rss, prev) << "trial " << trial << " iteration " << k;
            prev = rss;
        }
    }
}

TEST(fit_property, invariant_under_unit_rescaling) {
    std::mt19937_64 gen(24);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<DataPoint> s, us, pow2;
    for (double x : linspace(0.0, 1.5e-6, 40)) {
        const double sn = std::sin(0.5 * kOmega * x);
        const double y = sn * sn + noise(gen);
        s.push_back({x, y, 0.0});
        us.push_back({x * 1e6, y, 0.0});
        pow2.push_back({x * 1024.0, y, 0.0});
    }
    const auto a = fit_sinusoid(s, SinusoidModel::rabi);
    // A power-of-two rescaling leaves the normalised problem bit-identical.
    const auto b = fit_sinusoid(pow2, SinusoidModel::rabi);
    EXPECT_EQ(b.value("omega"), a.value("omega") / 1024.0);
    EXPECT_EQ(b.value("amplitude"), a.value("amplitude"));
    // 1e-6 is not representable, so seconds -> microseconds agrees to the
    // step tolerance of the fit rather than bitwise.
    const auto c = fit_sinusoid(us, SinusoidModel::rabi);
    EXPECT_NEAR(c.value("omega") / (a.value("omega") * 1e-6), 1.0, 1e-9);
    EXPECT_NEAR(c.value("amplitude") / a.value("amplitude"), 1.0, 1e-9);

    std::vector<DataPoint> e_s, e_us, e_pow2;
    for (double x : {100e-6, 300e-6, 1e-3, 3e-3}) {
        const double y = std::exp(-x / 870e-6) * (1.0 + noise(gen));
        e_s.push_back({x, y, 0.0});
        e_us.push_back({x * 1e6, y, 0.0});
        e_pow2.push_back({x * 1024.0, y, 0.0});
    }
    const double tau = fit_exponential(e_s).value("decay_time");
    EXPECT_EQ(fit_exponential(e_pow2).value("decay_time"), tau * 1024.0);
    EXPECT_NEAR(fit_exponential(e_us).value("decay_time") / (tau * 1e6), 1.0, 1e-9);
}

TEST(experiment_property, noiseless_equals_dynamics_bit_for_bit) {
    ScanConfig cfg;
    cfg.grid = linspace(0.0, 1.5e-6, 40);
    cfg.noise_enabled = false;
    const auto data = run_rabi_scan(cfg);
    for (const auto& p : data.points) {
        EXPECT_EQ(p.fraction, propagate(QubitState::ground(), cfg.drive.two_photon_rabi(),
                                        cfg.drive.effective_detuning(), 0.0, p.x)
                                  .p1());
    }
    cfg.variable = ScanVariable::two_photon_detuning;
    cfg.grid = ramsey_detuning_grid(300e-6, 3, 61);
    const auto r = run_ramsey_scan(cfg, 300e-6);
    for (const auto& p : r.points) {
        EXPECT_EQ(p.fraction, ramsey_probability(p.x, 300e-6, cfg.noise.t2));
    }
}

TEST(experiment_property, shot_noise_converges_to_model) {
    ScanConfig cfg;
    cfg.variable = ScanVariable::two_photon_detuning;
    cfg.grid = ramsey_detuning_grid(300e-6, 1, 9);
    cfg.shots_per_point = 10000;
    cfg.detection.normalization_systematic = 0.0;
    const auto noisy = run_ramsey_scan(cfg, 300e-6);
    cfg.noise_enabled = false;
    const auto exact = run_ramsey_scan(cfg, 300e-6);
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.points.size(); ++i) {
        worst = std::max(worst, std::abs(noisy.points[i].fraction - exact.points[i].fraction));
    }
    EXPECT_LT(worst, 0.01);
}

TEST(experiment_property, ramsey_grid_order_invariance) {
    ScanConfig cfg;
    cfg.variable = ScanVariable::two_photon_detuning;
    cfg.grid = ramsey_detuning_grid(100e-6, 3, 61);
    const auto a = run_ramsey_scan(cfg, 100e-6);
    std::reverse(cfg.grid.begin(), cfg.grid.end());
    EXPECT_EQ(run_ramsey_scan(cfg, 100e-6), a);
}

TEST(experiment_property, reruns_are_byte_identical) {
    ScanConfig cfg;
    cfg.grid = linspace(0.0, 1.5e-6, 40);
    cfg.seed = 1234567;
    EXPECT_EQ(dataset_to_csv(run_rabi_scan(cfg)), dataset_to_csv(run_rabi_scan(cfg)));
    const auto d1 = run_contrast_decay(cfg, {100e-6, 300e-6, 1e-3, 3e-3});
    const auto d2 = run_contrast_decay(cfg, {100e-6, 300e-6, 1e-3, 3e-3});
    EXPECT_EQ(dataset_to_csv(d1.contrasts), dataset_to_csv(d2.contrasts));
}

TEST(experiment_property, crosstalk_sites_swapped_statistically_identical) {
    // Seed-paired: different seeds for the two orientations, compare means.
    ScanConfig ab;
    ab.grid = linspace(0.0, 43e-6, 44);
    ab.array = TrapArray::pair(4e-6);
    ab.shots_per_point = 200;
    ab.seed = 3;
    ScanConfig ba = ab;
    ba.target_site = "B";
    ba.measured_site = "B";
    ba.seed = 4;
    const auto x = run_crosstalk_scan(ab, "B").data.points;
    const auto y = run_crosstalk_scan(ba, "A").data.points;
    double mx = 0.0, my = 0.0, var = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i].fraction;
        my += y[i].fraction;
        var += x[i].std_error * x[i].std_error + y[i].std_error * y[i].std_error;
    }
    // Calibration draws differ by up to 20% between the two runs.
    EXPECT_LT(std::abs(mx - my), 4.0 * std::sqrt(var) + 0.2 * std::max(mx, my));
}

TEST(experiment_property, quasi_static_doubling_spread_halves_t2) {
    for (bool noise : {false, true}) {
        ScanConfig cfg;
        cfg.noise.dephasing = DephasingMode::quasi_static;
        cfg.noise_enabled = noise;
        cfg.shots_per_point = 200;
        // Gaps short enough that the faster decay stays above the shot-noise floor.
        const std::vector<double> gaps{50e-6, 100e-6, 200e-6, 400e-6};
        const double t2a = run_contrast_decay(cfg, gaps).decay_fit.value("decay_time");
        cfg.noise.atom_temperature *= 2.0;
        const double t2b = run_contrast_decay(cfg, gaps).decay_fit.value("decay_time");
        EXPECT_NEAR(t2b / t2a, 0.5, 0.025) << (noise ? "noisy" : "noiseless");
    }
}
