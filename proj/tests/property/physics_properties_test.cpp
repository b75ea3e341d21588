// Randomised checks of the model invariants. Each property draws its inputs
// from a fixed-seed generator so failures reproduce.

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

#include "fortsim/addressing.hpp"
#include "fortsim/dynamics.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/lambda_system.hpp"
#include "fortsim/optics.hpp"
#include "fortsim/pulse_sequence.hpp"
#include "fortsim/species.hpp"
#include "fortsim/units.hpp"
#include "oracles.hpp"

using namespace fortsim;

namespace {

constexpr int kTrials = 200;
constexpr double kOmega = kTwoPi * 1.36e6;

struct Gen {
    std::mt19937_64 engine;
    explicit Gen(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
};

}  // namespace

TEST(units_property, conversions_invert) {
    Gen g(1);
    for (int i = 0; i < kTrials; ++i) {
        const double f = g.log_uniform(1e-3, 1e12) * (i % 2 ? -1.0 : 1.0);
        EXPECT_NEAR(angular_to_hz(hz_to_angular(f)) / f, 1.0, 1e-15);
        const double k = g.log_uniform(1e-9, 1e3);
        EXPECT_NEAR(energy_to_temperature(temperature_to_energy(k)) / k, 1.0, 1e-15);
        const double b = g.log_uniform(1e-3, 1e4);
        EXPECT_NEAR(tesla_to_gauss(gauss_to_tesla(b)) / b, 1.0, 1e-15);
    }
}

TEST(species_property, instances_compare_equal) {
    EXPECT_EQ(AtomSpecies{}, AtomSpecies{});
}

TEST(optics_property, crosstalk_monotone_and_symmetric) {
    Gen g(2);
    for (int i = 0; i < kTrials; ++i) {
        const double w = g.uniform(1e-6, 10e-6);
        const double d = g.uniform(0.1e-6, 3.0 * w);
        const double step = 1e-3 * d;
        EXPECT_LT(crosstalk_ratio(d + step, w), crosstalk_ratio(d, w));
        EXPECT_GT(crosstalk_ratio(d, w * 1.001), crosstalk_ratio(d, w));
        EXPECT_EQ(crosstalk_ratio(-d, w), crosstalk_ratio(d, w));
    }
}

TEST(optics_property, intensity_integrates_to_power) {
    Gen g(3);
    for (int i = 0; i < 20; ++i) {
        const GaussianBeam b{g.log_uniform(1e-6, 1.0), g.uniform(1e-6, 20e-6), 780e-9, {}};
        const double z = g.uniform(-50e-6, 50e-6);
        // Radial Simpson over the library intensity.
        const double w = b.waist_at(z);
        const double r_max = 8.0 * w;
        const int n = 4000;
        const double h = r_max / n;
        double sum = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double r = k * h;
            const double wt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            sum += wt * 2.0 * kPi * r * beam_intensity(b, r, z);
        }
        EXPECT_NEAR(sum * h / 3.0 / b.power, 1.0, 1e-6);
    }
}

TEST(optics_property, trap_depth_linear_in_power) {
    Gen g(4);
    const AtomSpecies rb{};
    for (int i = 0; i < kTrials; ++i) {
        GaussianBeam b{g.uniform(1e-3, 0.2), g.uniform(1e-6, 5e-6),
                       g.uniform(900e-9, 1100e-9), {}};
        const double u1 = trap_depth(b, rb);
        const double k = g.uniform(0.1, 10.0);
        b.power *= k;
        EXPECT_NEAR(trap_depth(b, rb) / (k * u1), 1.0, 1e-13);
    }
}

TEST(dynamics_property, unitarity_over_random_sequences) {
    Gen g(5);
    for (int i = 0; i < kTrials; ++i) {
        PulseSequence seq;
        const int n = g.integer(1, 12);
        for (int k = 0; k < n; ++k) {
            if (g.integer(0, 1)) {
                seq.push_back(PulseSegment::drive(g.uniform(-2, 2) * kOmega,
                                                  g.uniform(-1, 1) * kOmega,
                                                  g.uniform(-kPi, kPi), g.uniform(0, 100e-6)));
            } else {
                seq.push_back(PulseSegment::free(g.uniform(-1, 1) * kTwoPi * 1e5,
                                                 g.uniform(0, 3e-3)));
            }
        }
        const double a = g.uniform(0, kTwoPi);
        const QubitState in{std::polar(std::cos(0.3 * a), a), std::sin(0.3 * a)};
        const QubitState out = run_sequence(in, seq);
        EXPECT_NEAR(std::norm(out.c0) + std::norm(out.c1), 1.0, 1e-12);
    }
}

TEST(dynamics_property, closed_form_matches_integration) {
    Gen g(6);
    for (int i = 0; i < 25; ++i) {
        const double w = g.uniform(0.2, 2.0) * kOmega;
        const double delta = g.uniform(-1.0, 1.0) * kOmega;
        const double phase = g.uniform(-kPi, kPi);
        const double t = g.uniform(0.0, 100e-6);
        const double gen_rabi = std::hypot(w, delta);
        const long steps = std::max(10L, static_cast<long>(gen_rabi * t / 0.01));
        const QubitState lib = propagate(QubitState::ground(), w, delta, phase, t);
        const auto ref = oracle::two_level_rk4(w, delta, phase, t, {1.0, 0.0}, steps);
        EXPECT_LT(std::abs(lib.c0 - ref[0]), 1e-8) << "t=" << t;
        EXPECT_LT(std::abs(lib.c1 - ref[1]), 1e-8) << "t=" << t;
    }
}

TEST(dynamics_property, hard_pulse_ramsey_equals_closed_form) {
    Gen g(7);
    for (int i = 0; i < kTrials; ++i) {
        const double delta = g.uniform(-1.0, 1.0) * kTwoPi * 50e3;
        const double gap = g.uniform(0.0, 3e-3);
        const QubitState out =
            run_sequence(QubitState::ground(), ramsey_sequence(kOmega, delta, gap, true));
        EXPECT_NEAR(out.p1(), ramsey_probability(delta, gap, INFINITY), 1e-13);
        EXPECT_NEAR(out.p1(), oracle::hard_pulse_ramsey_p1(delta, gap), 1e-13);
    }
}

TEST(dynamics_property, finite_pulse_ramsey_within_tolerance) {
    Gen g(8);
    for (int i = 0; i < kTrials; ++i) {
        const double delta = g.uniform(-1.0, 1.0) * kTwoPi * 50e3;
        const double gap = g.uniform(0.0, 3e-3);
        const QubitState out =
            run_sequence(QubitState::ground(), ramsey_sequence(kOmega, delta, gap, false));
        const double teff = finite_pulse_effective_gap(gap, kOmega);
        EXPECT_NEAR(out.p1(), ramsey_probability(delta, teff, INFINITY), 1e-3)
            << "delta=" << delta << " T=" << gap;
    }
}

TEST(dynamics_property, zero_light_shift_is_bit_identical) {
    Gen g(9);
    for (int i = 0; i < kTrials; ++i) {
        const double w = g.uniform(0.1, 3.0) * kOmega;
        const double delta = g.uniform(-1.0, 1.0) * kTwoPi * 100e3;
        const RamanDrive off = RamanDrive::from_rabi(w, -kTwoPi * 41e9, delta);
        const RamanDrive on = off.with_light_shift(true);
        ASSERT_EQ(on.differential_light_shift(), 0.0);
        ASSERT_EQ(on.effective_detuning(), off.effective_detuning());
        const double t = g.uniform(0.0, 50e-6);
        const QubitState a = propagate(QubitState::ground(), on.two_photon_rabi(),
                                       on.effective_detuning(), 0.0, t);
        const QubitState b = propagate(QubitState::ground(), off.two_photon_rabi(),
                                       off.effective_detuning(), 0.0, t);
        EXPECT_EQ(a.c0, b.c0);
        EXPECT_EQ(a.c1, b.c1);
    }
}

TEST(dynamics_property, lambda_system_effective_rabi_frequency) {
    // Extract Omega_R from the three-level population oscillation and compare
    // with Omega1 Omega2 / 2 Delta.
    Gen g(10);
    for (int i = 0; i < 3; ++i) {
        const double w = kTwoPi * g.uniform(200e6, 600e6);
        const double big = (i % 2 ? -1.0 : 1.0) * kTwoPi * g.uniform(4e9, 8e9);
        const RamanDrive d(w, w, big);
        const double omega_r = std::abs(d.two_photon_rabi());
        const double span = 2.0 * kTwoPi / omega_r;
        const int n = 40;
        std::vector<DataPoint> pts;
        LambdaState s;
        double t_prev = 0.0;
        for (int k = 0; k < n; ++k) {
            const double t = span * k / (n - 1);
            if (t > t_prev) s = lambda_propagate(s, d, t - t_prev, lambda_default_step(d));
            t_prev = t;
            pts.push_back({t, s.p1(), 0.0});
        }
        const auto fit = fit_sinusoid(pts, SinusoidModel::rabi);
        const double ratio = w / big;
        EXPECT_NEAR(fit.value("omega") / omega_r, 1.0, ratio * ratio + 1e-7);
    }
}

TEST(addressing_property, bound_scales_inversely) {
    Gen g(11);
    for (int i = 0; i < kTrials; ++i) {
        CrosstalkExperiment e;
        e.drive_rabi = g.uniform(0.1, 10.0) * kOmega;
        e.max_pulse_duration = g.uniform(1e-6, 1e-3);
        e.detection_sensitivity = g.uniform(0.01, 1.0);
        const double b = crosstalk_bound(e);
        const double k = g.uniform(0.5, 4.0);
        auto e2 = e;
        e2.drive_rabi *= k;
        EXPECT_NEAR(crosstalk_bound(e2) * k / b, 1.0, 1e-14);
        auto e3 = e;
        e3.max_pulse_duration *= k;
        EXPECT_NEAR(crosstalk_bound(e3) * k / b, 1.0, 1e-14);
    }
}

TEST(addressing_property, zeeman_antisymmetric_in_m) {
    const AtomSpecies rb{};
    for (int m = -1; m <= 1; ++m) {
        for (int mp = -2; mp <= 2; ++mp) {
            ZeemanConfig c;
            c.lower = {1, m};
            c.upper = {2, mp};
            ZeemanConfig flipped = c;
            flipped.lower.m = -m;
            flipped.upper.m = -mp;
            EXPECT_NEAR(zeeman_shift(flipped, rb), -zeeman_shift(c, rb), 1e-6);
        }
    }
}

TEST(addressing_property, site_drives_itself_unscaled) {
    Gen g(12);
    for (int i = 0; i < 50; ++i) {
        const double sep = g.uniform(0.0, 20e-6);
        const auto array = TrapArray::pair(sep);
        const GaussianBeam beam{45e-6, g.uniform(1e-6, 10e-6), 780e-9, {}};
        const RamanDrive drive = RamanDrive::from_rabi(g.uniform(0.1, 3.0) * kOmega, -kTwoPi * 41e9);
        for (const char* site : {"A", "B"}) {
            EXPECT_EQ(site_rabi(site_drive_map(array, beam, drive, site), site),
                      drive.two_photon_rabi());
        }
    }
}

TEST(addressing_property, gradient_monotone) {
    Gen g(13);
    for (int i = 0; i < kTrials; ++i) {
        const double c = g.log_uniform(1e-5, 0.5);
        const double d = g.uniform(1e-6, 20e-6);
        for (auto def : {CrosstalkDefinition::amplitude_ratio,
                         CrosstalkDefinition::probability_ratio}) {
            const double base = magnetic_gradient_required(kTwoPi * 1e6, c, d, 1.4e10, def);
            EXPECT_LT(magnetic_gradient_required(kTwoPi * 1e6, c * 1.01, d, 1.4e10, def), base);
            EXPECT_LT(magnetic_gradient_required(kTwoPi * 1e6, c, d * 1.01, 1.4e10, def), base);
        }
    }
}
