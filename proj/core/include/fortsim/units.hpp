#pragma once

// Physical constants and the handful of unit conversions used across fortsim.
//
// Convention: everything inside the library is SI with angular frequencies in
// rad/s. Ordinary frequencies (Hz, kHz, MHz, GHz) appear only at the file and
// command-line boundary. Magnetic fields are given in gauss at interfaces and
// field gradients are reported in T/cm.

#include <numbers>

namespace fortsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double kSpeedOfLight = 299'792'458.0;      // m/s
inline constexpr double kPlanck = 6.626'070'15e-34;         // J s
inline constexpr double kHbar = kPlanck / kTwoPi;           // J s
inline constexpr double kBoltzmann = 1.380'649e-23;         // J/K
inline constexpr double kBohrMagnetonOverH = 1.399'624'493'61e6;  // Hz/G
inline constexpr double kTeslaPerGauss = 1e-4;
}  // namespace constants

double hz_to_angular(double hz);
double angular_to_hz(double rad_per_s);

double energy_to_temperature(double joules);
double temperature_to_energy(double kelvin);

inline constexpr double gauss_to_tesla(double gauss) {
    return gauss * constants::kTeslaPerGauss;
}
inline constexpr double tesla_to_gauss(double tesla) {
    return tesla / constants::kTeslaPerGauss;
}
inline constexpr double tesla_per_m_to_tesla_per_cm(double t_per_m) {
    return t_per_m * 1e-2;
}

// Scale factors for the labelled interface units.
namespace unit {
inline constexpr double kKilo = 1e3;
inline constexpr double kMega = 1e6;
inline constexpr double kGiga = 1e9;
inline constexpr double kMilli = 1e-3;
inline constexpr double kMicro = 1e-6;
inline constexpr double kNano = 1e-9;
}  // namespace unit

}  // namespace fortsim
