#include "fortsim/units.hpp"

namespace fortsim {

double hz_to_angular(double hz) { return kTwoPi * hz; }

double angular_to_hz(double rad_per_s) { return rad_per_s / kTwoPi; }

double energy_to_temperature(double joules) {
    return joules / constants::kBoltzmann;
}

double temperature_to_energy(double kelvin) {
    return kelvin * constants::kBoltzmann;
}

}  // namespace fortsim
