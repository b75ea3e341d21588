#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fortsim/dynamics.hpp"

namespace fortsim {

enum class SegmentKind { drive, free_evolution };

// One constant-parameter piece of a pulse sequence. Angular units inside.
struct PulseSegment {
    SegmentKind kind = SegmentKind::free_evolution;
    double duration = 0.0;  // s
    double omega_r = 0.0;   // rad/s, zero for free evolution
    double delta = 0.0;     // rad/s, frame detuning
    double phase = 0.0;     // rad, zero for free evolution

    static PulseSegment drive(double omega_r, double delta, double phase,
                              double duration);
    static PulseSegment free(double delta, double duration);
    // Drive segment using Omega_R and the effective detuning of `drive`.
    static PulseSegment from_drive(const RamanDrive& drive, double phase,
                                   double duration);

    void validate() const;
    Propagator propagator() const;

    bool operator==(const PulseSegment&) const = default;
};

using PulseSequence = std::vector<PulseSegment>;

// Left-to-right composition: the first segment acts first.
QubitState run_sequence(const QubitState& state, const PulseSequence& seq);

// pi/2 - free(T) - pi/2 on resonance with the given frame detuning during
// the gap. When `hard_pulses` is true the pulses see no detuning.
PulseSequence ramsey_sequence(double omega_r, double delta, double gap,
                              bool hard_pulses);

// Line format, one segment per line:
//   DRIVE omega_r_hz=<f> delta_hz=<f> phase_rad=<f> t_s=<f>
//   FREE delta_hz=<f> t_s=<f>
// Blank lines and lines starting with '#' are skipped on input.
std::string format_pulse_sequence(const PulseSequence& seq);

// Throws std::invalid_argument naming the line on malformed input.
PulseSequence parse_pulse_sequence(std::string_view text);

}  // namespace fortsim
