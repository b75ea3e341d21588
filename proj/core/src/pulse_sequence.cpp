#include "fortsim/pulse_sequence.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fortsim/io.hpp"

namespace fortsim {

PulseSegment PulseSegment::drive(double omega_r, double delta, double phase,
                                 double duration) {
    PulseSegment s{SegmentKind::drive, duration, omega_r, delta, phase};
    s.validate();
    return s;
}

PulseSegment PulseSegment::free(double delta, double duration) {
    PulseSegment s{SegmentKind::free_evolution, duration, 0.0, delta, 0.0};
    s.validate();
    return s;
}

PulseSegment PulseSegment::from_drive(const RamanDrive& drive, double phase,
                                      double duration) {
    return PulseSegment::drive(drive.two_photon_rabi(), drive.effective_detuning(),
                               phase, duration);
}

void PulseSegment::validate() const {
    if (!(std::isfinite(duration) && duration >= 0.0)) {
        throw std::invalid_argument("PulseSegment: duration must be finite and >= 0");
    }
    if (!std::isfinite(omega_r) || !std::isfinite(delta) || !std::isfinite(phase)) {
        throw std::invalid_argument("PulseSegment: parameters must be finite");
    }
    if (kind == SegmentKind::free_evolution && (omega_r != 0.0 || phase != 0.0)) {
        throw std::invalid_argument(
            "PulseSegment: free evolution carries only a detuning");
    }
}

Propagator PulseSegment::propagator() const {
    validate();
    return rotation(omega_r, delta, phase, duration);
}

QubitState run_sequence(const QubitState& state, const PulseSequence& seq) {
    QubitState s = state;
    for (const auto& segment : seq) s = segment.propagator().apply(s);
    return s;
}

PulseSequence ramsey_sequence(double omega_r, double delta, double gap,
                              bool hard_pulses) {
    const double tau = pi_over_two_time(omega_r);
    const double pulse_delta = hard_pulses ? 0.0 : delta;
    return {PulseSegment::drive(omega_r, pulse_delta, 0.0, tau),
            PulseSegment::free(delta, gap),
            PulseSegment::drive(omega_r, pulse_delta, 0.0, tau)};
}

std::string format_pulse_sequence(const PulseSequence& seq) {
    std::string out;
    for (const auto& s : seq) {
        if (s.kind == SegmentKind::drive) {
            out += "DRIVE omega_r_hz=" + format_number(angular_to_hz(s.omega_r)) +
                   " delta_hz=" + format_number(angular_to_hz(s.delta)) +
                   " phase_rad=" + format_number(s.phase) +
                   " t_s=" + format_number(s.duration) + "\n";
        } else {
            out += "FREE delta_hz=" + format_number(angular_to_hz(s.delta)) +
                   " t_s=" + format_number(s.duration) + "\n";
        }
    }
    return out;
}

namespace {

[[noreturn]] void bad_line(int line_no, const std::string& why) {
    throw std::invalid_argument("pulse sequence line " + std::to_string(line_no) +
                                ": " + why);
}

}  // namespace

PulseSequence parse_pulse_sequence(std::string_view text) {
    PulseSequence seq;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;

        std::istringstream tokens{std::string(body)};
        std::string keyword;
        tokens >> keyword;
        std::map<std::string, double> fields;
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) bad_line(line_no, "expected key=value, got '" + token + "'");
            const std::string key = token.substr(0, eq);
            const auto value = parse_number(std::string_view(token).substr(eq + 1));
            if (!value) bad_line(line_no, "bad number for '" + key + "'");
            if (!fields.emplace(key, *value).second) bad_line(line_no, "duplicate key '" + key + "'");
        }

        auto take = [&](const char* key) {
            auto it = fields.find(key);
            if (it == fields.end()) bad_line(line_no, std::string("missing '") + key + "'");
            const double v = it->second;
            fields.erase(it);
            return v;
        };

        PulseSegment segment;
        try {
            if (keyword == "DRIVE") {
                const double omega = hz_to_angular(take("omega_r_hz"));
                const double delta = hz_to_angular(take("delta_hz"));
                const double phase = take("phase_rad");
                const double t = take("t_s");
                segment = PulseSegment::drive(omega, delta, phase, t);
            } else if (keyword == "FREE") {
                const double delta = hz_to_angular(take("delta_hz"));
                const double t = take("t_s");
                segment = PulseSegment::free(delta, t);
            } else {
                bad_line(line_no, "unknown segment kind '" + keyword + "'");
            }
        } catch (const std::invalid_argument& e) {
            if (std::string_view(e.what()).starts_with("pulse sequence line")) throw;
            bad_line(line_no, e.what());
        }
        if (!fields.empty()) bad_line(line_no, "unknown key '" + fields.begin()->first + "'");
        seq.push_back(segment);
    }
    return seq;
}

}  // namespace fortsim
