#include "fortsim_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fortsim/units.hpp"

namespace fortsim::cli {

namespace {

std::vector<KeySpec> build_registry() {
    using K = ValueKind;
    const double spread_hz_per_uk = (1.0 / 870e-6) / 70.0 / kTwoPi;
    return {
        {"seed", K::seed, "1", "master seed for every random stream"},
        {"noise", K::flag, "on", "sample shots through the detection model"},
        {"shots_per_point", K::count, "12", "experimental runs averaged per point"},
        {"atoms_per_site", K::positive, "10", "mean atoms loaded per site"},

        {"omega_r_mhz", K::positive, "1.36", "two-photon Rabi frequency Omega_R / 2pi"},
        {"single_photon_detuning_ghz", K::real, "-41", "Raman single-photon detuning Delta / 2pi"},
        {"two_photon_detuning_khz", K::real, "0", "two-photon detuning delta / 2pi in Rabi scans"},

        {"separation_um", K::positive, "8", "distance between the two trap sites"},
        {"raman_waist_um", K::positive, "4.1", "addressing-beam waist"},
        {"raman_wavelength_nm", K::positive, "780.24", "addressing-beam wavelength"},
        {"pointing_offset_um", K::real, "0", "addressing-beam pointing error along the array"},
        {"target_site", K::label, "A", "site the addressing beam is steered onto"},
        {"measured_site", K::label, "A", "site measured in Rabi and Ramsey scans"},
        {"monitored_site", K::label, "B", "neighbour measured in the crosstalk scan"},

        {"photoelectron_rate_per_s", K::nonnegative, "2100", "detected photoelectrons per atom"},
        {"exposure_ms", K::positive, "10", "probe exposure"},
        {"background_rate_per_s", K::nonnegative, "0", "background photoelectrons"},
        {"normalization_systematic", K::fraction, "0.1", "relative calibration uncertainty"},
        {"poisson_loading", K::flag, "on", "Poisson atom number per shot"},

        {"dephasing", K::choice, "exponential", "Ramsey dephasing model", {"exponential", "quasi_static"}},
        {"t2_us", K::positive, "870", "dephasing time"},
        {"spread_shape", K::choice, "lorentzian", "quasi-static detuning distribution", {"lorentzian", "gaussian"}},
        {"spread_hz_per_uk", K::nonnegative, format_number(spread_hz_per_uk),
         "quasi-static detuning spread per microkelvin"},
        {"atom_temperature_uk", K::nonnegative, "70", "atom temperature in the trap"},
        {"trap_lifetime_ms", K::positive, "780", "1/e trap lifetime"},
        {"residual_population", K::fraction, "0", "atoms left outside |0> by state preparation"},
        {"trap_loss_correction", K::flag, "off", "include trap loss during the probe"},

        {"duration_start_us", K::nonnegative, "0", "first Rabi pulse duration"},
        {"duration_stop_us", K::positive, "1.5", "last Rabi pulse duration"},
        {"duration_points", K::count, "40", "Rabi scan points"},
        {"crosstalk_max_pulse_us", K::positive, "43", "longest pulse in the crosstalk scan"},
        {"crosstalk_points", K::count, "44", "crosstalk scan points from 0"},
        {"detection_sensitivity_rad", K::positive, format_number(kPi / 6.0),
         "smallest detectable pulse area on the neighbour"},
        {"ramsey_gap_us", K::positive, "100", "Ramsey gap T"},
        {"ramsey_fringes", K::positive, "3", "fringe periods covered by the detuning grid"},
        {"ramsey_points", K::count, "181", "detuning points per Ramsey scan"},
        {"gaps_us", K::positive_list, "100,300,1000,3000", "Ramsey gaps of the contrast-decay run"},

        {"fort_power_mw", K::positive, "80", "trap beam power"},
        {"fort_waist_um", K::positive, "2.7", "trap beam waist"},
        {"fort_wavelength_nm", K::positive, "1010", "trap beam wavelength"},

        {"gradient_rabi_mhz", K::positive, "1", "Rabi frequency for the magnetic comparison"},
        {"gradient_crosstalk", K::positive, "0.001", "crosstalk to match with a field gradient"},
        {"gradient_dfdb_hz_per_t", K::positive, "1.4e10", "field sensitivity of the addressed transition"},
        {"crosstalk_definition", K::choice, "amplitude_ratio", "crosstalk measure for the gradient",
         {"amplitude_ratio", "probability_ratio"}},
        {"bias_field_g", K::nonnegative, "10.7", "bias magnetic field"},

        {"optical_pumping_ms", K::nonnegative, "8", "state preparation time (recorded only)"},
        {"mot_diffusion_wait_ms", K::nonnegative, "100", "MOT clearing wait (recorded only)"},
        {"probe_stark_shift_mhz", K::real, "40", "compensated probe AC Stark shift (recorded only)"},
    };
}

const KeySpec* find_key(std::string_view name) {
    const auto& keys = config_keys();
    auto it = std::find_if(keys.begin(), keys.end(),
                           [&](const KeySpec& k) { return k.name == name; });
    return it == keys.end() ? nullptr : &*it;
}

double require_number(const KeySpec& spec, std::string_view value) {
    const auto v = parse_number(value);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError(spec.name, "expected a number, got '" + std::string(value) + "'");
    }
    return *v;
}

std::string normalise(const KeySpec& spec, std::string_view raw) {
    const std::string_view value = trim(raw);
    switch (spec.kind) {
        case ValueKind::real:
            return format_number(require_number(spec, value));
        case ValueKind::positive: {
            const double v = require_number(spec, value);
            if (!(v > 0.0)) throw ConfigError(spec.name, "must be > 0");
            return format_number(v);
        }
        case ValueKind::nonnegative: {
            const double v = require_number(spec, value);
            if (!(v >= 0.0)) throw ConfigError(spec.name, "must be >= 0");
            return format_number(v == 0.0 ? 0.0 : v);
        }
        case ValueKind::fraction: {
            const double v = require_number(spec, value);
            if (!(v >= 0.0 && v < 1.0)) throw ConfigError(spec.name, "must be in [0, 1)");
            return format_number(v == 0.0 ? 0.0 : v);
        }
        case ValueKind::count:
        case ValueKind::seed: {
            std::uint64_t v = 0;
            const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (value.empty() || res.ec != std::errc{} ||
                res.ptr != value.data() + value.size()) {
                throw ConfigError(spec.name, "expected a non-negative integer, got '" +
                                                 std::string(value) + "'");
            }
            if (spec.kind == ValueKind::count && (v < 1 || v > 1'000'000)) {
                throw ConfigError(spec.name, "must be in [1, 1000000]");
            }
            return std::to_string(v);
        }
        case ValueKind::flag:
            if (value == "on" || value == "true" || value == "1") return "on";
            if (value == "off" || value == "false" || value == "0") return "off";
            throw ConfigError(spec.name, "expected on or off");
        case ValueKind::choice: {
            if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
                std::string opts;
                for (const auto& c : spec.choices) opts += (opts.empty() ? "" : ", ") + c;
                throw ConfigError(spec.name, "expected one of: " + opts);
            }
            return std::string(value);
        }
        case ValueKind::label:
            if (value.empty() || value.find_first_of(" \t,=#") != std::string_view::npos) {
                throw ConfigError(spec.name, "expected a site label without spaces");
            }
            return std::string(value);
        case ValueKind::positive_list: {
            std::string out;
            std::string_view rest = value;
            while (true) {
                const auto comma = rest.find(',');
                const double v = require_number(spec, rest.substr(0, comma));
                if (!(v > 0.0)) throw ConfigError(spec.name, "every entry must be > 0");
                if (!out.empty()) out += ',';
                out += format_number(v);
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
            return out;
        }
    }
    throw ConfigError(spec.name, "unhandled value kind");
}

// Only called on values already normalised by set().
std::uint64_t seed_like(const std::string& s) {
    std::uint64_t v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

template <typename F>
auto with_key(const char* key, F&& build) {
    try {
        return build();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
    }
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
    static const std::vector<KeySpec> keys = build_registry();
    return keys;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "rabi",           "crosstalk",      "ramsey",         "contrast-decay",
        "trap",           "gradient",       "reproduce-fig2", "reproduce-fig3",
        "reproduce-fig4", "headline",
    };
    return names;
}

RunConfig::RunConfig() {
    for (const auto& k : config_keys()) values_.emplace_back(k.name, normalise(k, k.default_value));
}

void RunConfig::set(std::string_view key, std::string_view value) {
    const KeySpec* spec = find_key(trim(key));
    if (!spec) throw ConfigError(std::string(trim(key)), "unknown key");
    const std::string canonical = normalise(*spec, value);
    for (auto& [k, v] : values_) {
        if (k == spec->name) v = canonical;
    }
}

void RunConfig::apply(const KeyValues& kv) {
    for (const auto& [k, v] : kv) set(k, v);
}

void RunConfig::apply_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("", "--set expects key=value, got '" + std::string(assignment) + "'");
    }
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

const std::string& RunConfig::get(std::string_view key) const {
    for (const auto& [k, v] : values_) {
        if (k == key) return v;
    }
    throw ConfigError(std::string(key), "unknown key");
}

double RunConfig::number(std::string_view key) const {
    return *parse_number(get(key));
}

std::int64_t RunConfig::integer(std::string_view key) const {
    return static_cast<std::int64_t>(seed_like(get(key)));
}

std::uint64_t RunConfig::seed() const { return seed_like(get("seed")); }

bool RunConfig::flag(std::string_view key) const { return get(key) == "on"; }

std::vector<double> RunConfig::list(std::string_view key) const {
    std::vector<double> out;
    std::string_view rest = get(key);
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(*parse_number(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_key_values(buf.str());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("", path + ": " + e.what());
    }
}

ScanConfig scan_config(const RunConfig& cfg) {
    ScanConfig sc;
    sc.shots_per_point = static_cast<int>(cfg.integer("shots_per_point"));
    sc.atoms_per_site = cfg.number("atoms_per_site");
    sc.drive = with_key("single_photon_detuning_ghz", [&] {
        return RamanDrive::from_rabi(kTwoPi * cfg.number("omega_r_mhz") * 1e6,
                                     kTwoPi * cfg.number("single_photon_detuning_ghz") * 1e9,
                                     kTwoPi * cfg.number("two_photon_detuning_khz") * 1e3);
    });
    sc.array = TrapArray::pair(cfg.number("separation_um") * 1e-6);
    sc.raman_beam = GaussianBeam{45e-6, cfg.number("raman_waist_um") * 1e-6,
                                 cfg.number("raman_wavelength_nm") * 1e-9, {}};
    sc.target_site = cfg.get("target_site");
    sc.measured_site = cfg.get("measured_site");
    if (!sc.array.contains(sc.target_site)) throw ConfigError("target_site", "no such site");
    if (!sc.array.contains(sc.measured_site)) throw ConfigError("measured_site", "no such site");
    if (!sc.array.contains(cfg.get("monitored_site"))) {
        throw ConfigError("monitored_site", "no such site");
    }
    sc.pointing_offset = Vec2{cfg.number("pointing_offset_um") * 1e-6, 0.0};
    sc.detection_sensitivity = cfg.number("detection_sensitivity_rad");

    sc.detection.photoelectron_rate = cfg.number("photoelectron_rate_per_s");
    sc.detection.exposure = cfg.number("exposure_ms") * 1e-3;
    sc.detection.background_rate = cfg.number("background_rate_per_s");
    sc.detection.normalization_systematic = cfg.number("normalization_systematic");
    sc.detection.poisson_loading = cfg.flag("poisson_loading");
    if (sc.detection.photoelectron_rate == 0.0) {
        throw ConfigError("photoelectron_rate_per_s", "must be > 0 to normalise the signal");
    }

    sc.noise.dephasing = cfg.get("dephasing") == "quasi_static" ? DephasingMode::quasi_static
                                                                : DephasingMode::exponential;
    sc.noise.t2 = cfg.number("t2_us") * 1e-6;
    sc.noise.spread_shape =
        cfg.get("spread_shape") == "gaussian" ? SpreadShape::gaussian : SpreadShape::lorentzian;
    sc.noise.spread_per_kelvin = kTwoPi * cfg.number("spread_hz_per_uk") / 1e-6;
    sc.noise.atom_temperature = cfg.number("atom_temperature_uk") * 1e-6;
    sc.noise.trap_lifetime = cfg.number("trap_lifetime_ms") * 1e-3;
    sc.residual_population = cfg.number("residual_population");
    sc.trap_loss_correction = cfg.flag("trap_loss_correction");

    sc.noise_enabled = cfg.flag("noise");
    sc.seed = cfg.seed();
    return sc;
}

namespace {

std::vector<double> linspace(double a, double b, std::int64_t n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

}  // namespace

std::vector<double> rabi_grid(const RunConfig& cfg) {
    const double a = cfg.number("duration_start_us");
    const double b = cfg.number("duration_stop_us");
    const auto n = cfg.integer("duration_points");
    if (!(b > a)) throw ConfigError("duration_stop_us", "must exceed duration_start_us");
    return linspace(a * 1e-6, b * 1e-6, n);
}

std::vector<double> crosstalk_grid(const RunConfig& cfg) {
    const auto n = cfg.integer("crosstalk_points");
    if (n < 2) throw ConfigError("crosstalk_points", "must be >= 2");
    return linspace(0.0, cfg.number("crosstalk_max_pulse_us") * 1e-6, n);
}

RamseyGridSpec ramsey_grid_spec(const RunConfig& cfg) {
    const auto n = cfg.integer("ramsey_points");
    if (n < 8) throw ConfigError("ramsey_points", "must be >= 8 for the fringe fit");
    return {cfg.number("ramsey_fringes"), static_cast<int>(n)};
}

HeadlineInputs headline_inputs(const RunConfig& cfg) {
    HeadlineInputs in;
    in.omega_r = kTwoPi * cfg.number("omega_r_mhz") * 1e6;
    in.separation = cfg.number("separation_um") * 1e-6;
    in.raman_waist = cfg.number("raman_waist_um") * 1e-6;
    in.crosstalk.driven_site = cfg.get("target_site");
    in.crosstalk.monitored_site = cfg.get("monitored_site");
    in.crosstalk.max_pulse_duration = cfg.number("crosstalk_max_pulse_us") * 1e-6;
    in.crosstalk.detection_sensitivity = cfg.number("detection_sensitivity_rad");
    in.crosstalk.drive_rabi = in.omega_r;
    in.t2 = cfg.number("t2_us") * 1e-6;
    in.fort_beam = GaussianBeam{cfg.number("fort_power_mw") * 1e-3,
                                cfg.number("fort_waist_um") * 1e-6,
                                cfg.number("fort_wavelength_nm") * 1e-9, {}};
    if (!(in.fort_beam.wavelength > in.species.d1_wavelength)) {
        throw ConfigError("fort_wavelength_nm", "trap beam must be red of the D1 line");
    }
    in.gradient_target_rabi = kTwoPi * cfg.number("gradient_rabi_mhz") * 1e6;
    in.gradient_crosstalk = cfg.number("gradient_crosstalk");
    if (!(in.gradient_crosstalk < 1.0)) throw ConfigError("gradient_crosstalk", "must be < 1");
    in.gradient_dfdb = cfg.number("gradient_dfdb_hz_per_t");
    in.gradient_definition = cfg.get("crosstalk_definition") == "probability_ratio"
                                 ? CrosstalkDefinition::probability_ratio
                                 : CrosstalkDefinition::amplitude_ratio;
    in.zeeman.bias_field_gauss = cfg.number("bias_field_g");
    return in;
}

}  // namespace fortsim::cli
