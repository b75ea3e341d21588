#include "fortsim_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "fortsim/addressing.hpp"
#include "fortsim/experiments.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/io.hpp"
#include "fortsim/optics.hpp"
#include "fortsim/units.hpp"

namespace fortsim::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigPrefix = "config.";
constexpr const char* kFitPrefix = "fit.";

struct Context {
    const std::string& command;
    const RunConfig& cfg;
    const fs::path& dir;
    std::ostream& out;
    std::ostream& err;
    bool all_converged = true;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// Config echo first, then the runner's annotations, then the fit block.
void write_dataset(Context& ctx, const std::string& name, ScanDataset data,
                   const KeyValues& fit = {}) {
    KeyValues meta;
    meta.emplace_back("command", ctx.command);
    for (const auto& [k, v] : ctx.cfg.values()) meta.emplace_back(kConfigPrefix + k, v);
    meta.insert(meta.end(), data.metadata.begin(), data.metadata.end());
    for (const auto& [k, v] : fit) meta.emplace_back(kFitPrefix + k, v);
    data.metadata = std::move(meta);
    write_text(ctx.dir / name, dataset_to_csv(data));
}

void write_report(Context& ctx, const std::string& name, const KeyValues& kv) {
    KeyValues all;
    all.emplace_back("command", ctx.command);
    all.emplace_back("seed", ctx.cfg.get("seed"));
    all.emplace_back("noise", ctx.cfg.get("noise"));
    all.insert(all.end(), kv.begin(), kv.end());
    write_text(ctx.dir / name, format_key_values(all));
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

std::string gap_tag(double gap) { return "T" + format_number(std::round(gap / 1e-9) / 1e3) + "us"; }

// Fits that throw (degenerate data) are reported like non-convergence.
std::optional<FitResult> try_fit(Context& ctx, const std::string& what,
                                 const std::function<FitResult()>& fit) {
    try {
        FitResult r = fit();
        if (!r.converged) {
            ctx.err << what << ": fit did not converge after " << r.iterations
                    << " iterations\n";
            ctx.all_converged = false;
        }
        return r;
    } catch (const FitError& e) {
        ctx.err << what << ": fit failed: " << e.what() << '\n';
        ctx.all_converged = false;
        return std::nullopt;
    }
}

FitResult finish_fit(const ScanConfig& sc, FitResult fit) {
    return sc.noise_enabled
               ? with_normalization_systematic(fit, sc.detection.normalization_systematic)
               : with_normalization_systematic(fit, 0.0);
}

void run_rabi(Context& ctx, const std::string& stem) {
    ScanConfig sc = scan_config(ctx.cfg);
    sc.variable = ScanVariable::pulse_duration;
    sc.grid = rabi_grid(ctx.cfg);
    const ScanDataset data = run_rabi_scan(sc);
    const auto fit = try_fit(ctx, stem, [&] {
        return finish_fit(sc, fit_sinusoid(data, SinusoidModel::rabi));
    });
    KeyValues report;
    if (fit) {
        report = fit_report(*fit);
        const double f_mhz = fit->value("omega") / kTwoPi / 1e6;
        report.emplace_back("rabi_frequency_mhz", format_number(f_mhz));
        report.emplace_back("rabi_frequency_mhz_stderr",
                            format_number(fit->error("omega") / kTwoPi / 1e6));
        ctx.out << stem << ": Omega_R / 2pi = " << fixed(f_mhz, 4) << " MHz from "
                << data.points.size() << " points\n";
    }
    write_dataset(ctx, stem + ".csv", data, report);
    if (fit) write_report(ctx, stem + "_fit.txt", report);
}

void run_crosstalk(Context& ctx, const std::string& stem) {
    ScanConfig sc = scan_config(ctx.cfg);
    sc.variable = ScanVariable::pulse_duration;
    sc.grid = crosstalk_grid(ctx.cfg);
    const std::string monitored = ctx.cfg.get("monitored_site");
    if (monitored == sc.target_site) {
        throw ConfigError("monitored_site", "must differ from target_site");
    }
    const CrosstalkScan scan = run_crosstalk_scan(sc, monitored);

    const double t_max = sc.grid.back();
    const double s = std::sin(0.5 * scan.monitored_rabi * t_max);
    double max_fraction = 0.0;
    for (const auto& p : scan.data.points) max_fraction = std::max(max_fraction, p.fraction);

    KeyValues report{
        {"driven_site", sc.target_site},
        {"monitored_site", monitored},
        {"driven_rabi_mhz", format_number(scan.driven_rabi / kTwoPi / 1e6)},
        {"monitored_rabi_mhz", format_number(scan.monitored_rabi / kTwoPi / 1e6)},
        {"crosstalk_theory", format_number(scan.theoretical_ratio)},
        {"crosstalk_bound", format_number(scan.bound)},
        {"max_pulse_us", format_number(t_max / 1e-6)},
        {"closed_form_fraction_at_max_pulse", format_number(s * s)},
        {"max_measured_fraction", format_number(max_fraction)},
    };
    write_dataset(ctx, stem + ".csv", scan.data);
    write_report(ctx, stem + "_report.txt", report);
    ctx.out << stem << ": crosstalk theory " << sci(scan.theoretical_ratio, 2) << ", bound "
            << sci(scan.bound, 2) << '\n';
}

KeyValues ramsey_report(const FitResult& fit) {
    KeyValues report = fit_report(fit);
    const double omega = fit.value("omega");  // s, since x is rad/s
    report.emplace_back("contrast", format_number(2.0 * fit.value("amplitude")));
    report.emplace_back("contrast_stderr", format_number(2.0 * fit.error("amplitude")));
    report.emplace_back("fringe_period_khz", format_number(1.0 / omega / 1e3));
    return report;
}

void run_ramsey(Context& ctx, const std::string& stem) {
    ScanConfig sc = scan_config(ctx.cfg);
    sc.variable = ScanVariable::two_photon_detuning;
    const double gap = ctx.cfg.number("ramsey_gap_us") * 1e-6;
    const RamseyGridSpec spec = ramsey_grid_spec(ctx.cfg);
    sc.grid = ramsey_detuning_grid(gap, spec.fringes, spec.points);
    const ScanDataset data = run_ramsey_scan(sc, gap);
    const auto fit = try_fit(ctx, stem, [&] {
        return finish_fit(sc, fit_sinusoid(data, SinusoidModel::cosine_offset));
    });
    KeyValues report;
    if (fit) {
        report = ramsey_report(*fit);
        ctx.out << stem << ": T = " << format_number(gap / 1e-6) << " us, contrast "
                << fixed(2.0 * fit->value("amplitude"), 4) << '\n';
    }
    write_dataset(ctx, stem + ".csv", data, report);
    if (fit) write_report(ctx, stem + "_fit.txt", report);
}

ContrastDecay contrast_decay(Context& ctx) {
    ScanConfig sc = scan_config(ctx.cfg);
    sc.variable = ScanVariable::two_photon_detuning;
    std::vector<double> gaps = ctx.cfg.list("gaps_us");
    for (double& g : gaps) g *= 1e-6;
    std::sort(gaps.begin(), gaps.end());
    if (gaps.size() < 3) throw ConfigError("gaps_us", "need at least 3 gaps");
    if (std::adjacent_find(gaps.begin(), gaps.end()) != gaps.end()) {
        throw ConfigError("gaps_us", "duplicate gap");
    }
    const RamseyGridSpec spec = ramsey_grid_spec(ctx.cfg);
    try {
        return run_contrast_decay(sc, gaps, spec);
    } catch (const FitError& e) {
        throw std::runtime_error(std::string("contrast decay: ") + e.what());
    }
}

void write_fringes(Context& ctx, const ContrastDecay& cd, const std::string& prefix,
                   bool reports) {
    for (std::size_t i = 0; i < cd.gaps.size(); ++i) {
        const std::string stem = prefix + gap_tag(cd.gaps[i]);
        const KeyValues report = ramsey_report(cd.fringe_fits[i]);
        if (!cd.fringe_fits[i].converged) {
            ctx.err << stem << ": fringe fit did not converge\n";
            ctx.all_converged = false;
        }
        write_dataset(ctx, stem + ".csv", cd.fringes[i], report);
        if (reports) write_report(ctx, stem + "_fit.txt", report);
    }
}

void write_decay(Context& ctx, const ContrastDecay& cd, const std::string& stem) {
    KeyValues report = fit_report(cd.decay_fit);
    const double t2 = cd.decay_fit.value("decay_time");
    report.emplace_back("t2_us", format_number(t2 / 1e-6));
    report.emplace_back("t2_us_stderr", format_number(cd.decay_fit.error("decay_time") / 1e-6));
    if (!cd.decay_fit.converged) {
        ctx.err << stem << ": exponential fit did not converge\n";
        ctx.all_converged = false;
    }
    write_dataset(ctx, stem + ".csv", cd.contrasts, report);
    write_report(ctx, stem + "_fit.txt", report);
    ctx.out << stem << ": T2 = " << fixed(t2 / 1e-6, 1) << " us from " << cd.gaps.size()
            << " gaps\n";
}

void run_trap(Context& ctx) {
    const HeadlineInputs in = headline_inputs(ctx.cfg);
    const double depth = trap_depth(in.fort_beam, in.species);
    KeyValues report{
        {"fort_power_mw", ctx.cfg.get("fort_power_mw")},
        {"fort_waist_um", ctx.cfg.get("fort_waist_um")},
        {"fort_wavelength_nm", ctx.cfg.get("fort_wavelength_nm")},
        {"peak_intensity_w_per_m2", format_number(in.fort_beam.peak_intensity())},
        {"trap_depth_mk", format_number(depth / 1e-3)},
    };
    write_report(ctx, "trap.txt", report);
    ctx.out << "trap depth " << fixed(depth / 1e-3, 3) << " mK (P = "
            << ctx.cfg.get("fort_power_mw") << " mW, w = " << ctx.cfg.get("fort_waist_um")
            << " um, lambda = " << ctx.cfg.get("fort_wavelength_nm") << " nm)\n";
}

void run_gradient(Context& ctx) {
    const HeadlineInputs in = headline_inputs(ctx.cfg);
    const Headline h = compute_headline(in);
    KeyValues report{
        {"gradient_rabi_mhz", ctx.cfg.get("gradient_rabi_mhz")},
        {"gradient_crosstalk", ctx.cfg.get("gradient_crosstalk")},
        {"separation_um", ctx.cfg.get("separation_um")},
        {"gradient_dfdb_hz_per_t", ctx.cfg.get("gradient_dfdb_hz_per_t")},
        {"crosstalk_definition", ctx.cfg.get("crosstalk_definition")},
        {"gradient_t_per_cm", format_number(h.gradient_required)},
        {"bias_field_g", ctx.cfg.get("bias_field_g")},
        {"clock_zeeman_shift_hz", format_number(h.clock_zeeman_shift)},
        {"neighbour_zeeman_shift_hz", format_number(h.neighbour_zeeman_shift)},
    };
    write_report(ctx, "gradient.txt", report);
    ctx.out << "required gradient " << fixed(h.gradient_required, 1) << " T/cm\n";
}

}  // namespace

std::string headline_report(const RunConfig& cfg) {
    const HeadlineInputs in = headline_inputs(cfg);
    const Headline h = compute_headline(in);
    const std::string omega = cfg.get("omega_r_mhz");
    std::ostringstream os;
    os << "pi/2 time          " << fixed(h.pi_over_two_time / 1e-9, 1)
       << " ns      pi / (2 Omega_R), Omega_R = 2pi x " << omega << " MHz\n";
    os << "crosstalk theory   " << sci(h.crosstalk_theory, 1)
       << "      exp(-2 d^2 / w^2), d = " << cfg.get("separation_um")
       << " um, w = " << cfg.get("raman_waist_um") << " um\n";
    os << "crosstalk bound    " << sci(h.crosstalk_bound, 1)
       << "      sensitivity / (Omega_R t), sensitivity = "
       << fixed(in.crosstalk.detection_sensitivity, 4) << " rad, t = "
       << cfg.get("crosstalk_max_pulse_us") << " us\n";
    os << "T2                 " << format_number(h.t2 / 1e-6) << " us\n";
    os << "figure of merit    " << fixed(h.figure_of_merit, 0)
       << "         T2 / pi/2 time\n";
    os << "trap depth         " << fixed(h.trap_depth / 1e-3, 2) << " mK      P = "
       << cfg.get("fort_power_mw") << " mW, w = " << cfg.get("fort_waist_um")
       << " um, lambda = " << cfg.get("fort_wavelength_nm") << " nm\n";
    os << "gradient required  " << fixed(h.gradient_required, 1) << " T/cm   Omega = 2pi x "
       << cfg.get("gradient_rabi_mhz") << " MHz, crosstalk " << cfg.get("gradient_crosstalk")
       << " (" << cfg.get("crosstalk_definition") << "), d = " << cfg.get("separation_um")
       << " um, df/dB = " << cfg.get("gradient_dfdb_hz_per_t") << " Hz/T\n";
    os << "Zeeman shift       " << format_number(h.clock_zeeman_shift) << " Hz (clock), "
       << fixed(h.neighbour_zeeman_shift / 1e6, 3) << " MHz (|1,+1> -> |2,+1>) at "
       << cfg.get("bias_field_g") << " G\n";
    return os.str();
}

int run_command(const std::string& command, const RunConfig& cfg, const fs::path& out_dir,
                std::ostream& out, std::ostream& err) {
    Context ctx{command, cfg, out_dir, out, err};
    try {
        fs::create_directories(out_dir);
        if (command == "rabi") {
            run_rabi(ctx, "rabi");
        } else if (command == "crosstalk") {
            run_crosstalk(ctx, "crosstalk");
        } else if (command == "ramsey") {
            run_ramsey(ctx, "ramsey");
        } else if (command == "contrast-decay") {
            const ContrastDecay cd = contrast_decay(ctx);
            write_fringes(ctx, cd, "ramsey_", false);
            write_decay(ctx, cd, "contrast_decay");
        } else if (command == "reproduce-fig2") {
            run_rabi(ctx, "fig2a");
            run_crosstalk(ctx, "fig2b");
        } else if (command == "reproduce-fig3") {
            write_fringes(ctx, contrast_decay(ctx), "fig3_", true);
        } else if (command == "reproduce-fig4") {
            write_decay(ctx, contrast_decay(ctx), "fig4");
        } else if (command == "trap") {
            run_trap(ctx);
        } else if (command == "gradient") {
            run_gradient(ctx);
        } else if (command == "headline") {
            const std::string text = headline_report(cfg);
            write_text(out_dir / "headline.txt", text);
            out << text;
        } else {
            err << "unknown command '" << command << "'\n";
            return kExitConfig;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return ctx.all_converged ? kExitOk : kExitFitNotConverged;
}

ReplaySource read_replay_header(const fs::path& csv) {
    std::ifstream in(csv, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read '" + csv.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ScanDataset data;
    try {
        data = parse_dataset_csv(buf.str());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("", csv.string() + ": " + e.what());
    }
    ReplaySource src;
    const std::string prefix = kConfigPrefix;
    for (const auto& [k, v] : data.metadata) {
        if (k == "command") {
            src.command = v;
        } else if (k.rfind(prefix, 0) == 0) {
            src.config.set(k.substr(prefix.size()), v);
        }
    }
    if (src.command.empty()) {
        throw ConfigError("", csv.string() + ": no command in the metadata header");
    }
    return src;
}

}  // namespace fortsim::cli
