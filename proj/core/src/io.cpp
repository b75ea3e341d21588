#include "fortsim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fortsim/dataset.hpp"
#include "fortsim/fitting.hpp"

namespace fortsim {

std::vector<double> ScanDataset::xs() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.x);
    return v;
}

std::vector<double> ScanDataset::fractions() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.fraction);
    return v;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text == "nan") return std::nan("");
    if (text == "inf" || text == "+inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return text.substr(b, e - b + 1);
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
        }
        kv.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return kv;
}

std::string format_key_values(const KeyValues& kv, std::string_view prefix) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out.append(prefix);
        out.append(k);
        out.append(" = ");
        out.append(v);
        out.push_back('\n');
    }
    return out;
}

namespace {

// x in display units; 15 significant digits when that still reads back to
// the same SI value, which hides unit-conversion noise like 1000.0000000000001.
std::string format_x(double x, double scale) {
    const double shown = x / scale;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", shown);
    const auto parsed = parse_number(buf);
    if (parsed && *parsed * scale == x) return format_number(*parsed);
    return format_number(shown);
}

}  // namespace

void write_dataset_csv(std::ostream& out, const ScanDataset& data) {
    out << "# x_label = " << data.x_label << '\n';
    out << "# x_unit_scale = " << format_number(data.x_unit_scale) << '\n';
    out << format_key_values(data.metadata, "# ");
    out << "x,x_unit,fraction,stderr\n";
    for (const auto& p : data.points) {
        out << format_x(p.x, data.x_unit_scale) << ',' << data.x_unit << ','
            << format_number(p.fraction) << ',' << format_number(p.std_error) << '\n';
    }
}

std::string dataset_to_csv(const ScanDataset& data) {
    std::ostringstream os;
    write_dataset_csv(os, data);
    return os.str();
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto c = line.find(',', start);
        out.push_back(trim(line.substr(start, c - start)));
        if (c == std::string_view::npos) break;
        start = c + 1;
    }
    return out;
}

}  // namespace

ScanDataset parse_dataset_csv(std::string_view text) {
    ScanDataset data;
    data.x_unit.clear();
    bool header = false;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": " + what);
    };
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (header) fail("metadata after the column header");
            line.remove_prefix(1);
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) continue;  // free comment
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key == "x_label") {
                data.x_label = value;
            } else if (key == "x_unit_scale") {
                const auto v = parse_number(value);
                if (!v || !(*v > 0.0)) fail("bad x_unit_scale");
                data.x_unit_scale = *v;
            } else {
                data.metadata.emplace_back(key, value);
            }
            continue;
        }
        if (!header) {
            if (line != "x,x_unit,fraction,stderr") fail("unexpected column header");
            header = true;
            continue;
        }
        const auto cols = split_commas(line);
        if (cols.size() != 4) fail("expected 4 columns");
        const auto x = parse_number(cols[0]);
        const auto f = parse_number(cols[2]);
        const auto e = parse_number(cols[3]);
        if (!x || !f || !e) fail("bad number");
        if (data.x_unit.empty()) {
            data.x_unit = std::string(cols[1]);
        } else if (cols[1] != data.x_unit) {
            fail("mixed x units");
        }
        data.points.push_back({*x * data.x_unit_scale, *f, *e});
    }
    if (!header) throw std::invalid_argument("csv: missing column header");
    if (data.x_unit.empty()) data.x_unit = "s";
    return data;
}

KeyValues fit_report(const FitResult& fit) {
    KeyValues kv;
    kv.emplace_back("model", fit.model);
    kv.emplace_back("converged", fit.converged ? "true" : "false");
    kv.emplace_back("iterations", std::to_string(fit.iterations));
    kv.emplace_back("points", std::to_string(fit.points));
    kv.emplace_back("rss", format_number(fit.rss));
    kv.emplace_back("gradient_norm", format_number(fit.gradient_norm));
    for (const auto& p : fit.parameters) {
        kv.emplace_back(p.name, format_number(p.value));
        kv.emplace_back(p.name + "_stderr", format_number(p.std_error));
        kv.emplace_back(p.name + "_stderr_with_systematic",
                        format_number(p.std_error_with_systematic));
    }
    return kv;
}

}  // namespace fortsim
