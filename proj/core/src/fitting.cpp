#include "fortsim/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

namespace fortsim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPiLocal = std::numbers::pi;

// Model value at x; writes the parameter gradient into grad.
using ModelFn = std::function<double(double x, const VectorXd& p, double* grad)>;

struct Prepared {
    std::vector<double> x;  // x / x_scale
    std::vector<double> y;
    std::vector<double> w;  // sqrt of the weights
    double x_scale = 1.0;
    bool weighted = false;
};

std::vector<DataPoint> sorted_copy(std::span<const DataPoint> data) {
    std::vector<DataPoint> v(data.begin(), data.end());
    std::stable_sort(v.begin(), v.end(),
                     [](const DataPoint& a, const DataPoint& b) { return a.x < b.x; });
    return v;
}

Prepared prepare(std::span<const DataPoint> data) {
    Prepared p;
    double max_abs = 0.0;
    bool all_sigma = !data.empty();
    for (const auto& d : data) {
        if (!std::isfinite(d.x) || !std::isfinite(d.fraction)) {
            throw FitError("fit: non-finite data point");
        }
        max_abs = std::max(max_abs, std::abs(d.x));
        if (!(d.std_error > 0.0 && std::isfinite(d.std_error))) all_sigma = false;
    }
    p.x_scale = max_abs > 0.0 ? max_abs : 1.0;
    p.weighted = all_sigma;
    for (const auto& d : data) {
        p.x.push_back(d.x / p.x_scale);
        p.y.push_back(d.fraction);
        p.w.push_back(all_sigma ? 1.0 / d.std_error : 1.0);
    }
    return p;
}

struct GaussNewtonOutcome {
    VectorXd params;
    VectorXd std_errors;
    double rss = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

void evaluate(const Prepared& data, const ModelFn& model, const VectorXd& p,
              VectorXd& residuals, MatrixXd& jacobian) {
    const auto n = static_cast<Eigen::Index>(data.x.size());
    residuals.resize(n);
    jacobian.resize(n, p.size());
    std::vector<double> grad(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double f = model(data.x[k], p, grad.data());
        residuals(i) = data.w[k] * (data.y[k] - f);
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            jacobian(i, j) = data.w[k] * grad[static_cast<std::size_t>(j)];
        }
    }
}

double residual_ss(const Prepared& data, const ModelFn& model, const VectorXd& p) {
    std::vector<double> grad(static_cast<std::size_t>(p.size()));
    double rss = 0.0;
    for (std::size_t k = 0; k < data.x.size(); ++k) {
        const double r = data.w[k] * (data.y[k] - model(data.x[k], p, grad.data()));
        rss += r * r;
    }
    return rss;
}

// Trials outside `admissible` are treated like ones that raise the RSS.
using Domain = std::function<bool(const VectorXd&)>;

GaussNewtonOutcome gauss_newton(const Prepared& data, const ModelFn& model,
                                VectorXd params, const FitOptions& opt,
                                const Domain& admissible = {}) {
    GaussNewtonOutcome out;
    VectorXd r;
    MatrixXd jac;
    evaluate(data, model, params, r, jac);
    double rss = r.squaredNorm();
    if (!std::isfinite(rss)) throw FitError("fit: non-finite residuals at seed");

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        out.gradient_norm = (jac.transpose() * r).norm();
        if (out.gradient_norm < opt.gradient_tolerance) {
            out.converged = true;
            break;
        }
        const VectorXd step = jac.colPivHouseholderQr().solve(r);
        if (!step.allFinite()) break;

        double rel = 0.0;
        for (Eigen::Index j = 0; j < params.size(); ++j) {
            rel = std::max(rel, std::abs(step(j)) / std::max(std::abs(params(j)), 1.0));
        }

        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h) {
            const VectorXd trial = params + lambda * step;
            if (admissible && !admissible(trial)) {
                lambda *= 0.5;
                continue;
            }
            const double trial_rss = residual_ss(data, model, trial);
            if (std::isfinite(trial_rss) && trial_rss < rss) {
                params = trial;
                rss = trial_rss;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // Already at the numerical optimum if the full step was negligible
            // or its predicted RSS gain is lost in rounding; otherwise stalled.
            const double predicted = (jac * step).squaredNorm();
            out.converged = rel < opt.relative_step_tolerance ||
                            predicted <= opt.relative_rss_tolerance * rss;
            break;
        }
        ++out.iterations;
        evaluate(data, model, params, r, jac);
        if (rel * lambda < opt.relative_step_tolerance) {
            out.converged = true;
            out.gradient_norm = (jac.transpose() * r).norm();
            break;
        }
    }
    out.params = params;
    out.rss = rss;

    const auto n = static_cast<Eigen::Index>(data.x.size());
    const auto m = params.size();
    out.std_errors = VectorXd::Constant(m, kNaN);
    if (n > m) {
        const MatrixXd normal = jac.transpose() * jac;
        Eigen::FullPivLU<MatrixXd> lu(normal);
        if (lu.isInvertible()) {
            const MatrixXd cov = lu.inverse() * (rss / static_cast<double>(n - m));
            for (Eigen::Index j = 0; j < m; ++j) {
                out.std_errors(j) = std::sqrt(std::max(cov(j, j), 0.0));
            }
        }
    }
    return out;
}

FitParameter make_param(std::string name, double value, double err, bool scales) {
    return {std::move(name), value, err, err, scales};
}

void require_uniform(const std::vector<DataPoint>& sorted) {
    const double span = sorted.back().x - sorted.front().x;
    if (!(span > 0.0)) throw FitError("fit: x values do not span an interval");
    const double dx = span / static_cast<double>(sorted.size() - 1);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double step = sorted[i].x - sorted[i - 1].x;
        if (std::abs(step - dx) > 1e-6 * dx) {
            throw FitError("fit: x values must be uniformly spaced");
        }
    }
}

double dtft_power(const std::vector<DataPoint>& pts, double mean, double freq) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& p : pts) {
        acc += (p.fraction - mean) * std::polar(1.0, -2.0 * kPiLocal * freq * p.x);
    }
    return std::norm(acc);
}

double mean_of(const std::vector<DataPoint>& pts) {
    double s = 0.0;
    for (const auto& p : pts) s += p.fraction;
    return s / static_cast<double>(pts.size());
}

void require_not_constant(const std::vector<DataPoint>& pts, double mean) {
    double spread = 0.0;
    double scale = 0.0;
    for (const auto& p : pts) {
        spread = std::max(spread, std::abs(p.fraction - mean));
        scale = std::max(scale, std::abs(p.fraction));
    }
    if (spread <= 1e-14 * std::max(scale, 1.0)) {
        throw FitError("fit: degenerate (constant) data");
    }
}

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * kPiLocal);
    if (w <= -kPiLocal) w += 2.0 * kPiLocal;
    return w;
}

}  // namespace

const FitParameter& FitResult::parameter(std::string_view name) const {
    for (const auto& p : parameters) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("FitResult: no parameter '" + std::string(name) + "'");
}

double periodogram_threshold(int bins) {
    return std::log(100.0 * std::max(bins, 1));
}

PeriodogramPeak periodogram_peak(std::span<const DataPoint> data) {
    if (data.size() < 8) throw FitError("periodogram: need at least 8 points");
    const auto pts = sorted_copy(data);
    require_uniform(pts);
    const double mean = mean_of(pts);
    require_not_constant(pts, mean);

    const auto n = static_cast<int>(pts.size());
    const double dx = (pts.back().x - pts.front().x) / (n - 1);
    const int bins = n / 2;
    PeriodogramPeak best;
    double best_power = -1.0;
    double total = 0.0;
    for (int k = 1; k <= bins; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            acc += (pts[static_cast<std::size_t>(j)].fraction - mean) *
                   std::polar(1.0, -2.0 * kPiLocal * k * j / n);
        }
        const double power = std::norm(acc);
        total += power;
        // Lowest frequency wins unless strictly (beyond rounding) larger.
        if (power > best_power * (1.0 + 1e-12)) {
            best_power = power;
            best.bin = k;
        }
    }
    best.frequency = best.bin / (n * dx);
    const double mean_power = total / bins;
    best.peak_to_mean = mean_power > 0.0 ? best_power / mean_power : 0.0;
    best.low_confidence = best.peak_to_mean < periodogram_threshold(bins);
    return best;
}

FitResult fit_sinusoid(std::span<const DataPoint> data, SinusoidModel model,
                       const FitOptions& options) {
    const PeriodogramPeak peak = periodogram_peak(data);
    const auto pts = sorted_copy(data);
    const double mean = mean_of(pts);

    // Refine the bin frequency on a finer grid of the continuous transform,
    // keeping the seed inside the band the fit is allowed to explore.
    const int n = static_cast<int>(pts.size());
    const double span = pts.back().x - pts.front().x;
    const double bin_width = 1.0 / (n * span / (n - 1));
    const double f_lo = 1.0 / span;
    const double f_hi = 0.5 * (n - 2) * bin_width;
    double f_seed = std::clamp(peak.frequency, f_lo, f_hi);
    double p_seed = -1.0;
    constexpr int kRefine = 64;
    for (int i = -kRefine; i <= kRefine; ++i) {
        const double f = peak.frequency + bin_width * i / kRefine;
        if (f < f_lo || f > f_hi) continue;
        const double p = dtft_power(pts, mean, f);
        if (p > p_seed) {
            p_seed = p;
            f_seed = f;
        }
    }

    const Prepared prep = prepare(pts);
    const double omega_seed = 2.0 * kPiLocal * f_seed * prep.x_scale;
    const auto m = static_cast<Eigen::Index>(prep.x.size());

    // Between one period across the data and one bin short of Nyquist. Outside
    // that band the oscillation stops being separable from the offset, and
    // at Nyquist the sine quadrature vanishes on every sample.
    const double omega_min = 2.0 * kPiLocal / span * prep.x_scale;
    const double omega_max = kPiLocal * (n - 2) * bin_width * prep.x_scale;
    const auto in_band = [omega_min, omega_max](Eigen::Index j) {
        return [=](const VectorXd& p) {
            return std::abs(p(j)) >= omega_min && std::abs(p(j)) <= omega_max;
        };
    };

    FitResult result;
    result.points = static_cast<int>(m);

    if (model == SinusoidModel::rabi) {
        // Linear amplitude at the seed frequency.
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < prep.x.size(); ++i) {
            const double s = std::sin(0.5 * omega_seed * prep.x[i]);
            const double basis = s * s * prep.w[i] * prep.w[i];
            num += basis * prep.y[i];
            den += basis * s * s;
        }
        VectorXd p0(2);
        p0 << (den > 0.0 ? num / den : 1.0), omega_seed;
        const ModelFn f = [](double x, const VectorXd& p, double* g) {
            const double s = std::sin(0.5 * p(1) * x);
            g[0] = s * s;
            g[1] = p(0) * std::sin(p(1) * x) * 0.5 * x;
            return p(0) * s * s;
        };
        const auto gn = gauss_newton(prep, f, p0, options, in_band(1));
        result.model = "rabi";
        result.parameters = {
            make_param("amplitude", gn.params(0), gn.std_errors(0), true),
            make_param("omega", std::abs(gn.params(1)) / prep.x_scale,
                       gn.std_errors(1) / prep.x_scale, false)};
        result.rss = gn.rss;
        result.gradient_norm = gn.gradient_norm;
        result.iterations = gn.iterations;
        result.converged = gn.converged;
        return result;
    }

    // offset + a cos + b sin at the seed frequency, weighted linear solve.
    MatrixXd basis(m, 3);
    VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double w = prep.w[k];
        basis(i, 0) = w;
        basis(i, 1) = w * std::cos(omega_seed * prep.x[k]);
        basis(i, 2) = w * std::sin(omega_seed * prep.x[k]);
        rhs(i) = w * prep.y[k];
    }
    const VectorXd lin = basis.colPivHouseholderQr().solve(rhs);
    VectorXd p0(4);
    p0 << lin(0), std::hypot(lin(1), lin(2)), omega_seed, std::atan2(-lin(2), lin(1));
    const ModelFn f = [](double x, const VectorXd& p, double* g) {
        const double arg = p(2) * x + p(3);
        const double c = std::cos(arg);
        const double s = std::sin(arg);
        g[0] = 1.0;
        g[1] = c;
        g[2] = -p(1) * s * x;
        g[3] = -p(1) * s;
        return p(0) + p(1) * c;
    };
    const auto gn = gauss_newton(prep, f, p0, options, in_band(2));
    double amplitude = gn.params(1);
    double omega = gn.params(2);
    double phase = gn.params(3);
    if (omega < 0.0) {
        omega = -omega;
        phase = -phase;
    }
    if (amplitude < 0.0) {
        amplitude = -amplitude;
        phase += kPiLocal;
    }
    result.model = "cosine_offset";
    result.parameters = {
        make_param("offset", gn.params(0), gn.std_errors(0), true),
        make_param("amplitude", amplitude, gn.std_errors(1), true),
        make_param("omega", omega / prep.x_scale, gn.std_errors(2) / prep.x_scale, false),
        make_param("phase", wrap_phase(phase), gn.std_errors(3), false)};
    result.rss = gn.rss;
    result.gradient_norm = gn.gradient_norm;
    result.iterations = gn.iterations;
    result.converged = gn.converged;
    return result;
}

FitResult fit_sinusoid(const ScanDataset& data, SinusoidModel model,
                       const FitOptions& options) {
    return fit_sinusoid(std::span<const DataPoint>(data.points), model, options);
}

FitResult fit_exponential(std::span<const DataPoint> points,
                          const FitOptions& options) {
    if (points.size() < 3) throw FitError("fit_exponential: need at least 3 points");
    for (const auto& p : points) {
        if (!(p.fraction > 0.0)) {
            throw FitError("fit_exponential: values must be positive");
        }
    }
    const auto pts = sorted_copy(points);
    if (!(pts.back().x > pts.front().x)) {
        throw FitError("fit_exponential: x values do not span an interval");
    }
    const Prepared prep = prepare(pts);

    // Seed: weighted line through log y; y^2 weights undo the log's stretching.
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < prep.x.size(); ++i) {
        const double w = prep.y[i] * prep.y[i] * prep.w[i] * prep.w[i];
        const double ly = std::log(prep.y[i]);
        sw += w;
        sx += w * prep.x[i];
        sy += w * ly;
        sxx += w * prep.x[i] * prep.x[i];
        sxy += w * prep.x[i] * ly;
    }
    const double det = sw * sxx - sx * sx;
    const double slope = det != 0.0 ? (sw * sxy - sx * sy) / det : 0.0;
    const double intercept = (sy - slope * sx) / sw;

    VectorXd p0(2);
    p0 << std::exp(intercept), -slope;
    const ModelFn f = [](double x, const VectorXd& p, double* g) {
        const double e = std::exp(-p(1) * x);
        g[0] = e;
        g[1] = -p(0) * x * e;
        return p(0) * e;
    };
    const auto gn = gauss_newton(prep, f, p0, options);

    // x is scaled to unit span, so a rate below rounding means no decay at all.
    const double rate = std::abs(gn.params(1)) < 1e-12 ? 0.0 : gn.params(1) / prep.x_scale;
    const double rate_err = gn.std_errors(1) / prep.x_scale;
    const double tau = rate == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / rate;
    const double tau_err = rate == 0.0 ? kNaN : rate_err / (rate * rate);

    FitResult result;
    result.model = "exponential";
    result.points = static_cast<int>(prep.x.size());
    result.parameters = {make_param("amplitude", gn.params(0), gn.std_errors(0), true),
                         make_param("decay_time", tau, tau_err, false)};
    result.rss = gn.rss;
    result.gradient_norm = gn.gradient_norm;
    result.iterations = gn.iterations;
    result.converged = gn.converged;
    return result;
}

FitResult with_normalization_systematic(FitResult fit, double relative) {
    for (auto& p : fit.parameters) {
        p.std_error_with_systematic =
            p.scales_with_signal ? std::hypot(p.std_error, p.value * relative)
                                 : p.std_error;
    }
    return fit;
}

}  // namespace fortsim
