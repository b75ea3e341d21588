#include "fortsim/lambda_system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fortsim {

namespace {

using Vec3 = std::array<Complex, 3>;
using Mat3 = std::array<std::array<Complex, 3>, 3>;

Mat3 zero_matrix() {
    Mat3 m{};
    for (auto& row : m) row.fill(Complex{0.0, 0.0});
    return m;
}

Vec3 multiply(const Mat3& a, const Vec3& v) {
    Vec3 out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    }
    return out;
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 out = zero_matrix();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

Mat3 add(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = a[i][j] + b[i][j];
    return out;
}

// Generator A = -i H.
Mat3 generator(const RamanDrive& drive) {
    Mat3 h = zero_matrix();
    h[0][2] = h[2][0] = 0.5 * drive.omega1();
    h[1][2] = h[2][1] = 0.5 * drive.omega2();
    h[1][1] = -drive.delta_two_photon();
    h[2][2] = -drive.delta_big();
    Mat3 a{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = Complex{0.0, -1.0} * h[i][j];
    return a;
}

// One RK4 step psi -> psi + increment. Returns only the increment so that the
// step map can be held as I + K without losing the small part of K to rounding.
Vec3 rk4_increment(const Mat3& a, const Vec3& psi, double h) {
    auto shifted = [&](const Vec3& k, double scale) {
        Vec3 out{};
        for (int i = 0; i < 3; ++i) out[i] = psi[i] + scale * k[i];
        return out;
    };
    const Vec3 k1 = multiply(a, psi);
    const Vec3 k2 = multiply(a, shifted(k1, 0.5 * h));
    const Vec3 k3 = multiply(a, shifted(k2, 0.5 * h));
    const Vec3 k4 = multiply(a, shifted(k3, h));
    Vec3 inc{};
    for (int i = 0; i < 3; ++i) {
        inc[i] = (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return inc;
}

// For a time-independent generator the RK4 step is the same linear map at
// every step. Its columns are the increments of the basis vectors; N steps are
// then applied by binary powering of I + K, tracking only the K part.
Mat3 step_power_minus_identity(const Mat3& a, double h, std::uint64_t steps) {
    Mat3 base = zero_matrix();
    for (int j = 0; j < 3; ++j) {
        Vec3 e{};
        e.fill(Complex{0.0, 0.0});
        e[j] = 1.0;
        const Vec3 col = rk4_increment(a, e, h);
        for (int i = 0; i < 3; ++i) base[i][j] = col[i];
    }
    Mat3 result = zero_matrix();
    while (steps > 0) {
        if (steps & 1U) {
            result = add(add(result, base), multiply(result, base));
        }
        steps >>= 1U;
        if (steps > 0) {
            base = add(add(base, base), multiply(base, base));
        }
    }
    return result;
}

LambdaState apply_identity_plus(const Mat3& k, const LambdaState& s) {
    const Vec3 psi{s.c0, s.c1, s.ce};
    const Vec3 delta = multiply(k, psi);
    return {psi[0] + delta[0], psi[1] + delta[1], psi[2] + delta[2]};
}

double max_difference(const LambdaState& a, const LambdaState& b) {
    return std::max({std::abs(a.c0 - b.c0), std::abs(a.c1 - b.c1),
                     std::abs(a.ce - b.ce)});
}

}  // namespace

LambdaState lambda_propagate_fixed(const LambdaState& initial,
                                   const RamanDrive& drive, double t,
                                   double step) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("lambda_propagate: t must be finite and >= 0");
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("lambda_propagate: step must be > 0");
    }
    if (t == 0.0) return initial;
    const double count = std::ceil(t / step);
    if (count > 0x1p62) {
        throw std::invalid_argument("lambda_propagate: step too small for t");
    }
    const auto steps = static_cast<std::uint64_t>(std::max(count, 1.0));
    const double h = t / static_cast<double>(steps);
    return apply_identity_plus(
        step_power_minus_identity(generator(drive), h, steps), initial);
}

LambdaState lambda_propagate(const LambdaState& initial, const RamanDrive& drive,
                             double t, double step,
                             const LambdaOptions& options) {
    LambdaState previous = lambda_propagate_fixed(initial, drive, t, step);
    double h = step;
    for (int i = 0; i < options.max_refinements; ++i) {
        h *= 0.5;
        LambdaState current = lambda_propagate_fixed(initial, drive, t, h);
        if (max_difference(previous, current) < options.convergence_tolerance) {
            return current;
        }
        previous = current;
    }
    throw std::runtime_error(
        "lambda_propagate: step refinement did not converge");
}

double lambda_default_step(const RamanDrive& drive) {
    const double fastest =
        std::max({std::abs(drive.delta_big()), std::abs(drive.omega1()),
                  std::abs(drive.omega2()), std::abs(drive.delta_two_photon())});
    return 0.05 / fastest;
}

}  // namespace fortsim
