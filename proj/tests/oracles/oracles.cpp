#include "oracles.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace oracle {

namespace {

const cd I{0.0, 1.0};

Eigen::Matrix2cd two_level_h(double w, double delta, double phase) {
    Eigen::Matrix2cd h;
    h << 0.5 * delta, 0.5 * w * std::exp(-I * phase),
         0.5 * w * std::exp(I * phase), -0.5 * delta;
    return h;
}

}  // namespace

std::array<cd, 2> two_level_expm(double omega_r, double delta, double phase, double t,
                                 std::array<cd, 2> psi) {
    const Eigen::Matrix2cd u = (-I * t * two_level_h(omega_r, delta, phase)).exp();
    const Eigen::Vector2cd v = u * Eigen::Vector2cd(psi[0], psi[1]);
    return {v(0), v(1)};
}

std::array<cd, 2> two_level_rk4(double omega_r, double delta, double phase, double t,
                                std::array<cd, 2> psi, long n_steps) {
    const Eigen::Matrix2cd a = -I * two_level_h(omega_r, delta, phase);
    Eigen::Vector2cd y(psi[0], psi[1]);
    const double h = t / static_cast<double>(n_steps);
    for (long i = 0; i < n_steps; ++i) {
        const Eigen::Vector2cd k1 = a * y;
        const Eigen::Vector2cd k2 = a * (y + 0.5 * h * k1);
        const Eigen::Vector2cd k3 = a * (y + 0.5 * h * k2);
        const Eigen::Vector2cd k4 = a * (y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return {y(0), y(1)};
}

std::array<cd, 3> lambda_eig(double w1, double w2, double big_delta, double delta, double t,
                             std::array<cd, 3> psi) {
    Eigen::Matrix3d h;
    h << 0.0, 0.0, 0.5 * w1,
         0.0, -delta, 0.5 * w2,
         0.5 * w1, 0.5 * w2, -big_delta;
    // Work in units of the largest entry to keep the eigenproblem well scaled.
    const double scale = std::max({std::abs(w1), std::abs(w2), std::abs(big_delta),
                                   std::abs(delta), 1.0});
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h / scale);
    const Eigen::Matrix3d v = es.eigenvectors();
    Eigen::Vector3cd c = v.transpose().cast<cd>() * Eigen::Vector3cd(psi[0], psi[1], psi[2]);
    for (int k = 0; k < 3; ++k) {
        // Phase reduced before the exponential: lambda * t can be ~1e6 rad.
        const double theta = std::remainder(es.eigenvalues()(k) * scale * t, 2.0 * M_PI);
        c(k) *= std::exp(-I * theta);
    }
    const Eigen::Vector3cd out = v.cast<cd>() * c;
    return {out(0), out(1), out(2)};
}

double hard_pulse_ramsey_p1(double delta, double gap) {
    const double r = 1.0 / std::sqrt(2.0);
    // pi/2 about x: [[r, -i r], [-i r, r]]. Start in |0>.
    cd a0 = r, a1 = -I * r;
    a0 *= std::exp(-I * (0.5 * delta * gap));
    a1 *= std::exp(I * (0.5 * delta * gap));
    const cd b1 = -I * r * a0 + r * a1;
    return std::norm(b1);
}

double integrated_power(double power, double waist, double z, double rayleigh, int panels) {
    const double w = waist * std::sqrt(1.0 + (z / rayleigh) * (z / rayleigh));
    const double i0 = 2.0 * power / (M_PI * w * w);
    const double r_max = 8.0 * w;
    const int n = 2 * panels;
    const double h = r_max / n;
    auto f = [&](double r) { return 2.0 * M_PI * r * i0 * std::exp(-2.0 * r * r / (w * w)); };
    double s = f(0.0) + f(r_max);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return s * h / 3.0;
}

Moments moments(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(xs.size() - 1)};
}

}  // namespace oracle
