#pragma once

// Three-level Lambda system (|0>, |1>, |e>) driven by the two Raman beams.
// This is the reference model the effective two-level drive is checked
// against; it keeps the excited state instead of eliminating it.
//
// Rotating-frame Hamiltonian (rad/s):
//
//     H = [ 0        0        Omega1/2 ]
//         [ 0       -delta    Omega2/2 ]
//         [ Omega1/2 Omega2/2 -Delta   ]

#include "fortsim/dynamics.hpp"

namespace fortsim {

struct LambdaState {
    Complex c0{1.0, 0.0};
    Complex c1{0.0, 0.0};
    Complex ce{0.0, 0.0};

    double p0() const { return std::norm(c0); }
    double p1() const { return std::norm(c1); }
    double pe() const { return std::norm(ce); }
    double norm_squared() const { return p0() + p1() + pe(); }
};

struct LambdaOptions {
    // Accept when halving the step moves every amplitude by less than this.
    double convergence_tolerance = 1e-8;
    int max_refinements = 24;
};

// Fixed-step classical RK4 from `initial` over duration t, starting at
// `step` and halving until successive results agree to the tolerance.
// The bare two-photon detuning of `drive` is used; light shifts emerge from
// the excited-state coupling. Throws std::runtime_error if the refinement
// does not converge and std::invalid_argument for bad inputs.
LambdaState lambda_propagate(const LambdaState& initial, const RamanDrive& drive,
                             double t, double step,
                             const LambdaOptions& options = {});

// Single pass at a fixed step, no refinement. Exposed for convergence studies.
LambdaState lambda_propagate_fixed(const LambdaState& initial,
                                   const RamanDrive& drive, double t,
                                   double step);

// A starting step resolving the fastest frequency in the problem.
double lambda_default_step(const RamanDrive& drive);

}  // namespace fortsim
