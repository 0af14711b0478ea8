// lab_frame.hpp — Fixed-step integration of the full time-dependent Hamiltonian
// in the lab frame, plus the rotating-wave-approximation deviation measure.
//
// H(t) = omega0/2 sum_i sz_i + nu sum_i b'_i b_i + omega_c a' a
//      + G sum_i [ s+_i exp(i eta_L (b'_i + b_i)) exp(-i omega_L t) + h.c. ]
//      + g sum_i sx_i (a' + a) sin(eta_c (b'_i + b_i) + phi)
//
// The laser displacement exponential is evaluated exactly by diagonalizing
// b' + b. The cavity sine is either exact (same route) or linearized to
// eta_c (b' + b) cos(phi) + sin(phi).

#pragma once

#include "ioncav/hilbert.hpp"
#include "ioncav/propagators.hpp"

namespace ioncav {

struct LabFrameOptions {
    double dt = 0.0;                    // integration step, seconds; must be > 0
    bool lamb_dicke_linearized = true;  // linearize the cavity sine
    double norm_drift_bound = 1e-8;     // |norm - 1| ceiling over the whole run
};

// Step size that keeps the classical-RK4 norm drift of this run under `bound`.
double suggested_dt(const SystemConfig& config, const PhysicalParams& params,
                    double duration, double bound = 1e-8);

// Classical RK4 on d psi / dt = -i H(t) psi. Throws StepSizeError when the
// final norm drifted more than the bound.
PureState full_hamiltonian_evolve(const PureState& state, const PhysicalParams& params,
                                  double duration, const LabFrameOptions& options);

// Applies the inverse free-evolution frame exp(+i t (omega0/2 sz + nu b'b + wc a'a))
// (diagonal in the product basis).
PureState free_frame_undo(const PureState& state, const PhysicalParams& params, double t);

// Runs the lab-frame evolution for duration theta / coupling_rate(case) on a
// fixed probe state, undoes the free frame, and returns the max amplitude
// difference against the analytic case propagator. Params must satisfy the
// case's resonance condition.
double rwa_deviation(int case_id, const PhysicalParams& params, const SystemConfig& config,
                     double theta, const LabFrameOptions* options = nullptr);

} // namespace ioncav
