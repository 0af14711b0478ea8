// open_system.hpp — Density-matrix evolution with cavity photon decay and the
// CNOT_ba fidelity study against the gate implementation time over the cavity
// decay time.
//
// Master equation: d rho / dt = -i [H, rho] + kappa (a rho a' - {a'a, rho}/2),
// a single zero-temperature collapse channel sqrt(kappa) a on the photon mode.
// T_d = 1 / kappa.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ioncav/gates.hpp"
#include "ioncav/hilbert.hpp"

namespace ioncav {

struct DensityMatrix {
    SystemConfig config;
    Matrix rho;

    double trace_real() const { return rho.trace().real(); }
    // Checks Hermiticity (1e-12), unit trace (1e-10) and spectrum >= -1e-9.
    void validate() const;
};

DensityMatrix to_density(const PureState& state);

double purity(const DensityMatrix& rho);                          // tr(rho^2)
double state_fidelity(const PureState& ideal, const DensityMatrix& rho); // <psi|rho|psi>

// RK4 integration of the master equation above. Trace drift beyond 1e-8
// raises StepSizeError.
DensityMatrix lindblad_evolve(const DensityMatrix& rho, const Matrix& hamiltonian,
                              double kappa, double duration, double dt);

// Which pulses of the CNOT_ba program see the decay channel. Default: only the
// final case-4 pulse. The integrator step is duration/steps_per_decay_pulse
// unless dt is set explicitly.
struct DecaySpec {
    double kappa = 0.0;
    std::vector<int> decay_window = {2};
    int steps_per_decay_pulse = 400;
    std::optional<double> dt;
};

// State fidelity of CNOT_ba under cavity decay for one computational input
// (photon, phonon occupations), against the closed-system output of the same
// program. input == nullopt averages over the four computational-basis inputs.
double cnot_ba_fidelity(const SystemConfig& config, const PhysicalParams& params,
                        const DecaySpec& decay,
                        std::optional<std::pair<int, int>> input_ab = std::nullopt);

// Fidelity over a grid of ratios T_im / T_d. T_im is the full CNOT_ba duration
// at `params`; kappa is set per point to ratio / T_im. Window, integrator step
// and input selection come from `base` (its kappa is ignored).
std::vector<std::pair<double, double>> fidelity_curve(
    const SystemConfig& config, const PhysicalParams& params,
    const std::vector<double>& ratios, const DecaySpec& base = DecaySpec{},
    std::optional<std::pair<int, int>> input_ab = std::nullopt);

} // namespace ioncav
