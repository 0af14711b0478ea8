#include "ioncav/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ioncav/propagators.hpp"

namespace ioncav {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix lindblad_rhs(const Matrix& rho, const Matrix& h, double kappa, const Matrix& a,
                    const Matrix& number_op) {
    Matrix out = -kI * (h * rho - rho * h);
    if (kappa > 0.0) {
        out += kappa * (a * rho * a.adjoint() -
                        0.5 * (number_op * rho + rho * number_op));
    }
    return out;
}

} // namespace

void DensityMatrix::validate() const {
    if (rho.rows() != rho.cols() || rho.rows() != config.dimension())
        throw std::invalid_argument("DensityMatrix: shape does not match the configured space");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace differs from 1 by more than 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue below -1e-9");
}

DensityMatrix to_density(const PureState& state) {
    return DensityMatrix{state.config, state.amplitudes * state.amplitudes.adjoint()};
}

double purity(const DensityMatrix& rho) {
    return (rho.rho * rho.rho).trace().real();
}

double state_fidelity(const PureState& ideal, const DensityMatrix& rho) {
    if (ideal.amplitudes.size() != rho.rho.rows())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    return (ideal.amplitudes.adjoint() * rho.rho * ideal.amplitudes)(0).real();
}

DensityMatrix lindblad_evolve(const DensityMatrix& rho, const Matrix& hamiltonian,
                              double kappa, double duration, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("lindblad_evolve: dt must be > 0");
    if (!(duration >= 0.0)) throw std::invalid_argument("lindblad_evolve: duration must be >= 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("lindblad_evolve: kappa must be >= 0");
    if (hamiltonian.rows() != rho.rho.rows() || hamiltonian.cols() != rho.rho.cols())
        throw std::invalid_argument("lindblad_evolve: Hamiltonian/state dimension mismatch");
    if (duration == 0.0) return rho;

    const Matrix a = build_operator(rho.config, OperatorSymbol::A);
    const Matrix number_op = a.adjoint() * a;

    const long steps = std::max(1L, std::lround(std::ceil(duration / dt)));
    const double step = duration / double(steps);

    Matrix current = rho.rho;
    for (long k = 0; k < steps; ++k) {
        const Matrix k1 = lindblad_rhs(current, hamiltonian, kappa, a, number_op);
        const Matrix k2 = lindblad_rhs(current + 0.5 * step * k1, hamiltonian, kappa, a, number_op);
        const Matrix k3 = lindblad_rhs(current + 0.5 * step * k2, hamiltonian, kappa, a, number_op);
        const Matrix k4 = lindblad_rhs(current + step * k3, hamiltonian, kappa, a, number_op);
        current += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const double trace_drift = std::abs(current.trace().real() - rho.rho.trace().real());
    if (trace_drift > 1e-8)
        throw StepSizeError("lindblad_evolve: trace drift " + std::to_string(trace_drift) +
                            " exceeds 1e-8; reduce dt");
    // Symmetrize away integrator roundoff.
    current = 0.5 * (current + current.adjoint().eval());
    return DensityMatrix{rho.config, std::move(current)};
}

double cnot_ba_fidelity(const SystemConfig& config, const PhysicalParams& params,
                        const DecaySpec& decay,
                        std::optional<std::pair<int, int>> input_ab) {
    if (!input_ab) {
        double sum = 0.0;
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; b <= 1; ++b)
                sum += cnot_ba_fidelity(config, params, decay, std::make_pair(a, b));
        return sum / 4.0;
    }

    const PulseProgram program = compile_gate({GateKind::CnotBA, 0});
    for (int index : decay.decay_window) {
        if (index < 0 || index >= static_cast<int>(program.pulses.size()))
            throw std::out_of_range("cnot_ba_fidelity: decay_window index " +
                                    std::to_string(index) + " outside the program");
    }

    BasisLabel label;
    label.internal_state.assign(config.trap_count, 0);
    label.phonon.assign(config.trap_count, 0);
    label.photon = input_ab->first;
    label.phonon[0] = input_ab->second;
    const PureState input = basis_state(config, label);
    const PureState ideal = run_program(input, program);

    // Closed-system pulses act on the pure state; decay-window pulses evolve
    // the density matrix under the case Hamiltonian at its physical rate.
    bool density_path = false;
    PureState psi = input;
    DensityMatrix rho{config, Matrix()};
    for (size_t k = 0; k < program.pulses.size(); ++k) {
        const Pulse& pulse = program.pulses[k];
        const bool decaying =
            decay.kappa > 0.0 &&
            std::find(decay.decay_window.begin(), decay.decay_window.end(),
                      static_cast<int>(k)) != decay.decay_window.end();
        if (!decaying && !density_path) {
            psi = analytic_propagate(psi, pulse);
            continue;
        }
        if (!density_path) {
            rho = to_density(psi);
            density_path = true;
        }
        const double rate = coupling_rate(pulse.case_id, params);
        if (!(rate > 0.0))
            throw std::domain_error("cnot_ba_fidelity: zero coupling rate for case " +
                                    std::to_string(pulse.case_id));
        const double duration = pulse.theta / rate;
        const Matrix h = case_hamiltonian(config, params, pulse.case_id, pulse.trap);
        const double dt =
            decay.dt ? *decay.dt : duration / double(std::max(1, decay.steps_per_decay_pulse));
        rho = lindblad_evolve(rho, h, decaying ? decay.kappa : 0.0, duration, dt);
    }

    if (!density_path) return fidelity_pure(ideal, psi);
    return state_fidelity(ideal, rho);
}

std::vector<std::pair<double, double>> fidelity_curve(
    const SystemConfig& config, const PhysicalParams& params,
    const std::vector<double>& ratios, const DecaySpec& base,
    std::optional<std::pair<int, int>> input_ab) {
    const TimingReport timing = program_duration(compile_gate({GateKind::CnotBA, 0}), params);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(ratios.size());
    for (double ratio : ratios) {
        if (!(ratio > 0.0))
            throw std::invalid_argument("fidelity_curve: ratios must be > 0");
        DecaySpec decay = base;
        decay.kappa = ratio / timing.total;
        curve.emplace_back(ratio, cnot_ba_fidelity(config, params, decay, input_ab));
    }
    return curve;
}

} // namespace ioncav
