#include "ioncav/lab_frame.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ioncav {

namespace {

constexpr Complex kI{0.0, 1.0};

// f(M) for Hermitian M via eigendecomposition.
Matrix hermitian_function(const Matrix& m, const std::function<Complex(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_function: eigendecomposition failed");
    Vector d(solver.eigenvalues().size());
    for (int k = 0; k < d.size(); ++k) d[k] = f(solver.eigenvalues()[k]);
    return solver.eigenvectors() * d.asDiagonal() * solver.eigenvectors().adjoint();
}

struct LabFrameOperators {
    Matrix h_static;              // everything without explicit time dependence
    std::vector<Matrix> laser;    // per trap: G s+_i exp(i eta_L (b'+b)_i)
    double omega_L = 0.0;
};

LabFrameOperators build_lab_frame(const SystemConfig& config, const PhysicalParams& params,
                                  bool linearized) {
    const int dim = config.dimension();
    const Matrix a  = build_operator(config, OperatorSymbol::A);
    const Matrix ad = build_operator(config, OperatorSymbol::ADag);

    LabFrameOperators ops;
    ops.omega_L = params.omega_L;
    ops.h_static = params.omega_c * (ad * a);

    for (int t = 0; t < config.trap_count; ++t) {
        const Matrix b  = build_operator(config, OperatorSymbol::B, t);
        const Matrix bd = build_operator(config, OperatorSymbol::BDag, t);
        const Matrix sz = build_operator(config, OperatorSymbol::SigmaZ, t);
        const Matrix sx = build_operator(config, OperatorSymbol::SigmaX, t);
        const Matrix sp = build_operator(config, OperatorSymbol::SigmaPlus, t);
        const Matrix q  = bd + b;

        ops.h_static += 0.5 * params.omega0 * sz + params.nu * (bd * b);

        Matrix standing_wave;
        if (linearized) {
            standing_wave = params.eta_c * std::cos(params.phi) * q +
                            std::sin(params.phi) * Matrix::Identity(dim, dim);
        } else {
            standing_wave = hermitian_function(
                q, [&](double x) { return Complex(std::sin(params.eta_c * x + params.phi), 0.0); });
        }
        ops.h_static += params.g * sx * (ad + a) * standing_wave;

        const Matrix displacement = hermitian_function(
            q, [&](double x) { return std::exp(kI * params.eta_L * x); });
        ops.laser.push_back(params.G * sp * displacement);
    }
    return ops;
}

Vector rhs(const LabFrameOperators& ops, double t, const Vector& psi) {
    Vector h_psi = ops.h_static * psi;
    const Complex phase = std::exp(-kI * ops.omega_L * t);
    for (const Matrix& L : ops.laser) {
        h_psi += phase * (L * psi);
        h_psi += std::conj(phase) * (L.adjoint() * psi);
    }
    return -kI * h_psi;
}

// Coarse bound on the spectral radius of H(t): Gershgorin row sums with the
// oscillating laser terms at full amplitude.
double hamiltonian_scale(const LabFrameOperators& ops) {
    Matrix magnitude = ops.h_static.cwiseAbs().cast<Complex>();
    for (const Matrix& L : ops.laser)
        magnitude += (L.cwiseAbs() + L.adjoint().cwiseAbs()).cast<Complex>();
    double best = 0.0;
    for (int i = 0; i < magnitude.rows(); ++i)
        best = std::max(best, magnitude.row(i).cwiseAbs().sum());
    return best;
}

} // namespace

double suggested_dt(const SystemConfig& config, const PhysicalParams& params,
                    double duration, double bound) {
    const LabFrameOperators ops = build_lab_frame(config, params, true);
    const double scale = std::max(hamiltonian_scale(ops), std::abs(params.omega_L));
    if (scale <= 0.0 || duration <= 0.0) return duration > 0.0 ? duration / 100.0 : 1.0;
    // RK4 loses ~ (scale*dt)^6 / 144 of the norm per step; keep the accumulated
    // drift of duration/dt steps below the bound, with headroom for the
    // time-dependent terms the frozen-H estimate misses.
    const double dt = std::pow(144.0 * bound / (duration * std::pow(scale, 6.0)), 0.2);
    return 0.6 * std::min(dt, 0.1 / scale);
}

PureState full_hamiltonian_evolve(const PureState& state, const PhysicalParams& params,
                                  double duration, const LabFrameOptions& options) {
    params.validate();
    if (!(duration >= 0.0)) throw std::invalid_argument("full_hamiltonian_evolve: duration must be >= 0");
    if (duration == 0.0) return state;
    if (!(options.dt > 0.0)) throw std::invalid_argument("full_hamiltonian_evolve: dt must be > 0");

    const LabFrameOperators ops = build_lab_frame(state.config, params, options.lamb_dicke_linearized);

    const long steps = std::max(1L, std::lround(std::ceil(duration / options.dt)));
    const double dt = duration / double(steps);

    Vector psi = state.amplitudes;
    double t = 0.0;
    for (long step = 0; step < steps; ++step) {
        const Vector k1 = rhs(ops, t, psi);
        const Vector k2 = rhs(ops, t + 0.5 * dt, psi + 0.5 * dt * k1);
        const Vector k3 = rhs(ops, t + 0.5 * dt, psi + 0.5 * dt * k2);
        const Vector k4 = rhs(ops, t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }

    const double drift = std::abs(psi.norm() - state.amplitudes.norm());
    if (drift > options.norm_drift_bound) {
        throw StepSizeError("full_hamiltonian_evolve: norm drift " + std::to_string(drift) +
                            " exceeds bound " + std::to_string(options.norm_drift_bound) +
                            "; reduce dt");
    }
    return PureState{state.config, std::move(psi)};
}

PureState free_frame_undo(const PureState& state, const PhysicalParams& params, double t) {
    const SystemConfig& config = state.config;
    Vector out = state.amplitudes;
    for (int i = 0; i < out.size(); ++i) {
        const BasisLabel label = basis_label(config, i);
        double energy = params.omega_c * label.photon;
        for (int trap = 0; trap < config.trap_count; ++trap) {
            energy += params.nu * label.phonon[trap];
            energy += 0.5 * params.omega0 * (label.internal_state[trap] == 1 ? 1.0 : -1.0);
        }
        out[i] *= std::exp(kI * energy * t);
    }
    return PureState{config, std::move(out)};
}

namespace {

void check_resonance(int case_id, const PhysicalParams& params) {
    const double scale = std::max({std::abs(params.omega0), std::abs(params.omega_c),
                                   std::abs(params.omega_L), params.nu, 1.0});
    double mismatch = 0.0;
    switch (case_id) {
    case 1: mismatch = params.omega_L - params.omega0; break;
    case 2: mismatch = params.omega_L - (params.omega0 - params.nu); break;
    case 3: mismatch = params.omega_L - (params.omega0 + params.nu); break;
    case 4: mismatch = params.omega_c - (params.omega0 - params.nu); break;
    case 5: mismatch = params.omega_c - (params.nu - params.omega0); break;
    case 6: mismatch = params.omega_c - (params.omega0 + params.nu); break;
    case 7: mismatch = params.omega_c - params.omega0; break;
    default: throw std::domain_error("rwa_deviation: case_id must be in [1, 7]");
    }
    if (std::abs(mismatch) > 1e-9 * scale)
        throw std::invalid_argument("rwa_deviation: params do not satisfy the case " +
                                    std::to_string(case_id) + " resonance condition");
}

// Equal-weight probe over the interior of the truncated space (occupations
// strictly below both cutoffs, spectator trap in its ground state), so every
// case couples it and no pulse can reach the cutoff boundary.
PureState rwa_probe(const SystemConfig& config) {
    PureState probe{config, Vector::Zero(config.dimension())};
    int populated = 0;
    for (int s = 0; s <= 1; ++s) {
        for (int n = 0; n < config.phonon_cutoff; ++n) {
            for (int m = 0; m < config.photon_cutoff; ++m) {
                BasisLabel label;
                label.internal_state.assign(config.trap_count, 0);
                label.phonon.assign(config.trap_count, 0);
                label.internal_state[0] = s;
                label.phonon[0] = n;
                label.photon = m;
                probe.amplitudes[basis_index(config, label)] = 1.0;
                ++populated;
            }
        }
    }
    probe.amplitudes /= std::sqrt(double(populated));
    return probe;
}

} // namespace

double rwa_deviation(int case_id, const PhysicalParams& params, const SystemConfig& config,
                     double theta, const LabFrameOptions* options) {
    check_resonance(case_id, params);
    const double rate = coupling_rate(case_id, params);
    if (!(rate > 0.0))
        throw std::invalid_argument("rwa_deviation: coupling rate for case " +
                                    std::to_string(case_id) + " is zero");
    const double duration = theta / rate;

    LabFrameOptions opts;
    if (options) opts = *options;
    if (opts.dt <= 0.0) opts.dt = suggested_dt(config, params, duration, opts.norm_drift_bound);

    const PureState probe = rwa_probe(config);
    const PureState lab = full_hamiltonian_evolve(probe, params, duration, opts);
    const PureState framed = free_frame_undo(lab, params, duration);
    const PureState predicted = analytic_propagate(probe, Pulse{case_id, 0, theta});
    return (framed.amplitudes - predicted.amplitudes).cwiseAbs().maxCoeff();
}

} // namespace ioncav
