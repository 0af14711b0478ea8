#include "ioncav/protocols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ioncav {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
const Complex kMinusI{0.0, -1.0};

void require_two_traps(const SystemConfig& config, const char* where) {
    if (config.trap_count != 2)
        throw std::invalid_argument(std::string(where) + ": requires trap_count == 2");
}

void append(std::vector<ProtocolStep>& steps, const std::vector<ProtocolStep>& more) {
    steps.insert(steps.end(), more.begin(), more.end());
}

std::vector<ProtocolStep> as_steps(const PulseProgram& program) {
    std::vector<ProtocolStep> steps;
    for (const Pulse& pulse : program.pulses) steps.emplace_back(pulse);
    return steps;
}

// Ion-and-phonon product state (A|g> + B|e>)_i |n=0>_{b_i} composed over both
// traps with the photon in |0>.
PureState two_trap_state(const SystemConfig& config, Complex g1, Complex e1, Complex g2,
                         Complex e2) {
    PureState state{config, Vector::Zero(config.dimension())};
    const Complex ion1[2] = {g1, e1};
    const Complex ion2[2] = {g2, e2};
    for (int s1 = 0; s1 <= 1; ++s1) {
        for (int s2 = 0; s2 <= 1; ++s2) {
            BasisLabel label = make_label({s1, s2}, {0, 0}, 0);
            state.amplitudes[basis_index(config, label)] = ion1[s1] * ion2[s2];
        }
    }
    return state;
}

int bosonic_index(const SystemConfig& config, int b1, int b2, int photon) {
    return basis_index(config, make_label({0, 0}, {b1, b2}, photon));
}

} // namespace

// ------------------------------- Step machinery -----------------------------

PureState apply_mode_phase(const PureState& state, const ModePhase& step) {
    const SystemConfig& config = state.config;
    if (step.mode.kind == FactorKind::Internal)
        throw std::invalid_argument("apply_mode_phase: mode must be a bosonic factor");
    if (step.mode.kind == FactorKind::Phonon &&
        (step.mode.trap < 0 || step.mode.trap >= config.trap_count))
        throw std::out_of_range("apply_mode_phase: trap index out of range");

    Vector out = state.amplitudes;
    for (int i = 0; i < out.size(); ++i) {
        const BasisLabel label = basis_label(config, i);
        const int n = step.mode.kind == FactorKind::Photon ? label.photon
                                                           : label.phonon[step.mode.trap];
        out[i] *= std::pow(step.per_quantum, n);
    }
    return PureState{config, std::move(out)};
}

PureState run_steps(const PureState& state, const std::vector<ProtocolStep>& steps, Route route) {
    PureState current = state;
    for (const ProtocolStep& step : steps) {
        if (const Pulse* pulse = std::get_if<Pulse>(&step)) {
            current = route == Route::Analytic ? analytic_propagate(current, *pulse)
                                               : expm_propagate(current, *pulse);
        } else {
            current = apply_mode_phase(current, std::get<ModePhase>(step));
        }
    }
    return current;
}

std::vector<ProtocolStep> cnot_ab_steps(int trap) {
    return as_steps(compile_gate({GateKind::CnotAB, trap}));
}

std::vector<ProtocolStep> cnot_ba_steps(int trap, bool phase_corrected) {
    std::vector<ProtocolStep> steps = as_steps(compile_gate({GateKind::CnotBA, trap}));
    if (phase_corrected)
        steps.emplace_back(ModePhase{{FactorKind::Phonon, trap}, kMinusI});
    return steps;
}

std::vector<ProtocolStep> swap_ab_steps(int trap, bool phase_corrected) {
    std::vector<ProtocolStep> steps = cnot_ab_steps(trap);
    append(steps, cnot_ba_steps(trap, phase_corrected));
    append(steps, cnot_ab_steps(trap));
    return steps;
}

std::vector<ProtocolStep> hadamard_b_rotated_steps(int trap) {
    std::vector<ProtocolStep> steps;
    steps.emplace_back(ModePhase{{FactorKind::Phonon, trap}, kMinusI});
    append(steps, as_steps(compile_gate({GateKind::HadamardB, trap})));
    steps.emplace_back(ModePhase{{FactorKind::Phonon, trap}, kMinusI});
    return steps;
}

// --------------------------------- Protocols --------------------------------

void validate_pair(const AmplitudePair& pair) {
    const double total = std::norm(pair.c) + std::norm(pair.d);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("AmplitudePair: |C|^2 + |D|^2 = " + std::to_string(total) +
                                    ", expected 1 within 1e-12");
}

ProtocolResult run_plan(const ProtocolPlan& plan, Route route) {
    PureState final_state = run_steps(plan.initial, plan.steps, route);
    const double deviation =
        (final_state.amplitudes - plan.expected.amplitudes).cwiseAbs().maxCoeff();
    return ProtocolResult{plan.label, std::move(final_state), plan.expected, deviation};
}

ProtocolPlan plan_state_transfer(const SystemConfig& config, const AmplitudePair& pair) {
    require_two_traps(config, "state_transfer");
    validate_pair(pair);

    ProtocolPlan plan;
    plan.label = "state_transfer";
    plan.initial = two_trap_state(config, pair.c, pair.d, 1.0, 0.0);
    plan.steps = {Pulse{7, 0, kPi / 2}, Pulse{7, 1, 3 * kPi / 2}};
    plan.expected = two_trap_state(config, 1.0, 0.0, pair.c, pair.d);
    return plan;
}

ProtocolPlan plan_internal_swap(const SystemConfig& config, const TwoAmplitudePairs& pairs) {
    require_two_traps(config, "internal_swap");
    validate_pair(pairs.first);
    validate_pair(pairs.second);

    ProtocolPlan plan;
    plan.label = "internal_swap";
    plan.initial = two_trap_state(config, pairs.first.c, pairs.first.d,
                                  pairs.second.c, pairs.second.d);
    plan.steps = {Pulse{2, 0, kPi / 2}, Pulse{2, 1, kPi / 2}};
    append(plan.steps, swap_ab_steps(0, true));
    append(plan.steps, swap_ab_steps(1, true));
    append(plan.steps, swap_ab_steps(0, true));
    plan.steps.emplace_back(Pulse{2, 0, 3 * kPi / 2});
    plan.steps.emplace_back(Pulse{2, 1, 3 * kPi / 2});
    plan.expected = two_trap_state(config, pairs.second.c, pairs.second.d,
                                   pairs.first.c, pairs.first.d);
    return plan;
}

ProtocolPlan plan_prepare_ghz(const SystemConfig& config, const AmplitudePair& pair) {
    require_two_traps(config, "prepare_ghz");
    validate_pair(pair);

    ProtocolPlan plan;
    plan.label = "ghz";
    plan.initial = two_trap_state(config, pair.c, pair.d, 1.0, 0.0);
    plan.steps = {Pulse{7, 0, kPi / 2}};
    append(plan.steps, cnot_ab_steps(0));
    append(plan.steps, cnot_ab_steps(1));

    plan.expected = PureState{config, Vector::Zero(config.dimension())};
    plan.expected.amplitudes[bosonic_index(config, 0, 0, 0)] = pair.c;
    plan.expected.amplitudes[bosonic_index(config, 1, 1, 1)] = kMinusI * pair.d;
    return plan;
}

ProtocolPlan plan_bell_from_ghz(const SystemConfig& config, const AmplitudePair& pair,
                                bool apply_hadamards) {
    ProtocolPlan plan = plan_prepare_ghz(config, pair);
    plan.label = apply_hadamards ? "bell_hadamard" : "bell";
    append(plan.steps, cnot_ba_steps(0, true));

    plan.expected = PureState{config, Vector::Zero(config.dimension())};
    if (!apply_hadamards) {
        plan.expected.amplitudes[bosonic_index(config, 0, 0, 0)] = pair.c;
        plan.expected.amplitudes[bosonic_index(config, 1, 1, 0)] = kMinusI * pair.d;
        return plan;
    }

    append(plan.steps, hadamard_b_rotated_steps(0));
    append(plan.steps, hadamard_b_rotated_steps(1));
    const Complex even = 0.5 * (pair.c - kI * pair.d);  // |00> + |11>
    const Complex odd  = -0.5 * (pair.c + kI * pair.d); // |01> + |10>
    plan.expected.amplitudes[bosonic_index(config, 0, 0, 0)] = even;
    plan.expected.amplitudes[bosonic_index(config, 1, 1, 0)] = even;
    plan.expected.amplitudes[bosonic_index(config, 0, 1, 0)] = odd;
    plan.expected.amplitudes[bosonic_index(config, 1, 0, 0)] = odd;
    return plan;
}

ProtocolPlan plan_entangle_internal(const SystemConfig& config, const AmplitudePair& pair) {
    require_two_traps(config, "entangle_internal");
    validate_pair(pair);

    ProtocolPlan plan;
    plan.label = "entangle_internal";
    plan.initial = PureState{config, Vector::Zero(config.dimension())};
    plan.initial.amplitudes[basis_index(config, make_label({1, 0}, {0, 0}, 0))] = pair.c;
    plan.initial.amplitudes[basis_index(config, make_label({1, 0}, {1, 0}, 0))] = pair.d;

    plan.steps = {Pulse{6, 0, kPi / 2}};
    append(plan.steps, cnot_ab_steps(1));
    plan.steps.emplace_back(Pulse{4, 1, kPi / 2});

    plan.expected = PureState{config, Vector::Zero(config.dimension())};
    plan.expected.amplitudes[basis_index(config, make_label({1, 0}, {0, 0}, 0))] = pair.c;
    plan.expected.amplitudes[basis_index(config, make_label({0, 1}, {0, 0}, 0))] = -pair.d;
    return plan;
}

ProtocolResult state_transfer(const SystemConfig& config, const AmplitudePair& pair) {
    return run_plan(plan_state_transfer(config, pair));
}

ProtocolResult internal_swap(const SystemConfig& config, const TwoAmplitudePairs& pairs) {
    return run_plan(plan_internal_swap(config, pairs));
}

ProtocolResult prepare_ghz(const SystemConfig& config, const AmplitudePair& pair) {
    return run_plan(plan_prepare_ghz(config, pair));
}

ProtocolResult bell_from_ghz(const SystemConfig& config, const AmplitudePair& pair,
                             bool apply_hadamards) {
    return run_plan(plan_bell_from_ghz(config, pair, apply_hadamards));
}

ProtocolResult entangle_internal(const SystemConfig& config, const AmplitudePair& pair) {
    return run_plan(plan_entangle_internal(config, pair));
}

// ------------------------- Swap-based motional CNOT -------------------------

std::vector<ProtocolStep> motional_cnot_steps() {
    std::vector<ProtocolStep> steps = swap_ab_steps(0, false);
    append(steps, cnot_ab_steps(1));
    append(steps, swap_ab_steps(0, false));
    return steps;
}

std::vector<MotionalCnotRow> motional_cnot_via_swaps(const SystemConfig& config, Route route) {
    require_two_traps(config, "motional_cnot_via_swaps");
    const std::vector<ProtocolStep> steps = motional_cnot_steps();

    std::vector<MotionalCnotRow> rows;
    for (int b1 = 0; b1 <= 1; ++b1) {
        for (int b2 = 0; b2 <= 1; ++b2) {
            const PureState input = basis_state(config, make_label({0, 0}, {b1, b2}, 0));
            rows.push_back({b1, b2, run_steps(input, steps, route)});
        }
    }
    return rows;
}

} // namespace ioncav
