#include "ioncav/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ioncav {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_named_gate(const std::string& label) {
    return label == "cnot_ab" || label == "cnot_ba" || label == "hadamard_a" ||
           label == "hadamard_b" || label == "swap_ab";
}

} // namespace

std::string gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::CnotAB:    return "cnot_ab";
    case GateKind::CnotBA:    return "cnot_ba";
    case GateKind::HadamardA: return "hadamard_a";
    case GateKind::HadamardB: return "hadamard_b";
    case GateKind::SwapAB:    return "swap_ab";
    case GateKind::Primitive: return "primitive";
    }
    return "unknown";
}

PulseProgram compile_gate(const GateSpec& spec) {
    const int t = spec.trap;
    switch (spec.kind) {
    case GateKind::CnotAB:
        return {{{4, t, kPi / 2}, {7, t, 3 * kPi / 2}, {4, t, kPi / 2}}, "cnot_ab"};
    case GateKind::CnotBA:
        return {{{4, t, 3 * kPi / 2}, {2, t, 3 * kPi / 2}, {4, t, kPi / 2}}, "cnot_ba"};
    case GateKind::HadamardA:
        return {{{7, t, kPi / 2}, {1, t, 7 * kPi / 4}, {7, t, kPi / 2}}, "hadamard_a"};
    case GateKind::HadamardB:
        return {{{2, t, kPi / 2}, {1, t, 7 * kPi / 4}, {2, t, kPi / 2}}, "hadamard_b"};
    case GateKind::SwapAB: {
        PulseProgram program;
        program.label = "swap_ab";
        for (GateKind part : {GateKind::CnotAB, GateKind::CnotBA, GateKind::CnotAB}) {
            PulseProgram inner = compile_gate({part, t});
            program.pulses.insert(program.pulses.end(), inner.pulses.begin(), inner.pulses.end());
        }
        return program;
    }
    case GateKind::Primitive:
        return {{spec.primitive}, "primitive"};
    }
    throw std::invalid_argument("compile_gate: unknown gate kind");
}

PureState run_program(const PureState& state, const PulseProgram& program) {
    if (is_named_gate(program.label) && !program.pulses.empty()) {
        const int trap = program.pulses.front().trap;
        double excited = 0.0;
        for (int i = 0; i < state.amplitudes.size(); ++i) {
            if (basis_label(state.config, i).internal_state[trap] == 1)
                excited += std::norm(state.amplitudes[i]);
        }
        if (excited > 1e-12)
            throw std::invalid_argument("run_program: gate '" + program.label +
                                        "' requires the trap " + std::to_string(trap) +
                                        " ion in |g>, found excited population " +
                                        std::to_string(excited));
    }
    PureState current = state;
    for (const Pulse& pulse : program.pulses)
        current = analytic_propagate(current, pulse);
    return current;
}

std::vector<TruthTableRow> truth_table(const GateSpec& spec, const SystemConfig& config) {
    const PulseProgram program = compile_gate(spec);
    const bool single_qubit = spec.kind == GateKind::HadamardA || spec.kind == GateKind::HadamardB;
    const bool photon_qubit = spec.kind == GateKind::HadamardA;

    std::vector<TruthTableRow> rows;
    auto add_row = [&](int a, int b) {
        BasisLabel label;
        label.internal_state.assign(config.trap_count, 0);
        label.phonon.assign(config.trap_count, 0);
        label.photon = a;
        label.phonon[spec.trap] = b;
        rows.push_back({a, b, run_program(basis_state(config, label), program)});
    };

    if (single_qubit) {
        for (int q = 0; q <= 1; ++q) add_row(photon_qubit ? q : 0, photon_qubit ? 0 : q);
    } else {
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; b <= 1; ++b) add_row(a, b);
    }
    return rows;
}

TimingReport program_duration(const PulseProgram& program, const PhysicalParams& params,
                              double inter_pulse_delay) {
    if (!(inter_pulse_delay >= 0.0))
        throw std::invalid_argument("program_duration: inter_pulse_delay must be >= 0");
    TimingReport report;
    for (size_t k = 0; k < program.pulses.size(); ++k) {
        const Pulse& pulse = program.pulses[k];
        const double rate = coupling_rate(pulse.case_id, params);
        if (!(rate > 0.0))
            throw std::domain_error("program_duration: pulse " + std::to_string(k) +
                                    " (case " + std::to_string(pulse.case_id) +
                                    ") has zero coupling rate; check g, G, eta, phi");
        const double seconds = pulse.theta / rate;
        report.per_pulse.emplace_back(pulse, seconds);
        report.total += seconds;
        if (k + 1 < program.pulses.size()) report.total += inter_pulse_delay;
    }
    return report;
}

std::vector<SweepRow> timing_sweep(const std::vector<GateSpec>& gates,
                                   const PhysicalParams& params, SweepAxis axis,
                                   const std::vector<double>& values) {
    std::vector<SweepRow> rows;
    for (double value : values) {
        if (!(value > 0.0))
            throw std::invalid_argument("timing_sweep: coupling values must be > 0");
        PhysicalParams swept = params;
        (axis == SweepAxis::CavityCoupling ? swept.g : swept.G) = value;
        for (const GateSpec& gate : gates) {
            const TimingReport report = program_duration(compile_gate(gate), swept);
            rows.push_back({value, gate_name(gate.kind), report.total});
        }
    }
    return rows;
}

} // namespace ioncav
