// gates.hpp — Named gates on the bosonic qubits (cavity photon and trap phonon,
// Fock levels {0, 1}), lowered to pulse sequences, executed, and timed.
//
// Gate constructions, with R_k(theta) the case-k pulse and the ion prepared
// in |g>:
//
//   CNOT_ab (photon controls phonon):  R4(pi/2),  R7(3pi/2), R4(pi/2)
//   CNOT_ba (phonon controls photon):  R4(3pi/2), R2(3pi/2), R4(pi/2)
//   H_a     (photon Hadamard):         R7(pi/2),  R1(7pi/4), R7(pi/2)
//   H_b     (phonon Hadamard):         R2(pi/2),  R1(7pi/4), R2(pi/2)
//   SWAP_ab:                           CNOT_ab . CNOT_ba . CNOT_ab
//
// CNOT_ab flips with unit phases. CNOT_ba leaves a residual factor i whenever
// the phonon ends in |1>; the sequences here keep that phase, they do not
// correct it.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ioncav/hilbert.hpp"
#include "ioncav/propagators.hpp"

namespace ioncav {

enum class GateKind { CnotAB, CnotBA, HadamardA, HadamardB, SwapAB, Primitive };

struct GateSpec {
    GateKind kind = GateKind::CnotAB;
    int trap = 0;
    Pulse primitive{}; // used when kind == Primitive
};

struct PulseProgram {
    std::vector<Pulse> pulses;
    std::string label; // named-gate labels enable the ion-in-|g> precondition check
};

std::string gate_name(GateKind kind);

PulseProgram compile_gate(const GateSpec& spec);

// Left-to-right application of the program via the analytic propagators.
// Named-gate programs require the addressed trap's ion to start in |g>.
PureState run_program(const PureState& state, const PulseProgram& program);

// ---------------------------------- Truth tables ----------------------------

struct TruthTableRow {
    int photon_in = 0; // input photon occupation
    int phonon_in = 0; // input phonon occupation (two-qubit gates)
    PureState output;
};

// All computational-basis inputs of the gate's qubits with the ion in |g>:
// 4 rows for CNOTs/SWAP ordered (a,b) = 00, 01, 10, 11; 2 rows for Hadamards.
std::vector<TruthTableRow> truth_table(const GateSpec& spec, const SystemConfig& config);

// --------------------------------- Timing -----------------------------------

struct TimingReport {
    std::vector<std::pair<Pulse, double>> per_pulse; // seconds
    double total = 0.0;
};

// Pulse duration = theta / coupling_rate(case). Zero-rate pulses are refused.
// inter_pulse_delay (default 0) is added between consecutive pulses.
TimingReport program_duration(const PulseProgram& program, const PhysicalParams& params,
                              double inter_pulse_delay = 0.0);

enum class SweepAxis { CavityCoupling, LaserCoupling }; // g or G

struct SweepRow {
    double coupling = 0.0; // rad/s
    std::string gate;
    double seconds = 0.0;
};

std::vector<SweepRow> timing_sweep(const std::vector<GateSpec>& gates,
                                   const PhysicalParams& params, SweepAxis axis,
                                   const std::vector<double>& values);

} // namespace ioncav
