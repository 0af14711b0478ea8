// protocols.hpp — Two-trap applications on the composite space (ion1, phonon1,
// ion2, phonon2, shared photon): state transfer, internal-state swap, GHZ and
// Bell preparation, internal-state entanglement, and the swap-based motional
// CNOT.
//
// Protocol sequences mix raw case pulses with per-mode phase steps
// diag(phase^n) over a mode's Fock levels. The phase steps realize the single
// qubit rotation that cancels the residual i of CNOT_ba where a protocol's
// target state requires the phase-corrected gate; they are free-evolution
// phases, not new couplings.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ioncav/gates.hpp"
#include "ioncav/hilbert.hpp"
#include "ioncav/propagators.hpp"

namespace ioncav {

// ------------------------------- Step machinery -----------------------------

struct ModePhase {
    TensorFactor mode;
    Complex per_quantum{1.0, 0.0}; // amplitude factor applied once per quantum
};

using ProtocolStep = std::variant<Pulse, ModePhase>;

enum class Route { Analytic, MatrixExponential };

PureState apply_mode_phase(const PureState& state, const ModePhase& step);
PureState run_steps(const PureState& state, const std::vector<ProtocolStep>& steps,
                    Route route = Route::Analytic);

// Pulse sequences as steps. `phase_corrected` appends the diag(1, -i, ...)
// phonon phase that turns the raw CNOT_ba into a textbook CNOT; SWAP built
// from corrected CNOTs is phase-free on the qubit subspace.
std::vector<ProtocolStep> cnot_ab_steps(int trap);
std::vector<ProtocolStep> cnot_ba_steps(int trap, bool phase_corrected);
std::vector<ProtocolStep> swap_ab_steps(int trap, bool phase_corrected);

// Phonon-qubit Hadamard bracketed by mode phases so that it acts as
// |0> -> (|0> - |1>)/sqrt2, |1> -> (|0> + |1>)/sqrt2 on the addressed qubit.
std::vector<ProtocolStep> hadamard_b_rotated_steps(int trap);

// --------------------------------- Protocols --------------------------------

struct AmplitudePair {
    Complex c{1.0, 0.0};
    Complex d{0.0, 0.0};
};

struct TwoAmplitudePairs {
    AmplitudePair first;  // C, D
    AmplitudePair second; // E, F
};

void validate_pair(const AmplitudePair& pair); // |C|^2 + |D|^2 = 1 within 1e-12

struct ProtocolPlan {
    std::string label;
    PureState initial;
    std::vector<ProtocolStep> steps;
    PureState expected;
};

struct ProtocolResult {
    std::string label;
    PureState final_state;
    PureState expected;
    double deviation = 0.0; // max |final - expected| amplitude difference
};

ProtocolResult run_plan(const ProtocolPlan& plan, Route route = Route::Analytic);

// (C|g>+D|e>)_1 ... -> ... (C|g>+D|e>)_2: two case-7 pulses through the cavity.
ProtocolPlan plan_state_transfer(const SystemConfig& config, const AmplitudePair& pair);

// Exchanges the two ions' internal superpositions via motional states and
// three cavity-mediated SWAPs.
ProtocolPlan plan_internal_swap(const SystemConfig& config, const TwoAmplitudePairs& pairs);

// |gg> (C|000> - iD|111>)_{b1 b2 a}.
ProtocolPlan plan_prepare_ghz(const SystemConfig& config, const AmplitudePair& pair);

// GHZ followed by CNOT_{b1 a}; optionally phonon Hadamards for the Bell
// superposition (C-iD)(|00>+|11>) - (C+iD)(|01>+|10>) over 2.
ProtocolPlan plan_bell_from_ghz(const SystemConfig& config, const AmplitudePair& pair,
                                bool apply_hadamards);

// (C|eg> - D|ge>)_{12} |000>_{b1 b2 a} from |e>_1 (C|0>+D|1>)_{b1}.
ProtocolPlan plan_entangle_internal(const SystemConfig& config, const AmplitudePair& pair);

ProtocolResult state_transfer(const SystemConfig& config, const AmplitudePair& pair);
ProtocolResult internal_swap(const SystemConfig& config, const TwoAmplitudePairs& pairs);
ProtocolResult prepare_ghz(const SystemConfig& config, const AmplitudePair& pair);
ProtocolResult bell_from_ghz(const SystemConfig& config, const AmplitudePair& pair,
                             bool apply_hadamards);
ProtocolResult entangle_internal(const SystemConfig& config, const AmplitudePair& pair);

// ------------------------- Swap-based motional CNOT -------------------------

// Literal pulse-level S_{ab1}, CNOT_{a b2}, S_{ab1}: maps |x>_{b1}|y>_{b2} to
// |x>_{b1}|y xor x>_{b2} with the photon back in |0>, up to the phases the raw
// SWAP composition produces.
struct MotionalCnotRow {
    int b1_in = 0;
    int b2_in = 0;
    PureState output;
};

std::vector<MotionalCnotRow> motional_cnot_via_swaps(const SystemConfig& config,
                                                     Route route = Route::Analytic);
std::vector<ProtocolStep> motional_cnot_steps();

} // namespace ioncav
