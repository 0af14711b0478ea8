// propagators.hpp — The seven resonance-case interaction Hamiltonians, their
// closed-form propagators, and a matrix-exponential oracle.
//
// Each case couples the ion of one trap to one bosonic mode (or both, or none):
//
//   case 1  omega_L = omega0          H = G  (s+ + s-)                 carrier
//   case 2  omega_L = omega0 - nu     H = iW (b s+  - b'  s-)          red sideband (laser)
//   case 3  omega_L = omega0 + nu     H = iW (b' s+ - b   s-)          blue sideband (laser)
//   case 4  omega_c = omega0 - nu     H = Om (a' b' s- + a  b  s+)
//   case 5  omega_c = nu - omega0     H = Om (a  b' s- + a' b  s+)
//   case 6  omega_c = omega0 + nu     H = Om (a  b' s+ + a' b  s-)
//   case 7  omega_c = omega0          H = Om'(a' s- + a s+)            Jaynes-Cummings
//
// with W = G*eta_L, Om = eta_c*g*cos(phi), Om' = g*sin(phi). Primes denote
// daggers, s+/s- the raising/lowering Pauli operators.
//
// Pulses are parameterized by the dimensionless angle theta = rate * time, so
// every propagator is independent of the absolute coupling rates. Durations
// are recovered in the gate-timing code.

#pragma once

#include "ioncav/hilbert.hpp"

namespace ioncav {

// ------------------------------------ Pulse ---------------------------------

struct Pulse {
    int case_id = 1;    // 1..7
    int trap    = 0;
    double theta = 0.0; // rate * time, >= 0
};

void validate_pulse(const SystemConfig& config, const Pulse& pulse);

// Couplings derived from PhysicalParams. Recomputed on demand, never cached.
struct DerivedCouplings {
    double W           = 0.0; // G * eta_L
    double Omega       = 0.0; // eta_c * g * cos(phi)
    double Omega_prime = 0.0; // g * sin(phi)
};

DerivedCouplings derived_couplings(const PhysicalParams& params);

// Rate whose product with time gives theta: case 1 -> G; 2,3 -> W;
// 4,5,6 -> Omega; 7 -> Omega'.
double coupling_rate(int case_id, const PhysicalParams& params);

// Unit-rate Hermitian generator of the case (the Hamiltonian with its coupling
// prefactor divided out). Well defined even where the physical rate vanishes.
Matrix case_generator(const SystemConfig& config, int case_id, int trap);

// Physical interaction Hamiltonian: coupling_rate * case_generator.
Matrix case_hamiltonian(const SystemConfig& config, const PhysicalParams& params,
                        int case_id, int trap);

// -------------------------------- Propagation -------------------------------

// Population threshold at the cutoff boundary above which a raising pulse is
// refused (TruncationError) instead of silently clamping the evolution.
inline constexpr double kTruncationRiskPopulation = 1e-10;

// Closed-form evolution exp(-i * theta * generator) applied via the 2x2 block
// structure of the case Hamiltonians. Norm-preserving.
PureState analytic_propagate(const PureState& state, const Pulse& pulse);

// Independent oracle: same unitary through eigendecomposition of the generator.
PureState expm_propagate(const PureState& state, const Pulse& pulse);

} // namespace ioncav
