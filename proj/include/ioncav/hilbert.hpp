// hilbert.hpp — Truncated tensor-product Hilbert space for trapped ions in a cavity:
// basis bookkeeping, ladder/Pauli operators embedded on their factors, states,
// inner products and reduced density matrices.
//
// Factors per trap: ion internal level {g, e} and trap phonon mode (Fock 0..N_b).
// One shared cavity photon mode (Fock 0..N_a). Basis order is mixed-radix with the
// photon digit fastest, then phonon and internal of trap 0, then phonon and internal
// of trap 1:
//
//   index = photon
//         + (N_a+1) * ( phonon_0 + (N_b+1) * ( internal_0
//         + 2       * ( phonon_1 + (N_b+1) *   internal_1 )))
//
// with g = 0, e = 1. The ordering is frozen; file formats and amplitude dumps
// rely on it.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ioncav/errors.hpp"

namespace ioncav {

using Complex = std::complex<double>;
using Vector  = Eigen::VectorXcd;
using Matrix  = Eigen::MatrixXcd;

// --------------------------------- SystemConfig -----------------------------

struct SystemConfig {
    int trap_count    = 1; // 1 or 2
    int phonon_cutoff = 5; // N_b, max phonon number per trap
    int photon_cutoff = 5; // N_a, max photon number

    int dimension() const;
    void validate() const; // throws std::invalid_argument naming the bad field

    bool operator==(const SystemConfig&) const = default;
};

SystemConfig make_config(int trap_count, int phonon_cutoff, int photon_cutoff);

// -------------------------------- PhysicalParams ----------------------------

// All frequencies in rad/s; kappa in 1/s (cavity energy decay, T_d = 1/kappa).
struct PhysicalParams {
    double omega0  = 0.0; // atomic transition
    double omega_c = 0.0; // cavity mode
    double omega_L = 0.0; // laser
    double nu      = 0.0; // trap frequency
    double g       = 0.0; // ion-cavity coupling
    double G       = 0.0; // ion-laser coupling
    double eta_c   = 0.0; // Lamb-Dicke parameter, cavity
    double eta_L   = 0.0; // Lamb-Dicke parameter, laser
    double phi     = 0.0; // standing-wave phase
    double kappa   = 0.0; // cavity decay rate

    void validate() const; // throws std::invalid_argument naming the bad field
};

// Reference parameter set: g = 2pi*3e7 rad/s, G = 2pi*5e5 rad/s,
// eta_c = eta_L = 0.2, phi = pi/4, nu = 2pi*1e6 rad/s, resonances unset.
PhysicalParams default_params();

// ---------------------------------- BasisLabel ------------------------------

struct BasisLabel {
    std::vector<int> internal_state; // per trap, 0 = g, 1 = e
    std::vector<int> phonon;         // per trap, 0..N_b
    int photon = 0;                  // 0..N_a
};

BasisLabel make_label(std::vector<int> internal_state, std::vector<int> phonon, int photon);

int        basis_index(const SystemConfig& config, const BasisLabel& label);
BasisLabel basis_label(const SystemConfig& config, int index);

// Text form "g,0;e,1;a=0": per-trap internal,phonon pairs separated by ';',
// photon occupation last.
std::string format_label(const BasisLabel& label);
BasisLabel  parse_label(const SystemConfig& config, const std::string& text);

// ----------------------------------- PureState ------------------------------

struct PureState {
    SystemConfig config;
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

PureState basis_state(const SystemConfig& config, const BasisLabel& label);

Complex inner(const PureState& x, const PureState& y); // <x|y>
double  fidelity_pure(const PureState& x, const PureState& y); // |<x|y>|^2

// ---------------------------------- Operators -------------------------------

enum class OperatorSymbol {
    Identity,
    A,          // photon annihilation
    ADag,
    B,          // phonon annihilation, trap-indexed
    BDag,
    SigmaPlus,  // |e><g|, trap-indexed
    SigmaMinus, // |g><e|
    SigmaZ,     // |e><e| - |g><g|
    SigmaX,
};

// Embeds the single-factor operator on the full space; all other factors are
// untouched. Ladder operators annihilate above the cutoff.
Matrix build_operator(const SystemConfig& config, OperatorSymbol symbol, int trap = 0);

PureState apply_operator(const Matrix& op, const PureState& state);

// ------------------------------- Factor analysis ----------------------------

enum class FactorKind { Internal, Phonon, Photon };

struct TensorFactor {
    FactorKind kind = FactorKind::Photon;
    int trap = 0; // ignored for Photon
};

// Partial trace over everything but the selected factor.
Matrix reduced_density(const PureState& state, const TensorFactor& factor);

// Von Neumann entropy -sum(l * ln l) of a Hermitian density matrix.
double von_neumann_entropy(const Matrix& rho);

} // namespace ioncav
