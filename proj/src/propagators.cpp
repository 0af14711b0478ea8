#include "ioncav/propagators.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ioncav {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_case(int case_id) {
    if (case_id < 1 || case_id > 7)
        throw std::domain_error("case_id must be in [1, 7], got " + std::to_string(case_id));
}

// The partner a basis state is coupled to by a given case, together with the
// sqrt-factor multiplying theta. Partner occupations may lie past the cutoffs;
// the caller decides what that means. Empty result = dark state (factor 0).
struct CoupledPartner {
    BasisLabel label;   // occupations possibly out of range
    double factor = 0.0;
};

std::optional<CoupledPartner> coupled_partner(const BasisLabel& label, int case_id, int trap) {
    const bool excited = label.internal_state[trap] == 1;
    const int m = label.photon;       // photon occupation
    const int n = label.phonon[trap]; // phonon occupation of the addressed trap

    BasisLabel to = label;
    to.internal_state[trap] = excited ? 0 : 1;
    double f = 0.0;

    switch (case_id) {
    case 1:
        f = 1.0;
        break;
    case 2: // g,n <-> e,n-1
        if (!excited) { to.phonon[trap] = n - 1; f = std::sqrt(double(n)); }
        else          { to.phonon[trap] = n + 1; f = std::sqrt(double(n + 1)); }
        break;
    case 3: // g,n <-> e,n+1
        if (!excited) { to.phonon[trap] = n + 1; f = std::sqrt(double(n + 1)); }
        else          { to.phonon[trap] = n - 1; f = std::sqrt(double(n)); }
        break;
    case 4: // g,m,n <-> e,m-1,n-1
        if (!excited) { to.photon = m - 1; to.phonon[trap] = n - 1; f = std::sqrt(double(m) * n); }
        else          { to.photon = m + 1; to.phonon[trap] = n + 1; f = std::sqrt(double(m + 1) * (n + 1)); }
        break;
    case 5: // g,m,n <-> e,m+1,n-1
        if (!excited) { to.photon = m + 1; to.phonon[trap] = n - 1; f = std::sqrt(double(m + 1) * n); }
        else          { to.photon = m - 1; to.phonon[trap] = n + 1; f = std::sqrt(double(m) * (n + 1)); }
        break;
    case 6: // g,m,n <-> e,m-1,n+1
        if (!excited) { to.photon = m - 1; to.phonon[trap] = n + 1; f = std::sqrt(double(m) * (n + 1)); }
        else          { to.photon = m + 1; to.phonon[trap] = n - 1; f = std::sqrt(double(m + 1) * n); }
        break;
    case 7: // g,m <-> e,m-1
        if (!excited) { to.photon = m - 1; f = std::sqrt(double(m)); }
        else          { to.photon = m + 1; f = std::sqrt(double(m + 1)); }
        break;
    default:
        check_case(case_id);
    }
    if (f == 0.0) return std::nullopt;
    return CoupledPartner{std::move(to), f};
}

bool within_cutoffs(const SystemConfig& config, const BasisLabel& label, int trap) {
    return label.photon >= 0 && label.photon <= config.photon_cutoff &&
           label.phonon[trap] >= 0 && label.phonon[trap] <= config.phonon_cutoff;
}

} // namespace

void validate_pulse(const SystemConfig& config, const Pulse& pulse) {
    check_case(pulse.case_id);
    if (pulse.trap < 0 || pulse.trap >= config.trap_count)
        throw std::out_of_range("Pulse.trap: index " + std::to_string(pulse.trap) +
                                " out of range for trap_count " + std::to_string(config.trap_count));
    if (!(pulse.theta >= 0.0))
        throw std::invalid_argument("Pulse.theta: must be >= 0");
}

DerivedCouplings derived_couplings(const PhysicalParams& params) {
    return DerivedCouplings{
        params.G * params.eta_L,
        params.eta_c * params.g * std::cos(params.phi),
        params.g * std::sin(params.phi),
    };
}

double coupling_rate(int case_id, const PhysicalParams& params) {
    check_case(case_id);
    const DerivedCouplings c = derived_couplings(params);
    switch (case_id) {
    case 1: return params.G;
    case 2:
    case 3: return c.W;
    case 4:
    case 5:
    case 6: return c.Omega;
    default: return c.Omega_prime;
    }
}

Matrix case_generator(const SystemConfig& config, int case_id, int trap) {
    check_case(case_id);
    const Matrix a     = build_operator(config, OperatorSymbol::A);
    const Matrix ad    = build_operator(config, OperatorSymbol::ADag);
    const Matrix b     = build_operator(config, OperatorSymbol::B, trap);
    const Matrix bd    = build_operator(config, OperatorSymbol::BDag, trap);
    const Matrix sp    = build_operator(config, OperatorSymbol::SigmaPlus, trap);
    const Matrix sm    = build_operator(config, OperatorSymbol::SigmaMinus, trap);

    switch (case_id) {
    case 1: return sp + sm;
    case 2: return kI * (b * sp - bd * sm);
    case 3: return kI * (bd * sp - b * sm);
    case 4: return ad * bd * sm + a * b * sp;
    case 5: return a * bd * sm + ad * b * sp;
    case 6: return a * bd * sp + ad * b * sm;
    default: return ad * sm + a * sp;
    }
}

Matrix case_hamiltonian(const SystemConfig& config, const PhysicalParams& params,
                        int case_id, int trap) {
    return coupling_rate(case_id, params) * case_generator(config, case_id, trap);
}

PureState analytic_propagate(const PureState& state, const Pulse& pulse) {
    const SystemConfig& config = state.config;
    validate_pulse(config, pulse);
    const int dim = config.dimension();

    // Cases 2 and 3 rotate with real sines (the g-side gains +sin into its
    // partner), the others with -i*sin on both sides.
    const bool real_rotation = pulse.case_id == 2 || pulse.case_id == 3;

    Vector out = state.amplitudes;
    double risky_population = 0.0;
    std::string risky_example;

    for (int i = 0; i < dim; ++i) {
        const BasisLabel label = basis_label(config, i);
        const auto partner = coupled_partner(label, pulse.case_id, pulse.trap);
        if (!partner) continue; // dark state

        if (!within_cutoffs(config, partner->label, pulse.trap)) {
            // Coupled out of the truncated space: frozen here, rotating in the
            // untruncated dynamics. Tracked for the refusal check below.
            const double population = std::norm(state.amplitudes[i]);
            if (population > 0.0 && risky_example.empty()) risky_example = format_label(label);
            risky_population += population;
            continue;
        }
        if (label.internal_state[pulse.trap] == 1) continue; // pair handled from its g side

        const int j = basis_index(config, partner->label);
        const double angle = partner->factor * pulse.theta;
        const Complex in_g = state.amplitudes[i];
        const Complex in_e = state.amplitudes[j];
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        if (real_rotation) {
            out[i] = c * in_g - s * in_e;
            out[j] = s * in_g + c * in_e;
        } else {
            out[i] = c * in_g - kI * s * in_e;
            out[j] = -kI * s * in_g + c * in_e;
        }
    }

    if (pulse.theta > 0.0 && risky_population > kTruncationRiskPopulation) {
        throw TruncationError("analytic_propagate: case " + std::to_string(pulse.case_id) +
                              " pulse on trap " + std::to_string(pulse.trap) +
                              " would leak population " + std::to_string(risky_population) +
                              " past the Fock cutoff (first offending state " + risky_example + ")");
    }
    return PureState{config, std::move(out)};
}

PureState expm_propagate(const PureState& state, const Pulse& pulse) {
    const SystemConfig& config = state.config;
    validate_pulse(config, pulse);

    const Matrix generator = case_generator(config, pulse.case_id, pulse.trap);
    if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::runtime_error("expm_propagate: generator is not Hermitian (internal bug)");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(generator);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("expm_propagate: eigendecomposition failed");

    const Vector in_eigen = solver.eigenvectors().adjoint() * state.amplitudes;
    Vector rotated(in_eigen.size());
    for (int k = 0; k < in_eigen.size(); ++k)
        rotated[k] = std::exp(-kI * pulse.theta * solver.eigenvalues()[k]) * in_eigen[k];
    return PureState{config, solver.eigenvectors() * rotated};
}

} // namespace ioncav
