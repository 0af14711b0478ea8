#include "ioncav/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ioncav {

namespace {

void check_trap(const SystemConfig& config, int trap, const char* where) {
    if (trap < 0 || trap >= config.trap_count) {
        throw std::out_of_range(std::string(where) + ": trap index " + std::to_string(trap) +
                                " out of range for trap_count " + std::to_string(config.trap_count));
    }
}

} // namespace

// --------------------------------- SystemConfig -----------------------------

int SystemConfig::dimension() const {
    int d = photon_cutoff + 1;
    for (int t = 0; t < trap_count; ++t) d *= 2 * (phonon_cutoff + 1);
    return d;
}

void SystemConfig::validate() const {
    if (trap_count != 1 && trap_count != 2)
        throw std::invalid_argument("SystemConfig.trap_count: must be 1 or 2, got " + std::to_string(trap_count));
    if (phonon_cutoff < 1)
        throw std::invalid_argument("SystemConfig.phonon_cutoff: must be >= 1, got " + std::to_string(phonon_cutoff));
    if (photon_cutoff < 1)
        throw std::invalid_argument("SystemConfig.photon_cutoff: must be >= 1, got " + std::to_string(photon_cutoff));
}

SystemConfig make_config(int trap_count, int phonon_cutoff, int photon_cutoff) {
    SystemConfig config{trap_count, phonon_cutoff, photon_cutoff};
    config.validate();
    return config;
}

// -------------------------------- PhysicalParams ----------------------------

void PhysicalParams::validate() const {
    if (!(g >= 0.0)) throw std::invalid_argument("PhysicalParams.g: must be >= 0");
    if (!(G >= 0.0)) throw std::invalid_argument("PhysicalParams.G: must be >= 0");
    if (!(nu >= 0.0)) throw std::invalid_argument("PhysicalParams.nu: must be >= 0");
    if (!(eta_c >= 0.0 && eta_c < 1.0)) throw std::invalid_argument("PhysicalParams.eta_c: must be in [0, 1)");
    if (!(eta_L >= 0.0 && eta_L < 1.0)) throw std::invalid_argument("PhysicalParams.eta_L: must be in [0, 1)");
    if (!(kappa >= 0.0)) throw std::invalid_argument("PhysicalParams.kappa: must be >= 0");
    if (!std::isfinite(omega0) || !std::isfinite(omega_c) || !std::isfinite(omega_L) || !std::isfinite(phi))
        throw std::invalid_argument("PhysicalParams: omega0/omega_c/omega_L/phi must be finite");
}

PhysicalParams default_params() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PhysicalParams p;
    p.g     = two_pi * 3.0e7;
    p.G     = two_pi * 5.0e5;
    p.eta_c = 0.2;
    p.eta_L = 0.2;
    p.phi   = std::numbers::pi / 4.0;
    p.nu    = two_pi * 1.0e6;
    p.omega0  = 0.0;
    p.omega_c = 0.0;
    p.omega_L = 0.0;
    p.kappa   = 0.0;
    return p;
}

// ---------------------------------- BasisLabel ------------------------------

BasisLabel make_label(std::vector<int> internal_state, std::vector<int> phonon, int photon) {
    BasisLabel label;
    label.internal_state = std::move(internal_state);
    label.phonon = std::move(phonon);
    label.photon = photon;
    return label;
}

int basis_index(const SystemConfig& config, const BasisLabel& label) {
    config.validate();
    if (static_cast<int>(label.internal_state.size()) != config.trap_count)
        throw std::out_of_range("BasisLabel.internal_state: expected " + std::to_string(config.trap_count) +
                                " entries, got " + std::to_string(label.internal_state.size()));
    if (static_cast<int>(label.phonon.size()) != config.trap_count)
        throw std::out_of_range("BasisLabel.phonon: expected " + std::to_string(config.trap_count) +
                                " entries, got " + std::to_string(label.phonon.size()));
    if (label.photon < 0 || label.photon > config.photon_cutoff)
        throw std::out_of_range("BasisLabel.photon: " + std::to_string(label.photon) +
                                " outside [0, " + std::to_string(config.photon_cutoff) + "]");
    for (int t = 0; t < config.trap_count; ++t) {
        if (label.internal_state[t] != 0 && label.internal_state[t] != 1)
            throw std::out_of_range("BasisLabel.internal_state[" + std::to_string(t) + "]: must be 0 (g) or 1 (e)");
        if (label.phonon[t] < 0 || label.phonon[t] > config.phonon_cutoff)
            throw std::out_of_range("BasisLabel.phonon[" + std::to_string(t) + "]: " +
                                    std::to_string(label.phonon[t]) + " outside [0, " +
                                    std::to_string(config.phonon_cutoff) + "]");
    }

    // Mixed radix, photon fastest, then (phonon, internal) per trap.
    int index = 0;
    for (int t = config.trap_count - 1; t >= 0; --t) {
        index = index * 2 + label.internal_state[t];
        index = index * (config.phonon_cutoff + 1) + label.phonon[t];
    }
    index = index * (config.photon_cutoff + 1) + label.photon;
    return index;
}

BasisLabel basis_label(const SystemConfig& config, int index) {
    config.validate();
    if (index < 0 || index >= config.dimension())
        throw std::out_of_range("basis_label: index " + std::to_string(index) +
                                " outside [0, " + std::to_string(config.dimension()) + ")");
    BasisLabel label;
    label.internal_state.resize(config.trap_count);
    label.phonon.resize(config.trap_count);
    label.photon = index % (config.photon_cutoff + 1);
    index /= (config.photon_cutoff + 1);
    for (int t = 0; t < config.trap_count; ++t) {
        label.phonon[t] = index % (config.phonon_cutoff + 1);
        index /= (config.phonon_cutoff + 1);
        label.internal_state[t] = index % 2;
        index /= 2;
    }
    return label;
}

std::string format_label(const BasisLabel& label) {
    std::ostringstream out;
    for (size_t t = 0; t < label.internal_state.size(); ++t) {
        out << (label.internal_state[t] == 0 ? 'g' : 'e') << ',' << label.phonon[t] << ';';
    }
    out << "a=" << label.photon;
    return out.str();
}

BasisLabel parse_label(const SystemConfig& config, const std::string& text) {
    BasisLabel label;
    std::istringstream in(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ';')) parts.push_back(part);
    if (parts.size() != static_cast<size_t>(config.trap_count) + 1)
        throw std::invalid_argument("parse_label: expected " + std::to_string(config.trap_count) +
                                    " trap sections plus photon in '" + text + "'");
    for (int t = 0; t < config.trap_count; ++t) {
        const std::string& p = parts[t];
        auto comma = p.find(',');
        if (comma == std::string::npos || comma == 0)
            throw std::invalid_argument("parse_label: bad trap section '" + p + "'");
        const std::string sym = p.substr(0, comma);
        if (sym != "g" && sym != "e")
            throw std::invalid_argument("parse_label: internal state must be 'g' or 'e' in '" + p + "'");
        label.internal_state.push_back(sym == "e" ? 1 : 0);
        label.phonon.push_back(std::stoi(p.substr(comma + 1)));
    }
    const std::string& photon_part = parts.back();
    if (photon_part.rfind("a=", 0) != 0)
        throw std::invalid_argument("parse_label: photon section must look like 'a=0', got '" + photon_part + "'");
    label.photon = std::stoi(photon_part.substr(2));
    basis_index(config, label); // range-check
    return label;
}

// ----------------------------------- PureState ------------------------------

PureState basis_state(const SystemConfig& config, const BasisLabel& label) {
    PureState state{config, Vector::Zero(config.dimension())};
    state.amplitudes[basis_index(config, label)] = 1.0;
    return state;
}

Complex inner(const PureState& x, const PureState& y) {
    if (x.config != y.config || x.amplitudes.size() != y.amplitudes.size())
        throw std::invalid_argument("inner: state dimensions/configs do not match");
    return x.amplitudes.dot(y.amplitudes); // Eigen: conjugates the left argument
}

double fidelity_pure(const PureState& x, const PureState& y) {
    return std::norm(inner(x, y));
}

// ---------------------------------- Operators -------------------------------

Matrix build_operator(const SystemConfig& config, OperatorSymbol symbol, int trap) {
    config.validate();
    const int dim = config.dimension();
    Matrix op = Matrix::Zero(dim, dim);

    switch (symbol) {
    case OperatorSymbol::Identity:
        return Matrix::Identity(dim, dim);
    case OperatorSymbol::B:
    case OperatorSymbol::BDag:
    case OperatorSymbol::SigmaPlus:
    case OperatorSymbol::SigmaMinus:
    case OperatorSymbol::SigmaZ:
    case OperatorSymbol::SigmaX:
        check_trap(config, trap, "build_operator");
        break;
    default:
        break;
    }

    for (int i = 0; i < dim; ++i) {
        BasisLabel label = basis_label(config, i);
        switch (symbol) {
        case OperatorSymbol::A:
            if (label.photon >= 1) {
                BasisLabel to = label;
                to.photon -= 1;
                op(basis_index(config, to), i) = std::sqrt(double(label.photon));
            }
            break;
        case OperatorSymbol::ADag:
            if (label.photon + 1 <= config.photon_cutoff) {
                BasisLabel to = label;
                to.photon += 1;
                op(basis_index(config, to), i) = std::sqrt(double(label.photon + 1));
            }
            break;
        case OperatorSymbol::B:
            if (label.phonon[trap] >= 1) {
                BasisLabel to = label;
                to.phonon[trap] -= 1;
                op(basis_index(config, to), i) = std::sqrt(double(label.phonon[trap]));
            }
            break;
        case OperatorSymbol::BDag:
            if (label.phonon[trap] + 1 <= config.phonon_cutoff) {
                BasisLabel to = label;
                to.phonon[trap] += 1;
                op(basis_index(config, to), i) = std::sqrt(double(label.phonon[trap] + 1));
            }
            break;
        case OperatorSymbol::SigmaPlus:
            if (label.internal_state[trap] == 0) {
                BasisLabel to = label;
                to.internal_state[trap] = 1;
                op(basis_index(config, to), i) = 1.0;
            }
            break;
        case OperatorSymbol::SigmaMinus:
            if (label.internal_state[trap] == 1) {
                BasisLabel to = label;
                to.internal_state[trap] = 0;
                op(basis_index(config, to), i) = 1.0;
            }
            break;
        case OperatorSymbol::SigmaZ:
            op(i, i) = label.internal_state[trap] == 1 ? 1.0 : -1.0;
            break;
        case OperatorSymbol::SigmaX: {
            BasisLabel to = label;
            to.internal_state[trap] = 1 - label.internal_state[trap];
            op(basis_index(config, to), i) = 1.0;
            break;
        }
        case OperatorSymbol::Identity:
            break;
        }
    }
    return op;
}

PureState apply_operator(const Matrix& op, const PureState& state) {
    if (op.cols() != state.amplitudes.size())
        throw std::invalid_argument("apply_operator: operator/state dimension mismatch");
    return PureState{state.config, op * state.amplitudes};
}

// ------------------------------- Factor analysis ----------------------------

namespace {

// Digit of the selected factor plus the index with that digit stripped, so the
// partial trace can group basis states by "everything else".
std::pair<int, long> split_factor(const SystemConfig& config, int index, const TensorFactor& factor) {
    const BasisLabel label = basis_label(config, index);
    int digit = 0;
    long rest = 0;
    long base = 1;
    auto push = [&](int value, int radix) {
        rest += base * value;
        base *= radix;
    };
    if (factor.kind == FactorKind::Photon) digit = label.photon;
    else push(label.photon, config.photon_cutoff + 1);
    for (int t = 0; t < config.trap_count; ++t) {
        if (factor.kind == FactorKind::Phonon && factor.trap == t) digit = label.phonon[t];
        else push(label.phonon[t], config.phonon_cutoff + 1);
        if (factor.kind == FactorKind::Internal && factor.trap == t) digit = label.internal_state[t];
        else push(label.internal_state[t], 2);
    }
    return {digit, rest};
}

} // namespace

Matrix reduced_density(const PureState& state, const TensorFactor& factor) {
    const SystemConfig& config = state.config;
    if (factor.kind != FactorKind::Photon) check_trap(config, factor.trap, "reduced_density");
    const int levels = factor.kind == FactorKind::Internal ? 2
                     : factor.kind == FactorKind::Phonon   ? config.phonon_cutoff + 1
                                                           : config.photon_cutoff + 1;
    const int dim = config.dimension();
    const int rest_dim = dim / levels;

    // Reshape amplitudes into (factor digit) x (rest) and contract the rest.
    Matrix reshaped = Matrix::Zero(levels, rest_dim);
    for (int i = 0; i < dim; ++i) {
        auto [digit, rest] = split_factor(config, i, factor);
        reshaped(digit, rest) = state.amplitudes[i];
    }
    return reshaped * reshaped.adjoint();
}

double von_neumann_entropy(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("von_neumann_entropy: eigendecomposition failed");
    double entropy = 0.0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda > 1e-15) entropy -= lambda * std::log(lambda);
    }
    return entropy;
}

} // namespace ioncav
