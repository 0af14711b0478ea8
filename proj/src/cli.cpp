#include "ioncav/cli.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ioncav/gates.hpp"
#include "ioncav/io.hpp"
#include "ioncav/lab_frame.hpp"
#include "ioncav/open_system.hpp"
#include "ioncav/propagators.hpp"
#include "ioncav/protocols.hpp"

namespace ioncav {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTolerance = 2;

// Reference gate times for the default parameter set, with relative windows.
constexpr double kRefCnotAbSeconds = 1.5e-7;
constexpr double kRefCnotAbWindow  = 0.05;
constexpr double kRefCnotBaSeconds = 7.8e-6;
constexpr double kRefCnotBaWindow  = 0.02;
constexpr double kRefHadBSeconds   = 6.8e-6;
constexpr double kRefHadBWindow    = 0.02;
// Quoted for hadamard_a at the same parameters, but the sequence formula gives
// ~1.77e-6 s; reported side by side, never asserted.
constexpr double kRefHadASeconds = 4.2e-6;

constexpr double kProtocolTolerance = 1e-10;
constexpr double kTruthTolerance = 1e-10;
constexpr double kRwaTolerance = 1e-2;

// ------------------------------ shared options ------------------------------

struct CommonOptions {
    std::string config_path;
    std::optional<double> g_hz, G_hz, nu_hz, omega0_hz, omega_c_hz, omega_L_hz;
    std::optional<double> eta_c, eta_L, phi, kappa;
    std::optional<int> trap_count, phonon_cutoff, photon_cutoff;
    std::string out_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--g-hz", g_hz, "ion-cavity coupling g in Hz");
        cmd->add_option("--G-hz", G_hz, "ion-laser coupling G in Hz");
        cmd->add_option("--nu-hz", nu_hz, "trap frequency in Hz");
        cmd->add_option("--omega0-hz", omega0_hz, "atomic transition frequency in Hz");
        cmd->add_option("--omega-c-hz", omega_c_hz, "cavity frequency in Hz");
        cmd->add_option("--omega-l-hz", omega_L_hz, "laser frequency in Hz");
        cmd->add_option("--eta-c", eta_c, "Lamb-Dicke parameter (cavity)");
        cmd->add_option("--eta-l", eta_L, "Lamb-Dicke parameter (laser)");
        cmd->add_option("--phi", phi, "standing-wave phase in rad");
        cmd->add_option("--kappa", kappa, "cavity decay rate in 1/s");
        cmd->add_option("--trap-count", trap_count, "number of traps (1 or 2)");
        cmd->add_option("--phonon-cutoff", phonon_cutoff, "max phonon number");
        cmd->add_option("--photon-cutoff", photon_cutoff, "max photon number");
        cmd->add_option("--out", out_path, "write the result document to this file");
    }

    RunConfig resolve(int default_traps = 0) const {
        constexpr double two_pi = 2.0 * kPi;
        RunConfig config =
            config_path.empty() ? default_run_config() : load_run_config(config_path);
        if (default_traps > 0 && config_path.empty() && !trap_count)
            config.system.trap_count = default_traps;
        if (g_hz) config.params.g = two_pi * *g_hz;
        if (G_hz) config.params.G = two_pi * *G_hz;
        if (nu_hz) config.params.nu = two_pi * *nu_hz;
        if (omega0_hz) config.params.omega0 = two_pi * *omega0_hz;
        if (omega_c_hz) config.params.omega_c = two_pi * *omega_c_hz;
        if (omega_L_hz) config.params.omega_L = two_pi * *omega_L_hz;
        if (eta_c) config.params.eta_c = *eta_c;
        if (eta_L) config.params.eta_L = *eta_L;
        if (phi) config.params.phi = *phi;
        if (kappa) config.params.kappa = *kappa;
        if (trap_count) config.system.trap_count = *trap_count;
        if (phonon_cutoff) config.system.phonon_cutoff = *phonon_cutoff;
        if (photon_cutoff) config.system.photon_cutoff = *photon_cutoff;
        config.params.validate();
        config.system.validate();
        return config;
    }
};

void emit(const CommonOptions& options, std::ostream& out, const std::string& document) {
    if (options.out_path.empty()) out << document;
    else write_text_file(options.out_path, document);
}

std::string format_complex(Complex value) {
    const double re = value.real() == 0.0 ? 0.0 : value.real(); // drop -0
    const double im = value.imag() == 0.0 ? 0.0 : value.imag();
    std::ostringstream s;
    s << format_double(re) << (im < 0 ? "" : "+") << format_double(im) << "i";
    return s.str();
}

json amplitudes_to_json(const Vector& amplitudes) {
    json out = json::array();
    for (int i = 0; i < amplitudes.size(); ++i)
        out.push_back({amplitudes[i].real(), amplitudes[i].imag()});
    return out;
}

GateKind parse_gate_name(const std::string& name) {
    static const std::map<std::string, GateKind> table = {
        {"cnot_ab", GateKind::CnotAB},       {"cnot_ba", GateKind::CnotBA},
        {"h_a", GateKind::HadamardA},        {"h_b", GateKind::HadamardB},
        {"hadamard_a", GateKind::HadamardA}, {"hadamard_b", GateKind::HadamardB},
        {"swap_ab", GateKind::SwapAB},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown gate '" + name +
                                    "' (expected cnot_ab|cnot_ba|h_a|h_b|swap_ab)");
    return it->second;
}

// Reference qubit-level tables: map (a_in, b_in) -> list of (a_out, b_out, amp).
using QubitTable = std::map<std::pair<int, int>, std::vector<std::tuple<int, int, Complex>>>;

QubitTable reference_table(GateKind kind) {
    const double r = 1.0 / std::numbers::sqrt2;
    switch (kind) {
    case GateKind::CnotAB:
        return {{{0, 0}, {{0, 0, 1.0}}},
                {{0, 1}, {{0, 1, 1.0}}},
                {{1, 0}, {{1, 1, 1.0}}},
                {{1, 1}, {{1, 0, 1.0}}}};
    case GateKind::CnotBA:
        return {{{0, 0}, {{0, 0, 1.0}}},
                {{0, 1}, {{1, 1, kI}}},
                {{1, 0}, {{1, 0, 1.0}}},
                {{1, 1}, {{0, 1, kI}}}};
    case GateKind::HadamardA:
        return {{{0, 0}, {{0, 0, r}, {1, 0, r}}},
                {{1, 0}, {{0, 0, r}, {1, 0, -r}}}};
    case GateKind::HadamardB:
        // Derived from the sequence algebra and pinned against the matrix
        // exponential oracle in the test suite.
        return {{{0, 0}, {{0, 0, r}, {0, 1, -kI * r}}},
                {{0, 1}, {{0, 0, kI * r}, {0, 1, -r}}}};
    case GateKind::SwapAB:
        return {{{0, 0}, {{0, 0, 1.0}}},
                {{0, 1}, {{1, 0, kI}}},
                {{1, 0}, {{0, 1, kI}}},
                {{1, 1}, {{1, 1, 1.0}}}};
    default:
        throw std::invalid_argument("verify: no reference table for this gate");
    }
}

// ---------------------------------- verify ----------------------------------

int cmd_verify(const CommonOptions& options, const std::string& gate, int trap,
               std::ostream& out) {
    const RunConfig config = options.resolve();
    const GateKind kind = parse_gate_name(gate);
    const QubitTable reference = reference_table(kind);
    const auto rows = truth_table({kind, trap}, config.system);

    double max_error = 0.0;
    json row_docs = json::array();
    for (const auto& row : rows) {
        Vector expected = Vector::Zero(config.system.dimension());
        for (const auto& [a_out, b_out, amp] : reference.at({row.photon_in, row.phonon_in})) {
            BasisLabel label;
            label.internal_state.assign(config.system.trap_count, 0);
            label.phonon.assign(config.system.trap_count, 0);
            label.photon = a_out;
            label.phonon[trap] = b_out;
            expected[basis_index(config.system, label)] = amp;
        }
        const double row_error = (row.output.amplitudes - expected).cwiseAbs().maxCoeff();
        max_error = std::max(max_error, row_error);

        std::ostringstream line;
        line << "|" << row.photon_in << row.phonon_in << ">_ab -> ";
        bool first = true;
        for (int i = 0; i < row.output.amplitudes.size(); ++i) {
            if (std::abs(row.output.amplitudes[i]) < 1e-12) continue;
            const BasisLabel label = basis_label(config.system, i);
            if (!first) line << " + ";
            line << "(" << format_complex(row.output.amplitudes[i]) << ")|" << label.photon
                 << label.phonon[trap] << ">_ab";
            first = false;
        }
        out << line.str() << "\n";
        row_docs.push_back({{"photon_in", row.photon_in},
                            {"phonon_in", row.phonon_in},
                            {"output_amplitudes", amplitudes_to_json(row.output.amplitudes)},
                            {"row_error", row_error}});
    }
    out << "gate " << gate << ": max amplitude error " << format_double(max_error) << "\n";

    if (!options.out_path.empty()) {
        const json doc = result_envelope(
            config, json{{"gate", gate}, {"rows", row_docs}, {"max_error", max_error}});
        write_text_file(options.out_path, doc.dump(2) + "\n");
    }
    return max_error <= kTruthTolerance ? kExitOk : kExitTolerance;
}

// ---------------------------------- compile ---------------------------------

int cmd_compile(const CommonOptions& options, const std::string& gate, int trap,
                std::ostream& out) {
    const PulseProgram program = compile_gate({parse_gate_name(gate), trap});
    emit(options, out, pulses_to_json(program.pulses).dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------- timing ----------------------------------

int cmd_timing(const CommonOptions& options, const std::string& sweep_axis, double sweep_from,
               double sweep_to, int sweep_points, double delay, std::ostream& out) {
    const RunConfig config = options.resolve();

    if (!sweep_axis.empty()) {
        if (sweep_axis != "g" && sweep_axis != "G")
            throw std::invalid_argument("timing: --sweep must be 'g' or 'G'");
        if (!(sweep_from > 0.0) || !(sweep_to > sweep_from) || sweep_points < 2)
            throw std::invalid_argument("timing: sweep needs 0 < from < to and points >= 2");
        std::vector<double> values;
        for (int i = 0; i < sweep_points; ++i)
            values.push_back(sweep_from + (sweep_to - sweep_from) * i / (sweep_points - 1));
        const std::vector<GateSpec> gates = {{GateKind::CnotAB, 0},
                                             {GateKind::CnotBA, 0},
                                             {GateKind::HadamardA, 0},
                                             {GateKind::HadamardB, 0}};
        const auto rows = timing_sweep(gates, config.params,
                                       sweep_axis == "g" ? SweepAxis::CavityCoupling
                                                         : SweepAxis::LaserCoupling,
                                       values);
        std::vector<std::vector<std::string>> csv_rows;
        for (const SweepRow& row : rows)
            csv_rows.push_back({format_double(row.coupling), row.gate,
                                format_double(row.seconds)});
        emit(options, out, csv_document(config, "coupling,gate,seconds", csv_rows));
        return kExitOk;
    }

    std::map<std::string, double> seconds;
    for (GateKind kind : {GateKind::CnotAB, GateKind::CnotBA, GateKind::HadamardA,
                          GateKind::HadamardB}) {
        const TimingReport report = program_duration(compile_gate({kind, 0}), config.params, delay);
        seconds[gate_name(kind)] = report.total;
        out << gate_name(kind) << " " << format_double(report.total) << " s\n";
    }
    out << "note: hadamard_a from the pulse sequence is "
        << format_double(seconds["hadamard_a"]) << " s; the quoted figure for this "
        << "parameter set is " << format_double(kRefHadASeconds)
        << " s and is not reproduced by the sequence formula (reported, not asserted)\n";

    int status = kExitOk;
    if (config.params.g == default_params().g && config.params.G == default_params().G &&
        config.params.eta_c == default_params().eta_c &&
        config.params.eta_L == default_params().eta_L &&
        config.params.phi == default_params().phi && delay == 0.0) {
        const auto check = [&](const char* name, double reference, double window) {
            const double rel = std::abs(seconds[name] - reference) / reference;
            const bool ok = rel <= window;
            out << name << " vs reference " << format_double(reference) << " s: "
                << (ok ? "within " : "OUTSIDE ") << format_double(window * 100) << "%\n";
            if (!ok) status = kExitTolerance;
        };
        check("cnot_ab", kRefCnotAbSeconds, kRefCnotAbWindow);
        check("cnot_ba", kRefCnotBaSeconds, kRefCnotBaWindow);
        check("hadamard_b", kRefHadBSeconds, kRefHadBWindow);
    }

    if (!options.out_path.empty()) {
        json payload;
        for (const auto& [name, value] : seconds) payload[name] = value;
        write_text_file(options.out_path,
                        result_envelope(config, json{{"seconds", payload}}).dump(2) + "\n");
    }
    return status;
}

// --------------------------------- protocol ---------------------------------

// Hand-typed decimals land slightly off the unit circle; renormalize small
// rounding (<= 1e-6 in the squared norm) and reject anything larger.
AmplitudePair cli_pair(double c_re, double c_im, double d_re, double d_im, const char* which) {
    AmplitudePair pair{{c_re, c_im}, {d_re, d_im}};
    const double total = std::norm(pair.c) + std::norm(pair.d);
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument(std::string("protocol: |") + which + "|^2 amplitudes sum to " +
                                    format_double(total) + ", expected 1");
    const double scale = std::sqrt(total);
    pair.c /= scale;
    pair.d /= scale;
    return pair;
}

int cmd_protocol(const CommonOptions& options, const std::string& name, double c_re, double c_im,
                 double d_re, double d_im, double e_re, double e_im, double f_re, double f_im,
                 std::ostream& out) {
    const RunConfig config = options.resolve(/*default_traps=*/2);
    const AmplitudePair first = cli_pair(c_re, c_im, d_re, d_im, "C,D");
    const AmplitudePair second = cli_pair(e_re, e_im, f_re, f_im, "E,F");

    if (name == "motional_cnot") {
        const auto rows = motional_cnot_via_swaps(config.system);
        double residual = 0.0;
        json row_docs = json::array();
        for (const auto& row : rows) {
            const BasisLabel target =
                make_label({0, 0}, {row.b1_in, row.b2_in ^ row.b1_in}, 0);
            const int target_index = basis_index(config.system, target);
            double off_support = 0.0;
            for (int i = 0; i < row.output.amplitudes.size(); ++i)
                if (i != target_index) off_support += std::norm(row.output.amplitudes[i]);
            residual = std::max(residual, std::sqrt(off_support));
            out << "|" << row.b1_in << row.b2_in << ">_b1b2 -> ("
                << format_complex(row.output.amplitudes[target_index]) << ")|" << row.b1_in
                << (row.b2_in ^ row.b1_in) << ">_b1b2\n";
            row_docs.push_back({{"input",
                                 format_label(make_label({0, 0}, {row.b1_in, row.b2_in}, 0))},
                                {"output_amplitudes", amplitudes_to_json(row.output.amplitudes)}});
        }
        out << "occupation residual off the CNOT pattern: " << format_double(residual) << "\n";
        if (!options.out_path.empty()) {
            write_text_file(options.out_path,
                            result_envelope(config, json{{"label", "motional_cnot"},
                                                         {"rows", row_docs},
                                                         {"residual", residual}})
                                    .dump(2) +
                                "\n");
        }
        return residual <= kProtocolTolerance ? kExitOk : kExitTolerance;
    }

    ProtocolResult result;
    if (name == "transfer") result = state_transfer(config.system, first);
    else if (name == "internal_swap") result = internal_swap(config.system, {first, second});
    else if (name == "ghz") result = prepare_ghz(config.system, first);
    else if (name == "bell") result = bell_from_ghz(config.system, first, false);
    else if (name == "bell_hadamard") result = bell_from_ghz(config.system, first, true);
    else if (name == "entangle_internal") result = entangle_internal(config.system, first);
    else
        throw std::invalid_argument(
            "unknown protocol '" + name +
            "' (expected transfer|internal_swap|ghz|bell|bell_hadamard|entangle_internal|"
            "motional_cnot)");

    out << result.label << ": deviation " << format_double(result.deviation) << "\n";
    const json payload = {{"label", result.label},
                          {"final_amplitudes", amplitudes_to_json(result.final_state.amplitudes)},
                          {"expected_amplitudes", amplitudes_to_json(result.expected.amplitudes)},
                          {"deviation", result.deviation}};
    if (!options.out_path.empty())
        write_text_file(options.out_path, result_envelope(config, payload).dump(2) + "\n");
    return result.deviation <= kProtocolTolerance ? kExitOk : kExitTolerance;
}

// --------------------------------- fidelity ---------------------------------

std::optional<std::pair<int, int>> parse_input_bits(const std::string& input) {
    if (input.empty()) return std::nullopt;
    if (input.size() != 2 || (input[0] != '0' && input[0] != '1') ||
        (input[1] != '0' && input[1] != '1'))
        throw std::invalid_argument("fidelity: input must be two bits, e.g. 10");
    return std::make_pair(input[0] - '0', input[1] - '0');
}

int cmd_fidelity(const CommonOptions& options, double ratio_from, double ratio_to,
                 int ratio_points, const std::string& input_flag, int steps,
                 bool grid_flags_given, std::ostream& out) {
    RunConfig config = options.resolve();
    if (options.config_path.empty() && !options.phonon_cutoff && !options.photon_cutoff) {
        // The study lives on Fock levels {0, 1}; small cutoffs keep it fast.
        config.system.phonon_cutoff = 2;
        config.system.photon_cutoff = 2;
    }

    // Config-file section first, flags override.
    FidelitySection section = config.fidelity.value_or(FidelitySection{});
    if (options.kappa) {
        section.kappa = *options.kappa;
        section.ratio_grid.clear();
    }
    if (grid_flags_given || (!section.kappa && section.ratio_grid.empty())) {
        if (!(ratio_from > 0.0) || !(ratio_to > ratio_from) || ratio_points < 2)
            throw std::invalid_argument(
                "fidelity: ratio grid needs 0 < from < to and points >= 2");
        section.ratio_grid.clear();
        for (int i = 0; i < ratio_points; ++i)
            section.ratio_grid.push_back(ratio_from +
                                         (ratio_to - ratio_from) * i / (ratio_points - 1));
        section.kappa.reset();
    }
    if (!input_flag.empty()) section.input = input_flag;
    if (section.decay_window.empty()) section.decay_window = {2};
    if (!section.average) section.average = !section.input;

    DecaySpec decay;
    decay.decay_window = section.decay_window;
    decay.steps_per_decay_pulse = steps;
    decay.dt = section.dt;
    const std::optional<std::pair<int, int>> input_ab =
        *section.average ? std::nullopt : parse_input_bits(section.input.value_or(""));

    config.fidelity = section; // outputs echo the effective settings

    if (section.kappa) {
        decay.kappa = *section.kappa;
        const double fidelity = cnot_ba_fidelity(config.system, config.params, decay, input_ab);
        out << "kappa " << format_double(decay.kappa) << " 1/s: fidelity "
            << format_double(fidelity) << "\n";
        if (!options.out_path.empty())
            write_text_file(options.out_path,
                            result_envelope(config, json{{"kappa", decay.kappa},
                                                         {"fidelity", fidelity}})
                                    .dump(2) +
                                "\n");
        return fidelity >= -1e-10 && fidelity <= 1.0 + 1e-10 ? kExitOk : kExitTolerance;
    }

    const auto curve =
        fidelity_curve(config.system, config.params, section.ratio_grid, decay, input_ab);
    std::vector<std::vector<std::string>> rows;
    bool monotone = true;
    bool bounded = true;
    for (size_t i = 0; i < curve.size(); ++i) {
        rows.push_back({format_double(curve[i].first), format_double(curve[i].second)});
        if (i > 0 && curve[i].second > curve[i - 1].second + 1e-12) monotone = false;
        if (curve[i].second < -1e-10 || curve[i].second > 1.0 + 1e-10) bounded = false;
    }
    emit(options, out, csv_document(config, "ratio,fidelity", rows));
    return monotone && bounded ? kExitOk : kExitTolerance;
}

// --------------------------------- rwa-check --------------------------------

int cmd_rwa_check(const CommonOptions& options, int case_id, double coupling_ratio, double eta,
                  double theta, int ladder_points, std::ostream& out) {
    if (case_id < 1 || case_id > 7)
        throw std::invalid_argument("rwa-check: --case must be in [1, 7]");
    if (!(coupling_ratio > 0.0)) throw std::invalid_argument("rwa-check: --coupling-ratio must be > 0");
    if (ladder_points < 1) throw std::invalid_argument("rwa-check: --ladder must be >= 1");

    const bool laser_case = case_id <= 3;
    RunConfig config;
    config.system = laser_case ? SystemConfig{1, 2, 1} : SystemConfig{1, 2, 2};
    if (options.phonon_cutoff) config.system.phonon_cutoff = *options.phonon_cutoff;
    if (options.photon_cutoff) config.system.photon_cutoff = *options.photon_cutoff;

    // Model-scale parameters: nu = 1 rad/s sets the unit, omega0 = 5 nu keeps
    // the counter-rotating terms fast, couplings sit at coupling_ratio * nu.
    // Cases 4-6 run at the standing-wave node (phi = 0) where the co-resonant
    // Omega' term vanishes; case 7 needs sin(phi) != 0.
    PhysicalParams params;
    params.nu = 1.0;
    params.omega0 = 5.0;
    params.phi = (case_id >= 4 && case_id <= 6) ? 0.0 : kPi / 4.0;
    switch (case_id) {
    case 1: params.omega_L = params.omega0; break;
    case 2: params.omega_L = params.omega0 - params.nu; break;
    case 3: params.omega_L = params.omega0 + params.nu; break;
    case 4: params.omega_c = params.omega0 - params.nu; break;
    case 5: params.omega_c = params.nu - params.omega0; break;
    case 6: params.omega_c = params.omega0 + params.nu; break;
    case 7: params.omega_c = params.omega0; break;
    }
    if (case_id == 5 && params.omega_c < 0.0) {
        // omega_c = nu - omega0 would be negative here; flip the hierarchy.
        params.omega0 = 0.2;
        params.omega_c = params.nu - params.omega0;
    }

    json points = json::array();
    double previous = 0.0;
    bool monotone = true;
    double asserted_deviation = -1.0;
    for (int k = 0; k < ladder_points; ++k) {
        const double ratio = coupling_ratio / std::pow(10.0, k);
        PhysicalParams point = params;
        point.eta_L = eta;
        point.eta_c = eta;
        (laser_case ? point.G : point.g) = ratio * point.nu;
        if (k == 0) config.params = point; // echo a runnable configuration
        const double deviation = rwa_deviation(case_id, point, config.system, theta);
        out << "case " << case_id << " coupling/nu " << format_double(ratio) << ": deviation "
            << format_double(deviation) << "\n";
        points.push_back({{"coupling_ratio", ratio}, {"deviation", deviation}});
        if (k > 0 && deviation >= previous) monotone = false;
        previous = deviation;
        // Tolerance clause applies to the weakest compliant coupling run.
        if (ratio <= 1e-2 + 1e-15) asserted_deviation = deviation;
    }

    int status = kExitOk;
    if (!monotone) {
        out << "deviation ladder is not monotone decreasing\n";
        status = kExitTolerance;
    }
    if (asserted_deviation >= 0.0 && eta <= 0.02 + 1e-15) {
        const bool ok = asserted_deviation <= kRwaTolerance;
        out << "deviation at coupling/nu <= 1e-2: " << format_double(asserted_deviation)
            << (ok ? " within " : " OUTSIDE ") << format_double(kRwaTolerance) << "\n";
        if (!ok) status = kExitTolerance;
    }
    if (!options.out_path.empty()) {
        write_text_file(options.out_path,
                        result_envelope(config, json{{"case", case_id}, {"points", points}})
                                .dump(2) +
                            "\n");
    }
    return status;
}

} // namespace

// ----------------------------------- driver ---------------------------------

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"trapped-ion-in-cavity gate and protocol simulator"};
    app.require_subcommand(1);

    CommonOptions verify_opts, compile_opts, timing_opts, protocol_opts, fidelity_opts,
        rwa_opts;

    auto* verify = app.add_subcommand("verify", "run a gate truth table against its reference");
    std::string verify_gate = "cnot_ab";
    int verify_trap = 0;
    verify->add_option("--gate", verify_gate, "cnot_ab|cnot_ba|h_a|h_b|swap_ab")->required();
    verify->add_option("--trap", verify_trap, "addressed trap index");
    verify_opts.attach(verify);

    auto* compile = app.add_subcommand("compile", "lower a gate to its pulse sequence");
    std::string compile_gate_name = "cnot_ab";
    int compile_trap = 0;
    compile->add_option("--gate", compile_gate_name, "cnot_ab|cnot_ba|h_a|h_b|swap_ab")->required();
    compile->add_option("--trap", compile_trap, "addressed trap index");
    compile_opts.attach(compile);

    auto* timing = app.add_subcommand("timing", "gate durations and coupling sweeps");
    std::string sweep_axis;
    double sweep_from = 0.0, sweep_to = 0.0, timing_delay = 0.0;
    int sweep_points = 0;
    timing->add_option("--sweep", sweep_axis, "sweep axis: g or G");
    timing->add_option("--from", sweep_from, "sweep start, rad/s");
    timing->add_option("--to", sweep_to, "sweep end, rad/s");
    timing->add_option("--points", sweep_points, "sweep point count");
    timing->add_option("--delay", timing_delay, "inter-pulse retuning delay, s");
    timing_opts.attach(timing);

    auto* protocol = app.add_subcommand("protocol", "run a two-trap protocol");
    std::string protocol_name;
    double c_re = 1.0, c_im = 0.0, d_re = 0.0, d_im = 0.0;
    double e_re = 1.0, e_im = 0.0, f_re = 0.0, f_im = 0.0;
    protocol->add_option("--name", protocol_name, "protocol name")->required();
    protocol->add_option("--c,--c-re", c_re, "Re C");
    protocol->add_option("--c-im", c_im, "Im C");
    protocol->add_option("--d,--d-re", d_re, "Re D");
    protocol->add_option("--d-im", d_im, "Im D");
    protocol->add_option("--e,--e-re", e_re, "Re E (internal_swap)");
    protocol->add_option("--e-im", e_im, "Im E");
    protocol->add_option("--f,--f-re", f_re, "Re F");
    protocol->add_option("--f-im", f_im, "Im F");
    protocol_opts.attach(protocol);

    auto* fidelity = app.add_subcommand("fidelity", "CNOT_ba fidelity under cavity decay");
    double ratio_from = 0.01, ratio_to = 2.0;
    int ratio_points = 20, fid_steps = 400;
    std::string fid_input;
    auto* opt_from = fidelity->add_option("--ratio-from", ratio_from, "T_im/T_d grid start");
    auto* opt_to = fidelity->add_option("--ratio-to", ratio_to, "T_im/T_d grid end");
    auto* opt_points = fidelity->add_option("--ratio-points", ratio_points, "T_im/T_d grid size");
    fidelity->add_option("--input", fid_input, "single input, two bits ab (default: average)");
    fidelity->add_option("--steps", fid_steps, "integrator steps per decaying pulse");
    fidelity_opts.attach(fidelity);

    auto* rwa = app.add_subcommand("rwa-check", "lab-frame integration vs the case propagator");
    int rwa_case = 2, rwa_ladder = 1;
    double rwa_ratio = 1e-3, rwa_eta = 0.02, rwa_theta = kPi / 16.0;
    rwa->add_option("--case", rwa_case, "resonance case 1..7");
    rwa->add_option("--coupling-ratio", rwa_ratio, "coupling / nu at the first point");
    rwa->add_option("--eta", rwa_eta, "Lamb-Dicke parameter");
    rwa->add_option("--theta", rwa_theta, "pulse angle, rad");
    rwa->add_option("--ladder", rwa_ladder, "points, each 10x weaker coupling");
    rwa_opts.attach(rwa);

    try {
        std::vector<const char*> argv;
        argv.push_back("ionsim");
        for (const std::string& arg : args) argv.push_back(arg.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (verify->parsed()) return cmd_verify(verify_opts, verify_gate, verify_trap, out);
        if (compile->parsed()) return cmd_compile(compile_opts, compile_gate_name, compile_trap, out);
        if (timing->parsed())
            return cmd_timing(timing_opts, sweep_axis, sweep_from, sweep_to, sweep_points,
                              timing_delay, out);
        if (protocol->parsed())
            return cmd_protocol(protocol_opts, protocol_name, c_re, c_im, d_re, d_im, e_re, e_im,
                                f_re, f_im, out);
        if (fidelity->parsed()) {
            const bool grid_flags_given =
                opt_from->count() > 0 || opt_to->count() > 0 || opt_points->count() > 0;
            return cmd_fidelity(fidelity_opts, ratio_from, ratio_to, ratio_points, fid_input,
                                fid_steps, grid_flags_given, out);
        }
        if (rwa->parsed())
            return cmd_rwa_check(rwa_opts, rwa_case, rwa_ratio, rwa_eta, rwa_theta, rwa_ladder,
                                 out);
        err << "no subcommand selected\n";
        return kExitUsage;
    } catch (const CLI::CallForHelp& help) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& error) {
        err << error.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& error) {
        err << "error: " << error.what() << "\n";
        return kExitUsage;
    }
}

} // namespace ioncav
