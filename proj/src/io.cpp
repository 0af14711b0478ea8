#include "ioncav/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ioncav {

using nlohmann::json;

bool RunConfig::operator==(const RunConfig& other) const {
    const PhysicalParams& a = params;
    const PhysicalParams& b = other.params;
    return a.omega0 == b.omega0 && a.omega_c == b.omega_c && a.omega_L == b.omega_L &&
           a.nu == b.nu && a.g == b.g && a.G == b.G && a.eta_c == b.eta_c &&
           a.eta_L == b.eta_L && a.phi == b.phi && a.kappa == b.kappa &&
           system == other.system && fidelity == other.fidelity;
}

RunConfig default_run_config() {
    return RunConfig{default_params(), SystemConfig{1, 5, 5}, std::nullopt};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frequency field, settable as "<name>_hz" or "<name>_rad_s" (but not both).
double read_frequency(const json& section, const std::string& name, double fallback,
                      std::set<std::string>& consumed) {
    const std::string hz_key = name + "_hz";
    const std::string rad_key = name + "_rad_s";
    const bool has_hz = section.contains(hz_key);
    const bool has_rad = section.contains(rad_key);
    if (has_hz && has_rad)
        throw std::invalid_argument("config: give either " + hz_key + " or " + rad_key +
                                    ", not both");
    if (has_hz) {
        consumed.insert(hz_key);
        return kTwoPi * section.at(hz_key).get<double>();
    }
    if (has_rad) {
        consumed.insert(rad_key);
        return section.at(rad_key).get<double>();
    }
    return fallback;
}

double read_plain(const json& section, const std::string& key, double fallback,
                  std::set<std::string>& consumed) {
    if (!section.contains(key)) return fallback;
    consumed.insert(key);
    return section.at(key).get<double>();
}

void reject_unknown(const json& section, const std::set<std::string>& consumed,
                    const std::string& where) {
    for (auto it = section.begin(); it != section.end(); ++it) {
        if (!consumed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

} // namespace

namespace {

FidelitySection parse_fidelity_section(const json& section) {
    FidelitySection out;
    std::set<std::string> consumed;
    if (section.contains("kappa")) {
        consumed.insert("kappa");
        out.kappa = section.at("kappa").get<double>();
        if (*out.kappa < 0.0)
            throw std::invalid_argument("config: fidelity.kappa must be >= 0");
    }
    if (section.contains("ratio_grid")) {
        consumed.insert("ratio_grid");
        out.ratio_grid = section.at("ratio_grid").get<std::vector<double>>();
    }
    if (out.kappa && !out.ratio_grid.empty())
        throw std::invalid_argument("config: fidelity takes kappa or ratio_grid, not both");
    if (section.contains("dt")) {
        consumed.insert("dt");
        out.dt = section.at("dt").get<double>();
        if (!(*out.dt > 0.0)) throw std::invalid_argument("config: fidelity.dt must be > 0");
    }
    if (section.contains("decay_window")) {
        consumed.insert("decay_window");
        out.decay_window = section.at("decay_window").get<std::vector<int>>();
    }
    if (section.contains("average")) {
        consumed.insert("average");
        out.average = section.at("average").get<bool>();
    }
    if (section.contains("input")) {
        consumed.insert("input");
        out.input = section.at("input").get<std::string>();
    }
    reject_unknown(section, consumed, "fidelity");
    return out;
}

} // namespace

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "params" && it.key() != "system" && it.key() != "fidelity")
            throw std::invalid_argument("config: unknown top-level key '" + it.key() + "'");
    }

    RunConfig config = default_run_config();

    if (doc.contains("params")) {
        const json& p = doc.at("params");
        std::set<std::string> consumed;
        config.params.omega0  = read_frequency(p, "omega0", config.params.omega0, consumed);
        config.params.omega_c = read_frequency(p, "omega_c", config.params.omega_c, consumed);
        config.params.omega_L = read_frequency(p, "omega_L", config.params.omega_L, consumed);
        config.params.nu      = read_frequency(p, "nu", config.params.nu, consumed);
        config.params.g       = read_frequency(p, "g", config.params.g, consumed);
        config.params.G       = read_frequency(p, "G", config.params.G, consumed);
        config.params.eta_c   = read_plain(p, "eta_c", config.params.eta_c, consumed);
        config.params.eta_L   = read_plain(p, "eta_L", config.params.eta_L, consumed);
        config.params.phi     = read_plain(p, "phi", config.params.phi, consumed);
        config.params.kappa   = read_plain(p, "kappa", config.params.kappa, consumed);
        reject_unknown(p, consumed, "params");
    }
    if (doc.contains("system")) {
        const json& s = doc.at("system");
        std::set<std::string> consumed;
        if (s.contains("trap_count")) {
            consumed.insert("trap_count");
            config.system.trap_count = s.at("trap_count").get<int>();
        }
        if (s.contains("phonon_cutoff")) {
            consumed.insert("phonon_cutoff");
            config.system.phonon_cutoff = s.at("phonon_cutoff").get<int>();
        }
        if (s.contains("photon_cutoff")) {
            consumed.insert("photon_cutoff");
            config.system.photon_cutoff = s.at("photon_cutoff").get<int>();
        }
        reject_unknown(s, consumed, "system");
    }
    if (doc.contains("fidelity")) config.fidelity = parse_fidelity_section(doc.at("fidelity"));

    config.params.validate();
    config.system.validate();
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& error) {
        throw std::invalid_argument("config: parse error in '" + path + "': " + error.what());
    }
    return parse_run_config(doc);
}

json echo_config(const RunConfig& config) {
    json doc{
        {"params",
         {{"omega0_rad_s", config.params.omega0},
          {"omega_c_rad_s", config.params.omega_c},
          {"omega_L_rad_s", config.params.omega_L},
          {"nu_rad_s", config.params.nu},
          {"g_rad_s", config.params.g},
          {"G_rad_s", config.params.G},
          {"eta_c", config.params.eta_c},
          {"eta_L", config.params.eta_L},
          {"phi", config.params.phi},
          {"kappa", config.params.kappa}}},
        {"system",
         {{"trap_count", config.system.trap_count},
          {"phonon_cutoff", config.system.phonon_cutoff},
          {"photon_cutoff", config.system.photon_cutoff}}},
    };
    if (config.fidelity) {
        json section = json::object();
        if (config.fidelity->kappa) section["kappa"] = *config.fidelity->kappa;
        if (!config.fidelity->ratio_grid.empty())
            section["ratio_grid"] = config.fidelity->ratio_grid;
        if (config.fidelity->dt) section["dt"] = *config.fidelity->dt;
        if (!config.fidelity->decay_window.empty())
            section["decay_window"] = config.fidelity->decay_window;
        if (config.fidelity->average) section["average"] = *config.fidelity->average;
        if (config.fidelity->input) section["input"] = *config.fidelity->input;
        doc["fidelity"] = std::move(section);
    }
    return doc;
}

json result_envelope(const RunConfig& config, json result) {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"config", echo_config(config)},
                {"result", std::move(result)}};
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

json pulses_to_json(const std::vector<Pulse>& pulses) {
    json out = json::array();
    for (const Pulse& pulse : pulses)
        out.push_back({{"case", pulse.case_id}, {"trap", pulse.trap}, {"theta", pulse.theta}});
    return out;
}

std::vector<Pulse> pulses_from_json(const json& doc) {
    if (!doc.is_array()) throw std::invalid_argument("pulses: expected a JSON array");
    std::vector<Pulse> pulses;
    for (const json& entry : doc) {
        for (auto it = entry.begin(); it != entry.end(); ++it) {
            if (it.key() != "case" && it.key() != "trap" && it.key() != "theta")
                throw std::invalid_argument("pulses: unknown key '" + it.key() + "'");
        }
        pulses.push_back(Pulse{entry.at("case").get<int>(), entry.at("trap").get<int>(),
                               entry.at("theta").get<double>()});
    }
    return pulses;
}

std::string csv_document(const RunConfig& config, const std::string& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << "# config " << echo_config(config).dump() << "\n" << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

} // namespace ioncav
