// io.hpp — Run configuration (JSON in, canonical echo out), CSV formatting,
// and pulse-program serialization.
//
// Config files accept frequencies in Hz ("g_hz") or rad/s ("g_rad_s"); the
// stored canonical unit is rad/s and the echo always emits "_rad_s" keys.
// Unknown keys are rejected. Floats print with 17 significant digits so equal
// configs give byte-identical outputs.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ioncav/gates.hpp"
#include "ioncav/hilbert.hpp"

namespace ioncav {

inline constexpr const char* kToolName = "ionsim";
inline constexpr const char* kToolVersion = "0.1.0";

// Optional "fidelity" config section: either a single decay rate or a grid of
// T_im/T_d ratios, plus integrator and averaging choices.
struct FidelitySection {
    std::optional<double> kappa;
    std::vector<double> ratio_grid;
    std::optional<double> dt;        // integrator step during decaying pulses, s
    std::vector<int> decay_window;   // pulse indices seeing decay; default last
    std::optional<bool> average;
    std::optional<std::string> input; // two bits "ab", alternative to averaging

    bool operator==(const FidelitySection&) const = default;
};

struct RunConfig {
    PhysicalParams params;
    SystemConfig system;
    std::optional<FidelitySection> fidelity;

    bool operator==(const RunConfig& other) const;
};

RunConfig default_run_config();

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
nlohmann::json echo_config(const RunConfig& config);

// {"tool": ..., "version": ..., "config": <echo>, "result": <payload>}
nlohmann::json result_envelope(const RunConfig& config, nlohmann::json result);

std::string format_double(double value); // %.17g, '.' decimal, no locale

nlohmann::json pulses_to_json(const std::vector<Pulse>& pulses);
std::vector<Pulse> pulses_from_json(const nlohmann::json& doc);

// CSV with a '#'-prefixed config echo line, then the header, then rows.
std::string csv_document(const RunConfig& config, const std::string& header,
                         const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& content);

} // namespace ioncav
