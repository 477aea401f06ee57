// config.hpp — declarative run configuration: strict schema, dotted overrides
//
// Configs are JSON documents with a version tag, a command, the section that
// command needs (model+evolution, sweep, or calculator), and an optional
// output block. Unknown keys are rejected with their dotted path. Overrides
// ("model.g=0.05") are applied to the document before validation.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dickelab/energetics.hpp"
#include "dickelab/scaling.hpp"

namespace dickelab {

enum class Command { evolve, sweep, energetics };

enum class OutputFormat { csv, json };

struct OutputSpec {
    OutputFormat format = OutputFormat::json;
    std::string path; // empty writes to standard output
};

struct EvToKwhRequest {
    double energy_per_atom = 0.0;
    double molar_mass = 0.0;
};
struct KwhToEvRequest {
    double energy_density = 0.0;
    double molar_mass = 0.0;
};
struct MaterialPerAreaRequest {
    double thickness = 0.0;
    double density = 0.0;
};
struct MaterialPerWattRequest {
    double areal_mass = 0.0;
    double area = 0.0;
    double peak_power = 0.0;
};
struct BatteryEnergyDensityRequest {
    double e_max = 0.0;
    double molecular_mass = 0.0;
};
struct BatteryPowerDensityRequest {
    double p_max = 0.0;
    double mass = 0.0;
};
struct NuclearRateRequest {
    energetics::NuclearTransferInput input;
};
struct VolRatioRequest {
    double r_nuc = 0.0;
    double r0 = 0.0;
    double delta_r = 0.0;
};
struct MagneticCouplingRequest {
    double b_field = 0.0;
};
struct NuclearRateDiscrepancyRequest {};

using CalculatorRequest =
    std::variant<EvToKwhRequest, KwhToEvRequest, MaterialPerAreaRequest, MaterialPerWattRequest,
                 BatteryEnergyDensityRequest, BatteryPowerDensityRequest, NuclearRateRequest,
                 VolRatioRequest, MagneticCouplingRequest, NuclearRateDiscrepancyRequest>;

struct RunConfig {
    int version = 1;
    Command command = Command::evolve;
    std::optional<EvolutionRequest> evolution; // command == evolve
    std::optional<SweepRequest> sweep;         // command == sweep
    std::optional<CalculatorRequest> calculator;
    OutputSpec output;
};

struct Violation {
    std::string path;
    std::string message;
};

// Parse + validate; throws ConfigError carrying the first violation.
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& file_path,
                      const std::vector<std::string>& overrides = {});

// Full violation report without execution; does not throw on schema
// problems (only on unreadable input).
std::vector<Violation> validate_config_text(const std::string& text,
                                            const std::vector<std::string>& overrides = {});
std::vector<Violation> validate_config_file(const std::string& file_path,
                                            const std::vector<std::string>& overrides = {});

const char* command_name(Command command);

} // namespace dickelab
