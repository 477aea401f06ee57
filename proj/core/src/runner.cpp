#include "dickelab/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "dickelab/evolve.hpp"

namespace dickelab {

namespace {

using nlohmann::json;

constexpr const char* kCrlf = "\r\n";

json stats_json(const RunStats& stats) {
    json j;
    j["method"] = stats.method_used;
    j["steps_accepted"] = stats.steps_accepted;
    j["steps_rejected"] = stats.steps_rejected;
    j["max_truncation_leak"] = stats.max_truncation_leak;
    j["max_norm_drift"] = stats.max_norm_drift;
    j["max_energy_drift"] = stats.max_energy_drift;
    return j;
}

std::string render_evolve(const EvolutionRequest& request, const OutputSpec& output) {
    const Trajectory traj = evolve(request);
    if (output.format == OutputFormat::csv) {
        std::string text = "time";
        for (const auto& label : traj.labels) text += "," + label;
        text += kCrlf;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            text += format_csv_number(traj.times[i]);
            for (const auto& record : traj.records) {
                text += "," + format_csv_number(record[i]);
            }
            text += kCrlf;
        }
        return text;
    }
    json j;
    j["command"] = "evolve";
    j["family"] = family_name(request.model);
    j["times"] = traj.times;
    json records;
    for (std::size_t k = 0; k < traj.labels.size(); ++k) {
        records[traj.labels[k]] = traj.records[k];
    }
    j["records"] = records;
    j["stats"] = stats_json(traj.stats);
    return j.dump(2) + "\n";
}

std::string render_sweep(const SweepRequest& request, const OutputSpec& output) {
    const ScalingFit fit = run_sweep(request);
    if (output.format == OutputFormat::csv) {
        std::string text = "N,metric";
        text += kCrlf;
        for (const auto& [n, value] : fit.samples) {
            text += format_csv_number(n) + "," + format_csv_number(value) + kCrlf;
        }
        return text;
    }
    json j;
    j["command"] = "sweep";
    j["family"] = family_name(request.base_model);
    j["metric"] = metric_name(request.metric);
    json samples = json::array();
    for (const auto& [n, value] : fit.samples) {
        samples.push_back({{"n", n}, {"value", value}});
    }
    j["samples"] = samples;
    j["exponent"] = fit.exponent;
    j["exponent_stderr"] = fit.exponent_stderr;
    j["r_squared"] = fit.r_squared;
    j["label"] = label_name(classify_exponent(fit));
    return j.dump(2) + "\n";
}

struct CalculatorOutcome {
    std::string formula;
    double value = 0.0;
    std::string unit;
    json extra; // discrepancy details and similar
};

CalculatorOutcome evaluate(const CalculatorRequest& request) {
    struct Visitor {
        CalculatorOutcome operator()(const EvToKwhRequest& r) const {
            return {"ev_to_kwh",
                    energetics::ev_per_atom_to_kwh_per_kg(r.energy_per_atom, r.molar_mass),
                    "kWh/kg", {}};
        }
        CalculatorOutcome operator()(const KwhToEvRequest& r) const {
            return {"kwh_to_ev",
                    energetics::kwh_per_kg_to_ev_per_atom(r.energy_density, r.molar_mass),
                    "eV/atom", {}};
        }
        CalculatorOutcome operator()(const MaterialPerAreaRequest& r) const {
            return {"material_use_per_area",
                    energetics::material_use_per_area(r.thickness, r.density), "g/m^2", {}};
        }
        CalculatorOutcome operator()(const MaterialPerWattRequest& r) const {
            return {"material_use_per_watt",
                    energetics::material_use_per_watt(r.areal_mass, r.area, r.peak_power),
                    "g/Wp", {}};
        }
        CalculatorOutcome operator()(const BatteryEnergyDensityRequest& r) const {
            return {"battery_energy_density",
                    energetics::battery_energy_density(r.e_max, r.molecular_mass), "Wh/kg", {}};
        }
        CalculatorOutcome operator()(const BatteryPowerDensityRequest& r) const {
            return {"battery_power_density", energetics::battery_power_density(r.p_max, r.mass),
                    "kW/kg", {}};
        }
        CalculatorOutcome operator()(const NuclearRateRequest& r) const {
            return {"nuclear_transfer_rate", energetics::nuclear_transfer_rate(r.input), "1/s", {}};
        }
        CalculatorOutcome operator()(const VolRatioRequest& r) const {
            return {"vol_ratio", energetics::vol_ratio(r.r_nuc, r.r0, r.delta_r),
                    "dimensionless", {}};
        }
        CalculatorOutcome operator()(const MagneticCouplingRequest& r) const {
            return {"magnetic_coupling", energetics::magnetic_coupling(r.b_field), "eV", {}};
        }
        CalculatorOutcome operator()(const NuclearRateDiscrepancyRequest&) const {
            const auto report = energetics::nuclear_rate_reference_check();
            json extra;
            extra["quoted_rate"] = report.quoted_rate;
            extra["quoted_over_computed"] = report.ratio;
            extra["note"] = "literal evaluation of the published worked inputs disagrees with "
                            "the quoted 1e-34 1/s by roughly 2.5 orders of magnitude";
            return {"nuclear_rate_discrepancy", report.computed_rate, "1/s", extra};
        }
    };
    return std::visit(Visitor{}, request);
}

std::string render_energetics(const CalculatorRequest& request, const OutputSpec& output) {
    const CalculatorOutcome outcome = evaluate(request);
    if (output.format == OutputFormat::csv) {
        std::string text = "formula,value,unit";
        text += kCrlf;
        text += outcome.formula + "," + format_csv_number(outcome.value) + "," + outcome.unit;
        text += kCrlf;
        return text;
    }
    json j;
    j["formula"] = outcome.formula;
    j["value"] = outcome.value;
    j["unit"] = outcome.unit;
    if (!outcome.extra.is_null()) {
        for (auto it = outcome.extra.begin(); it != outcome.extra.end(); ++it) {
            j[it.key()] = it.value();
        }
    }
    return j.dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open output file '" + temp.string() + "'");
        out << text;
        if (!out.good()) throw ConfigError("failed writing output file '" + temp.string() + "'");
    }
    fs::rename(temp, target);
}

} // namespace

std::string format_csv_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    std::string text(buffer);
    if (text.find_first_of(".eE") == std::string::npos &&
        text.find_first_not_of("-0123456789") == std::string::npos) {
        text += ".0";
    }
    return text;
}

std::string render_artifact(const RunConfig& config) {
    switch (config.command) {
        case Command::evolve:
            if (!config.evolution) throw ConfigError("evolve config has no evolution section");
            return render_evolve(*config.evolution, config.output);
        case Command::sweep:
            if (!config.sweep) throw ConfigError("sweep config has no sweep section");
            return render_sweep(*config.sweep, config.output);
        case Command::energetics:
            if (!config.calculator) throw ConfigError("energetics config has no calculator section");
            return render_energetics(*config.calculator, config.output);
    }
    throw ConfigError("unknown command");
}

int run_config(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const std::string artifact = render_artifact(config);
        if (config.output.path.empty()) {
            out << artifact;
        } else {
            write_atomically(config.output.path, artifact);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const SweepError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace dickelab
