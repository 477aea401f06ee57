#include "dickelab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dickelab {

namespace {

using nlohmann::json;

struct Collector {
    std::vector<Violation> violations;
    void add(const std::string& path, const std::string& message) {
        violations.push_back({path, message});
    }
};

// Strict view over one JSON object: typed getters mark keys as consumed and
// record violations; finish() flags everything left over.
class Section {
public:
    Section(const json* obj, std::string path, Collector* out)
        : obj_(obj), path_(std::move(path)), out_(out) {}

    bool ok() const { return obj_ != nullptr && obj_->is_object(); }

    bool contains(const std::string& key) const { return ok() && obj_->contains(key); }

    std::string key_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* raw(const std::string& key, bool required) {
        consumed_.insert(key);
        if (!ok()) return nullptr;
        auto it = obj_->find(key);
        if (it == obj_->end()) {
            if (required) out_->add(key_path(key), "required key is missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const std::string& key, bool required) {
        const json* v = raw(key, required);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            out_->add(key_path(key), "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<double> positive_number(const std::string& key, bool required) {
        auto v = number(key, required);
        if (v && !(*v > 0.0)) {
            out_->add(key_path(key), "must be positive");
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> non_negative_number(const std::string& key, bool required) {
        auto v = number(key, required);
        if (v && *v < 0.0) {
            out_->add(key_path(key), "must be >= 0");
            return std::nullopt;
        }
        return v;
    }

    std::optional<int> positive_integer(const std::string& key, bool required) {
        const json* v = raw(key, required);
        if (!v) return std::nullopt;
        if (!v->is_number_integer() || v->get<std::int64_t>() < 1) {
            out_->add(key_path(key), "expected a positive integer");
            return std::nullopt;
        }
        return static_cast<int>(v->get<std::int64_t>());
    }

    std::optional<std::string> string(const std::string& key, bool required) {
        const json* v = raw(key, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            out_->add(key_path(key), "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<Section> object(const std::string& key, bool required) {
        const json* v = raw(key, required);
        if (!v) return std::nullopt;
        if (!v->is_object()) {
            out_->add(key_path(key), "expected an object");
            return std::nullopt;
        }
        return Section(v, key_path(key), out_);
    }

    const json* array(const std::string& key, bool required) {
        const json* v = raw(key, required);
        if (!v) return nullptr;
        if (!v->is_array()) {
            out_->add(key_path(key), "expected an array");
            return nullptr;
        }
        return v;
    }

    void finish() {
        if (!ok()) return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it) {
            if (!consumed_.count(it.key())) {
                out_->add(key_path(it.key()), "unknown key");
            }
        }
    }

    Collector* collector() { return out_; }

private:
    const json* obj_;
    std::string path_;
    Collector* out_;
    std::set<std::string> consumed_;
};

// ------------------------------------------------------------------ model

std::optional<ModelSpec> parse_model(Section& sec) {
    const auto family = sec.string("family", true);
    if (!family) {
        sec.finish();
        return std::nullopt;
    }

    std::optional<ModelSpec> spec;
    if (*family == "rabi" || *family == "jaynes_cummings") {
        const auto omega0 = sec.number("omega0", true);
        const auto omega = sec.number("omega", true);
        const auto g = sec.number("g", true);
        const auto cutoff = sec.positive_integer("fock_cutoff", true);
        if (omega0 && omega && g && cutoff) {
            if (*family == "rabi") spec = RabiSpec{*omega0, *omega, *g, *cutoff};
            else spec = JaynesCummingsSpec{*omega0, *omega, *g, *cutoff};
        }
    } else if (*family == "dicke" || *family == "tavis_cummings") {
        const auto n = sec.positive_integer("n_tls", true);
        const auto omega0 = sec.number("omega0", true);
        const auto omega = sec.number("omega", true);
        const auto g = sec.number("g", true);
        const auto cutoff = sec.positive_integer("fock_cutoff", true);
        if (n && omega0 && omega && g && cutoff) {
            if (*family == "dicke") spec = DickeSpec{*n, *omega0, *omega, *g, *cutoff};
            else spec = TavisCummingsSpec{*n, *omega0, *omega, *g, *cutoff};
        }
    } else if (*family == "supertransfer") {
        const auto n = sec.positive_integer("n_donors", true);
        const auto m = sec.positive_integer("m_acceptors", true);
        const auto oa = sec.number("omega_a", true);
        const auto ob = sec.number("omega_b", true);
        const auto gamma = sec.number("gamma", true);
        if (n && m && oa && ob && gamma) spec = SupertransferSpec{*n, *m, *oa, *ob, *gamma};
    } else if (*family == "driven_battery") {
        const auto n = sec.positive_integer("n_tls", true);
        const auto omega0 = sec.number("omega0", true);
        const auto omega = sec.number("omega", true);
        const auto omega_l = sec.number("omega_l", true);
        const auto g = sec.number("g", true);
        const auto eta0 = sec.number("eta0", true);
        const auto sigma = sec.positive_number("sigma_pulse", true);
        const auto t0 = sec.number("t0", true);
        const auto cutoff = sec.positive_integer("fock_cutoff", true);
        if (n && omega0 && omega && omega_l && g && eta0 && sigma && t0 && cutoff) {
            spec = DrivenBatterySpec{*n, *omega0, *omega, *omega_l, *g, *eta0, *sigma, *t0, *cutoff};
        }
    } else if (*family == "two_ensemble_cavity") {
        const auto d1 = sec.number("delta1", true);
        const auto d2 = sec.number("delta2", true);
        const auto j = sec.number("j_cavity", true);
        const auto d = sec.number("delta", true);
        const auto g1 = sec.number("g1", true);
        const auto g2 = sec.number("g2", true);
        const auto n1 = sec.positive_number("n1", true);
        const auto n2 = sec.positive_number("n2", true);
        const auto kappa = sec.non_negative_number("kappa", false);
        const auto cutoff = sec.positive_integer("fock_cutoff", false);
        if (d1 && d2 && j && d && g1 && g2 && n1 && n2) {
            spec = TwoEnsembleCavitySpec{*d1, *d2, *j,
                                         *d,  *g1, *g2,
                                         *n1, *n2, kappa.value_or(0.0),
                                         cutoff.value_or(1)};
        }
    } else if (*family == "two_qubit_transfer") {
        const auto gamma = sec.number("gamma", true);
        if (gamma) spec = TwoQubitTransferSpec{*gamma};
    } else {
        sec.collector()->add(sec.key_path("family"),
                             "unknown model family '" + *family +
                                 "'; expected rabi, jaynes_cummings, dicke, tavis_cummings, "
                                 "supertransfer, driven_battery, two_ensemble_cavity, or "
                                 "two_qubit_transfer");
    }
    sec.finish();
    return spec;
}

// -------------------------------------------------------------- evolution

std::optional<Method> parse_method(Section& sec) {
    const auto text = sec.string("method", false);
    if (!text) return Method::auto_select;
    if (*text == "eigendecomposition") return Method::eigendecomposition;
    if (*text == "krylov") return Method::krylov;
    if (*text == "adaptive_rk") return Method::adaptive_rk;
    sec.collector()->add(sec.key_path("method"),
                         "expected eigendecomposition, krylov, or adaptive_rk");
    return std::nullopt;
}

std::optional<Reduction> parse_reduction(Section& sec) {
    const auto text = sec.string("reduction", false);
    if (!text) return Reduction::full_tensor;
    if (*text == "full_tensor") return Reduction::full_tensor;
    if (*text == "collective_spin") return Reduction::collective_spin;
    sec.collector()->add(sec.key_path("reduction"), "expected full_tensor or collective_spin");
    return std::nullopt;
}

std::vector<NoiseTerm> parse_noise(Section& sec) {
    std::vector<NoiseTerm> noise;
    const json* arr = sec.array("noise", false);
    if (!arr) return noise;
    for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string path = sec.key_path("noise") + "." + std::to_string(i);
        Section entry(&(*arr)[i], path, sec.collector());
        if (!entry.ok()) {
            sec.collector()->add(path, "expected an object");
            continue;
        }
        const auto kind = entry.string("kind", true);
        const auto rate = entry.non_negative_number("rate", true);
        entry.finish();
        if (!kind || !rate) continue;
        NoiseTerm term;
        term.rate = *rate;
        if (*kind == "individual_decay") term.kind = NoiseKind::individual_decay;
        else if (*kind == "collective_decay") term.kind = NoiseKind::collective_decay;
        else if (*kind == "individual_dephasing") term.kind = NoiseKind::individual_dephasing;
        else {
            sec.collector()->add(path + ".kind",
                                 "expected individual_decay, collective_decay, or "
                                 "individual_dephasing");
            continue;
        }
        noise.push_back(term);
    }
    return noise;
}

// model may be omitted when the caller (sweep) injects it per point
std::optional<EvolutionRequest> parse_evolution(Section& sec, bool want_observables) {
    EvolutionRequest req;
    const auto initial = sec.string("initial_state", true);
    const auto t_max = sec.positive_number("t_max", true);
    const auto dt = sec.positive_number("dt_output", true);
    const auto method = parse_method(sec);
    const auto reduction = parse_reduction(sec);
    req.noise = parse_noise(sec);

    bool have_observables = true;
    if (want_observables) {
        const json* arr = sec.array("observables", true);
        have_observables = arr != nullptr;
        if (arr) {
            for (std::size_t i = 0; i < arr->size(); ++i) {
                if (!(*arr)[i].is_string()) {
                    sec.collector()->add(sec.key_path("observables") + "." + std::to_string(i),
                                         "expected a string");
                    have_observables = false;
                    continue;
                }
                req.observables.push_back((*arr)[i].get<std::string>());
            }
            if (arr->empty()) {
                sec.collector()->add(sec.key_path("observables"), "must not be empty");
                have_observables = false;
            }
        }
    }

    if (!initial || !t_max || !dt || !method || !reduction || !have_observables) {
        return std::nullopt;
    }
    req.initial_state = *initial;
    req.t_max = *t_max;
    req.dt_output = *dt;
    req.method = *method;
    req.reduction = *reduction;
    return req;
}

// ------------------------------------------------------------------ sweep

std::optional<SweepRequest> parse_sweep(Section& sec) {
    SweepRequest req;
    bool good = true;

    const auto metric = sec.string("metric", true);
    if (metric) {
        if (*metric == "charging_half_time") req.metric = SweepMetric::charging_half_time;
        else if (*metric == "transfer_half_time") req.metric = SweepMetric::transfer_half_time;
        else if (*metric == "initial_decay_rate") req.metric = SweepMetric::initial_decay_rate;
        else if (*metric == "oscillation_frequency") req.metric = SweepMetric::oscillation_frequency;
        else {
            sec.collector()->add(sec.key_path("metric"),
                                 "expected charging_half_time, transfer_half_time, "
                                 "initial_decay_rate, or oscillation_frequency");
            good = false;
        }
    } else {
        good = false;
    }

    const json* ns = sec.array("n_values", true);
    if (ns) {
        std::set<int> distinct;
        for (std::size_t i = 0; i < ns->size(); ++i) {
            const auto& v = (*ns)[i];
            if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
                sec.collector()->add(sec.key_path("n_values") + "." + std::to_string(i),
                                     "expected a positive integer");
                good = false;
                continue;
            }
            req.n_values.push_back(static_cast<int>(v.get<std::int64_t>()));
            distinct.insert(req.n_values.back());
        }
        if (distinct.size() < 3) {
            sec.collector()->add(sec.key_path("n_values"),
                                 "needs at least 3 distinct positive integers");
            good = false;
        }
    } else {
        good = false;
    }

    auto model_sec = sec.object("model", true);
    if (model_sec) {
        auto model = parse_model(*model_sec);
        if (model) req.base_model = *model;
        else good = false;
    } else {
        good = false;
    }

    auto evo_sec = sec.object("evolution", true);
    if (evo_sec) {
        const auto observable = evo_sec->string("observable", false);
        if (observable) req.observable = *observable;
        auto evo = parse_evolution(*evo_sec, /*want_observables=*/false);
        evo_sec->finish();
        if (evo) req.run_template = *evo;
        else good = false;
    } else {
        good = false;
    }

    sec.finish();
    if (!good) return std::nullopt;
    req.run_template.model = req.base_model;
    return req;
}

// ------------------------------------------------------------- calculator

std::optional<double> molar_mass_or_composition(Section& sec, bool& good) {
    const bool has_mass = sec.contains("molar_mass");
    const bool has_comp = sec.contains("composition");
    if (has_mass && has_comp) {
        sec.raw("molar_mass", false);
        sec.raw("composition", false);
        sec.collector()->add(sec.key_path("composition"),
                             "give either molar_mass or composition, not both");
        good = false;
        return std::nullopt;
    }
    if (has_mass) {
        const auto mass = sec.positive_number("molar_mass", true);
        if (!mass) good = false;
        return mass;
    }
    if (!has_comp) {
        sec.collector()->add(sec.key_path("molar_mass"),
                             "a molar-mass basis is required: molar_mass or composition");
        good = false;
        return std::nullopt;
    }
    const json* comp = sec.array("composition", true);
    if (!comp) {
        good = false;
        return std::nullopt;
    }
    std::vector<energetics::MassFraction> fractions;
    bool comp_good = true;
    for (std::size_t i = 0; i < comp->size(); ++i) {
        const std::string path = sec.key_path("composition") + "." + std::to_string(i);
        Section entry(&(*comp)[i], path, sec.collector());
        if (!entry.ok()) {
            sec.collector()->add(path, "expected an object");
            comp_good = false;
            continue;
        }
        const auto f = entry.positive_number("fraction", true);
        const auto m = entry.positive_number("molar_mass", true);
        entry.finish();
        if (f && m) fractions.push_back({*f, *m});
        else comp_good = false;
    }
    if (!comp_good) {
        good = false;
        return std::nullopt;
    }
    try {
        return energetics::molar_mass_from_composition(fractions);
    } catch (const Error& e) {
        sec.collector()->add(sec.key_path("composition"), e.what());
        good = false;
        return std::nullopt;
    }
}

std::optional<CalculatorRequest> parse_calculator(Section& sec) {
    const auto formula = sec.string("formula", true);
    if (!formula) {
        sec.finish();
        return std::nullopt;
    }

    std::optional<CalculatorRequest> out;
    bool good = true;
    if (*formula == "ev_to_kwh") {
        const auto e = sec.positive_number("energy_per_atom", true);
        const auto m = molar_mass_or_composition(sec, good);
        if (e && m && good) out = EvToKwhRequest{*e, *m};
    } else if (*formula == "kwh_to_ev") {
        const auto e = sec.positive_number("energy_density", true);
        const auto m = molar_mass_or_composition(sec, good);
        if (e && m && good) out = KwhToEvRequest{*e, *m};
    } else if (*formula == "material_use_per_area") {
        const auto t = sec.non_negative_number("thickness", true);
        const auto d = sec.non_negative_number("density", true);
        if (t && d) out = MaterialPerAreaRequest{*t, *d};
    } else if (*formula == "material_use_per_watt") {
        const auto m = sec.non_negative_number("areal_mass", true);
        const auto a = sec.non_negative_number("area", true);
        const auto p = sec.positive_number("peak_power", true);
        if (m && a && p) out = MaterialPerWattRequest{*m, *a, *p};
    } else if (*formula == "battery_energy_density") {
        const auto e = sec.non_negative_number("e_max", true);
        const auto m = sec.positive_number("molecular_mass", true);
        if (e && m) out = BatteryEnergyDensityRequest{*e, *m};
    } else if (*formula == "battery_power_density") {
        const auto p = sec.non_negative_number("p_max", true);
        const auto m = sec.positive_number("mass", true);
        if (p && m) out = BatteryPowerDensityRequest{*p, *m};
    } else if (*formula == "nuclear_transfer_rate") {
        energetics::NuclearTransferInput in;
        const auto g = sec.positive_number("g_coupling", true);
        const auto gamow = sec.positive_number("gamow_suppression", true);
        const auto vol = sec.positive_number("vol_ratio", false);
        const auto de = sec.positive_number("delta_e", false);
        const auto nd = sec.positive_number("n_donors", true);
        const auto na = sec.positive_number("n_acceptors", true);
        if (g && gamow && nd && na) {
            in.g_coupling_ev = *g;
            in.gamow_suppression = *gamow;
            if (vol) in.vol_ratio = *vol;
            if (de) in.delta_e_ev = *de;
            in.n_donors = *nd;
            in.n_acceptors = *na;
            out = NuclearRateRequest{in};
        }
    } else if (*formula == "vol_ratio") {
        const auto r = sec.non_negative_number("r_nuc", true);
        const auto r0 = sec.positive_number("r0", true);
        const auto dr = sec.positive_number("delta_r", true);
        if (r && r0 && dr) out = VolRatioRequest{*r, *r0, *dr};
    } else if (*formula == "magnetic_coupling") {
        const auto b = sec.non_negative_number("b_field", true);
        if (b) out = MagneticCouplingRequest{*b};
    } else if (*formula == "nuclear_rate_discrepancy") {
        out = NuclearRateDiscrepancyRequest{};
    } else {
        sec.collector()->add(sec.key_path("formula"),
                             "unknown formula '" + *formula +
                                 "'; expected ev_to_kwh, kwh_to_ev, material_use_per_area, "
                                 "material_use_per_watt, battery_energy_density, "
                                 "battery_power_density, nuclear_transfer_rate, vol_ratio, "
                                 "magnetic_coupling, or nuclear_rate_discrepancy");
    }
    sec.finish();
    return out;
}

// ------------------------------------------------------------------- root

std::optional<OutputSpec> parse_output(Section& root) {
    auto sec = root.object("output", false);
    OutputSpec out;
    if (!sec) return out;
    const auto format = sec->string("format", false);
    if (format) {
        if (*format == "csv") out.format = OutputFormat::csv;
        else if (*format == "json") out.format = OutputFormat::json;
        else {
            sec->collector()->add(sec->key_path("format"), "expected csv or json");
            sec->finish();
            return std::nullopt;
        }
    }
    const auto path = sec->string("path", false);
    if (path) out.path = *path;
    sec->finish();
    return out;
}

RunConfig build_config(const json& doc, Collector& collector) {
    RunConfig config;
    Section root(&doc, "", &collector);
    if (!doc.is_object()) {
        collector.add("", "config root must be a JSON object");
        return config;
    }

    const auto version = root.positive_integer("version", true);
    if (version) {
        config.version = *version;
        if (*version != 1) collector.add("version", "unsupported config version");
    }

    const auto command = root.string("command", true);
    if (command) {
        if (*command == "evolve") config.command = Command::evolve;
        else if (*command == "sweep") config.command = Command::sweep;
        else if (*command == "energetics") config.command = Command::energetics;
        else collector.add("command", "expected evolve, sweep, or energetics");
    }

    if (command && *command == "evolve") {
        auto model_sec = root.object("model", true);
        auto evo_sec = root.object("evolution", true);
        std::optional<ModelSpec> model;
        if (model_sec) model = parse_model(*model_sec);
        if (evo_sec) {
            auto evo = parse_evolution(*evo_sec, /*want_observables=*/true);
            evo_sec->finish();
            if (evo && model) {
                evo->model = *model;
                config.evolution = std::move(evo);
            }
        }
    } else if (command && *command == "sweep") {
        auto sweep_sec = root.object("sweep", true);
        if (sweep_sec) config.sweep = parse_sweep(*sweep_sec);
    } else if (command && *command == "energetics") {
        auto calc_sec = root.object("calculator", true);
        if (calc_sec) config.calculator = parse_calculator(*calc_sec);
    }

    auto output = parse_output(root);
    if (output) config.output = *output;
    root.finish();
    return config;
}

json apply_overrides(json doc, const std::vector<std::string>& overrides) {
    for (const auto& text : overrides) {
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override must look like path.to.key=value", text);
        }
        const std::string path = text.substr(0, eq);
        const std::string value_text = text.substr(eq + 1);
        json value;
        try {
            value = json::parse(value_text);
        } catch (const json::parse_error&) {
            value = value_text; // bare words are strings
        }

        std::vector<std::string> segments;
        std::stringstream ss(path);
        std::string seg;
        while (std::getline(ss, seg, '.')) {
            if (seg.empty()) throw ConfigError("override path has an empty segment", path);
            segments.push_back(seg);
        }

        json* node = &doc;
        for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
            const std::string& s = segments[i];
            if (node->is_array()) {
                std::size_t idx = 0;
                try {
                    idx = std::stoul(s);
                } catch (const std::exception&) {
                    throw ConfigError("array index expected in override path", path);
                }
                if (idx >= node->size()) throw ConfigError("array index out of range", path);
                node = &(*node)[idx];
            } else if (node->is_object()) {
                node = &(*node)[s]; // creates missing intermediates as objects
            } else {
                throw ConfigError("override path descends into a scalar", path);
            }
        }
        const std::string& leaf = segments.back();
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(leaf);
            } catch (const std::exception&) {
                throw ConfigError("array index expected in override path", path);
            }
            if (idx >= node->size()) throw ConfigError("array index out of range", path);
            (*node)[idx] = value;
        } else if (node->is_object()) {
            (*node)[leaf] = value;
        } else {
            throw ConfigError("override path descends into a scalar", path);
        }
    }
    return doc;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot read config file '" + file_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

const char* command_name(Command command) {
    switch (command) {
        case Command::evolve: return "evolve";
        case Command::sweep: return "sweep";
        case Command::energetics: return "energetics";
    }
    return "?";
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    const json doc = apply_overrides(parse_document(text), overrides);
    Collector collector;
    RunConfig config = build_config(doc, collector);
    if (!collector.violations.empty()) {
        const auto& first = collector.violations.front();
        throw ConfigError(first.message +
                              (collector.violations.size() > 1
                                   ? " (+" + std::to_string(collector.violations.size() - 1) +
                                         " more violations)"
                                   : ""),
                          first.path);
    }
    return config;
}

RunConfig load_config(const std::string& file_path, const std::vector<std::string>& overrides) {
    return parse_config_text(read_file(file_path), overrides);
}

std::vector<Violation> validate_config_text(const std::string& text,
                                            const std::vector<std::string>& overrides) {
    const json doc = apply_overrides(parse_document(text), overrides);
    Collector collector;
    build_config(doc, collector);
    return collector.violations;
}

std::vector<Violation> validate_config_file(const std::string& file_path,
                                            const std::vector<std::string>& overrides) {
    return validate_config_text(read_file(file_path), overrides);
}

} // namespace dickelab
