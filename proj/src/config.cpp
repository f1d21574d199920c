#include "gstrain/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gstrain/util.hpp"

namespace gstrain {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json field_to_json(const FieldSpec& f) {
    ordered_json j;
    j["model"] = to_string(f.model);
    j["amplitudes"] = f.amplitudes;
    j["frequencies"] = f.frequencies;
    j["seed"] = f.seed;
    return j;
}

FieldSpec field_from_json(const ordered_json& j) {
    FieldSpec f;
    f.model = field_model_from_string(j.at("model").get<std::string>());
    if (j.contains("amplitudes")) f.amplitudes = j.at("amplitudes").get<std::vector<double>>();
    if (j.contains("frequencies"))
        f.frequencies = j.at("frequencies").get<std::vector<double>>();
    if (j.contains("seed")) f.seed = j.at("seed").get<std::uint64_t>();
    f.validate();
    return f;
}

ordered_json to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["field"] = field_to_json(c.field);
    j["m"] = c.m;
    j["n"] = c.n;
    j["c_values"] = c.c_values;
    j["window"] = c.window;
    j["eps_gap"] = c.eps_gap;
    j["mu_range"] = c.mu_range;
    j["table_points"] = c.table_points;
    j["p_range"] = ordered_json{{"min", c.p_min}, {"max", c.p_max}, {"steps", c.p_steps}};
    j["delta_list"] = c.delta_list;
    ordered_json d;
    d["dx"] = c.discount.dx;
    d["domain_mult"] = c.discount.domain_mult;
    if (c.discount.theta_override) d["theta_override"] = *c.discount.theta_override;
    d["damping"] = c.discount.damping;
    j["discount"] = d;
    j["sim"] = ordered_json{{"grid", c.sim.grid},
                            {"T", c.sim.T},
                            {"cfl", c.sim.cfl},
                            {"perturb", c.sim.perturb}};
    j["seeds"] = c.seeds;
    j["output_dir"] = c.output_dir;
    return j;
}

}  // namespace

void ExperimentConfig::finalize() {
    field.validate();
    const double norm2 = m * m + n * n;
    if (!(norm2 > 0)) throw ConfigError("config: (m, n) must be nonzero");
    if (std::abs(norm2 - 1.0) > 1e-12) {
        if (std::abs(norm2 - 1.0) > 1e-6)
            std::cerr << "warning: normalizing (m, n) onto the unit circle (|p|^2 was "
                      << format_double(norm2) << ")\n";
        const double r = std::sqrt(norm2);
        m /= r;
        n /= r;
    }
    if (c_values.empty()) throw ConfigError("config: empty c grid");
    if (delta_list.empty()) throw ConfigError("config: empty delta list");
    if (seeds.empty()) throw ConfigError("config: empty seed list");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) throw ConfigError("config: seeds must be distinct");
    if (p_steps < 2) throw ConfigError("config: p_range needs at least 2 steps");
    if (!(eps_gap > 0)) throw ConfigError("config: eps_gap must be positive");
}

std::string ExperimentConfig::canonical_json() const { return to_json(*this).dump(2) + "\n"; }

std::string ExperimentConfig::hash() const { return fnv1a64_hex(canonical_json()); }

ExperimentConfig ExperimentConfig::golden() {
    ExperimentConfig c;
    c.field = FieldSpec::periodic_single_mode(0.5, 1.0);
    c.m = 0.6;
    c.n = 0.8;
    c.window = 50.0;
    return c;
}

FieldSpec ExperimentConfig::random_phase_golden(std::uint64_t seed) {
    return FieldSpec::random_phase({0.2, 0.15, 0.1},
                                   {1.0, std::sqrt(2.0), std::sqrt(3.0)}, seed);
}

ExperimentConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.field = field_from_json(j.at("field"));
        if (j.contains("m")) c.m = j.at("m").get<double>();
        if (j.contains("n")) c.n = j.at("n").get<double>();
        if (j.contains("c_values")) c.c_values = j.at("c_values").get<std::vector<double>>();
        else if (j.contains("c_grid")) {
            const auto& g = j.at("c_grid");
            const double lo = g.at("min").get<double>(), hi = g.at("max").get<double>();
            const int steps = g.at("steps").get<int>();
            if (steps < 1 || hi < lo) throw ConfigError("config: bad c_grid");
            c.c_values.clear();
            for (int i = 0; i < steps; ++i)
                c.c_values.push_back(steps == 1 ? lo
                                                : lo + (hi - lo) * i / double(steps - 1));
        }
        if (j.contains("window")) c.window = j.at("window").get<double>();
        if (j.contains("eps_gap")) c.eps_gap = j.at("eps_gap").get<double>();
        if (j.contains("mu_range")) c.mu_range = j.at("mu_range").get<double>();
        if (j.contains("table_points")) c.table_points = j.at("table_points").get<int>();
        if (j.contains("p_range")) {
            const auto& g = j.at("p_range");
            c.p_min = g.at("min").get<double>();
            c.p_max = g.at("max").get<double>();
            c.p_steps = g.at("steps").get<int>();
        }
        if (j.contains("delta_list"))
            c.delta_list = j.at("delta_list").get<std::vector<double>>();
        if (j.contains("discount")) {
            const auto& d = j.at("discount");
            if (d.contains("dx")) c.discount.dx = d.at("dx").get<double>();
            if (d.contains("domain_mult"))
                c.discount.domain_mult = d.at("domain_mult").get<double>();
            if (d.contains("theta_override") && !d.at("theta_override").is_null())
                c.discount.theta_override = d.at("theta_override").get<double>();
            if (d.contains("damping")) c.discount.damping = d.at("damping").get<double>();
        }
        if (j.contains("sim")) {
            const auto& s = j.at("sim");
            if (s.contains("grid")) c.sim.grid = s.at("grid").get<int>();
            if (s.contains("T")) c.sim.T = s.at("T").get<double>();
            if (s.contains("cfl")) c.sim.cfl = s.at("cfl").get<double>();
            if (s.contains("perturb")) c.sim.perturb = s.at("perturb").get<double>();
        }
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    try {
        c.finalize();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("config: cannot write " + path);
    out << cfg.canonical_json();
}

}  // namespace gstrain
