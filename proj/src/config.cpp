#include "uavbeam/config.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace uavbeam {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + context + it.key() + "'");
}

double get_number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("config: '" + key + "' must be a number");
    return obj[key].get<double>();
}

int64_t get_integer(const json& obj, const std::string& key, int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("config: '" + key + "' must be an integer");
    return obj[key].get<int64_t>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean())
        throw ConfigError("config: '" + key + "' must be a boolean");
    return obj[key].get<bool>();
}

Vec3 get_vec3(const json& obj, const std::string& key, const Vec3& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        throw ConfigError("config: '" + key + "' must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

} // namespace

void ScenarioConfig::validate() const {
    try {
        swarm.validate();
        channel.validate();
        interference.region.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (hover.dx_max < 0.0 || hover.dy_max < 0.0 || hover.dz_max < 0.0)
        throw ConfigError("config: hover displacement bounds (dx_max/dy_max/dz_max) must be >= 0");
    if (hover.angle_max_deg < 0.0)
        throw ConfigError("config: angle_max_deg must be >= 0");
    if (hover.tolerance_fraction &&
        (*hover.tolerance_fraction < 0.0 || *hover.tolerance_fraction > 1.0))
        throw ConfigError("config: tolerance_fraction must be in [0, 1]");
    if (interference.power_min < 0.0 || interference.power_max < interference.power_min)
        throw ConfigError("config: interference power_min/power_max range is invalid");
    if (!(interference.noise_power > 0.0))
        throw ConfigError("config: noise_power must be > 0");
    if (selection.k < 1 || selection.k > swarm.count())
        throw ConfigError("config: selection k must satisfy 1 <= k <= swarm size");
    if (!(selection.tx_power > 0.0))
        throw ConfigError("config: tx_power must be > 0");
    if (beam.element_exponent_q < 0.0)
        throw ConfigError("config: element_exponent_q must be >= 0");
    if (beam.angular_grid < 1)
        throw ConfigError("config: angular_grid must be >= 1");
    if (norm(beam.boresight) == 0.0)
        throw ConfigError("config: boresight must be a nonzero vector");
    try {
        agent.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ScenarioConfig ScenarioConfig::from_json(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: document root must be a JSON object");
    check_keys(doc,
               {"seed", "swarm", "receiver", "hover", "channel", "interference", "selection",
                "beam", "agent"},
               "");
    if (!doc.contains("swarm"))
        throw ConfigError("config: missing required key 'swarm'");
    if (!doc.contains("receiver"))
        throw ConfigError("config: missing required key 'receiver'");

    ScenarioConfig cfg;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer())
            throw ConfigError("config: 'seed' must be an integer");
        cfg.seed = doc["seed"].get<uint64_t>();
    }

    {
        const auto& s = doc["swarm"];
        if (!s.is_object()) throw ConfigError("config: 'swarm' must be an object");
        check_keys(s, {"l_u", "c_u", "r_u", "spacing_delta", "origin"}, "swarm.");
        cfg.swarm.l_u = int(get_integer(s, "l_u", 4));
        cfg.swarm.c_u = int(get_integer(s, "c_u", 4));
        cfg.swarm.r_u = int(get_integer(s, "r_u", 4));
        cfg.swarm.spacing_delta = get_number(s, "spacing_delta", 1.0);
        cfg.swarm.origin = get_vec3(s, "origin", {0.0, 0.0, 30.0});
    }
    cfg.receiver = get_vec3(doc, "receiver", cfg.receiver);

    if (doc.contains("hover")) {
        const auto& h = doc["hover"];
        if (!h.is_object()) throw ConfigError("config: 'hover' must be an object");
        check_keys(h, {"dx_max", "dy_max", "dz_max", "angle_max_deg", "tolerance_fraction"},
                   "hover.");
        cfg.hover.angle_max_deg = get_number(h, "angle_max_deg", 10.0);
        if (h.contains("tolerance_fraction")) {
            cfg.hover.tolerance_fraction = get_number(h, "tolerance_fraction", 0.30);
            cfg.hover.dx_max = cfg.hover.dy_max = cfg.hover.dz_max = 0.0;
        } else if (h.contains("dx_max") || h.contains("dy_max") || h.contains("dz_max")) {
            cfg.hover.tolerance_fraction.reset();
            cfg.hover.dx_max = get_number(h, "dx_max", 0.0);
            cfg.hover.dy_max = get_number(h, "dy_max", 0.0);
            cfg.hover.dz_max = get_number(h, "dz_max", 0.0);
        }
    }

    if (doc.contains("channel")) {
        const auto& c = doc["channel"];
        if (!c.is_object()) throw ConfigError("config: 'channel' must be an object");
        check_keys(c, {"rician_k", "pathloss_exponent", "reference_gain", "carrier_freq"},
                   "channel.");
        cfg.channel.rician_k = get_number(c, "rician_k", 5.0);
        cfg.channel.pathloss_exponent = get_number(c, "pathloss_exponent", 2.2);
        cfg.channel.reference_gain = get_number(c, "reference_gain", 1.0);
        cfg.channel.carrier_freq = get_number(c, "carrier_freq", 3.5e9);
    }

    if (doc.contains("interference")) {
        const auto& f = doc["interference"];
        if (!f.is_object()) throw ConfigError("config: 'interference' must be an object");
        check_keys(f, {"num_sources", "region_min", "region_max", "power_min", "power_max",
                       "noise_power"},
                   "interference.");
        const int64_t ns = get_integer(f, "num_sources", 6);
        if (ns < 0) throw ConfigError("config: num_sources must be >= 0");
        cfg.interference.num_sources = size_t(ns);
        cfg.interference.region.min = get_vec3(f, "region_min", cfg.interference.region.min);
        cfg.interference.region.max = get_vec3(f, "region_max", cfg.interference.region.max);
        cfg.interference.power_min = get_number(f, "power_min", 0.1);
        cfg.interference.power_max = get_number(f, "power_max", 1.0);
        cfg.interference.noise_power = get_number(f, "noise_power", 1e-9);
    }

    cfg.selection.k = std::min(4, cfg.swarm.count());
    if (doc.contains("selection")) {
        const auto& s = doc["selection"];
        if (!s.is_object()) throw ConfigError("config: 'selection' must be an object");
        check_keys(s, {"k", "tx_power"}, "selection.");
        cfg.selection.k = int(get_integer(s, "k", int64_t(cfg.selection.k)));
        cfg.selection.tx_power = get_number(s, "tx_power", 1.0);
    }

    if (doc.contains("beam")) {
        const auto& b = doc["beam"];
        if (!b.is_object()) throw ConfigError("config: 'beam' must be an object");
        check_keys(b, {"element_exponent_q", "angular_grid", "boresight"}, "beam.");
        cfg.beam.element_exponent_q = get_number(b, "element_exponent_q", 2.0);
        const int64_t g = get_integer(b, "angular_grid", 64);
        if (g < 1) throw ConfigError("config: angular_grid must be >= 1");
        cfg.beam.angular_grid = size_t(g);
        cfg.beam.boresight = get_vec3(b, "boresight", {0.0, 0.0, 1.0});
    }

    {
        json a = doc.contains("agent") ? doc["agent"] : json::object();
        if (!a.is_object()) throw ConfigError("config: 'agent' must be an object");
        check_keys(a,
                   {"learning_rate", "discount", "epsilon_start", "epsilon_end", "epsilon_decay",
                    "batch_size", "replay_capacity", "eta_threshold", "threshold_quantile",
                    "threshold_probes", "max_steps_per_episode", "num_episodes", "position_step",
                    "phase_step", "hidden_sizes", "lr_decay_steps", "constant_lr",
                    "frozen_target", "target_refresh"},
                   "agent.");
        auto& ag = cfg.agent;
        ag.learning_rate = get_number(a, "learning_rate", ag.learning_rate);
        ag.discount = get_number(a, "discount", ag.discount);
        ag.epsilon_start = get_number(a, "epsilon_start", ag.epsilon_start);
        ag.epsilon_end = get_number(a, "epsilon_end", ag.epsilon_end);
        ag.epsilon_decay = get_number(a, "epsilon_decay", ag.epsilon_decay);
        ag.batch_size = size_t(get_integer(a, "batch_size", int64_t(ag.batch_size)));
        ag.replay_capacity = size_t(get_integer(a, "replay_capacity", int64_t(ag.replay_capacity)));
        ag.eta_threshold = get_number(a, "eta_threshold", ag.eta_threshold);
        ag.threshold_quantile = get_number(a, "threshold_quantile", ag.threshold_quantile);
        ag.threshold_probes = size_t(get_integer(a, "threshold_probes", int64_t(ag.threshold_probes)));
        ag.max_steps_per_episode =
            size_t(get_integer(a, "max_steps_per_episode", int64_t(ag.max_steps_per_episode)));
        ag.num_episodes = size_t(get_integer(a, "num_episodes", int64_t(ag.num_episodes)));
        ag.position_step = get_number(a, "position_step", cfg.swarm.spacing_delta / 100.0);
        ag.phase_step = get_number(a, "phase_step", ag.phase_step);
        if (a.contains("hidden_sizes")) {
            if (!a["hidden_sizes"].is_array() || a["hidden_sizes"].empty())
                throw ConfigError("config: 'hidden_sizes' must be a non-empty array");
            ag.hidden_sizes.clear();
            for (const auto& v : a["hidden_sizes"]) {
                if (!v.is_number_integer() || v.get<int64_t>() < 1)
                    throw ConfigError("config: 'hidden_sizes' entries must be positive integers");
                ag.hidden_sizes.push_back(size_t(v.get<int64_t>()));
            }
        }
        ag.lr_decay_steps = get_number(a, "lr_decay_steps", ag.lr_decay_steps);
        ag.constant_lr = get_bool(a, "constant_lr", ag.constant_lr);
        ag.frozen_target = get_bool(a, "frozen_target", ag.frozen_target);
        ag.target_refresh = size_t(get_integer(a, "target_refresh", int64_t(ag.target_refresh)));
    }

    cfg.validate();
    return cfg;
}

json ScenarioConfig::to_json() const {
    json doc;
    doc["seed"] = seed;
    doc["swarm"] = {{"l_u", swarm.l_u},
                    {"c_u", swarm.c_u},
                    {"r_u", swarm.r_u},
                    {"spacing_delta", swarm.spacing_delta},
                    {"origin", vec3_json(swarm.origin)}};
    doc["receiver"] = vec3_json(receiver);
    json h;
    h["angle_max_deg"] = hover.angle_max_deg;
    if (hover.tolerance_fraction) {
        h["tolerance_fraction"] = *hover.tolerance_fraction;
    } else {
        h["dx_max"] = hover.dx_max;
        h["dy_max"] = hover.dy_max;
        h["dz_max"] = hover.dz_max;
    }
    doc["hover"] = h;
    doc["channel"] = {{"rician_k", channel.rician_k},
                      {"pathloss_exponent", channel.pathloss_exponent},
                      {"reference_gain", channel.reference_gain},
                      {"carrier_freq", channel.carrier_freq}};
    doc["interference"] = {{"num_sources", interference.num_sources},
                           {"region_min", vec3_json(interference.region.min)},
                           {"region_max", vec3_json(interference.region.max)},
                           {"power_min", interference.power_min},
                           {"power_max", interference.power_max},
                           {"noise_power", interference.noise_power}};
    doc["selection"] = {{"k", selection.k}, {"tx_power", selection.tx_power}};
    doc["beam"] = {{"element_exponent_q", beam.element_exponent_q},
                   {"angular_grid", beam.angular_grid},
                   {"boresight", vec3_json(beam.boresight)}};
    doc["agent"] = {{"learning_rate", agent.learning_rate},
                    {"discount", agent.discount},
                    {"epsilon_start", agent.epsilon_start},
                    {"epsilon_end", agent.epsilon_end},
                    {"epsilon_decay", agent.epsilon_decay},
                    {"batch_size", agent.batch_size},
                    {"replay_capacity", agent.replay_capacity},
                    {"eta_threshold", agent.eta_threshold},
                    {"threshold_quantile", agent.threshold_quantile},
                    {"threshold_probes", agent.threshold_probes},
                    {"max_steps_per_episode", agent.max_steps_per_episode},
                    {"num_episodes", agent.num_episodes},
                    {"position_step", agent.position_step},
                    {"phase_step", agent.phase_step},
                    {"hidden_sizes", agent.hidden_sizes},
                    {"lr_decay_steps", agent.lr_decay_steps},
                    {"constant_lr", agent.constant_lr},
                    {"frozen_target", agent.frozen_target},
                    {"target_refresh", agent.target_refresh}};
    return doc;
}

uint64_t ScenarioConfig::hash() const { return hash_tag(to_json().dump()); }

HoverSpec ScenarioConfig::make_hover() const {
    HoverSpec spec;
    spec.dx_max = hover.dx_max;
    spec.dy_max = hover.dy_max;
    spec.dz_max = hover.dz_max;
    spec.angle_max = hover.angle_max_deg * kPi / 180.0;
    spec.tolerance_fraction = hover.tolerance_fraction;
    return spec.resolved(swarm.spacing_delta);
}

InterferenceField ScenarioConfig::make_field(Rng& rng) const {
    return sample_field(interference.region, interference.num_sources,
                        {interference.power_min, interference.power_max},
                        interference.noise_power, rng);
}

ElementPattern ScenarioConfig::make_element() const {
    ElementPattern e;
    e.exponent_q = beam.element_exponent_q;
    const double n = norm(beam.boresight);
    e.boresight_body = (1.0 / n) * beam.boresight;
    return e;
}

AngularGrid ScenarioConfig::make_grid() const {
    return AngularGrid::uniform(beam.angular_grid, beam.angular_grid);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open file '" + path + "'");
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return ScenarioConfig::from_json(doc);
}

} // namespace uavbeam
