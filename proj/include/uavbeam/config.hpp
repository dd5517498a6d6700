#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "uavbeam/channel.hpp"
#include "uavbeam/dqn/learning.hpp"
#include "uavbeam/geometry.hpp"
#include "uavbeam/hover.hpp"
#include "uavbeam/interference.hpp"

namespace uavbeam {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Raised for anything wrong with a configuration document; the CLI maps it
/// to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hover noise as configured (angles in degrees for readability; converted
/// to radians when the HoverSpec is built).
struct HoverConfig {
    double dx_max = 0.0;
    double dy_max = 0.0;
    double dz_max = 0.0;
    double angle_max_deg = 10.0;
    std::optional<double> tolerance_fraction = 0.30;
};

struct InterferenceConfig {
    size_t num_sources = 6;
    Box region{{-100.0, -100.0, 0.0}, {150.0, 150.0, 350.0}};
    double power_min = 0.1;
    double power_max = 1.0;
    double noise_power = 1e-9;
};

struct SelectionConfig {
    int k = 4;
    double tx_power = 1.0;
};

struct BeamConfig {
    double element_exponent_q = 2.0;
    size_t angular_grid = 64;
    Vec3 boresight{0.0, 0.0, 1.0};
};

/// Whole-scenario configuration. Parsing is strict: unknown keys anywhere in
/// the document are errors, and every validation failure names the offending
/// key.
struct ScenarioConfig {
    uint64_t seed = 1;
    SwarmLayout swarm{4, 4, 4, 1.0, {0.0, 0.0, 30.0}};
    Vec3 receiver{50.0, 50.0, 300.0};
    HoverConfig hover;
    FadingParams channel;
    InterferenceConfig interference;
    SelectionConfig selection;
    BeamConfig beam;
    dqn::AgentConfig agent;

    void validate() const; // throws ConfigError
    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& doc);
    /// FNV-1a of the canonical (sorted-key) serialization.
    uint64_t hash() const;

    // Derived pieces used by the runners. The agent's position_step is
    // already resolved to spacing/100 at parse time when the document
    // omitted it.
    HoverSpec make_hover() const;
    InterferenceField make_field(Rng& rng) const;
    ElementPattern make_element() const;
    AngularGrid make_grid() const;
};

/// Loads and validates a JSON config file. Missing file, malformed JSON and
/// constraint violations raise ConfigError with distinct messages.
ScenarioConfig load_config(const std::string& path);

} // namespace uavbeam
