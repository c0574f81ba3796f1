#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genem/ebl/ast.hpp"

namespace genem::robots {

// Typed, unit-carrying parameter of a primitive or sensor.
struct PrimitiveParam {
    std::string name;
    ebl::SemanticType type = ebl::SemanticType::Number;
    std::optional<double> min;
    std::optional<double> max;
    bool required = true;
    std::optional<ebl::Value> default_value;
    std::vector<std::string> choices;  // allowed text values, empty = any

    ebl::Unit unit() const { return ebl::unit_of(type); }
};

struct Primitive {
    std::string name;
    std::string modality;
    std::string description;
    std::vector<PrimitiveParam> params;
};

enum class SensorResult { Boolean, Numeric };

struct Sensor {
    std::string name;
    SensorResult result = SensorResult::Boolean;
    std::string description;
    std::vector<PrimitiveParam> params;
};

struct ChannelSpec {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::optional<double> max_rate;  // per second; unset = may jump
    bool angular = false;            // compared by wrapped difference
    double initial = 0.0;
};

// Kinematic limits of the simulator, documented alongside the primitives.
struct KinematicLimits {
    double base_speed_mps = 0.5;
    double rotation_dps = 45.0;
    double head_slew_dps = 90.0;
    double body_height_mps = 0.1;
    double body_pose_dps = 45.0;
    double arena_half_extent_m = 5.0;
};

struct EmbodimentManifest {
    std::string id;
    int version = 1;
    std::string description;
    std::vector<std::string> modalities;
    std::vector<Primitive> primitives;
    std::vector<Sensor> sensors;
    std::vector<ChannelSpec> channels;
    KinematicLimits limits;
    std::string capability_prose;

    const Primitive* find_primitive(std::string_view name) const;
    const Sensor* find_sensor(std::string_view name) const;
    const ChannelSpec* find_channel(std::string_view name) const;
    bool has_modality(std::string_view modality) const;
    std::vector<std::string> channel_names() const;
};

inline constexpr std::string_view kMobileManifest = "mobile_v1";
inline constexpr std::string_view kQuadrupedManifest = "quadruped_v1";

// Prompt-ready description of the robot, regenerated from the structured
// fields. Mentions every primitive exactly once.
std::string render_capability_prose(const EmbodimentManifest& manifest);

// Parses a manifest document and fills in capability_prose.
// Throws FormatError on schema violations.
EmbodimentManifest manifest_from_json_text(std::string_view text);

// Loads `<data_dir>/manifests/<id>.json`. Throws UnknownEmbodiment.
EmbodimentManifest load_manifest(std::string_view id, const std::filesystem::path& data_dir);
EmbodimentManifest load_manifest(std::string_view id);

std::vector<std::string> known_manifest_ids(const std::filesystem::path& data_dir);

}  // namespace genem::robots
