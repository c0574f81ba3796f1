#include "genem/robots/manifest.hpp"

#include <algorithm>
#include <sstream>

#include "genem/data_paths.hpp"
#include "genem/domain/json.hpp"
#include "genem/ebl/printer.hpp"
#include "genem/error.hpp"
#include "genem/util/files.hpp"

namespace genem::robots {

using nlohmann::json;

const Primitive* EmbodimentManifest::find_primitive(std::string_view name) const {
    for (const auto& p : primitives)
        if (p.name == name) return &p;
    return nullptr;
}

const Sensor* EmbodimentManifest::find_sensor(std::string_view name) const {
    for (const auto& s : sensors)
        if (s.name == name) return &s;
    return nullptr;
}

const ChannelSpec* EmbodimentManifest::find_channel(std::string_view name) const {
    for (const auto& c : channels)
        if (c.name == name) return &c;
    return nullptr;
}

bool EmbodimentManifest::has_modality(std::string_view modality) const {
    return std::find(modalities.begin(), modalities.end(), modality) != modalities.end();
}

std::vector<std::string> EmbodimentManifest::channel_names() const {
    std::vector<std::string> out;
    for (const auto& c : channels) out.push_back(c.name);
    return out;
}

namespace {

std::string format_bound(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string render_param(const PrimitiveParam& p) {
    std::string out = p.name + ": " + std::string(ebl::to_string(p.type));
    if (p.min && p.max) out += " in [" + format_bound(*p.min) + ", " + format_bound(*p.max) + "]";
    if (!p.choices.empty()) {
        out += " one of {";
        for (std::size_t i = 0; i < p.choices.size(); ++i) out += (i ? ", " : "") + p.choices[i];
        out += "}";
    }
    if (p.default_value)
        out += " = " + ebl::print_value(*p.default_value);
    else if (!p.required)
        out += " (optional)";
    return out;
}

std::string render_params(const std::vector<PrimitiveParam>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) out += (i ? ", " : "") + render_param(params[i]);
    return out;
}

PrimitiveParam param_from_json(const json& j) {
    PrimitiveParam p;
    p.name = j.at("name").get<std::string>();
    const auto type = ebl::semantic_type_from_string(j.at("type").get<std::string>());
    if (!type) throw FormatError("unknown type for parameter '" + p.name + "'");
    p.type = *type;
    if (j.contains("min")) p.min = j.at("min").get<double>();
    if (j.contains("max")) p.max = j.at("max").get<double>();
    if (p.min.has_value() != p.max.has_value()) throw FormatError("parameter '" + p.name + "' needs both min and max");
    if (p.min && !(*p.min < *p.max)) throw FormatError("parameter '" + p.name + "' has a degenerate range");
    if (j.contains("default")) p.default_value = literal_from_string(j.at("default").get<std::string>());
    p.required = j.value("required", !p.default_value.has_value());
    p.choices = j.value("choices", std::vector<std::string>{});
    return p;
}

}  // namespace

std::string render_capability_prose(const EmbodimentManifest& m) {
    std::ostringstream os;
    os << "Robot: " << m.id << ". " << m.description << "\n";
    os << "Modalities: ";
    for (std::size_t i = 0; i < m.modalities.size(); ++i) os << (i ? ", " : "") << m.modalities[i];
    os << "\nActions:\n";
    for (const auto& p : m.primitives)
        os << "- " << p.name << "(" << render_params(p.params) << ") [" << p.modality << "]: " << p.description << "\n";
    os << "Sensors (usable as `if` conditions):\n";
    for (const auto& s : m.sensors) {
        os << "- " << s.name << "(" << render_params(s.params) << ") -> "
           << (s.result == SensorResult::Boolean ? "bool" : "number") << ": " << s.description << "\n";
    }
    os << "Limits: base speed " << format_bound(m.limits.base_speed_mps) << " m/s, rotation "
       << format_bound(m.limits.rotation_dps) << " deg/s";
    if (m.has_modality("head")) os << ", head slew " << format_bound(m.limits.head_slew_dps) << " deg/s";
    if (m.has_modality("body"))
        os << ", body height " << format_bound(m.limits.body_height_mps) << " m/s, body pose "
           << format_bound(m.limits.body_pose_dps) << " deg/s";
    const double half = m.limits.arena_half_extent_m;
    os << "; arena spans x and y in [" << format_bound(-half) << ", " << format_bound(half)
       << "] m; the robot starts at (0, 0) facing +x.\n";
    return os.str();
}

EmbodimentManifest manifest_from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
    try {
        EmbodimentManifest m;
        m.id = j.at("id").get<std::string>();
        m.version = j.value("version", 1);
        m.description = j.value("description", "");
        m.modalities = j.at("modalities").get<std::vector<std::string>>();
        for (const auto& p : j.at("primitives")) {
            Primitive prim;
            prim.name = p.at("name").get<std::string>();
            prim.modality = p.at("modality").get<std::string>();
            prim.description = p.value("description", "");
            for (const auto& param : p.value("params", json::array())) prim.params.push_back(param_from_json(param));
            if (m.find_primitive(prim.name)) throw FormatError("duplicate primitive '" + prim.name + "'");
            m.primitives.push_back(std::move(prim));
        }
        for (const auto& s : j.value("sensors", json::array())) {
            Sensor sensor;
            sensor.name = s.at("name").get<std::string>();
            sensor.result = s.value("returns", "bool") == "bool" ? SensorResult::Boolean : SensorResult::Numeric;
            sensor.description = s.value("description", "");
            for (const auto& param : s.value("params", json::array())) sensor.params.push_back(param_from_json(param));
            m.sensors.push_back(std::move(sensor));
        }
        for (const auto& c : j.at("channels")) {
            ChannelSpec ch;
            ch.name = c.at("name").get<std::string>();
            ch.min = c.at("min").get<double>();
            ch.max = c.at("max").get<double>();
            if (!(ch.min < ch.max)) throw FormatError("channel '" + ch.name + "' has a degenerate range");
            if (c.contains("max_rate")) ch.max_rate = c.at("max_rate").get<double>();
            ch.angular = c.value("angular", false);
            ch.initial = c.value("initial", 0.0);
            m.channels.push_back(std::move(ch));
        }
        if (j.contains("limits")) {
            const auto& l = j.at("limits");
            m.limits.base_speed_mps = l.value("base_speed_mps", m.limits.base_speed_mps);
            m.limits.rotation_dps = l.value("rotation_dps", m.limits.rotation_dps);
            m.limits.head_slew_dps = l.value("head_slew_dps", m.limits.head_slew_dps);
            m.limits.body_height_mps = l.value("body_height_mps", m.limits.body_height_mps);
            m.limits.body_pose_dps = l.value("body_pose_dps", m.limits.body_pose_dps);
            m.limits.arena_half_extent_m = l.value("arena_half_extent_m", m.limits.arena_half_extent_m);
        }
        for (const auto& p : m.primitives)
            if (!m.has_modality(p.modality) && p.modality != "timing")
                throw FormatError("primitive '" + p.name + "' uses undeclared modality '" + p.modality + "'");
        m.capability_prose = render_capability_prose(m);
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
}

EmbodimentManifest load_manifest(std::string_view id, const std::filesystem::path& data_dir) {
    const auto path = data_dir / "manifests" / (std::string(id) + ".json");
    if (id.empty() || id.find('/') != std::string_view::npos || !std::filesystem::exists(path))
        throw UnknownEmbodiment(std::string(id));
    auto m = manifest_from_json_text(util::read_file(path));
    if (m.id != id) throw FormatError("manifest file " + path.string() + " declares id '" + m.id + "'");
    return m;
}

EmbodimentManifest load_manifest(std::string_view id) { return load_manifest(id, default_data_dir()); }

std::vector<std::string> known_manifest_ids(const std::filesystem::path& data_dir) {
    std::vector<std::string> out;
    const auto dir = data_dir / "manifests";
    if (!std::filesystem::exists(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace genem::robots
