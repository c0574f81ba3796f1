#include "genem/robots/scenario.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "genem/data_paths.hpp"
#include "genem/error.hpp"
#include "genem/util/files.hpp"

namespace genem::robots {

std::optional<PersonPosition> WorldScenario::person_at(double t) const {
    if (waypoints.empty()) return std::nullopt;
    if (t <= waypoints.front().t) return PersonPosition{waypoints.front().x, waypoints.front().y};
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const auto& a = waypoints[i - 1];
        const auto& b = waypoints[i];
        if (t <= b.t) {
            const double u = b.t > a.t ? (t - a.t) / (b.t - a.t) : 1.0;
            return PersonPosition{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
        }
    }
    return PersonPosition{waypoints.back().x, waypoints.back().y};
}

WorldScenario scenario_from_json_text(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        WorldScenario s;
        s.id = j.at("id").get<std::string>();
        s.version = j.value("version", 1);
        s.description = j.value("description", "");
        for (const auto& w : j.at("waypoints"))
            s.waypoints.push_back({w.at("t").get<double>(), w.at("x").get<double>(), w.at("y").get<double>()});
        for (const auto& a : j.value("annotations", nlohmann::json::array()))
            s.annotations.push_back({a.at("t").get<double>(), a.at("cue").get<std::string>()});
        const auto by_time = [](const auto& a, const auto& b) { return a.t < b.t; };
        if (!std::is_sorted(s.waypoints.begin(), s.waypoints.end(), by_time) ||
            !std::is_sorted(s.annotations.begin(), s.annotations.end(), by_time))
            throw FormatError("scenario '" + s.id + "': waypoints and annotations must be time-sorted");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("scenario: ") + e.what());
    }
}

WorldScenario load_scenario(std::string_view id, const std::filesystem::path& data_dir) {
    const auto path = data_dir / "scenarios" / (std::string(id) + ".json");
    if (id.empty() || id.find('/') != std::string_view::npos || !std::filesystem::exists(path))
        throw UnknownScenario(std::string(id));
    auto s = scenario_from_json_text(util::read_file(path));
    if (s.id != id) throw FormatError("scenario file " + path.string() + " declares id '" + s.id + "'");
    return s;
}

WorldScenario load_scenario(std::string_view id) { return load_scenario(id, default_data_dir()); }

std::vector<std::string> known_scenario_ids(const std::filesystem::path& data_dir) {
    std::vector<std::string> out;
    const auto dir = data_dir / "scenarios";
    if (!std::filesystem::exists(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace genem::robots
