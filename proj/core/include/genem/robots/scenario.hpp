#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genem::robots {

struct Waypoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Annotation {
    double t = 0.0;
    std::string cue;  // "wave", "says: Come here", ...
};

struct PersonPosition {
    double x = 0.0;
    double y = 0.0;
};

// Scripted person for the simulator. The person moves piecewise-linearly
// between waypoints and holds the first/last position outside them.
struct WorldScenario {
    std::string id;
    int version = 1;
    std::string description;
    std::vector<Waypoint> waypoints;
    std::vector<Annotation> annotations;

    bool has_person() const { return !waypoints.empty(); }
    std::optional<PersonPosition> person_at(double t) const;
};

// Throws FormatError for unsorted waypoints or a malformed document.
WorldScenario scenario_from_json_text(std::string_view text);

// Loads `<data_dir>/scenarios/<id>.json`. Throws UnknownScenario.
WorldScenario load_scenario(std::string_view id, const std::filesystem::path& data_dir);
WorldScenario load_scenario(std::string_view id);

std::vector<std::string> known_scenario_ids(const std::filesystem::path& data_dir);

}  // namespace genem::robots
