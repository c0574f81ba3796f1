#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genem/domain/skill_library.hpp"
#include "genem/domain/types.hpp"
#include "genem/robots/scenario.hpp"

namespace genem::harness {

// Structural stand-ins for the human-coded norm judgement. Static checks
// look at the program; the others need the simulated trajectory.
struct CheckInput {
    const ebl::Program& program;
    const SkillLibrary& library;
    const robots::WorldScenario& scenario;
    const Trajectory* trajectory = nullptr;
};

inline constexpr double kStandoffM = 0.7;

const std::vector<std::string>& known_checks();
bool is_known_check(std::string_view name);
// nullopt when the check needs a trajectory and none was given.
// Throws FormatError for an unknown name.
std::optional<bool> run_check(std::string_view name, const CheckInput& input);

struct LightEvent {
    double t = 0.0;
    std::string mode;  // "set", "off" or a pattern name
    std::uint32_t rgb = 0;
};

std::vector<LightEvent> light_events(const Trajectory& trajectory);
bool is_red(std::uint32_t rgb);
bool is_green(std::uint32_t rgb);

// Excursions of a channel beyond +-threshold; consecutive excursions of the
// same sign count once per return towards zero.
struct Excursion {
    double t = 0.0;
    int sign = 0;
};
std::vector<Excursion> excursions(const std::vector<double>& values, double step_s, double threshold);

}  // namespace genem::harness
