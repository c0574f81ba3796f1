#include "genem/harness/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genem/robots/simulator.hpp"

namespace genem::harness {

namespace {

bool calls_any(const ebl::Program& program, std::initializer_list<std::string_view> names) {
    bool found = false;
    for (const auto& skill : program.skills)
        ebl::for_each_call(skill.body, [&](const ebl::Call& call) {
            if (std::find(names.begin(), names.end(), call.target) != names.end()) found = true;
        });
    return found;
}

// Follows library calls too, so a saved skill that checks distance counts.
bool uses_person_distance(const ebl::Program& program, const SkillLibrary& library, int depth = 0) {
    if (calls_any(program, {"person_distance", "person_distance_lt"})) return true;
    if (depth > 8) return false;
    bool found = false;
    for (const auto& skill : program.skills)
        ebl::for_each_call(skill.body, [&](const ebl::Call& call) {
            if (found || program.find(call.target)) return;
            if (const auto* sub = library.program(call.target)) found = uses_person_distance(*sub, library, depth + 1);
        });
    return found;
}

std::vector<double> channel_or_empty(const Trajectory& t, std::initializer_list<std::string_view> names) {
    for (auto n : names)
        if (t.channel_index(n)) return t.channel(n);
    return {};
}

double at_end(const Trajectory& t, std::string_view channel) {
    const auto i = t.channel_index(channel);
    return i && !t.frames.empty() ? t.frames.back().values[*i] : 0.0;
}

bool faces_person(const Trajectory& t, const robots::WorldScenario& scenario) {
    if (t.frames.empty()) return false;
    const auto person = scenario.person_at(t.duration());
    if (!person) return false;
    const double dx = person->x - at_end(t, "x"), dy = person->y - at_end(t, "y");
    if (std::hypot(dx, dy) > 5.0) return false;
    const double gaze = at_end(t, "heading_deg") + at_end(t, "head_pan_deg") + at_end(t, "body_yaw_deg");
    const double bearing = std::atan2(dy, dx) * 180.0 / M_PI;
    return std::abs(robots::wrap_deg(bearing - gaze)) <= 60.0;
}

}  // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {"uses_person_distance", "standoff", "nods", "shakes", "shows_red",
                                                   "shows_light", "no_speech", "moves", "faces_person"};
    return names;
}

bool is_known_check(std::string_view name) {
    const auto& k = known_checks();
    return std::find(k.begin(), k.end(), name) != k.end();
}

std::vector<LightEvent> light_events(const Trajectory& trajectory) {
    std::vector<LightEvent> out;
    for (const auto& e : trajectory.events) {
        if (e.kind != EventKind::LightPattern) continue;
        std::istringstream in(e.payload);
        LightEvent le;
        le.t = e.t;
        std::string color;
        in >> le.mode >> color;
        if (color.size() == 7 && color[0] == '#') le.rgb = static_cast<std::uint32_t>(std::stoul(color.substr(1), nullptr, 16));
        out.push_back(std::move(le));
    }
    return out;
}

bool is_red(std::uint32_t rgb) { return (rgb >> 16 & 0xFF) >= 180 && (rgb >> 8 & 0xFF) < 100 && (rgb & 0xFF) < 100; }
bool is_green(std::uint32_t rgb) { return (rgb >> 8 & 0xFF) >= 180 && (rgb >> 16 & 0xFF) < 100 && (rgb & 0xFF) < 100; }

std::vector<Excursion> excursions(const std::vector<double>& values, double step_s, double threshold) {
    std::vector<Excursion> out;
    int state = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (state == 0 && std::abs(v) >= threshold) {
            state = v > 0 ? 1 : -1;
            out.push_back({static_cast<double>(i) * step_s, state});
        } else if (state != 0 && std::abs(v) < threshold / 2) {
            state = 0;
        } else if (state != 0 && v * state < 0 && std::abs(v) >= threshold) {
            state = -state;  // swung straight through zero within one frame
            out.push_back({static_cast<double>(i) * step_s, state});
        }
    }
    return out;
}

std::optional<bool> run_check(std::string_view name, const CheckInput& in) {
    if (!is_known_check(name)) throw FormatError("unknown check '" + std::string(name) + "'");
    if (name == "uses_person_distance") return uses_person_distance(in.program, in.library);
    if (!in.trajectory) return std::nullopt;
    const auto& t = *in.trajectory;
    if (name == "standoff") {
        const auto person = in.scenario.person_at(t.duration());
        if (!person || t.frames.empty()) return true;
        return std::hypot(person->x - at_end(t, "x"), person->y - at_end(t, "y")) >= kStandoffM;
    }
    if (name == "nods") return !excursions(channel_or_empty(t, {"head_tilt_deg", "body_pitch_deg"}), t.step_s, 5.0).empty();
    if (name == "shakes") {
        const auto ex = excursions(channel_or_empty(t, {"head_pan_deg", "body_yaw_deg"}), t.step_s, 5.0);
        for (std::size_t i = 1; i < ex.size(); ++i)
            if (ex[i].sign != ex[i - 1].sign) return true;
        return false;
    }
    if (name == "shows_red") {
        const auto ev = light_events(t);
        return std::any_of(ev.begin(), ev.end(), [](const LightEvent& e) { return e.mode != "off" && is_red(e.rgb); });
    }
    if (name == "shows_light") {
        const auto ev = light_events(t);
        return std::any_of(ev.begin(), ev.end(), [](const LightEvent& e) { return e.mode != "off"; });
    }
    if (name == "no_speech")
        return std::none_of(t.events.begin(), t.events.end(), [](const TrajectoryEvent& e) { return e.kind == EventKind::Speech; });
    if (name == "moves") {
        const auto x = t.channel("x"), y = t.channel("y");
        double best = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::hypot(x[i] - x[0], y[i] - y[0]));
        return best >= 0.3;
    }
    return faces_person(t, in.scenario);
}

}  // namespace genem::harness
