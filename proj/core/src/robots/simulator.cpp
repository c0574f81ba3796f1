#include "genem/robots/simulator.hpp"

#include <cmath>
#include <limits>

#include "genem/ebl/printer.hpp"

namespace genem::robots {

using ebl::arg_color;
using ebl::arg_number;
using ebl::arg_text;
using ebl::ExecutorFault;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 1e-9;

int steps_for(double amount, double per_second, double step_s) {
    return static_cast<int>(std::ceil(std::abs(amount) / (per_second * step_s) - kEps));
}

}  // namespace

double wrap_deg(double deg) {
    double w = std::fmod(deg + 180.0, 360.0);
    if (w < 0) w += 360.0;
    return w - 180.0;
}

double sensor_eval(const std::string& sensor, const ebl::ArgMap& args, const WorldState& world) {
    const auto person = world.scenario ? world.scenario->person_at(world.t) : std::nullopt;
    const double distance = person ? std::hypot(person->x - world.x, person->y - world.y)
                                   : std::numeric_limits<double>::infinity();
    if (sensor == "person_distance") return distance;
    if (sensor == "person_distance_lt") return distance < arg_number(args, "distance_m") ? 1.0 : 0.0;
    if (sensor == "person_visible") {
        if (!person || distance > kVisibleRangeM) return 0.0;
        if (distance < kEps) return 1.0;
        const double bearing = std::atan2(person->y - world.y, person->x - world.x) * 180.0 / kPi;
        return std::abs(wrap_deg(bearing - world.heading_deg)) <= kVisibleHalfConeDeg + kEps ? 1.0 : 0.0;
    }
    throw UnknownSensor(sensor);
}

KinematicSimulator::KinematicSimulator(const EmbodimentManifest& manifest, const WorldScenario& scenario)
    : manifest_(manifest), scenario_(scenario) {
    trajectory_.embodiment = manifest.id;
    trajectory_.step_s = kFrameStep;
    for (const auto& c : manifest.channels) {
        trajectory_.channels.push_back(c.name);
        state_.push_back(c.initial);
    }
    push_frame();
}

bool KinematicSimulator::has(const std::string& channel) const { return trajectory_.channel_index(channel).has_value(); }

double KinematicSimulator::value(const std::string& channel) const {
    const auto i = trajectory_.channel_index(channel);
    if (!i) throw ExecutorFault(manifest_.id + " has no channel '" + channel + "'");
    return state_[*i];
}

double KinematicSimulator::elapsed_s() const {
    return static_cast<double>(trajectory_.frames.size() - 1) * trajectory_.step_s;
}

WorldState KinematicSimulator::world() const {
    return {elapsed_s(), value("x"), value("y"), value("heading_deg"), &scenario_};
}

void KinematicSimulator::push_frame() {
    const auto i = trajectory_.frames.size();
    trajectory_.frames.push_back({static_cast<double>(i) * trajectory_.step_s, state_});
}

void KinematicSimulator::hold(int steps) {
    for (int k = 0; k < steps; ++k) push_frame();
}

void KinematicSimulator::move(const Targets& targets, const Targets& deltas) {
    struct Track {
        std::size_t index;
        double from;
        double to;
        bool angular;
    };
    std::vector<Track> tracks;
    int steps = 1;
    const auto add = [&](const std::string& name, double to, bool relative) {
        const auto i = trajectory_.channel_index(name);
        if (!i) throw ExecutorFault(manifest_.id + " has no channel '" + name + "'");
        const auto& spec = manifest_.channels[*i];
        const double from = state_[*i];
        if (relative) to = from + to;
        if (spec.max_rate) steps = std::max(steps, steps_for(to - from, *spec.max_rate, trajectory_.step_s));
        tracks.push_back({*i, from, to, spec.angular});
    };
    for (const auto& [name, v] : targets) add(name, v, false);
    for (const auto& [name, v] : deltas) add(name, v, true);
    for (int k = 1; k <= steps; ++k) {
        const double u = static_cast<double>(k) / steps;
        for (const auto& tr : tracks) {
            const double v = k == steps ? tr.to : tr.from + (tr.to - tr.from) * u;
            state_[tr.index] = tr.angular ? wrap_deg(v) : v;
        }
        push_frame();
    }
}

void KinematicSimulator::set_light(std::uint32_t rgb) {
    state_[*trajectory_.channel_index("light_r")] = (rgb >> 16) & 0xFF;
    state_[*trajectory_.channel_index("light_g")] = (rgb >> 8) & 0xFF;
    state_[*trajectory_.channel_index("light_b")] = rgb & 0xFF;
}

std::uint32_t KinematicSimulator::light() const {
    return (static_cast<std::uint32_t>(value("light_r")) << 16) | (static_cast<std::uint32_t>(value("light_g")) << 8) |
           static_cast<std::uint32_t>(value("light_b"));
}

void KinematicSimulator::emit(EventKind kind, std::string payload) {
    trajectory_.events.push_back({elapsed_s(), kind, std::move(payload)});
}

void KinematicSimulator::check_arena(double x, double y) const {
    const double half = manifest_.limits.arena_half_extent_m;
    if (std::abs(x) > half + kEps || std::abs(y) > half + kEps) {
        throw ExecutorFault("target (" + ebl::format_number({x, ebl::Unit::M, false}) + ", " +
                            ebl::format_number({y, ebl::Unit::M, false}) + ") is outside the arena");
    }
}

void KinematicSimulator::execute(const Primitive& primitive, const ebl::ArgMap& args) {
    const auto& name = primitive.name;
    if (name == "head_pan") {
        move({{"head_pan_deg", arg_number(args, "angle_deg")}});
    } else if (name == "head_tilt") {
        move({{"head_tilt_deg", arg_number(args, "angle_deg")}});
    } else if (name == "base_translate") {
        const double d = arg_number(args, "distance_m");
        const double h = value("heading_deg") * kPi / 180.0;
        const double x = value("x") + d * std::cos(h), y = value("y") + d * std::sin(h);
        check_arena(x, y);
        move({{"x", x}, {"y", y}});
    } else if (name == "base_rotate") {
        move({}, {{"heading_deg", arg_number(args, "angle_deg")}});
    } else if (name == "navigate_to") {
        const double x = arg_number(args, "x_m"), y = arg_number(args, "y_m");
        check_arena(x, y);
        const double dx = x - value("x"), dy = y - value("y");
        if (std::hypot(dx, dy) > kEps) {
            const double turn = wrap_deg(std::atan2(dy, dx) * 180.0 / kPi - value("heading_deg"));
            if (std::abs(turn) > kEps) move({}, {{"heading_deg", turn}});
        }
        move({{"x", x}, {"y", y}});
    } else if (name == "light_set") {
        const auto rgb = arg_color(args, "color");
        emit(EventKind::LightPattern, "set " + ebl::format_color(rgb));
        set_light(rgb);
        push_frame();
    } else if (name == "light_off") {
        emit(EventKind::LightPattern, "off");
        set_light(0);
        push_frame();
    } else if (name == "light_pattern") {
        const auto rgb = arg_color(args, "color");
        const auto times = static_cast<int>(arg_number(args, "times", 1));
        emit(EventKind::LightPattern,
             arg_text(args, "pattern") + " " + ebl::format_color(rgb) + " x" + std::to_string(times));
        const auto previous = light();
        for (int i = 0; i < times; ++i) {
            set_light(rgb);
            hold(2);
            set_light(0);
            hold(2);
        }
        if (previous != 0) {
            set_light(previous);
            push_frame();
        }
    } else if (name == "say") {
        const auto text = arg_text(args, "text");
        emit(EventKind::Speech, text);
        hold(std::max(1, steps_for(std::max(0.5, 0.06 * static_cast<double>(text.size())), 1.0, trajectory_.step_s)));
    } else if (name == "play_sound") {
        emit(EventKind::Sound, arg_text(args, "sound"));
        hold(steps_for(0.5, 1.0, trajectory_.step_s));
    } else if (name == "wait") {
        wait(arg_number(args, "duration_s"));
    } else if (name == "body_height") {
        move({{"body_height_m", arg_number(args, "height_m")}});
    } else if (name == "body_pose") {
        move({{"body_roll_deg", arg_number(args, "roll_deg", 0)},
              {"body_pitch_deg", arg_number(args, "pitch_deg", 0)},
              {"body_yaw_deg", arg_number(args, "yaw_deg", 0)}});
    } else if (name == "stand") {
        move({{"body_height_m", 0.5}, {"body_roll_deg", 0}, {"body_pitch_deg", 0}, {"body_yaw_deg", 0}});
    } else if (name == "sit") {
        move({{"body_height_m", 0.25}, {"body_roll_deg", 0}, {"body_pitch_deg", -15}, {"body_yaw_deg", 0}});
    } else if (name == "bow") {
        move({{"body_height_m", 0.4},
              {"body_roll_deg", 0},
              {"body_pitch_deg", arg_number(args, "pitch_deg", 15)},
              {"body_yaw_deg", 0}});
    } else {
        throw ExecutorFault("the simulator has no model for '" + name + "'");
    }
}

double KinematicSimulator::sense(const Sensor& sensor, const ebl::ArgMap& args) {
    return sensor_eval(sensor.name, args, world());
}

void KinematicSimulator::wait(double seconds) {
    if (seconds < 0) throw ExecutorFault("negative wait");
    hold(steps_for(seconds, 1.0, trajectory_.step_s));
}

Trajectory simulate(const BehaviorProgram& program, const EmbodimentManifest& manifest, const WorldScenario& scenario,
                    const SkillLibrary& library, ebl::ExecutionStats& stats, const ebl::Budget& budget) {
    KinematicSimulator sim(manifest, scenario);
    if (!program.ast.skills.empty())
        stats = ebl::interpret(program.ast, program.entry_skill, {}, manifest, library, sim, budget);
    return sim.take_trajectory();
}

Trajectory simulate(const BehaviorProgram& program, const EmbodimentManifest& manifest, const WorldScenario& scenario,
                    const SkillLibrary& library, std::uint64_t /*seed*/, const ebl::Budget& budget) {
    ebl::ExecutionStats stats;
    return simulate(program, manifest, scenario, library, stats, budget);
}

}  // namespace genem::robots
