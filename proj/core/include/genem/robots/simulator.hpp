#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "genem/domain/skill_library.hpp"
#include "genem/domain/types.hpp"
#include "genem/ebl/interpreter.hpp"
#include "genem/robots/manifest.hpp"
#include "genem/robots/scenario.hpp"

namespace genem::robots {

class UnknownSensor : public Error {
public:
    explicit UnknownSensor(const std::string& name) : Error("UnknownSensor", "unknown sensor '" + name + "'") {}
};

// What sensors can observe.
struct WorldState {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading_deg = 0.0;
    const WorldScenario* scenario = nullptr;
};

inline constexpr double kVisibleRangeM = 5.0;
inline constexpr double kVisibleHalfConeDeg = 60.0;

// Evaluates a manifest sensor; booleans come back as 0 or 1.
// Throws UnknownSensor.
double sensor_eval(const std::string& sensor, const ebl::ArgMap& args, const WorldState& world);

// Angle difference wrapped into [-180, 180).
double wrap_deg(double deg);

// Deterministic fixed-step kinematic executor. Each primitive moves the
// manifest channels linearly at their rate caps; the number of steps is set
// by the slowest channel and is at least one.
class KinematicSimulator : public ebl::PrimitiveExecutor {
public:
    KinematicSimulator(const EmbodimentManifest& manifest, const WorldScenario& scenario);

    void execute(const Primitive& primitive, const ebl::ArgMap& args) override;
    double sense(const Sensor& sensor, const ebl::ArgMap& args) override;
    void wait(double seconds) override;
    double elapsed_s() const override;

    WorldState world() const;
    const Trajectory& trajectory() const { return trajectory_; }
    Trajectory take_trajectory() { return std::move(trajectory_); }

private:
    using Targets = std::map<std::string, double>;

    // Moves to absolute targets (angular channels: `deltas` are added unwrapped).
    void move(const Targets& targets, const Targets& deltas = {});
    void hold(int steps);
    void push_frame();
    void set_light(std::uint32_t rgb);
    std::uint32_t light() const;
    void emit(EventKind kind, std::string payload);
    double value(const std::string& channel) const;
    bool has(const std::string& channel) const;
    void check_arena(double x, double y) const;

    const EmbodimentManifest& manifest_;
    const WorldScenario& scenario_;
    Trajectory trajectory_;
    std::vector<double> state_;
};

// Resets the world to `scenario` at t = 0 and runs the program's entry skill
// with its parameter defaults. `seed` is reserved and has no effect.
Trajectory simulate(const BehaviorProgram& program, const EmbodimentManifest& manifest, const WorldScenario& scenario,
                    const SkillLibrary& library, std::uint64_t seed = 0, const ebl::Budget& budget = {});

// Same, also reporting the interpreter's action and call counts.
Trajectory simulate(const BehaviorProgram& program, const EmbodimentManifest& manifest, const WorldScenario& scenario,
                    const SkillLibrary& library, ebl::ExecutionStats& stats, const ebl::Budget& budget = {});

}  // namespace genem::robots
