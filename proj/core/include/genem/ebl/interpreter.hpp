#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "genem/domain/skill_library.hpp"
#include "genem/ebl/ast.hpp"
#include "genem/error.hpp"
#include "genem/robots/manifest.hpp"

namespace genem::ebl {

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& message) : Error("BudgetExceeded", message) {}
};

// The executor refused an action (out-of-range target, arena exit, ...).
class ExecutorFault : public Error {
public:
    explicit ExecutorFault(const std::string& message) : Error("ExecutorFault", message) {}
};

// Raised when an unvalidated program reaches something the validator would
// have rejected; carries the matching validation code.
class RuntimeFault : public Error {
public:
    RuntimeFault(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

// Fully bound arguments: every declared parameter that has a value, numbers
// expressed in the parameter's unit.
using ArgMap = std::map<std::string, Value, std::less<>>;

double arg_number(const ArgMap& args, std::string_view name);
double arg_number(const ArgMap& args, std::string_view name, double fallback);
std::string arg_text(const ArgMap& args, std::string_view name);
std::uint32_t arg_color(const ArgMap& args, std::string_view name);

class PrimitiveExecutor {
public:
    virtual ~PrimitiveExecutor() = default;
    virtual void execute(const robots::Primitive& primitive, const ArgMap& args) = 0;
    // Booleans are returned as 0 or 1.
    virtual double sense(const robots::Sensor& sensor, const ArgMap& args) = 0;
    virtual void wait(double seconds) = 0;
    virtual double elapsed_s() const = 0;
};

struct Budget {
    std::int64_t max_actions = 10'000;
    double max_seconds = 300.0;
};

struct ExecutionStats {
    std::int64_t actions = 0;
    // Dynamic number of times each callee was entered (skills, primitives, sensors).
    std::map<std::string, std::int64_t> calls;
};

// Runs `entry` with named `args`. Primitive calls and waits count as actions;
// asking for one more action than the budget allows throws BudgetExceeded.
ExecutionStats interpret(const Program& program, std::string_view entry, const ArgMap& args,
                         const robots::EmbodimentManifest& manifest, const SkillLibrary& library,
                         PrimitiveExecutor& executor, const Budget& budget = {});

}  // namespace genem::ebl
