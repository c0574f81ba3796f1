#include "genem/ebl/interpreter.hpp"

#include <cmath>
#include <vector>

#include "genem/ebl/callee.hpp"

namespace genem::ebl {

namespace {

const Value& find_arg(const ArgMap& args, std::string_view name) {
    const auto it = args.find(name);
    if (it == args.end()) throw RuntimeFault("MissingRequiredArgument", "missing argument '" + std::string(name) + "'");
    return it->second;
}

}  // namespace

double arg_number(const ArgMap& args, std::string_view name) {
    const auto* num = std::get_if<NumberLit>(&find_arg(args, name));
    if (!num) throw RuntimeFault("TypeMismatch", "argument '" + std::string(name) + "' is not a number");
    return num->value;
}

double arg_number(const ArgMap& args, std::string_view name, double fallback) {
    return args.count(name) ? arg_number(args, name) : fallback;
}

std::string arg_text(const ArgMap& args, std::string_view name) {
    const auto* text = std::get_if<TextLit>(&find_arg(args, name));
    if (!text) throw RuntimeFault("TypeMismatch", "argument '" + std::string(name) + "' is not a string");
    return text->value;
}

std::uint32_t arg_color(const ArgMap& args, std::string_view name) {
    const auto* color = std::get_if<ColorLit>(&find_arg(args, name));
    if (!color) throw RuntimeFault("TypeMismatch", "argument '" + std::string(name) + "' is not a color");
    return color->rgb;
}

namespace {

constexpr int kMaxCallDepth = 64;

class Interpreter {
public:
    Interpreter(const robots::EmbodimentManifest& manifest, const SkillLibrary& library, PrimitiveExecutor& executor,
                const Budget& budget)
        : manifest_(manifest), library_(library), executor_(executor), budget_(budget) {}

    void run_skill(const SkillDef& skill, const Program& scope, const ArgMap& args) {
        if (++depth_ > kMaxCallDepth) throw RuntimeFault("RecursionDetected", "call depth limit reached in '" + skill.name + "'");
        Frame frame{&scope, {}};
        for (const auto& p : skill.params) {
            if (const auto it = args.find(p.name); it != args.end())
                frame.env[p.name] = it->second;
            else if (p.default_value)
                frame.env[p.name] = *p.default_value;
            else
                throw RuntimeFault("MissingRequiredArgument", "'" + skill.name + "' requires argument '" + p.name + "'");
        }
        run_block(skill.body, frame);
        --depth_;
    }

    ExecutionStats stats;

private:
    struct Frame {
        const Program* scope;
        ArgMap env;
    };

    void run_block(const Block& block, const Frame& frame) {
        for (const auto& stmt : block) {
            if (const auto* call = std::get_if<Call>(&stmt.node)) {
                run_call(*call, frame);
            } else if (const auto* rep = std::get_if<Repeat>(&stmt.node)) {
                for (std::int64_t i = 0; i < rep->count; ++i) run_block(rep->body, frame);
            } else if (const auto* branch = std::get_if<If>(&stmt.node)) {
                if (evaluate(branch->predicate, frame) != 0.0)
                    run_block(branch->then_body, frame);
                else if (branch->else_body)
                    run_block(*branch->else_body, frame);
            } else {
                const auto& w = std::get<Wait>(stmt.node);
                const auto value = resolve(w.duration, frame);
                const auto* num = std::get_if<NumberLit>(&value);
                if (!num) throw RuntimeFault("TypeMismatch", "wait needs a duration");
                if (num->value < 0) throw ExecutorFault("negative wait duration");
                charge_action();
                executor_.wait(num->value);
                check_time();
            }
        }
    }

    Value resolve(const Value& value, const Frame& frame) const {
        const auto* ref = std::get_if<NameRef>(&value);
        if (!ref) return value;
        const auto it = frame.env.find(ref->name);
        if (it == frame.env.end()) throw RuntimeFault("TypeMismatch", "'" + ref->name + "' is not a parameter in scope");
        return it->second;
    }

    ArgMap bind(const Call& call, const Callee& callee, const Frame& frame) const {
        const auto binding = bind_args(call, callee.params);
        if (!binding.unknown.empty() || !binding.duplicate.empty())
            throw RuntimeFault("UnknownArgument", "bad arguments to '" + call.target + "'");
        ArgMap out;
        for (std::size_t i = 0; i < callee.params.size(); ++i) {
            const auto& spec = callee.params[i];
            if (const auto* arg = binding.by_param[i])
                out[spec.name] = resolve(arg->value, frame);
            else if (spec.default_value)
                out[spec.name] = *spec.default_value;
            else if (spec.required)
                throw RuntimeFault("MissingRequiredArgument", "'" + call.target + "' requires argument '" + spec.name + "'");
        }
        return out;
    }

    Callee lookup(const Call& call, const Frame& frame) const {
        auto callee = resolve_callee(call.target, *frame.scope, library_, manifest_);
        if (!callee) throw RuntimeFault("UndefinedFunction", "call to undefined function '" + call.target + "'");
        return *callee;
    }

    double evaluate(const Call& predicate, const Frame& frame) {
        const auto callee = lookup(predicate, frame);
        if (callee.kind != CalleeKind::Sensor)
            throw RuntimeFault("TypeMismatch", "'" + predicate.target + "' is not a sensor predicate");
        ++stats.calls[callee.name];
        return executor_.sense(*callee.sensor, bind(predicate, callee, frame));
    }

    void run_call(const Call& call, const Frame& frame) {
        const auto callee = lookup(call, frame);
        auto args = bind(call, callee, frame);
        ++stats.calls[callee.name];
        switch (callee.kind) {
            case CalleeKind::Local:
            case CalleeKind::Library:
                run_skill(*callee.skill, *callee.scope, args);
                break;
            case CalleeKind::Primitive:
                charge_action();
                executor_.execute(*callee.primitive, args);
                check_time();
                break;
            case CalleeKind::Sensor:
                throw RuntimeFault("TypeMismatch", "sensor '" + call.target + "' can only be used as a condition");
        }
    }

    void charge_action() {
        if (stats.actions >= budget_.max_actions)
            throw BudgetExceeded("action budget of " + std::to_string(budget_.max_actions) + " exhausted");
        ++stats.actions;
    }

    void check_time() const {
        if (executor_.elapsed_s() > budget_.max_seconds + 1e-9)
            throw BudgetExceeded("time budget of " + std::to_string(budget_.max_seconds) + " s exhausted");
    }

    const robots::EmbodimentManifest& manifest_;
    const SkillLibrary& library_;
    PrimitiveExecutor& executor_;
    Budget budget_;
    int depth_ = 0;
};

}  // namespace

ExecutionStats interpret(const Program& program, std::string_view entry, const ArgMap& args,
                         const robots::EmbodimentManifest& manifest, const SkillLibrary& library,
                         PrimitiveExecutor& executor, const Budget& budget) {
    const auto* skill = program.find(entry);
    if (!skill) throw RuntimeFault("UndefinedFunction", "entry skill '" + std::string(entry) + "' not found");
    Interpreter interp(manifest, library, executor, budget);
    ++interp.stats.calls[skill->name];
    interp.run_skill(*skill, program, args);
    return interp.stats;
}

}  // namespace genem::ebl
