#include "genem/ebl/callee.hpp"

namespace genem::ebl {

namespace {

std::vector<ParamSpec> specs_of(const std::vector<robots::PrimitiveParam>& params) {
    std::vector<ParamSpec> out;
    for (const auto& p : params)
        out.push_back({p.name, p.type, p.required && !p.default_value, p.default_value, p.min, p.max, p.choices});
    return out;
}

}  // namespace

std::vector<ParamSpec> param_specs(const SkillDef& skill) {
    std::vector<ParamSpec> out;
    for (const auto& p : skill.params) {
        ParamSpec spec;
        spec.name = p.name;
        spec.type = p.type;
        spec.required = !p.default_value.has_value();
        spec.default_value = p.default_value;
        out.push_back(std::move(spec));
    }
    return out;
}

std::optional<Callee> resolve_callee(std::string_view name, const Program& scope, const SkillLibrary& library,
                                     const robots::EmbodimentManifest& manifest) {
    Callee callee;
    callee.name = std::string(name);
    if (const auto* local = scope.find(name)) {
        callee.kind = CalleeKind::Local;
        callee.skill = local;
        callee.scope = &scope;
        callee.params = param_specs(*local);
        return callee;
    }
    if (const auto* program = library.program(name)) {
        callee.kind = CalleeKind::Library;
        callee.skill = program->find(name);
        callee.scope = program;
        callee.params = param_specs(*callee.skill);
        return callee;
    }
    if (const auto* prim = manifest.find_primitive(name)) {
        callee.kind = CalleeKind::Primitive;
        callee.primitive = prim;
        callee.params = specs_of(prim->params);
        return callee;
    }
    if (const auto* sensor = manifest.find_sensor(name)) {
        callee.kind = CalleeKind::Sensor;
        callee.sensor = sensor;
        callee.params = specs_of(sensor->params);
        return callee;
    }
    return std::nullopt;
}

ArgBinding bind_args(const Call& call, const std::vector<ParamSpec>& params) {
    ArgBinding b;
    b.by_param.assign(params.size(), nullptr);
    std::size_t next_positional = 0;
    for (const auto& arg : call.args) {
        std::optional<std::size_t> slot;
        if (arg.name.empty()) {
            b.positional = true;
            if (next_positional < params.size()) slot = next_positional++;
        } else {
            for (std::size_t i = 0; i < params.size(); ++i)
                if (params[i].name == arg.name) slot = i;
        }
        if (!slot) {
            b.unknown.push_back(&arg);
        } else if (b.by_param[*slot]) {
            b.duplicate.push_back(&arg);
        } else {
            b.by_param[*slot] = &arg;
        }
    }
    return b;
}

}  // namespace genem::ebl
