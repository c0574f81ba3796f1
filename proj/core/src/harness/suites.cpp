#include "genem/harness/suites.hpp"

#include <iomanip>
#include <sstream>

#include "genem/domain/json.hpp"
#include "genem/ebl/analysis.hpp"
#include "genem/harness/checks.hpp"
#include "genem/robots/scenario.hpp"
#include "genem/robots/simulator.hpp"
#include "genem/util/files.hpp"

namespace genem::harness {

using nlohmann::json;
using pipeline::Candidate;
using pipeline::Pipeline;

SuiteContext SuiteContext::with_gateway(std::shared_ptr<llm::Gateway> gateway, std::filesystem::path data_dir,
                                        std::string backend_label) {
    SuiteContext ctx;
    ctx.templates = std::make_shared<const pipeline::TemplateSet>(pipeline::TemplateSet::load(data_dir / "templates"));
    ctx.data_dir = std::move(data_dir);
    ctx.gateway = std::move(gateway);
    ctx.backend_label = std::move(backend_label);
    return ctx;
}

std::filesystem::path behaviors_file(const std::filesystem::path& d) { return d / "catalog" / "behaviors.json"; }
std::filesystem::path compose_file(const std::filesystem::path& d) { return d / "catalog" / "compose.json"; }
std::filesystem::path feedback_bank_file(const std::filesystem::path& d) { return d / "catalog" / "feedback_bank.json"; }
std::filesystem::path scripted_session_file(const std::filesystem::path& d) { return d / "catalog" / "scripted_session.json"; }
std::filesystem::path seed_skills_file(const std::filesystem::path& d) { return d / "skills" / "seed_skills.json"; }

const BehaviorRow* ExperimentReport::row(std::string_view behavior) const {
    for (const auto& r : rows)
        if (r.behavior == behavior) return &r;
    return nullptr;
}

const FeedbackCell* FeedbackReport::cell(std::string_view behavior, FeedbackType type) const {
    for (const auto& c : cells)
        if (c.behavior == behavior && c.type == type) return &c;
    return nullptr;
}

namespace {

struct Env {
    const BehaviorSpec& spec;
    const robots::EmbodimentManifest& manifest;
    const robots::WorldScenario& scenario;
    const SkillLibrary& library;
};

std::optional<BehaviorProgram> reparse(const std::string& raw) {
    const auto code = pipeline::extract_code_block(raw);
    if (!code) return std::nullopt;
    try {
        return BehaviorProgram::from_source(*code);
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool closed_over(const ebl::Program& program, const Env& env) {
    bool ok = true;
    for (const auto& skill : program.skills)
        ebl::for_each_call(skill.body, [&](const ebl::Call& c) {
            if (!env.manifest.find_primitive(c.target) && !env.manifest.find_sensor(c.target) &&
                !program.find(c.target) && !env.library.find(c.target))
                ok = false;
        });
    return ok;
}

SlotResult evaluate(const Candidate& c, const Env& env) {
    SlotResult slot;
    slot.sample = c.sample_index;
    slot.success = c.error_code.empty() && c.program;
    slot.code = c.error_code;
    slot.message = c.error_message;
    slot.program = c.program ? c.program : reparse(c.raw);
    if (!slot.program) {
        for (const auto& name : env.spec.checks) slot.checks[name] = std::nullopt;
        return slot;
    }
    const auto& program = *slot.program;
    const auto report = ebl::validate(program.ast, env.manifest, env.library, env.spec.forbidden);
    for (const auto& w : report.warnings) slot.warnings.emplace_back(ebl::to_string(w.code));
    slot.calls = ebl::static_call_counts(program.ast);

    std::optional<Trajectory> trajectory;
    if (slot.success) {
        try {
            trajectory = robots::simulate(program, env.manifest, env.scenario, env.library);
            slot.frames = trajectory->frames.size();
            slot.events = trajectory->events.size();
        } catch (const Error& e) {
            slot.success = false;
            slot.code = e.code();
            slot.message = e.what();
        }
    }
    const CheckInput in{program.ast, env.library, env.scenario, trajectory ? &*trajectory : nullptr};
    for (const auto& name : env.spec.checks) slot.checks[name] = run_check(name, in);
    return slot;
}

BehaviorRow summarize(const std::string& behavior, std::vector<SlotResult> slots, const Env& env) {
    BehaviorRow row;
    row.behavior = behavior;
    row.n = static_cast<int>(slots.size());
    for (const auto& s : slots) {
        if (std::count(s.warnings.begin(), s.warnings.end(), "MissingDocstring")) ++row.docstring_warnings;
        if (std::count(s.warnings.begin(), s.warnings.end(), "PositionalStyle")) ++row.positional_warnings;
        if (!s.success) {
            ++row.failures[s.code];
            continue;
        }
        ++row.success;
        if (std::any_of(s.checks.begin(), s.checks.end(), [](const auto& c) { return c.second == false; }))
            ++row.norm_violations;
        if (!closed_over(s.program->ast, env)) row.closure = false;
    }
    row.slots = std::move(slots);
    return row;
}

Candidate ablation_candidate(Pipeline& p, const Instruction& instruction, int k) {
    Candidate c;
    c.sample_index = k;
    p.set_sample_index(k);
    try {
        c.program = p.end_to_end_ablation(instruction);
    } catch (const pipeline::CodeRejected& e) {
        c.error_code = e.primary_code();
        c.error_message = e.what();
        c.report = e.report();
        c.raw = e.raw();
    } catch (const pipeline::MalformedStageOutput& e) {
        c.error_code = e.code();
        c.error_message = e.what();
        c.raw = e.raw();
    } catch (const Error& e) {
        c.error_code = e.code();
        c.error_message = e.what();
    }
    p.set_sample_index(0);
    return c;
}

void check_n(int n) {
    if (n < 1) throw PreconditionError("sample count must be at least 1");
}

}  // namespace

ExperimentReport run_behavior_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const std::string& embodiment,
                                    int n, const SkillLibrary& library) {
    check_n(n);
    const auto manifest = robots::load_manifest(embodiment, ctx.data_dir);
    Pipeline p(ctx.gateway, ctx.templates, manifest, library, ctx.options);
    ExperimentReport report{"behaviors", ctx.backend_label, embodiment, n, {}};
    for (const auto& spec : catalog.behaviors) {
        const auto scenario = robots::load_scenario(spec.scenario, ctx.data_dir);
        const Env env{spec, manifest, scenario, library};
        std::vector<SlotResult> slots;
        for (const auto& c : pipeline::sample_candidates(p, spec.instruction_for(embodiment), n))
            slots.push_back(evaluate(c, env));
        report.rows.push_back(summarize(spec.id, std::move(slots), env));
    }
    return report;
}

AblationReport run_ablation_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const std::string& embodiment, int n) {
    check_n(n);
    AblationReport out;
    out.modular = run_behavior_suite(ctx, catalog, embodiment, n);
    const auto manifest = robots::load_manifest(embodiment, ctx.data_dir);
    const SkillLibrary library;
    Pipeline p(ctx.gateway, ctx.templates, manifest, library, ctx.options);
    out.ablated = ExperimentReport{"ablated", ctx.backend_label, embodiment, n, {}};
    for (const auto& spec : catalog.behaviors) {
        const auto scenario = robots::load_scenario(spec.scenario, ctx.data_dir);
        const Env env{spec, manifest, scenario, library};
        std::vector<SlotResult> slots;
        for (int k = 0; k < n; ++k) slots.push_back(evaluate(ablation_candidate(p, spec.instruction_for(embodiment), k), env));
        out.ablated.rows.push_back(summarize(spec.id, std::move(slots), env));
    }
    return out;
}

UsageMatrix run_composability_suite(SuiteContext& ctx, const ComposeCatalog& catalog, const SkillLibrary& seed_skills, int n) {
    check_n(n);
    const auto manifest = robots::load_manifest(catalog.embodiment, ctx.data_dir);
    UsageMatrix m{catalog.embodiment, ctx.backend_label, n, catalog.seed_skills, {}};
    for (const auto& target : catalog.targets) {
        const auto library = seed_skills.subset(target.offered);
        const auto scenario = robots::load_scenario(target.scenario, ctx.data_dir);
        const BehaviorSpec spec{target.id, target.instruction, target.scenario, {}, {}};
        const Env env{spec, manifest, scenario, library};
        Pipeline p(ctx.gateway, ctx.templates, manifest, library, ctx.options);
        UsageRow row;
        row.target = target.id;
        for (const auto& skill : catalog.seed_skills)
            if (library.find(skill)) row.cells[skill] = 0;
            else row.cells[skill] = std::nullopt;
        for (const auto& c : pipeline::sample_candidates(p, spec.instruction_for(catalog.embodiment), n)) {
            auto slot = evaluate(c, env);
            if (slot.success)
                for (const auto& [skill, count] : ebl::extract_called_skills(slot.program->ast, library))
                    if (count > 0 && row.cells.count(skill) && row.cells[skill]) ++*row.cells[skill];
            row.slots.push_back(std::move(slot));
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

namespace {

const BehaviorSpec& resolve(const BehaviorCatalog& catalog, const FeedbackBank& bank, const std::string& id) {
    if (const auto* b = catalog.find(id)) return *b;
    for (const auto& b : bank.extra_behaviors)
        if (b.id == id) return b;
    throw FormatError("feedback bank names unknown behavior '" + id + "'");
}

bool calls_named(const ebl::Program& program, const std::vector<std::string>& names) {
    bool found = false;
    for (const auto& skill : program.skills)
        ebl::for_each_call(skill.body, [&](const ebl::Call& c) {
            if (std::find(names.begin(), names.end(), c.target) != names.end()) found = true;
        });
    return found;
}

// Empty when the edit matches the requested feedback type.
std::string verify_edit(const FeedbackCase& fc, const ebl::EditScript& diff, const BehaviorProgram& after) {
    if (fc.type == FeedbackType::Remove)
        return calls_named(after.ast, fc.removed) ? "removed capability still called" : "";
    const auto kind = *expected_edit(fc.type);
    for (const auto& op : diff) {
        if (op.kind != kind) continue;
        if (!fc.subject.empty() && op.subject != fc.subject) continue;
        if (!fc.anchor.empty() && op.anchor != fc.anchor) continue;
        return "";
    }
    std::string got;
    for (const auto& op : diff) got += (got.empty() ? "" : ", ") + ebl::describe(op);
    return "expected " + std::string(ebl::to_string(kind)) + (fc.subject.empty() ? "" : "(" + fc.subject + ")") +
           (fc.anchor.empty() ? "" : " before " + fc.anchor) + ", got [" + got + "]";
}

}  // namespace

FeedbackReport run_feedback_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const FeedbackBank& bank,
                                  const std::string& embodiment, int n) {
    check_n(n);
    const auto manifest = robots::load_manifest(embodiment, ctx.data_dir);
    const SkillLibrary library;
    Pipeline p(ctx.gateway, ctx.templates, manifest, library, ctx.options);
    FeedbackReport report{ctx.backend_label, embodiment, n, {}};
    for (const auto& fc : bank.cases) {
        const auto& spec = resolve(catalog, bank, fc.behavior);
        FeedbackCell cell{fc.behavior, fc.type, n, 0, {}, {}};
        for (int k = 0; k < n; ++k) {
            FeedbackSlot slot;
            slot.sample = k;
            p.set_sample_index(k);
            Session s;
            s.id = fc.behavior + "/" + std::string(to_string(fc.type)) + "/" + std::to_string(k);
            s.instruction = spec.instruction_for(embodiment);
            s.scenario_id = spec.scenario;
            try {
                p.run_generation(s);
                p.run_feedback_round(s, fc.utterance);
                const auto& before = *s.rounds[0].program;
                const auto& after = *s.rounds[1].program;
                slot.route = std::string(to_string(s.rounds[1].feedback->route));
                const auto diff = ebl::ast_diff(before.ast, after.ast);
                for (const auto& op : diff) slot.diff.push_back(ebl::describe(op));
                try {
                    slot.diff_applies = ebl::apply_edit_script(ebl::flatten(before.ast).body, diff) == ebl::flatten(after.ast).body;
                } catch (const PreconditionError&) {
                    slot.diff_applies = false;
                }
                const auto problem = verify_edit(fc, diff, after);
                if (!slot.diff_applies) {
                    slot.code = "DiffApplyFailed";
                    slot.message = "edit script does not reproduce the new program";
                } else if (!problem.empty()) {
                    slot.code = "StructureMismatch";
                    slot.message = problem;
                } else {
                    slot.success = true;
                }
            } catch (const pipeline::CodeRejected& e) {
                slot.code = e.primary_code();
                slot.message = e.what();
            } catch (const Error& e) {
                slot.code = e.code();
                slot.message = e.what();
            }
            if (slot.success) ++cell.success;
            else ++cell.failures[slot.code];
            cell.slots.push_back(std::move(slot));
        }
        report.cells.push_back(std::move(cell));
    }
    p.set_sample_index(0);
    return report;
}

Session run_scripted_session(SuiteContext& ctx, const BehaviorCatalog& catalog, const ScriptedSession& script,
                             pipeline::SessionLog* log) {
    const auto* spec = catalog.find(script.behavior);
    if (!spec) throw FormatError("scripted session names unknown behavior '" + script.behavior + "'");
    const auto manifest = robots::load_manifest(script.embodiment, ctx.data_dir);
    const SkillLibrary library;
    Pipeline p(ctx.gateway, ctx.templates, manifest, library, ctx.options);
    p.set_log(log);
    Session s;
    s.id = "scripted";
    s.instruction = spec->instruction_for(script.embodiment);
    s.scenario_id = spec->scenario;
    p.run_generation(s);
    for (const auto& text : script.feedback) p.run_feedback_round(s, text);
    return s;
}

// ---- reports --------------------------------------------------------------

namespace {

json checks_json(const std::map<std::string, std::optional<bool>>& checks) {
    json j = json::object();
    for (const auto& [k, v] : checks) j[k] = v ? json(*v) : json(nullptr);
    return j;
}

json slot_json(const SlotResult& s) {
    json j{{"sample", s.sample},
           {"success", s.success},
           {"code", s.code.empty() ? json(nullptr) : json(s.code)},
           {"message", s.message},
           {"warnings", s.warnings},
           {"checks", checks_json(s.checks)},
           {"calls", s.calls},
           {"frames", s.frames},
           {"events", s.events}};
    j["program_sha256"] = s.program ? json(util::sha256_hex(s.program->source)) : json(nullptr);
    j["entry_skill"] = s.program ? json(s.program->entry_skill) : json(nullptr);
    return j;
}

json row_json(const BehaviorRow& r) {
    json slots = json::array();
    for (const auto& s : r.slots) slots.push_back(slot_json(s));
    return {{"behavior", r.behavior},
            {"n", r.n},
            {"success", r.success},
            {"norm_violations", r.norm_violations},
            {"docstring_warnings", r.docstring_warnings},
            {"positional_warnings", r.positional_warnings},
            {"closure", r.closure},
            {"failures", r.failures},
            {"slots", slots}};
}

json with_hash(json j) {
    j["hash"] = report_hash(j);
    return j;
}

json report_body(const ExperimentReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row_json(row));
    return {{"suite", r.suite}, {"backend", r.backend}, {"embodiment", r.embodiment}, {"n", r.n}, {"rows", rows}};
}

std::string failures_text(const std::map<std::string, int>& failures) {
    std::string out;
    for (const auto& [code, count] : failures) out += (out.empty() ? "" : ", ") + code + " x" + std::to_string(count);
    return out;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::string report_hash(const json& report) {
    json copy = report;
    copy.erase("hash");
    return util::sha256_hex(copy.dump());
}

json to_json(const ExperimentReport& r) { return with_hash(report_body(r)); }

json to_json(const AblationReport& r) {
    return with_hash({{"suite", "ablation"}, {"modular", report_body(r.modular)}, {"ablated", report_body(r.ablated)}});
}

json to_json(const UsageMatrix& m) {
    json rows = json::array();
    for (const auto& r : m.rows) {
        json cells = json::object();
        for (const auto& [k, v] : r.cells) cells[k] = v ? json(*v) : json(nullptr);
        json slots = json::array();
        for (const auto& s : r.slots) slots.push_back(slot_json(s));
        rows.push_back({{"target", r.target}, {"cells", cells}, {"slots", slots}});
    }
    return with_hash({{"suite", "compose"}, {"backend", m.backend}, {"embodiment", m.embodiment}, {"n", m.n},
                      {"columns", m.columns}, {"rows", rows}});
}

json to_json(const FeedbackReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json slots = json::array();
        for (const auto& s : c.slots)
            slots.push_back({{"sample", s.sample},
                             {"success", s.success},
                             {"code", s.code.empty() ? json(nullptr) : json(s.code)},
                             {"message", s.message},
                             {"route", s.route},
                             {"diff", s.diff},
                             {"diff_applies", s.diff_applies}});
        cells.push_back({{"behavior", c.behavior}, {"type", to_string(c.type)}, {"n", c.n}, {"success", c.success},
                         {"failures", c.failures}, {"slots", slots}});
    }
    return with_hash({{"suite", "feedback"}, {"backend", r.backend}, {"embodiment", r.embodiment}, {"n", r.n}, {"cells", cells}});
}

std::string render_text(const ExperimentReport& r) {
    std::ostringstream out;
    out << r.suite << " | " << r.embodiment << " | n=" << r.n << " | backend " << r.backend << "\n";
    out << pad("Behavior", 16) << pad("Execution", 11) << pad("Norms", 7) << "Failures\n";
    for (const auto& row : r.rows)
        out << pad(row.behavior, 16) << pad(std::to_string(row.success) + "/" + std::to_string(row.n), 11)
            << pad(row.success ? std::to_string(row.norm_violations) : "-", 7) << failures_text(row.failures) << "\n";
    return out.str();
}

std::string render_text(const AblationReport& r) {
    std::ostringstream out;
    out << "ablation | " << r.modular.embodiment << " | n=" << r.modular.n << " | backend " << r.modular.backend << "\n";
    out << pad("", 16) << pad("GenEM", 20) << "Ablated\n";
    out << pad("Behavior", 16) << pad("Execution", 11) << pad("Norms", 9) << pad("Execution", 11) << pad("Norms", 7)
        << "Ablated failures\n";
    for (std::size_t i = 0; i < r.modular.rows.size() && i < r.ablated.rows.size(); ++i) {
        const auto& m = r.modular.rows[i];
        const auto& a = r.ablated.rows[i];
        out << pad(m.behavior, 16) << pad(std::to_string(m.success), 11)
            << pad(m.success ? std::to_string(m.norm_violations) : "-", 9) << pad(std::to_string(a.success), 11)
            << pad(a.success ? std::to_string(a.norm_violations) : "-", 7) << failures_text(a.failures) << "\n";
    }
    return out.str();
}

std::string render_text(const UsageMatrix& m) {
    std::ostringstream out;
    out << "compose | " << m.embodiment << " | n=" << m.n << " | backend " << m.backend << "\n";
    out << pad("", 18);
    for (const auto& c : m.columns) out << pad(c, 14);
    out << "\n";
    for (const auto& row : m.rows) {
        out << pad(row.target, 18);
        for (const auto& c : m.columns) {
            const auto it = row.cells.find(c);
            out << pad(it != row.cells.end() && it->second ? std::to_string(*it->second) : "-", 14);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_text(const FeedbackReport& r) {
    std::ostringstream out;
    out << "feedback | " << r.embodiment << " | n=" << r.n << " | backend " << r.backend << "\n";
    const FeedbackType types[] = {FeedbackType::Insert, FeedbackType::Swap, FeedbackType::Loop, FeedbackType::Remove};
    out << pad("", 18);
    for (auto t : types) out << pad(std::string(to_string(t)), 9);
    out << "\n";
    std::vector<std::string> behaviors;
    for (const auto& c : r.cells)
        if (std::find(behaviors.begin(), behaviors.end(), c.behavior) == behaviors.end()) behaviors.push_back(c.behavior);
    for (const auto& b : behaviors) {
        out << pad(b, 18);
        for (auto t : types) {
            const auto* c = r.cell(b, t);
            out << pad(c ? std::to_string(c->success) + "/" + std::to_string(c->n) : "", 9);
        }
        out << "\n";
    }
    for (const auto& c : r.cells)
        if (!c.failures.empty())
            out << "  " << c.behavior << " / " << to_string(c.type) << ": " << failures_text(c.failures) << "\n";
    return out.str();
}

std::vector<std::filesystem::path> record_transcripts(const std::filesystem::path& data_dir,
                                                      std::shared_ptr<llm::CompletionBackend> backend,
                                                      const std::filesystem::path& out_dir, int n, llm::RetryPolicy retry) {
    check_n(n);
    std::filesystem::create_directories(out_dir);
    const auto catalog = BehaviorCatalog::load(behaviors_file(data_dir));
    std::vector<std::filesystem::path> files;
    const auto context = [&](const std::string& name) {
        files.push_back(out_dir / (name + ".json"));
        return SuiteContext::with_gateway(llm::Gateway::record(backend, files.back(), retry), data_dir, "record");
    };
    {
        auto ctx = context("behaviors_mobile");
        run_behavior_suite(ctx, catalog, "mobile_v1", n);
    }
    {
        auto ctx = context("behaviors_quadruped");
        run_behavior_suite(ctx, catalog, "quadruped_v1", n);
    }
    {
        auto ctx = context("ablation_mobile");
        run_ablation_suite(ctx, catalog, "mobile_v1", n);
    }
    {
        auto ctx = context("compose_quadruped");
        run_composability_suite(ctx, ComposeCatalog::load(compose_file(data_dir)),
                                SkillLibrary::load(seed_skills_file(data_dir)), n);
    }
    {
        auto ctx = context("feedback_mobile");
        run_feedback_suite(ctx, catalog, FeedbackBank::load(feedback_bank_file(data_dir)), "mobile_v1", n);
    }
    {
        auto ctx = context("scripted_session");
        try {
            run_scripted_session(ctx, catalog, ScriptedSession::load(scripted_session_file(data_dir)));
        } catch (const Error&) {
            // partial transcript stays on disk
        }
    }
    return files;
}

}  // namespace genem::harness
