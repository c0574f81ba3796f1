#include "genem/service/service.hpp"

#include <cstdlib>
#include <regex>

#include "genem/data_paths.hpp"
#include "genem/domain/json.hpp"
#include "genem/ebl/diff.hpp"
#include "genem/ebl/interpreter.hpp"
#include "genem/ebl/printer.hpp"
#include "genem/ebl/validator.hpp"
#include "genem/pipeline/pipeline.hpp"
#include "genem/robots/manifest.hpp"
#include "genem/robots/scenario.hpp"
#include "genem/robots/simulator.hpp"
#include "genem/util/files.hpp"

namespace genem::service {

namespace fs = std::filesystem;
using nlohmann::json;

ServiceConfig config_from_json(const json& j, ServiceConfig c) {
    if (!j.is_object()) throw FormatError("service config must be a JSON object");
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("store_root")) c.store_root = j.at("store_root").get<std::string>();
    if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("template_dir")) c.template_dir = j.at("template_dir").get<std::string>();
    c.backend = j.value("backend", c.backend);
    c.max_rounds = j.value("max_rounds", c.max_rounds);
    return c;
}

ServiceConfig load_config(const fs::path& file) {
    ServiceConfig c;
    if (!file.empty()) c = config_from_json(util::read_json(file), c);
    const auto env = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    if (auto v = env("GENEM_HOST")) c.host = *v;
    if (auto v = env("GENEM_PORT")) {
        try {
            c.port = std::stoi(*v);
        } catch (const std::exception&) {
            throw FormatError("GENEM_PORT is not a number");
        }
    }
    if (auto v = env("GENEM_STORE_ROOT")) c.store_root = *v;
    if (auto v = env("GENEM_DATA_DIR")) c.data_dir = *v;
    if (auto v = env("GENEM_TEMPLATE_DIR")) c.template_dir = *v;
    if (auto v = env("GENEM_BACKEND")) c.backend = *v;
    if (c.port < 0 || c.port > 65535) throw PreconditionError("port out of range");
    if (c.max_rounds < 1) throw PreconditionError("max_rounds must be positive");
    return c;
}

namespace {

fs::path data_dir_of(const ServiceConfig& c) { return c.data_dir.empty() ? default_data_dir() : c.data_dir; }

std::shared_ptr<llm::CompletionBackend> live_backend() {
    auto live = llm::LiveBackend::from_env();
    if (!live) throw PreconditionError("live backend needs GENEM_LLM_ENDPOINT and GENEM_LLM_KEY");
    return std::make_shared<llm::LiveBackend>(std::move(*live));
}

std::string last_stage(const std::vector<json>& events) {
    for (auto it = events.rbegin(); it != events.rend(); ++it)
        if (it->contains("stage")) return it->at("stage").get<std::string>();
    return {};
}

}  // namespace

std::shared_ptr<llm::Gateway> make_gateway(const ServiceConfig& c) {
    const auto& b = c.backend;
    if (b == "replay") return llm::Gateway::replay(llm::Transcript::load_dir(data_dir_of(c) / "transcripts"));
    if (b.rfind("replay:", 0) == 0) return llm::Gateway::replay(llm::Transcript::load_dir(b.substr(7)));
    if (b == "live") return llm::Gateway::passthrough(live_backend());
    if (b.rfind("record:", 0) == 0) return llm::Gateway::record(live_backend(), b.substr(7));
    throw PreconditionError("backend must be replay, replay:<dir>, live or record:<file>");
}

SessionService::SessionService(ServiceConfig config, std::shared_ptr<llm::Gateway> gateway)
    : config_(std::move(config)), gateway_(std::move(gateway)), store_(config_.store_root) {
    if (config_.data_dir.empty()) config_.data_dir = default_data_dir();
    if (config_.template_dir.empty()) config_.template_dir = config_.data_dir / "templates";
    templates_ = std::make_shared<const pipeline::TemplateSet>(pipeline::TemplateSet::load(config_.template_dir));
}

json SessionService::create_session(const json& body) {
    if (!body.is_object()) throw FormatError("request body must be a JSON object");
    SessionHeader h;
    h.instruction.text = body.value("instruction", "");
    h.instruction.embodiment_id = body.value("embodiment", "");
    h.instruction.modality_constraints = body.value("forbidden_modalities", std::vector<std::string>{});
    h.scenario_id = body.value("scenario", "empty");
    if (h.instruction.text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw PreconditionError("instruction text is empty");
    robots::load_manifest(h.instruction.embodiment_id, config_.data_dir);
    robots::load_scenario(h.scenario_id, config_.data_dir);
    h.max_rounds = config_.max_rounds;
    h.library = store_.library().entries();
    const auto id = store_.create(h);
    return get_session(id);
}

std::shared_ptr<SessionRecord> SessionService::load(const std::string& id) {
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = cache_.find(id); it != cache_.end()) return it->second;
    }
    auto rec = std::make_shared<SessionRecord>(rebuild(store_.events(id)));
    std::lock_guard lock(cache_mutex_);
    return cache_.emplace(id, std::move(rec)).first->second;
}

Trajectory SessionService::simulate_program(const SessionRecord& rec, std::size_t k) const {
    const auto manifest = robots::load_manifest(rec.header.instruction.embodiment_id, config_.data_dir);
    const auto scenario = robots::load_scenario(rec.header.scenario_id, config_.data_dir);
    SkillLibrary lib;
    for (const auto& s : rec.header.library) lib.add(s);
    return robots::simulate(*rec.session.rounds[k].program, manifest, scenario, lib);
}

void SessionService::simulate_round(SessionRecord& rec, EventLog& log, std::size_t k) {
    json event{{"type", "trajectory"}, {"round", k}};
    std::shared_ptr<const Trajectory> t;
    try {
        t = std::make_shared<const Trajectory>(simulate_program(rec, k));
        event["trajectory"] = *t;
    } catch (const Error& e) {
        // A faulting program still yields a round; playback just has nothing to show.
        event["trajectory"] = nullptr;
        event["error"] = {{"code", e.code()}, {"message", e.what()}};
    }
    log.append(event);
    rec.trajectories.resize(rec.session.rounds.size());
    rec.trajectories[k] = t;
}

void SessionService::stage_failure(const std::string& id, const Error& e) {
    const auto events = store_.events(id);
    std::string stage = last_stage(events);
    if (const auto* m = dynamic_cast<const pipeline::MalformedStageOutput*>(&e)) stage = llm::to_string(m->stage());
    if (const auto* c = dynamic_cast<const pipeline::CodeRejected*>(&e)) stage = llm::to_string(c->stage());
    if (const auto* r = dynamic_cast<const llm::ReplayMiss*>(&e)) stage = llm::to_string(r->stage());
    {
        // The cached record may now lag the log only by stage events; drop it anyway.
        std::lock_guard lock(cache_mutex_);
        cache_.erase(id);
    }
    throw StageFailure(e.code(), e.what(), stage, id + ":" + std::to_string(events.size()));
}

json SessionService::generate(const std::string& id) {
    const auto path = store_.log_path(id);
    const auto mutex = store_.lock(id);
    std::lock_guard lock(*mutex);
    auto rec = load(id);
    if (rec->session.generated()) throw AlreadyGenerated(id);

    const auto manifest = robots::load_manifest(rec->header.instruction.embodiment_id, config_.data_dir);
    SkillLibrary lib;
    for (const auto& s : rec->header.library) lib.add(s);
    pipeline::Pipeline p(gateway_, templates_, manifest, lib);
    EventLog log(path);
    p.set_log(&log);
    Session s = rec->session;
    try {
        p.run_generation(s);
    } catch (const pipeline::MalformedStageOutput& e) {
        stage_failure(id, e);
    } catch (const pipeline::CodeRejected& e) {
        stage_failure(id, e);
    } catch (const llm::ReplayMiss& e) {
        stage_failure(id, e);
    } catch (const llm::TransportError& e) {
        stage_failure(id, e);
    } catch (const llm::AuthError& e) {
        stage_failure(id, e);
    }
    rec->session = std::move(s);
    simulate_round(*rec, log, 0);
    return round_payload(*rec, 0);
}

json SessionService::feedback(const std::string& id, const std::string& text) {
    const auto path = store_.log_path(id);
    const auto mutex = store_.lock(id);
    std::lock_guard lock(*mutex);
    auto rec = load(id);
    if (!rec->session.generated()) throw NotGenerated(id);

    const auto manifest = robots::load_manifest(rec->header.instruction.embodiment_id, config_.data_dir);
    SkillLibrary lib;
    for (const auto& s : rec->header.library) lib.add(s);
    pipeline::Pipeline p(gateway_, templates_, manifest, lib);
    EventLog log(path);
    p.set_log(&log);
    Session s = rec->session;
    try {
        p.run_feedback_round(s, text);
    } catch (const pipeline::MalformedStageOutput& e) {
        stage_failure(id, e);
    } catch (const pipeline::CodeRejected& e) {
        stage_failure(id, e);
    } catch (const llm::ReplayMiss& e) {
        stage_failure(id, e);
    } catch (const llm::TransportError& e) {
        stage_failure(id, e);
    } catch (const llm::AuthError& e) {
        stage_failure(id, e);
    }
    rec->session = std::move(s);
    const auto k = rec->session.rounds.size() - 1;
    simulate_round(*rec, log, k);
    return round_payload(*rec, k);
}

json SessionService::round_payload(const SessionRecord& rec, std::size_t k) const {
    const auto& rounds = rec.session.rounds;
    const auto& r = rounds.at(k);
    json j{{"session", rec.header.id},
           {"round", k},
           {"human_plan", k == 0 && r.human_plan ? json(*r.human_plan) : json(nullptr)},
           {"robot_plan", r.robot_plan ? json(*r.robot_plan) : json(nullptr)},
           {"program", r.program ? json(*r.program) : json(nullptr)},
           {"rounds_remaining", rec.session.max_rounds - rec.session.round_index}};
    const auto& t = k < rec.trajectories.size() ? rec.trajectories[k] : nullptr;
    j["trajectory"] = t ? json(*t) : json(nullptr);
    if (r.feedback) {
        j["feedback"] = *r.feedback;
        j["route"] = to_string(r.feedback->route);
        j["robot_plan_reused"] = r.robot_plan == rounds[k - 1].robot_plan;
        const auto& before = *rounds[k - 1].program;
        const auto& after = *r.program;
        const auto diff = ebl::ast_diff(before.ast, after.ast);
        bool applies = false;
        try {
            applies = ebl::apply_edit_script(ebl::flatten(before.ast).body, diff) == ebl::flatten(after.ast).body;
        } catch (const Error&) {
        }
        json ops = json::array();
        for (const auto& op : diff) {
            auto o = ebl::to_json(op);
            o["summary"] = ebl::describe(op);
            ops.push_back(std::move(o));
        }
        j["ast_diff"] = std::move(ops);
        j["diff_applies"] = applies;
    }
    return j;
}

json SessionService::get_session(const std::string& id) {
    const auto rec = load(id);
    json rounds = json::array();
    for (std::size_t k = 0; k < rec->session.rounds.size(); ++k) {
        auto p = round_payload(*rec, k);
        p.erase("trajectory");  // fetched per round via the stream endpoint
        const auto& t = k < rec->trajectories.size() ? rec->trajectories[k] : nullptr;
        p["frames"] = t ? t->frames.size() : 0;
        rounds.push_back(std::move(p));
    }
    json lib = json::array();
    for (const auto& s : rec->header.library) lib.push_back(s.name);
    return json{{"id", id},
                {"instruction", rec->header.instruction},
                {"scenario", rec->header.scenario_id},
                {"created_ms", rec->header.created_ms},
                {"max_rounds", rec->session.max_rounds},
                {"round_index", rec->session.round_index},
                {"generated", rec->session.generated()},
                {"library", std::move(lib)},
                {"rounds", std::move(rounds)}};
}

json SessionService::list_sessions(std::size_t offset, std::size_t limit) {
    const auto ids = store_.list();
    json items = json::array();
    for (std::size_t i = offset; i < ids.size() && i < offset + limit; ++i) {
        const auto rec = load(ids[i]);
        items.push_back({{"id", ids[i]},
                         {"instruction", rec->header.instruction.text},
                         {"embodiment", rec->header.instruction.embodiment_id},
                         {"created_ms", rec->header.created_ms},
                         {"rounds", rec->session.rounds.size()}});
    }
    return json{{"total", ids.size()}, {"offset", offset}, {"items", std::move(items)}};
}

std::shared_ptr<const Trajectory> SessionService::trajectory(const std::string& id, int round) {
    const auto rec = load(id);
    if (round < 0 || static_cast<std::size_t>(round) >= rec->session.rounds.size())
        throw NotFound("session '" + id + "' has no round " + std::to_string(round));
    const auto& t = static_cast<std::size_t>(round) < rec->trajectories.size() ? rec->trajectories[round] : nullptr;
    if (t) return t;
    // Not logged (faulted, or the process died before the trajectory event
    // landed). Simulation is pure, so recompute rather than trust the gap.
    try {
        return std::make_shared<const Trajectory>(simulate_program(*rec, static_cast<std::size_t>(round)));
    } catch (const Error& e) {
        throw NotFound("round " + std::to_string(round) + " of session '" + id + "' has no trajectory: " + e.what());
    }
}

json SessionService::list_skills() const {
    json out = json::array();
    const auto lib = store_.library();
    for (const auto& s : lib.entries()) {
        json j = s;
        j["signature"] = render_signature(s);
        out.push_back(std::move(j));
    }
    return json{{"skills", std::move(out)}};
}

json SessionService::save_skill(const json& body) {
    if (!body.is_object()) throw FormatError("request body must be a JSON object");
    const auto id = body.value("session", "");
    const auto name = body.value("name", "");
    const int k = body.value("round", -1);
    static const std::regex ident("[a-z_][a-z0-9_]*");
    if (!std::regex_match(name, ident)) throw PreconditionError("skill name must be a lowercase identifier");
    const auto rec = load(id);
    if (k < 0 || static_cast<std::size_t>(k) >= rec->session.rounds.size())
        throw NotFound("session '" + id + "' has no round " + std::to_string(k));
    const auto& program = *rec->session.rounds[k].program;

    const auto manifest = robots::load_manifest(rec->header.instruction.embodiment_id, config_.data_dir);
    if (manifest.find_primitive(name) || manifest.find_sensor(name))
        throw PreconditionError("'" + name + "' names a robot primitive");
    auto lib = store_.library();
    const auto report = ebl::validate(program.ast, manifest, lib);
    if (!report.valid()) throw InvalidProgram("round " + std::to_string(k) + " does not validate:\n" + report.summary());
    if (lib.find(name)) throw DuplicateSkillName(name);

    auto ast = program.ast;
    for (std::size_t i = 0; i + 1 < ast.skills.size(); ++i)
        if (ast.skills[i].name == name) throw PreconditionError("'" + name + "' is already a helper of this program");
    ast.skills.back().name = name;
    auto entry = SkillEntry::from_source(ebl::print(ast), SkillProvenance::UserSaved);
    json j = store_.add_skill(std::move(entry));
    j["signature"] = render_signature(j.get<SkillEntry>());
    return j;
}

json SessionService::embodiments() const {
    json out = json::array();
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(config_.data_dir / "manifests"))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const auto m = robots::load_manifest(f.stem().string(), config_.data_dir);
        json prims = json::array();
        for (const auto& p : m.primitives) prims.push_back(p.name);
        out.push_back({{"id", m.id}, {"description", m.description}, {"modalities", m.modalities},
                       {"channels", m.channel_names()}, {"primitives", std::move(prims)}});
    }
    return json{{"embodiments", std::move(out)}};
}

json SessionService::scenarios() const {
    json out = json::array();
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(config_.data_dir / "scenarios"))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const auto s = robots::load_scenario(f.stem().string(), config_.data_dir);
        out.push_back({{"id", s.id}, {"description", s.description}, {"has_person", s.has_person()}});
    }
    return json{{"scenarios", std::move(out)}};
}

std::vector<json> pipeline_events(const std::vector<json>& events) {
    std::vector<json> out;
    for (const auto& e : events) {
        const auto type = e.value("type", "");
        if (type != "session" && type != "trajectory") out.push_back(e);
    }
    return out;
}

Session replay_log(const std::vector<json>& events, std::shared_ptr<const pipeline::TemplateSet> templates,
                   const fs::path& data_dir, pipeline::MemoryLog* replayed) {
    const auto original = rebuild(events);
    llm::Transcript transcript;
    for (const auto& e : events)
        if (e.value("type", "") == pipeline::kStageEvent) {
            const auto stage = llm::stage_from_string(e.at("stage").get<std::string>());
            if (!stage) throw FormatError("unknown stage in session log");
            transcript.add({*stage, e.at("fingerprint").get<std::string>(), e.at("raw").get<std::string>()});
        }
    const auto manifest = robots::load_manifest(original.header.instruction.embodiment_id, data_dir);
    SkillLibrary lib;
    for (const auto& s : original.header.library) lib.add(s);
    pipeline::Pipeline p(llm::Gateway::replay(std::move(transcript)), std::move(templates), manifest, lib);
    p.set_log(replayed);
    Session s;
    s.id = original.header.id;
    s.instruction = original.header.instruction;
    s.scenario_id = original.header.scenario_id;
    s.max_rounds = original.header.max_rounds;
    if (original.session.rounds.empty()) return s;
    p.run_generation(s);
    for (std::size_t k = 1; k < original.session.rounds.size(); ++k)
        p.run_feedback_round(s, original.session.rounds[k].feedback->user_text);
    return s;
}

}  // namespace genem::service
