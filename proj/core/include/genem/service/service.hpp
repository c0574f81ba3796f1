#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/llm/gateway.hpp"
#include "genem/pipeline/templates.hpp"
#include "genem/service/store.hpp"

namespace genem::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::filesystem::path store_root = "genem_store";
    std::filesystem::path data_dir;      // empty: built-in data directory
    std::filesystem::path template_dir;  // empty: <data_dir>/templates
    std::string backend = "replay";      // replay | replay:<dir> | live | record:<file>
    int max_rounds = kDefaultMaxRounds;
};

// Defaults, then the JSON file (if given), then GENEM_HOST, GENEM_PORT,
// GENEM_STORE_ROOT, GENEM_DATA_DIR, GENEM_TEMPLATE_DIR, GENEM_BACKEND.
ServiceConfig load_config(const std::filesystem::path& file);
ServiceConfig config_from_json(const nlohmann::json& j, ServiceConfig base = {});

// Throws PreconditionError for an unusable backend spec or missing credentials.
std::shared_ptr<llm::Gateway> make_gateway(const ServiceConfig& config);

class AlreadyGenerated : public Error {
public:
    explicit AlreadyGenerated(const std::string& id) : Error("AlreadyGenerated", "session '" + id + "' was already generated") {}
};

class NotGenerated : public Error {
public:
    explicit NotGenerated(const std::string& id) : Error("NotGenerated", "session '" + id + "' has not been generated yet") {}
};

class InvalidProgram : public Error {
public:
    explicit InvalidProgram(const std::string& message) : Error("InvalidProgram", message) {}
};

// A pipeline stage failed; keeps the original error code. `raw_ref` points
// at the log line holding the failing output ("<session>:<line>").
class StageFailure : public Error {
public:
    StageFailure(std::string code, const std::string& message, std::string stage, std::string raw_ref)
        : Error(std::move(code), message), stage_(std::move(stage)), raw_ref_(std::move(raw_ref)) {}
    const std::string& stage() const noexcept { return stage_; }
    const std::string& raw_ref() const noexcept { return raw_ref_; }

private:
    std::string stage_;
    std::string raw_ref_;
};

// Session operations behind the HTTP API. Calls on different sessions may
// run concurrently; calls on one session are serialized.
class SessionService {
public:
    SessionService(ServiceConfig config, std::shared_ptr<llm::Gateway> gateway);

    const ServiceConfig& config() const { return config_; }
    SessionStore& store() { return store_; }

    // {instruction, embodiment, scenario, forbidden_modalities?} -> {id, ...}
    nlohmann::json create_session(const nlohmann::json& body);
    nlohmann::json generate(const std::string& id);
    nlohmann::json feedback(const std::string& id, const std::string& text);
    nlohmann::json get_session(const std::string& id);
    nlohmann::json list_sessions(std::size_t offset, std::size_t limit);
    // Throws NotFound for an unknown session or round.
    std::shared_ptr<const Trajectory> trajectory(const std::string& id, int round);

    nlohmann::json list_skills() const;
    // {session, round, name} -> SkillEntry. Throws DuplicateSkillName, InvalidProgram.
    nlohmann::json save_skill(const nlohmann::json& body);

    nlohmann::json embodiments() const;
    nlohmann::json scenarios() const;

private:
    std::shared_ptr<SessionRecord> load(const std::string& id);
    nlohmann::json round_payload(const SessionRecord& rec, std::size_t k) const;
    Trajectory simulate_program(const SessionRecord& rec, std::size_t k) const;
    // Simulates round k and appends the trajectory event.
    void simulate_round(SessionRecord& rec, EventLog& log, std::size_t k);
    [[noreturn]] void stage_failure(const std::string& id, const Error& e);

    ServiceConfig config_;
    std::shared_ptr<llm::Gateway> gateway_;
    std::shared_ptr<const pipeline::TemplateSet> templates_;
    SessionStore store_;
    std::mutex cache_mutex_;
    std::map<std::string, std::shared_ptr<SessionRecord>> cache_;
};

// Reruns a logged session against a replay gateway built from its own
// stage outputs. Returns the rebuilt session; `events` receives the new
// pipeline events (header and trajectories are not pipeline events).
Session replay_log(const std::vector<nlohmann::json>& events, std::shared_ptr<const pipeline::TemplateSet> templates,
                   const std::filesystem::path& data_dir, pipeline::MemoryLog* replayed = nullptr);

// Pipeline events of a log (stage outputs, errors, validation, rounds).
std::vector<nlohmann::json> pipeline_events(const std::vector<nlohmann::json>& events);

}  // namespace genem::service
