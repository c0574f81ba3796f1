#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/skill_library.hpp"
#include "genem/domain/types.hpp"
#include "genem/pipeline/pipeline.hpp"

namespace genem::service {

class NotFound : public Error {
public:
    explicit NotFound(const std::string& message) : Error("NotFound", message) {}
};

// Append-only JSON-lines log of one session. The first line is the session
// header; the rest are pipeline events plus one "trajectory" event per round.
class EventLog : public pipeline::SessionLog {
public:
    explicit EventLog(std::filesystem::path file) : file_(std::move(file)) {}

    // Writes one line and fsyncs before returning.
    void append(const nlohmann::json& event) override;
    const std::filesystem::path& file() const { return file_; }

    // Reads every complete line. A torn last line (no newline, or not JSON)
    // is cut off the file; a corrupt line elsewhere is a FormatError.
    static std::vector<nlohmann::json> recover(const std::filesystem::path& file);

private:
    std::filesystem::path file_;
};

struct SessionHeader {
    std::string id;
    Instruction instruction;
    std::string scenario_id;
    int max_rounds = kDefaultMaxRounds;
    long long created_ms = 0;
    std::vector<SkillEntry> library;  // snapshot offered to every stage of this session

    nlohmann::json to_json() const;
    static SessionHeader from_json(const nlohmann::json& j);
};

// Session state rebuilt from a log.
struct SessionRecord {
    SessionHeader header;
    Session session;
    std::vector<std::shared_ptr<const Trajectory>> trajectories;  // parallel to session.rounds; null when not persisted
    std::size_t events = 0;
};

// Rounds and their trajectories from the events of one log.
SessionRecord rebuild(const std::vector<nlohmann::json>& events);

// Directory layout: <root>/sessions/<id>.jsonl, <root>/skills.json.
class SessionStore {
public:
    // Scans <root>/sessions and rebuilds the index; torn tails are repaired.
    explicit SessionStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // Persists the header and returns the new id.
    std::string create(SessionHeader header);
    bool contains(const std::string& id) const;
    // Ids ordered by creation time, id as tiebreak.
    std::vector<std::string> list() const;
    std::filesystem::path log_path(const std::string& id) const;
    // Throws NotFound.
    std::vector<nlohmann::json> events(const std::string& id) const;

    // Serializes writers of one session.
    std::shared_ptr<std::mutex> lock(const std::string& id);

    SkillLibrary library() const;
    // Throws DuplicateSkillName.
    SkillEntry add_skill(SkillEntry entry);

private:
    std::filesystem::path root_;
    mutable std::mutex mutex_;
    std::map<std::string, std::pair<long long, std::filesystem::path>> index_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
    std::mutex library_mutex_;
};

std::string new_session_id();

}  // namespace genem::service
