#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/error.hpp"

namespace genem::llm {

enum class StageTag { InstructionFollowing, RobotMotion, CodeGen, Feedback, EndToEndAblation };

std::string_view to_string(StageTag stage);
std::optional<StageTag> stage_from_string(std::string_view text);

inline constexpr std::string_view kDefaultModel = "gpt-4-0613";

struct Message {
    std::string role;  // system | user | assistant
    std::string content;

    bool operator==(const Message&) const = default;
};

struct CompletionRequest {
    StageTag stage = StageTag::InstructionFollowing;
    std::string model_id = std::string(kDefaultModel);
    double temperature = 0.0;
    std::vector<Message> messages;
    // Distinguishes the n samples of one prompt; part of the fingerprint.
    int sample_index = 0;
};

// Throws PreconditionError for an empty message list or a first message
// that is not a system message.
void check_request(const CompletionRequest& request);

// SHA-256 (hex) over stage, model, temperature, sample index and the
// messages with trailing whitespace trimmed from each message.
std::string fingerprint(const CompletionRequest& request);

class TransportError : public Error {
public:
    TransportError(const std::string& message, bool retriable)
        : Error("TransportError", message), retriable_(retriable) {}
    bool retriable() const noexcept { return retriable_; }

private:
    bool retriable_;
};

class AuthError : public Error {
public:
    explicit AuthError(const std::string& message) : Error("AuthError", message) {}
};

class ReplayMiss : public Error {
public:
    ReplayMiss(StageTag stage, const std::string& fp)
        : Error("ReplayMiss", "no recorded completion for stage " + std::string(to_string(stage)) + " (fingerprint " +
                                  fp.substr(0, 12) + ")"),
          stage_(stage) {}
    StageTag stage() const noexcept { return stage_; }

private:
    StageTag stage_;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
};

// Chat-completions over HTTP(S). Never echoes the key in errors.
class LiveBackend : public CompletionBackend {
public:
    LiveBackend(std::string endpoint, std::string api_key, std::chrono::seconds timeout = std::chrono::seconds(120));
    // From GENEM_LLM_ENDPOINT / GENEM_LLM_KEY; nullopt when either is unset.
    static std::optional<LiveBackend> from_env();

    std::string complete(const CompletionRequest& request) override;

private:
    std::string base_;  // scheme://host[:port]
    std::string path_;
    std::string key_;
    std::chrono::seconds timeout_;
};

// Scripted responses, one FIFO per stage. Used to author transcripts and in tests.
class QueueBackend : public CompletionBackend {
public:
    void push(StageTag stage, std::string response);
    std::string complete(const CompletionRequest& request) override;
    std::size_t pending() const;
    // Requests seen so far, in order.
    const std::vector<CompletionRequest>& requests() const { return requests_; }

private:
    mutable std::mutex mutex_;
    std::map<StageTag, std::deque<std::string>> queues_;
    std::vector<CompletionRequest> requests_;
};

struct TranscriptEntry {
    StageTag stage = StageTag::InstructionFollowing;
    std::string fingerprint;
    std::string response;

    bool operator==(const TranscriptEntry&) const = default;
};

inline constexpr int kTranscriptVersion = 1;

// {version, entries: [{stage, fingerprint, response}]}, fingerprints unique.
class Transcript {
public:
    const TranscriptEntry* find(std::string_view fingerprint) const;
    // Adds an entry; an existing fingerprint must carry the same response
    // (FormatError otherwise). Returns false when it was already present.
    bool add(TranscriptEntry entry);
    const std::vector<TranscriptEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    nlohmann::json to_json() const;
    static Transcript from_json(const nlohmann::json& j);
    static Transcript load(const std::filesystem::path& file);
    // Merges every *.json file under `dir` (recursively, sorted by path).
    static Transcript load_dir(const std::filesystem::path& dir);
    void save(const std::filesystem::path& file) const;

private:
    std::vector<TranscriptEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

enum class Mode { Replay, Record, Passthrough };

std::string_view to_string(Mode mode);

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{250};
    double multiplier = 2.0;
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to std::this_thread::sleep_for
};

// Single entry point for completions. Safe for concurrent use; Record mode
// serializes appends and rewrites its transcript file after each new entry.
class Gateway {
public:
    static std::shared_ptr<Gateway> replay(Transcript transcript);
    static std::shared_ptr<Gateway> record(std::shared_ptr<CompletionBackend> backend, std::filesystem::path file,
                                           RetryPolicy retry = {});
    static std::shared_ptr<Gateway> passthrough(std::shared_ptr<CompletionBackend> backend, RetryPolicy retry = {});

    std::string complete(const CompletionRequest& request);

    Mode mode() const { return mode_; }
    Transcript transcript() const;
    std::size_t calls() const;

private:
    Gateway(Mode mode, std::shared_ptr<CompletionBackend> backend, Transcript transcript,
            std::optional<std::filesystem::path> file, RetryPolicy retry);
    std::string call_backend(const CompletionRequest& request);

    Mode mode_;
    std::shared_ptr<CompletionBackend> backend_;
    mutable std::mutex mutex_;
    Transcript transcript_;
    std::optional<std::filesystem::path> file_;
    RetryPolicy retry_;
    std::size_t calls_ = 0;
};

}  // namespace genem::llm
