#include "genem/llm/gateway.hpp"

#include <algorithm>
#include <thread>

#include "genem/util/files.hpp"

namespace genem::llm {

using nlohmann::json;

std::string_view to_string(StageTag stage) {
    switch (stage) {
        case StageTag::InstructionFollowing: return "InstructionFollowing";
        case StageTag::RobotMotion: return "RobotMotion";
        case StageTag::CodeGen: return "CodeGen";
        case StageTag::Feedback: return "Feedback";
        case StageTag::EndToEndAblation: return "EndToEndAblation";
    }
    return "";
}

std::optional<StageTag> stage_from_string(std::string_view text) {
    for (auto s : {StageTag::InstructionFollowing, StageTag::RobotMotion, StageTag::CodeGen, StageTag::Feedback,
                   StageTag::EndToEndAblation})
        if (to_string(s) == text) return s;
    return std::nullopt;
}

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::Replay: return "replay";
        case Mode::Record: return "record";
        case Mode::Passthrough: return "passthrough";
    }
    return "";
}

void check_request(const CompletionRequest& request) {
    if (request.messages.empty()) throw PreconditionError("completion request has no messages");
    if (request.messages.front().role != "system") throw PreconditionError("first message must be the system message");
}

namespace {

std::string rtrim(std::string s) {
    s.erase(s.find_last_not_of(" \t\r\n") + 1);
    return s;
}

}  // namespace

std::string fingerprint(const CompletionRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({m.role, rtrim(m.content)});
    const json canonical{{"stage", to_string(request.stage)},
                         {"model", request.model_id},
                         {"temperature", request.temperature},
                         {"sample", request.sample_index},
                         {"messages", messages}};
    return util::sha256_hex(canonical.dump());
}

// ---- QueueBackend ---------------------------------------------------------

void QueueBackend::push(StageTag stage, std::string response) {
    std::lock_guard lock(mutex_);
    queues_[stage].push_back(std::move(response));
}

std::string QueueBackend::complete(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
    auto& q = queues_[request.stage];
    if (q.empty()) throw ReplayMiss(request.stage, fingerprint(request));
    auto out = std::move(q.front());
    q.pop_front();
    return out;
}

std::size_t QueueBackend::pending() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [_, q] : queues_) n += q.size();
    return n;
}

// ---- Transcript -----------------------------------------------------------

const TranscriptEntry* Transcript::find(std::string_view fp) const {
    const auto it = index_.find(fp);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

bool Transcript::add(TranscriptEntry entry) {
    if (const auto* existing = find(entry.fingerprint)) {
        if (existing->response != entry.response || existing->stage != entry.stage)
            throw FormatError("transcript: conflicting responses for fingerprint " + entry.fingerprint);
        return false;
    }
    index_.emplace(entry.fingerprint, entries_.size());
    entries_.push_back(std::move(entry));
    return true;
}

json Transcript::to_json() const {
    json entries = json::array();
    for (const auto& e : entries_)
        entries.push_back({{"stage", to_string(e.stage)}, {"fingerprint", e.fingerprint}, {"response", e.response}});
    return {{"version", kTranscriptVersion}, {"entries", entries}};
}

Transcript Transcript::from_json(const json& j) {
    try {
        if (j.value("version", 0) != kTranscriptVersion) throw FormatError("transcript: unsupported version");
        Transcript t;
        for (const auto& e : j.at("entries")) {
            const auto stage = stage_from_string(e.at("stage").get<std::string>());
            if (!stage) throw FormatError("transcript: unknown stage " + e.at("stage").dump());
            t.add({*stage, e.at("fingerprint").get<std::string>(), e.at("response").get<std::string>()});
        }
        return t;
    } catch (const json::exception& e) {
        throw FormatError(std::string("transcript: ") + e.what());
    }
}

Transcript Transcript::load(const std::filesystem::path& file) { return from_json(util::read_json(file)); }

Transcript Transcript::load_dir(const std::filesystem::path& dir) {
    if (std::filesystem::is_regular_file(dir)) return load(dir);
    if (!std::filesystem::is_directory(dir)) throw FormatError("transcript directory " + dir.string() + " not found");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    Transcript merged;
    for (const auto& f : files)
        for (auto& e : load(f).entries_) merged.add(std::move(e));
    return merged;
}

void Transcript::save(const std::filesystem::path& file) const {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    util::write_file_atomic(file, to_json().dump(1) + "\n");
}

// ---- Gateway --------------------------------------------------------------

Gateway::Gateway(Mode mode, std::shared_ptr<CompletionBackend> backend, Transcript transcript,
                 std::optional<std::filesystem::path> file, RetryPolicy retry)
    : mode_(mode), backend_(std::move(backend)), transcript_(std::move(transcript)), file_(std::move(file)),
      retry_(std::move(retry)) {
    if (!retry_.sleep) retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::shared_ptr<Gateway> Gateway::replay(Transcript transcript) {
    return std::shared_ptr<Gateway>(new Gateway(Mode::Replay, nullptr, std::move(transcript), std::nullopt, {}));
}

std::shared_ptr<Gateway> Gateway::record(std::shared_ptr<CompletionBackend> backend, std::filesystem::path file,
                                         RetryPolicy retry) {
    Transcript existing;
    if (std::filesystem::exists(file)) existing = Transcript::load(file);
    return std::shared_ptr<Gateway>(
        new Gateway(Mode::Record, std::move(backend), std::move(existing), std::move(file), std::move(retry)));
}

std::shared_ptr<Gateway> Gateway::passthrough(std::shared_ptr<CompletionBackend> backend, RetryPolicy retry) {
    return std::shared_ptr<Gateway>(new Gateway(Mode::Passthrough, std::move(backend), {}, std::nullopt, std::move(retry)));
}

Transcript Gateway::transcript() const {
    std::lock_guard lock(mutex_);
    return transcript_;
}

std::size_t Gateway::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::string Gateway::call_backend(const CompletionRequest& request) {
    auto backoff = retry_.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            return backend_->complete(request);
        } catch (const TransportError& e) {
            if (!e.retriable() || attempt >= retry_.attempts) throw;
            retry_.sleep(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(backoff.count()) * retry_.multiplier));
        }
    }
}

std::string Gateway::complete(const CompletionRequest& request) {
    check_request(request);
    const auto fp = fingerprint(request);
    {
        std::lock_guard lock(mutex_);
        ++calls_;
        if (mode_ != Mode::Passthrough)
            if (const auto* hit = transcript_.find(fp)) return hit->response;
        if (mode_ == Mode::Replay) throw ReplayMiss(request.stage, fp);
    }
    auto response = call_backend(request);
    if (mode_ == Mode::Record) {
        std::lock_guard lock(mutex_);
        if (transcript_.add({request.stage, fp, response})) transcript_.save(*file_);
    }
    return response;
}

}  // namespace genem::llm
