#include "genem/service/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include "genem/domain/json.hpp"
#include "genem/util/files.hpp"

namespace genem::service {

namespace fs = std::filesystem;
using nlohmann::json;

void EventLog::append(const json& event) {
    const std::string line = event.dump() + "\n";
    const int fd = ::open(file_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw Error("StoreError", "cannot open session log " + file_.string());
    std::size_t done = 0;
    while (done < line.size()) {
        const auto n = ::write(fd, line.data() + done, line.size() - done);
        if (n < 0) {
            ::close(fd);
            throw Error("StoreError", "write to session log failed: " + file_.string());
        }
        done += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
}

std::vector<json> EventLog::recover(const fs::path& file) {
    const std::string text = util::read_file(file);
    std::vector<json> out;
    std::size_t pos = 0;
    std::size_t good_end = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) break;  // torn tail
        const auto line = std::string_view(text).substr(pos, nl - pos);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            if (nl + 1 < text.size()) throw FormatError("corrupt line in " + file.string());
            break;  // torn tail that happens to end in a newline
        }
        out.push_back(std::move(j));
        pos = nl + 1;
        good_end = pos;
    }
    if (good_end < text.size()) fs::resize_file(file, good_end);
    return out;
}

json SessionHeader::to_json() const {
    json skills = json::array();
    for (const auto& s : library) skills.push_back(s);
    return json{{"type", "session"},       {"id", id},
                {"instruction", instruction}, {"scenario_id", scenario_id},
                {"max_rounds", max_rounds}, {"created_ms", created_ms},
                {"library", std::move(skills)}};
}

SessionHeader SessionHeader::from_json(const json& j) {
    if (j.value("type", "") != "session") throw FormatError("session log does not start with a session header");
    SessionHeader h;
    h.id = j.at("id").get<std::string>();
    h.instruction = j.at("instruction").get<Instruction>();
    h.scenario_id = j.at("scenario_id").get<std::string>();
    h.max_rounds = j.value("max_rounds", kDefaultMaxRounds);
    h.created_ms = j.value("created_ms", 0LL);
    for (const auto& s : j.value("library", json::array())) h.library.push_back(s.get<SkillEntry>());
    return h;
}

SessionRecord rebuild(const std::vector<json>& events) {
    if (events.empty()) throw FormatError("empty session log");
    SessionRecord rec;
    rec.header = SessionHeader::from_json(events.front());
    json rounds = json::array();
    std::map<std::size_t, json> trajectories;
    for (const auto& e : events) {
        const auto type = e.value("type", "");
        if (type == pipeline::kRoundEvent) rounds.push_back(e.at("artifacts"));
        else if (type == "trajectory") trajectories[e.at("round").get<std::size_t>()] = e.at("trajectory");
    }
    const auto n = rounds.size();
    rec.session = session_from_json(json{{"id", rec.header.id},
                                         {"instruction", rec.header.instruction},
                                         {"scenario_id", rec.header.scenario_id},
                                         {"round_index", n == 0 ? 0 : static_cast<int>(n) - 1},
                                         {"max_rounds", rec.header.max_rounds},
                                         {"rounds", std::move(rounds)}});
    rec.trajectories.resize(n);
    for (auto& [k, t] : trajectories)
        if (k < n) rec.trajectories[k] = std::make_shared<const Trajectory>(t.get<Trajectory>());
    rec.events = events.size();
    return rec;
}

std::string new_session_id() {
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex);
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << rng();
    return out.str();
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "sessions");
    for (const auto& entry : fs::directory_iterator(root_ / "sessions")) {
        if (entry.path().extension() != ".jsonl") continue;
        try {
            const auto events = EventLog::recover(entry.path());
            if (events.empty()) {
                // crashed before the header was written: the session never existed
                fs::remove(entry.path());
                continue;
            }
            const auto header = SessionHeader::from_json(events.front());
            index_[header.id] = {header.created_ms, entry.path()};
        } catch (const std::exception&) {
            fs::rename(entry.path(), fs::path(entry.path()).concat(".corrupt"));
        }
    }
}

std::string SessionStore::create(SessionHeader header) {
    if (header.id.empty()) header.id = new_session_id();
    if (header.created_ms == 0)
        header.created_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
    const auto path = root_ / "sessions" / (header.id + ".jsonl");
    {
        std::lock_guard lock(mutex_);
        if (index_.count(header.id)) throw PreconditionError("session id '" + header.id + "' already exists");
    }
    // Header goes to a temp file first so a crash never leaves a headless log.
    const auto tmp = fs::path(path).concat(".tmp");
    EventLog(tmp).append(header.to_json());
    fs::rename(tmp, path);
    std::lock_guard lock(mutex_);
    index_[header.id] = {header.created_ms, path};
    return header.id;
}

bool SessionStore::contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return index_.count(id) > 0;
}

std::vector<std::string> SessionStore::list() const {
    std::vector<std::pair<long long, std::string>> items;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [id, v] : index_) items.emplace_back(v.first, id);
    }
    std::sort(items.begin(), items.end());
    std::vector<std::string> out;
    for (auto& [_, id] : items) out.push_back(std::move(id));
    return out;
}

fs::path SessionStore::log_path(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = index_.find(id);
    if (it == index_.end()) throw NotFound("unknown session '" + id + "'");
    return it->second.second;
}

std::vector<json> SessionStore::events(const std::string& id) const { return EventLog::recover(log_path(id)); }

std::shared_ptr<std::mutex> SessionStore::lock(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto& m = locks_[id];
    if (!m) m = std::make_shared<std::mutex>();
    return m;
}

SkillLibrary SessionStore::library() const {
    const auto file = root_ / "skills.json";
    if (!fs::exists(file)) return {};
    return SkillLibrary::load(file);
}

SkillEntry SessionStore::add_skill(SkillEntry entry) {
    std::lock_guard lock(library_mutex_);
    auto lib = library();
    lib.add(entry);
    lib.save(root_ / "skills.json");
    return entry;
}

}  // namespace genem::service
