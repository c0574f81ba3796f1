#include "genem/harness/catalog.hpp"

#include <algorithm>

#include "genem/harness/checks.hpp"
#include "genem/util/files.hpp"

namespace genem::harness {

using nlohmann::json;

namespace {

std::vector<std::string> strings(const json& j, const char* key) {
    return j.contains(key) ? j.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
}

}  // namespace

BehaviorSpec behavior_from_json(const json& j) {
    BehaviorSpec b;
    b.id = j.at("id").get<std::string>();
    b.instruction = j.at("instruction").get<std::string>();
    b.scenario = j.at("scenario").get<std::string>();
    b.forbidden = strings(j, "forbidden");
    b.checks = strings(j, "checks");
    if (b.id.empty() || b.instruction.empty()) throw FormatError("behavior entries need an id and an instruction");
    for (const auto& c : b.checks)
        if (!is_known_check(c)) throw FormatError("behavior '" + b.id + "': unknown check '" + c + "'");
    return b;
}

const BehaviorSpec* BehaviorCatalog::find(std::string_view id) const {
    for (const auto& b : behaviors)
        if (b.id == id) return &b;
    return nullptr;
}

BehaviorCatalog BehaviorCatalog::from_json(const json& doc) {
    BehaviorCatalog c;
    try {
        for (const auto& b : doc.at("behaviors")) {
            auto spec = behavior_from_json(b);
            if (c.find(spec.id)) throw FormatError("duplicate behavior '" + spec.id + "'");
            c.behaviors.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("behavior catalog: ") + e.what());
    }
    for (auto id : kStudyBehaviors)
        if (!c.find(id)) throw FormatError("behavior catalog lacks '" + std::string(id) + "'");
    return c;
}

BehaviorCatalog BehaviorCatalog::load(const std::filesystem::path& file) { return from_json(util::read_json(file)); }

ComposeCatalog ComposeCatalog::load(const std::filesystem::path& file) {
    const auto doc = util::read_json(file);
    ComposeCatalog c;
    try {
        c.embodiment = doc.at("embodiment").get<std::string>();
        c.seed_skills = strings(doc, "seed_skills");
        for (const auto& t : doc.at("targets")) {
            ComposeTarget target{t.at("id").get<std::string>(), t.at("instruction").get<std::string>(),
                                 t.at("scenario").get<std::string>(), strings(t, "offered")};
            for (const auto& s : target.offered)
                if (std::find(c.seed_skills.begin(), c.seed_skills.end(), s) == c.seed_skills.end())
                    throw FormatError("compose target '" + target.id + "' offers unknown skill '" + s + "'");
            c.targets.push_back(std::move(target));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("compose catalog: ") + e.what());
    }
    return c;
}

std::string_view to_string(FeedbackType type) {
    switch (type) {
        case FeedbackType::Insert: return "Insert";
        case FeedbackType::Swap: return "Swap";
        case FeedbackType::Loop: return "Loop";
        case FeedbackType::Remove: return "Remove";
    }
    return "?";
}

std::optional<FeedbackType> feedback_type_from_string(std::string_view text) {
    for (auto t : {FeedbackType::Insert, FeedbackType::Swap, FeedbackType::Loop, FeedbackType::Remove})
        if (to_string(t) == text) return t;
    return std::nullopt;
}

std::optional<ebl::EditKind> expected_edit(FeedbackType type) {
    switch (type) {
        case FeedbackType::Insert: return ebl::EditKind::InsertedCall;
        case FeedbackType::Swap: return ebl::EditKind::SwappedOrder;
        case FeedbackType::Loop: return ebl::EditKind::WrappedInRepeat;
        case FeedbackType::Remove: return std::nullopt;
    }
    return std::nullopt;
}

FeedbackBank FeedbackBank::load(const std::filesystem::path& file) {
    const auto doc = util::read_json(file);
    FeedbackBank bank;
    try {
        if (doc.contains("extra_behaviors"))
            for (const auto& b : doc.at("extra_behaviors")) bank.extra_behaviors.push_back(behavior_from_json(b));
        for (const auto& c : doc.at("cases")) {
            FeedbackCase fc;
            fc.behavior = c.at("behavior").get<std::string>();
            const auto type = feedback_type_from_string(c.at("type").get<std::string>());
            if (!type) throw FormatError("unknown feedback type '" + c.at("type").get<std::string>() + "'");
            fc.type = *type;
            fc.utterance = c.at("utterance").get<std::string>();
            fc.subject = c.value("subject", "");
            fc.anchor = c.value("anchor", "");
            fc.removed = strings(c, "removed");
            if (fc.utterance.empty()) throw FormatError("feedback case without an utterance");
            if (fc.type == FeedbackType::Remove && fc.removed.empty())
                throw FormatError("Remove case for '" + fc.behavior + "' names nothing to remove");
            bank.cases.push_back(std::move(fc));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("feedback bank: ") + e.what());
    }
    return bank;
}

ScriptedSession ScriptedSession::load(const std::filesystem::path& file) {
    const auto doc = util::read_json(file);
    try {
        return {doc.at("behavior").get<std::string>(), doc.at("embodiment").get<std::string>(), strings(doc, "feedback")};
    } catch (const json::exception& e) {
        throw FormatError(std::string("scripted session: ") + e.what());
    }
}

}  // namespace genem::harness
