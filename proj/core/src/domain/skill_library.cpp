#include "genem/domain/skill_library.hpp"

#include <fstream>

#include "genem/domain/json.hpp"
#include "genem/ebl/parser.hpp"
#include "genem/util/files.hpp"

namespace genem {

void SkillLibrary::add(SkillEntry entry) {
    if (find(entry.name)) throw DuplicateSkillName(entry.name);
    auto parsed = std::make_shared<const ebl::Program>(ebl::parse(entry.body));
    if (!parsed->entry() || parsed->entry()->name != entry.name)
        throw FormatError("skill body must end with the definition of '" + entry.name + "'");
    programs_.emplace(entry.name, std::move(parsed));
    entries_.push_back(std::move(entry));
}

const SkillEntry* SkillLibrary::find(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

const ebl::Program* SkillLibrary::program(std::string_view name) const {
    const auto it = programs_.find(name);
    return it == programs_.end() ? nullptr : it->second.get();
}

SkillLibrary SkillLibrary::subset(const std::vector<std::string>& names) const {
    SkillLibrary out;
    for (const auto& e : entries_)
        for (const auto& n : names)
            if (n == e.name) out.add(e);
    return out;
}

nlohmann::json SkillLibrary::to_json() const {
    return nlohmann::json{{"version", kSkillLibraryVersion}, {"skills", entries_}};
}

SkillLibrary SkillLibrary::from_json(const nlohmann::json& doc) {
    if (doc.value("version", 0) != kSkillLibraryVersion)
        throw FormatError("unsupported skill library version");
    SkillLibrary lib;
    for (const auto& s : doc.value("skills", nlohmann::json::array())) lib.add(s.get<SkillEntry>());
    return lib;
}

SkillLibrary SkillLibrary::load(const std::filesystem::path& path) {
    return from_json(util::read_json(path));
}

void SkillLibrary::save(const std::filesystem::path& path) const {
    util::write_file_atomic(path, to_json().dump(2) + "\n");
}

}  // namespace genem
