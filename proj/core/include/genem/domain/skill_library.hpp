#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/domain/types.hpp"

namespace genem {

class DuplicateSkillName : public Error {
public:
    explicit DuplicateSkillName(const std::string& name)
        : Error("DuplicateSkillName", "skill '" + name + "' already exists in the library") {}
};

inline constexpr int kSkillLibraryVersion = 1;

// Ordered collection of learned skills with their parsed bodies.
// Persisted as {"version": 1, "skills": [...]}.
class SkillLibrary {
public:
    SkillLibrary() = default;

    // Throws DuplicateSkillName, or ebl::ParseError for an unparsable body.
    void add(SkillEntry entry);

    const SkillEntry* find(std::string_view name) const;
    // Parsed body of `name` (exported skill plus private helpers), or null.
    const ebl::Program* program(std::string_view name) const;

    const std::vector<SkillEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    // Copy holding only the named skills (missing names are ignored).
    SkillLibrary subset(const std::vector<std::string>& names) const;

    nlohmann::json to_json() const;
    static SkillLibrary from_json(const nlohmann::json& doc);
    static SkillLibrary load(const std::filesystem::path& path);
    // Writes atomically (temp file + rename).
    void save(const std::filesystem::path& path) const;

private:
    std::vector<SkillEntry> entries_;
    std::map<std::string, std::shared_ptr<const ebl::Program>, std::less<>> programs_;
};

}  // namespace genem
