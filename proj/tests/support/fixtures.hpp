#pragma once

#include <filesystem>
#include <string>

#include "genem/domain/skill_library.hpp"
#include "genem/ebl/parser.hpp"
#include "genem/robots/manifest.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return GENEM_TEST_DATA_DIR; }

inline const genem::robots::EmbodimentManifest& mobile() {
    static const auto m = genem::robots::load_manifest("mobile_v1", data_dir());
    return m;
}

inline const genem::robots::EmbodimentManifest& quadruped() {
    static const auto m = genem::robots::load_manifest("quadruped_v1", data_dir());
    return m;
}

inline const genem::SkillLibrary& no_skills() {
    static const genem::SkillLibrary lib;
    return lib;
}

}  // namespace fixtures
