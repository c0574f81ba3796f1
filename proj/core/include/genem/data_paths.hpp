#pragma once

#include <filesystem>

namespace genem {

// Root of the shipped data (manifests, scenarios, templates, transcripts).
// GENEM_DATA_DIR overrides the location baked in at build time.
std::filesystem::path default_data_dir();

}  // namespace genem
