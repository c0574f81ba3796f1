#include "genem/data_paths.hpp"

#include <cstdlib>

#ifndef GENEM_DEFAULT_DATA_DIR
#define GENEM_DEFAULT_DATA_DIR "data"
#endif

namespace genem {

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("GENEM_DATA_DIR"); env && *env) return env;
    return GENEM_DEFAULT_DATA_DIR;
}

}  // namespace genem
