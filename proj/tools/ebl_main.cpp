// ebl check <file> --manifest <id|file>   -> ValidationReport JSON
// ebl run <file> --manifest <id|file> --scenario <id|file>   -> Trajectory JSON
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "genem/data_paths.hpp"
#include "genem/domain/json.hpp"
#include "genem/domain/skill_library.hpp"
#include "genem/ebl/parser.hpp"
#include "genem/ebl/validator.hpp"
#include "genem/robots/manifest.hpp"
#include "genem/robots/scenario.hpp"
#include "genem/robots/simulator.hpp"
#include "genem/util/files.hpp"

namespace fs = std::filesystem;
using namespace genem;
using nlohmann::json;

namespace {

// A path to an existing file, otherwise an id under the data directory.
robots::EmbodimentManifest manifest_arg(const std::string& arg, const fs::path& data_dir) {
    if (fs::is_regular_file(arg)) return robots::manifest_from_json_text(util::read_file(arg));
    return robots::load_manifest(arg, data_dir);
}

robots::WorldScenario scenario_arg(const std::string& arg, const fs::path& data_dir) {
    if (fs::is_regular_file(arg)) return robots::scenario_from_json_text(util::read_file(arg));
    return robots::load_scenario(arg, data_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ebl: check and run behavior programs"};
    app.require_subcommand(1);
    fs::path data_dir = default_data_dir();
    std::string file, manifest = "mobile_v1", scenario = "empty", library, forbidden_csv;
    app.add_option("--data", data_dir, "data directory");

    auto* check = app.add_subcommand("check", "validate a program");
    auto* run = app.add_subcommand("run", "simulate a program");
    std::vector<std::string> forbidden;
    for (auto* sub : {check, run}) {
        sub->add_option("file", file, "EBL source")->required()->check(CLI::ExistingFile);
        sub->add_option("--manifest", manifest, "embodiment id or manifest file");
        sub->add_option("--library", library, "skill library JSON")->check(CLI::ExistingFile);
    }
    check->add_option("--forbid", forbidden, "forbidden modality (repeatable)");
    run->add_option("--scenario", scenario, "scenario id or file");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto m = manifest_arg(manifest, data_dir);
        const auto lib = library.empty() ? SkillLibrary{} : SkillLibrary::load(library);
        const auto source = util::read_file(file);
        if (*check) {
            json out;
            try {
                const auto report = ebl::validate(ebl::parse(source), m, lib, forbidden);
                out = ebl::to_json(report);
                std::cout << out.dump(2) << "\n";
                return report.valid() ? 0 : 1;
            } catch (const ebl::ParseError& e) {
                std::cout << json{{"valid", false}, {"parse_error", e.what()}}.dump(2) << "\n";
                return 1;
            }
        }
        const auto program = BehaviorProgram::from_source(source);
        const auto report = ebl::validate(program.ast, m, lib);
        if (!report.valid()) {
            std::cerr << report.summary();
            return 1;
        }
        const json t = robots::simulate(program, m, scenario_arg(scenario, data_dir), lib);
        std::cout << t.dump() << "\n";
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}
