#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "genem/data_paths.hpp"
#include "genem/domain/json.hpp"
#include "genem/domain/skill_library.hpp"
#include "genem/harness/suites.hpp"
#include "genem/llm/gateway.hpp"
#include "genem/metrics/distance.hpp"
#include "genem/robots/manifest.hpp"
#include "genem/service/server.hpp"
#include "genem/util/files.hpp"

namespace fs = std::filesystem;
using namespace genem;
using nlohmann::json;

namespace {

// "replay" / "replay:<dir>" / "live".
harness::SuiteContext make_context(const std::string& backend, const fs::path& data_dir) {
    if (backend == "live") {
        auto live = llm::LiveBackend::from_env();
        if (!live) throw PreconditionError("live backend needs GENEM_LLM_ENDPOINT and GENEM_LLM_KEY");
        return harness::SuiteContext::with_gateway(
            llm::Gateway::passthrough(std::make_shared<llm::LiveBackend>(std::move(*live))), data_dir, "live");
    }
    if (backend.rfind("replay", 0) == 0) {
        fs::path dir = data_dir / "transcripts";
        if (backend.size() > 6) {
            if (backend[6] != ':') throw PreconditionError("backend must be replay, replay:<dir> or live");
            dir = backend.substr(7);
        }
        return harness::SuiteContext::with_gateway(llm::Gateway::replay(llm::Transcript::load_dir(dir)), data_dir, "replay");
    }
    throw PreconditionError("backend must be replay, replay:<dir> or live");
}

Trajectory load_trajectory(const fs::path& file) {
    auto t = util::read_json(file).get<Trajectory>();
    check_trajectory(t);
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genem: expressive behavior generation"};
    app.require_subcommand(1);
    fs::path data_dir = default_data_dir();
    app.add_option("--data", data_dir, "data directory")->check(CLI::ExistingDirectory);

    auto* suite = app.add_subcommand("suite", "run an experiment suite");
    std::string which, backend = "replay", embodiment, out;
    int n = 5;
    suite->add_option("name", which, "behaviors | ablation | compose | feedback")
        ->required()
        ->check(CLI::IsMember({"behaviors", "ablation", "compose", "feedback"}));
    suite->add_option("--backend", backend, "replay, replay:<dir> or live");
    suite->add_option("--n", n, "samples per prompt")->check(CLI::Range(1, 20));
    suite->add_option("--embodiment", embodiment, "embodiment id (default per suite)");
    suite->add_option("--out", out, "write the JSON report here");

    auto* dist = app.add_subcommand("dist", "expressive distance between two trajectories");
    fs::path a, b, metric;
    dist->add_option("a", a)->required()->check(CLI::ExistingFile);
    dist->add_option("b", b)->required()->check(CLI::ExistingFile);
    dist->add_option("--config", metric, "metric config JSON")->check(CLI::ExistingFile);

    auto* record = app.add_subcommand("record", "record transcripts for every suite from the live backend");
    fs::path record_out;
    int record_n = 5;
    record->add_option("--out", record_out, "output directory")->required();
    record->add_option("--n", record_n, "samples per prompt")->check(CLI::Range(1, 20));

    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    fs::path config_file;
    serve->add_option("--config", config_file, "service config JSON")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*suite) {
            auto ctx = make_context(backend, data_dir);
            const auto catalog = harness::BehaviorCatalog::load(harness::behaviors_file(data_dir));
            json report;
            std::string text;
            if (which == "behaviors") {
                const auto r = harness::run_behavior_suite(ctx, catalog, embodiment.empty() ? "mobile_v1" : embodiment, n);
                report = harness::to_json(r);
                text = harness::render_text(r);
            } else if (which == "ablation") {
                const auto r = harness::run_ablation_suite(ctx, catalog, embodiment.empty() ? "mobile_v1" : embodiment, n);
                report = harness::to_json(r);
                text = harness::render_text(r);
            } else if (which == "compose") {
                auto compose = harness::ComposeCatalog::load(harness::compose_file(data_dir));
                if (!embodiment.empty()) compose.embodiment = embodiment;
                const auto r = harness::run_composability_suite(ctx, compose,
                                                                SkillLibrary::load(harness::seed_skills_file(data_dir)), n);
                report = harness::to_json(r);
                text = harness::render_text(r);
            } else {
                const auto r = harness::run_feedback_suite(ctx, catalog,
                                                           harness::FeedbackBank::load(harness::feedback_bank_file(data_dir)),
                                                           embodiment.empty() ? "mobile_v1" : embodiment, n);
                report = harness::to_json(r);
                text = harness::render_text(r);
            }
            std::cout << text;
            if (!out.empty()) util::write_file_atomic(out, report.dump(2) + "\n");
            std::cout << "hash " << report.at("hash").get<std::string>() << "\n";
        } else if (*dist) {
            const auto ta = load_trajectory(a);
            const auto tb = load_trajectory(b);
            auto cfg = metrics::default_metric_config(robots::load_manifest(ta.embodiment, data_dir));
            if (!metric.empty()) cfg = metrics::metric_config_from_json(util::read_json(metric), cfg);
            std::cout << metrics::to_json(metrics::expressive_distance(ta, tb, cfg)).dump() << "\n";
        } else if (*record) {
            auto live = llm::LiveBackend::from_env();
            if (!live) throw PreconditionError("record needs GENEM_LLM_ENDPOINT and GENEM_LLM_KEY");
            for (const auto& f : harness::record_transcripts(data_dir, std::make_shared<llm::LiveBackend>(std::move(*live)),
                                                             record_out, record_n))
                std::cout << f.string() << "\n";
        } else if (*serve) {
            auto cfg = service::load_config(config_file);
            return service::run(cfg);
        }
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
