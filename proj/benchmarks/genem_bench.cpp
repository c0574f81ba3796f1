#include <random>

#include <benchmark/benchmark.h>

#include "genem/ebl/parser.hpp"
#include "genem/ebl/validator.hpp"
#include "genem/harness/suites.hpp"
#include "genem/metrics/distance.hpp"
#include "genem/robots/scenario.hpp"
#include "genem/robots/simulator.hpp"
#include "genem/util/files.hpp"

using namespace genem;

namespace {

const std::filesystem::path kData = GENEM_BENCH_DATA_DIR;

const robots::EmbodimentManifest& quadruped() {
    static const auto m = robots::load_manifest("quadruped_v1", kData);
    return m;
}

const std::string& reference_source() {
    static const auto s = util::read_file(kData / "reference" / "quadruped_unrecoverable.ebl");
    return s;
}

Trajectory random_walk(std::mt19937& rng, const robots::EmbodimentManifest& m, std::size_t frames) {
    Trajectory t;
    t.embodiment = m.id;
    t.channels = m.channel_names();
    std::normal_distribution<double> step(0.0, 0.05);
    std::vector<double> v(t.channels.size(), 0.0);
    for (std::size_t i = 0; i < frames; ++i) {
        for (auto& x : v) x += step(rng);
        t.frames.push_back({static_cast<double>(i) * t.step_s, v});
    }
    return t;
}

void BM_Dtw(benchmark::State& state) {
    std::mt19937 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_walk(rng, quadruped(), n), b = random_walk(rng, quadruped(), n);
    const auto cfg = metrics::default_metric_config(quadruped());
    for (auto _ : state) benchmark::DoNotOptimize(metrics::dtw_distance(a, b, cfg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dtw)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNSquared);

void BM_ParseValidate(benchmark::State& state) {
    const SkillLibrary lib;
    for (auto _ : state) benchmark::DoNotOptimize(ebl::validate(ebl::parse(reference_source()), quadruped(), lib));
}
BENCHMARK(BM_ParseValidate);

void BM_Simulate(benchmark::State& state) {
    const auto program = BehaviorProgram::from_source(reference_source());
    const auto scenario = robots::load_scenario("person_walks_by", kData);
    const SkillLibrary lib;
    for (auto _ : state) benchmark::DoNotOptimize(robots::simulate(program, quadruped(), scenario, lib));
}
BENCHMARK(BM_Simulate);

void BM_BehaviorSuiteReplay(benchmark::State& state) {
    const auto transcript = llm::Transcript::load_dir(kData / "transcripts");
    const auto catalog = harness::BehaviorCatalog::load(harness::behaviors_file(kData));
    for (auto _ : state) {
        auto ctx = harness::SuiteContext::with_gateway(llm::Gateway::replay(transcript), kData, "replay");
        benchmark::DoNotOptimize(harness::run_behavior_suite(ctx, catalog, "mobile_v1", 5));
    }
}
BENCHMARK(BM_BehaviorSuiteReplay)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
