#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/harness/catalog.hpp"
#include "genem/llm/gateway.hpp"
#include "genem/pipeline/pipeline.hpp"

namespace genem::harness {

// Everything a suite needs besides its catalog. Suites run their cells one
// after another; the gateway sees requests in a fixed order.
struct SuiteContext {
    std::filesystem::path data_dir;
    std::shared_ptr<llm::Gateway> gateway;
    std::shared_ptr<const pipeline::TemplateSet> templates;
    std::string backend_label = "replay";
    pipeline::PipelineOptions options;

    static SuiteContext with_gateway(std::shared_ptr<llm::Gateway> gateway, std::filesystem::path data_dir,
                                     std::string backend_label);
};

// Outcome of one sample. Every failure carries exactly one taxonomy code:
// the first validation error, "ParseError", a stage error or a runtime fault.
struct SlotResult {
    int sample = 0;
    bool success = false;
    std::string code;
    std::string message;
    std::optional<BehaviorProgram> program;  // parsed even when rejected, if possible
    std::vector<std::string> warnings;       // validator warning codes
    std::map<std::string, std::optional<bool>> checks;
    std::map<std::string, int> calls;  // static call sites by target
    std::size_t frames = 0;
    std::size_t events = 0;
};

struct BehaviorRow {
    std::string behavior;
    int n = 0;
    int success = 0;
    int norm_violations = 0;  // successful samples failing a structural check
    int docstring_warnings = 0;
    int positional_warnings = 0;
    bool closure = true;  // successful programs call only names the embodiment (or library) provides
    std::map<std::string, int> failures;
    std::vector<SlotResult> slots;
};

struct ExperimentReport {
    std::string suite;
    std::string backend;
    std::string embodiment;
    int n = 0;
    std::vector<BehaviorRow> rows;

    const BehaviorRow* row(std::string_view behavior) const;
};

// Samples each behavior n times, simulates every valid program in its
// scenario and runs the behavior's structural checks.
ExperimentReport run_behavior_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const std::string& embodiment,
                                    int n, const SkillLibrary& library = {});

struct AblationReport {
    ExperimentReport modular;
    ExperimentReport ablated;
};

// Modular pipeline and single-call ablation on identical instructions.
AblationReport run_ablation_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const std::string& embodiment, int n);

struct UsageRow {
    std::string target;
    std::map<std::string, std::optional<int>> cells;  // nullopt: skill withheld from the prompt
    std::vector<SlotResult> slots;
};

struct UsageMatrix {
    std::string embodiment;
    std::string backend;
    int n = 0;
    std::vector<std::string> columns;
    std::vector<UsageRow> rows;
};

// Cell = number of samples whose program calls the skill at least once.
UsageMatrix run_composability_suite(SuiteContext& ctx, const ComposeCatalog& catalog, const SkillLibrary& seed_skills, int n);

struct FeedbackSlot {
    int sample = 0;
    bool success = false;
    std::string code;
    std::string message;
    std::string route;
    std::vector<std::string> diff;  // described edit ops
    bool diff_applies = false;
};

struct FeedbackCell {
    std::string behavior;
    FeedbackType type = FeedbackType::Insert;
    int n = 0;
    int success = 0;
    std::map<std::string, int> failures;
    std::vector<FeedbackSlot> slots;
};

struct FeedbackReport {
    std::string backend;
    std::string embodiment;
    int n = 0;
    std::vector<FeedbackCell> cells;

    const FeedbackCell* cell(std::string_view behavior, FeedbackType type) const;
};

// Generation, one feedback round, then structural verification via ast_diff.
FeedbackReport run_feedback_suite(SuiteContext& ctx, const BehaviorCatalog& catalog, const FeedbackBank& bank,
                                  const std::string& embodiment, int n);

// Generation plus every scripted feedback round on one session (sample 0).
// Stops at the first error, which is rethrown after `log` has seen it.
Session run_scripted_session(SuiteContext& ctx, const BehaviorCatalog& catalog, const ScriptedSession& script,
                             pipeline::SessionLog* log = nullptr);

// Reports as JSON; a top-level "hash" is the SHA-256 of the document without it.
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const AblationReport& report);
nlohmann::json to_json(const UsageMatrix& matrix);
nlohmann::json to_json(const FeedbackReport& report);
std::string report_hash(const nlohmann::json& report);

// Plain-text tables, one line per behavior or cell.
std::string render_text(const ExperimentReport& report);
std::string render_text(const AblationReport& report);
std::string render_text(const UsageMatrix& matrix);
std::string render_text(const FeedbackReport& report);

// Runs every suite in Record mode against `backend`, one transcript file per
// suite under `out_dir`. Files are saved after every new entry, so an
// interrupted run leaves valid partial transcripts; existing entries are kept.
std::vector<std::filesystem::path> record_transcripts(const std::filesystem::path& data_dir,
                                                      std::shared_ptr<llm::CompletionBackend> backend,
                                                      const std::filesystem::path& out_dir, int n,
                                                      llm::RetryPolicy retry = {});

// Shipped catalog files under a data directory.
std::filesystem::path behaviors_file(const std::filesystem::path& data_dir);
std::filesystem::path compose_file(const std::filesystem::path& data_dir);
std::filesystem::path feedback_bank_file(const std::filesystem::path& data_dir);
std::filesystem::path scripted_session_file(const std::filesystem::path& data_dir);
std::filesystem::path seed_skills_file(const std::filesystem::path& data_dir);

}  // namespace genem::harness
