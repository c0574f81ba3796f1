// Regenerates the replay transcripts and the seed skill library from the
// scripted content in author_content.cpp. With --check it writes into a
// temporary directory and compares against the checked-in files.
#include <algorithm>
#include <filesystem>
#include <iostream>

#include <unistd.h>

#include <CLI11.hpp>

#include "author_content.hpp"
#include "genem/domain/skill_library.hpp"
#include "genem/harness/suites.hpp"
#include "genem/llm/gateway.hpp"
#include "genem/util/files.hpp"

namespace fs = std::filesystem;
using namespace genem;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<std::string> section(const std::string& text, const std::string& title) {
    const std::string head = "### " + title + "\n";
    auto at = text.find(head);
    if (at == std::string::npos) return std::nullopt;
    at += head.size();
    const auto end = text.find("\n### ", at);
    return trim(text.substr(at, end == std::string::npos ? std::string::npos : end - at));
}

class ScriptedBackend : public llm::CompletionBackend {
public:
    explicit ScriptedBackend(author::Content content) : content_(std::move(content)) {}

    std::string complete(const llm::CompletionRequest& r) override {
        const auto& system = r.messages.at(0).content;
        const auto& user = r.messages.at(1).content;
        const auto instruction = section(user, "Instruction").value_or("");
        const std::string embodiment = system.find("body_height") != std::string::npos ? "quadruped_v1" : "mobile_v1";
        const int k = r.sample_index;
        const auto miss = [&] { return llm::ReplayMiss(r.stage, llm::fingerprint(r)); };

        switch (r.stage) {
            case llm::StageTag::InstructionFollowing: {
                const auto it = content_.human.find(instruction);
                if (it == content_.human.end()) throw miss();
                return it->second(k);
            }
            case llm::StageTag::EndToEndAblation: {
                const auto it = content_.ablation.find(instruction);
                if (it == content_.ablation.end()) throw miss();
                return nth(it->second(k), repairs(r), r);
            }
            case llm::StageTag::Feedback: {
                const auto it = content_.feedback.find({instruction, section(user, "Feedback").value_or("")});
                if (it == content_.feedback.end()) throw miss();
                return it->second.reply(k);
            }
            case llm::StageTag::RobotMotion:
            case llm::StageTag::CodeGen: {
                const bool code = r.stage == llm::StageTag::CodeGen;
                if (const auto fb = section(user, "Feedback")) {
                    for (const auto& [key, script] : content_.feedback) {
                        if (key.first != instruction || script.summary != *fb) continue;
                        if (!code) {
                            if (!script.plan) throw miss();
                            return script.plan(k);
                        }
                        return nth(script.code(k), repairs(r), r);
                    }
                    throw miss();
                }
                const auto it = content_.scripts.find({embodiment, instruction});
                if (it == content_.scripts.end()) throw miss();
                return code ? nth(it->second.code(k), repairs(r), r) : it->second.plan(k);
            }
        }
        throw miss();
    }

private:
    static std::size_t repairs(const llm::CompletionRequest& r) {
        return static_cast<std::size_t>(std::count_if(r.messages.begin() + 1, r.messages.end(), [](const llm::Message& m) {
            return m.role == "user" && m.content.rfind("### Validation errors", 0) == 0;
        }));
    }

    static std::string nth(const std::vector<std::string>& attempts, std::size_t i, const llm::CompletionRequest& r) {
        // No scripted repair: the pipeline keeps the first rejection.
        if (i >= attempts.size()) throw llm::ReplayMiss(r.stage, llm::fingerprint(r));
        return attempts[i];
    }

    author::Content content_;
};

void write_seed_library(const fs::path& data_dir, const fs::path& out) {
    const auto compose = util::read_json(harness::compose_file(data_dir));
    SkillLibrary lib;
    for (const auto& name : compose.at("seed_skills"))
        lib.add(SkillEntry::from_source(util::read_file(data_dir / "skills" / "seed" / (name.get<std::string>() + ".ebl")),
                                        SkillProvenance::Learned));
    lib.save(out);
}

// Reports files that differ between the two directories (by name and bytes).
int compare(const fs::path& expected_dir, const fs::path& actual_dir) {
    int bad = 0;
    for (const auto& entry : fs::directory_iterator(actual_dir)) {
        const auto name = entry.path().filename();
        const auto other = expected_dir / name;
        if (!fs::exists(other)) {
            std::cerr << "missing: " << other << "\n";
            ++bad;
        } else if (util::read_file(other) != util::read_file(entry.path())) {
            std::cerr << "stale: " << other << "\n";
            ++bad;
        }
    }
    return bad;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Author replay transcripts from scripted stage outputs"};
    fs::path data_dir = GENEM_SOURCE_DATA_DIR;
    fs::path out_dir;
    bool check = false;
    int n = 5;
    app.add_option("--data", data_dir, "data directory")->check(CLI::ExistingDirectory);
    app.add_option("--out", out_dir, "transcript output directory (default <data>/transcripts)");
    app.add_option("--n", n, "samples per prompt");
    app.add_flag("--check", check, "regenerate into a temp dir and compare with the checked-in files");
    CLI11_PARSE(app, argc, argv);

    try {
        auto backend = std::make_shared<ScriptedBackend>(author::build_content());
        if (check) {
            const auto tmp = fs::temp_directory_path() / ("genem_author_" + std::to_string(::getpid()));
            fs::remove_all(tmp);
            fs::create_directories(tmp / "transcripts");
            write_seed_library(data_dir, tmp / "seed_skills.json");
            harness::record_transcripts(data_dir, backend, tmp / "transcripts", n);
            int bad = compare(data_dir / "transcripts", tmp / "transcripts");
            if (util::read_file(tmp / "seed_skills.json") != util::read_file(harness::seed_skills_file(data_dir))) {
                std::cerr << "stale: " << harness::seed_skills_file(data_dir) << "\n";
                ++bad;
            }
            fs::remove_all(tmp);
            std::cout << (bad ? "transcripts out of date\n" : "transcripts up to date\n");
            return bad ? 1 : 0;
        }
        if (out_dir.empty()) out_dir = data_dir / "transcripts";
        write_seed_library(data_dir, harness::seed_skills_file(data_dir));
        // Record mode reuses existing entries, so start from scratch.
        fs::remove_all(out_dir);
        for (const auto& f : harness::record_transcripts(data_dir, backend, out_dir, n)) std::cout << f.string() << "\n";
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
