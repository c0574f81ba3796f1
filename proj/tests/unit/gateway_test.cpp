#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "genem/llm/gateway.hpp"
#include "genem/util/files.hpp"

using namespace genem;
using namespace genem::llm;

namespace {

CompletionRequest request(StageTag stage, std::string user, int sample = 0) {
    CompletionRequest r;
    r.stage = stage;
    r.messages = {{"system", "You are a robot."}, {"user", std::move(user)}};
    r.sample_index = sample;
    return r;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("genem_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

class FlakyBackend : public CompletionBackend {
public:
    int failures_left;
    bool retriable;
    int calls = 0;
    FlakyBackend(int failures, bool retriable_errors) : failures_left(failures), retriable(retriable_errors) {}
    std::string complete(const CompletionRequest&) override {
        ++calls;
        if (failures_left-- > 0) throw TransportError("boom", retriable);
        return "ok";
    }
};

}  // namespace

TEST(Fingerprint, Properties) {
    const auto a = request(StageTag::CodeGen, "nod");
    EXPECT_EQ(fingerprint(a), fingerprint(request(StageTag::CodeGen, "nod")));
    EXPECT_EQ(fingerprint(a), fingerprint(request(StageTag::CodeGen, "nod  \n\t")));
    EXPECT_NE(fingerprint(a), fingerprint(request(StageTag::RobotMotion, "nod")));
    EXPECT_NE(fingerprint(a), fingerprint(request(StageTag::CodeGen, "nod", 1)));
    auto hot = a;
    hot.temperature = 0.7;
    EXPECT_NE(fingerprint(a), fingerprint(hot));
    EXPECT_EQ(fingerprint(a).size(), 64u);
}

TEST(Gateway, ReplayHitAndMiss) {
    Transcript t;
    t.add({StageTag::CodeGen, fingerprint(request(StageTag::CodeGen, "nod")), "ANSWER: x"});
    const auto gw = Gateway::replay(t);
    EXPECT_EQ(gw->complete(request(StageTag::CodeGen, "nod")), "ANSWER: x");
    try {
        gw->complete(request(StageTag::Feedback, "nod"));
        FAIL();
    } catch (const ReplayMiss& e) {
        EXPECT_EQ(e.stage(), StageTag::Feedback);
        EXPECT_NE(std::string(e.what()).find("Feedback"), std::string::npos);
    }
    EXPECT_THROW(gw->complete(CompletionRequest{}), PreconditionError);
}

TEST(Gateway, RecordThenReplay) {
    const auto dir = temp_dir("record");
    auto queue = std::make_shared<QueueBackend>();
    queue->push(StageTag::InstructionFollowing, "REASONING: r\nANSWER: nod");
    queue->push(StageTag::CodeGen, "code");
    {
        const auto rec = Gateway::record(queue, dir / "t.json");
        EXPECT_EQ(rec->complete(request(StageTag::InstructionFollowing, "a")), "REASONING: r\nANSWER: nod");
        // Served from the transcript the second time; the queue is not touched.
        EXPECT_EQ(rec->complete(request(StageTag::InstructionFollowing, "a")), "REASONING: r\nANSWER: nod");
    }
    EXPECT_EQ(queue->pending(), 1u);
    {
        // Re-recording appends without clobbering.
        const auto rec = Gateway::record(queue, dir / "t.json");
        rec->complete(request(StageTag::CodeGen, "b"));
    }
    const auto replay = Gateway::replay(Transcript::load_dir(dir));
    EXPECT_EQ(replay->complete(request(StageTag::InstructionFollowing, "a")), "REASONING: r\nANSWER: nod");
    EXPECT_EQ(replay->complete(request(StageTag::CodeGen, "b")), "code");
    EXPECT_EQ(Transcript::load(dir / "t.json").size(), 2u);
    std::filesystem::remove_all(dir);
}

TEST(Gateway, InterruptedRecordingKeepsPartialTranscript) {
    const auto dir = temp_dir("partial");
    auto queue = std::make_shared<QueueBackend>();
    queue->push(StageTag::InstructionFollowing, "one");
    const auto rec = Gateway::record(queue, dir / "t.json");
    rec->complete(request(StageTag::InstructionFollowing, "a"));
    EXPECT_THROW(rec->complete(request(StageTag::RobotMotion, "b")), ReplayMiss);
    const auto replay = Gateway::replay(Transcript::load(dir / "t.json"));
    EXPECT_EQ(replay->complete(request(StageTag::InstructionFollowing, "a")), "one");
    EXPECT_THROW(replay->complete(request(StageTag::RobotMotion, "b")), ReplayMiss);
    std::filesystem::remove_all(dir);
}

TEST(Gateway, RetriesTransientFailures) {
    std::vector<long long> sleeps;
    RetryPolicy policy;
    policy.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
    auto flaky = std::make_shared<FlakyBackend>(2, true);
    EXPECT_EQ(Gateway::passthrough(flaky, policy)->complete(request(StageTag::CodeGen, "x")), "ok");
    EXPECT_EQ(flaky->calls, 3);
    EXPECT_EQ(sleeps, (std::vector<long long>{250, 500}));

    auto dead = std::make_shared<FlakyBackend>(3, true);
    EXPECT_THROW(Gateway::passthrough(dead, policy)->complete(request(StageTag::CodeGen, "x")), TransportError);
    EXPECT_EQ(dead->calls, 3);

    auto fatal = std::make_shared<FlakyBackend>(1, false);
    EXPECT_THROW(Gateway::passthrough(fatal, policy)->complete(request(StageTag::CodeGen, "x")), TransportError);
    EXPECT_EQ(fatal->calls, 1);
}

TEST(Transcript, ConflictingDuplicatesRejected) {
    Transcript t;
    EXPECT_TRUE(t.add({StageTag::CodeGen, "f", "a"}));
    EXPECT_FALSE(t.add({StageTag::CodeGen, "f", "a"}));
    EXPECT_THROW(t.add({StageTag::CodeGen, "f", "b"}), FormatError);
    EXPECT_EQ(Transcript::from_json(t.to_json()).entries(), t.entries());
}

TEST(LiveBackend, SpeaksChatCompletions) {
    httplib::Server server;
    nlohmann::json seen;
    std::string auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"REASONING: a\nANSWER: b"}}]})",
                        "application/json");
    });
    server.Post("/denied", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    LiveBackend live("http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "sk-test");
    EXPECT_EQ(live.complete(request(StageTag::CodeGen, "nod")), "REASONING: a\nANSWER: b");
    EXPECT_EQ(seen["model"], "gpt-4-0613");
    EXPECT_EQ(seen["temperature"], 0.0);
    EXPECT_EQ(seen["messages"][1]["content"], "nod");
    EXPECT_EQ(auth, "Bearer sk-test");

    LiveBackend denied("http://127.0.0.1:" + std::to_string(port) + "/denied", "sk-test");
    try {
        denied.complete(request(StageTag::CodeGen, "nod"));
        FAIL();
    } catch (const AuthError& e) {
        EXPECT_EQ(std::string(e.what()).find("sk-test"), std::string::npos);
    }
    server.stop();
    th.join();
}
