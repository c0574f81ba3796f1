#include "genem/service/server.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <httplib.h>

#include "genem/domain/json.hpp"
#include "genem/domain/skill_library.hpp"
#include "genem/ebl/parser.hpp"

namespace genem::service {

using nlohmann::json;

namespace {

int status_for(const std::string& code) {
    static const std::map<std::string, int> table = {
        {"NotFound", 404},          {"UnknownEmbodiment", 404},   {"UnknownScenario", 404},
        {"AlreadyGenerated", 409},  {"NotGenerated", 409},        {"DuplicateSkillName", 409},
        {"MaxRoundsExceeded", 429}, {"InvalidProgram", 422},      {"PreconditionViolation", 400},
        {"FormatError", 400},       {"ParseError", 400},
    };
    const auto it = table.find(code);
    return it == table.end() ? 500 : it->second;
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                 const std::string& stage = {}, const std::string& raw_ref = {}) {
    json body{{"code", code}, {"message", message}};
    if (!stage.empty()) body["stage"] = stage;
    if (!raw_ref.empty()) body["raw_ref"] = raw_ref;
    reply(res, status, body);
}

// Runs a handler and maps exceptions onto the error envelope.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const StageFailure& e) {
        reply_error(res, 502, e.code(), e.what(), e.stage(), e.raw_ref());
    } catch (const Error& e) {
        reply_error(res, status_for(e.code()), e.code(), e.what());
    } catch (const json::exception& e) {
        reply_error(res, 400, "FormatError", e.what());
    } catch (const std::exception& e) {
        reply_error(res, 500, "InternalError", e.what());
    }
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded()) throw FormatError("request body is not valid JSON");
    return j;
}

std::size_t query_size(const httplib::Request& req, const std::string& key, std::size_t fallback) {
    if (!req.has_param(key)) return fallback;
    try {
        const auto v = std::stoll(req.get_param_value(key));
        if (v < 0) throw PreconditionError(key + " must not be negative");
        return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
        throw PreconditionError(key + " must be a number");
    }
}

std::string sse(const std::string& event, const json& data) { return "event: " + event + "\ndata: " + data.dump() + "\n\n"; }

json frame_json(const Trajectory& t, std::size_t i) {
    json j{{"index", i}, {"t", t.frames[i].t}};
    json values = json::object();
    for (std::size_t c = 0; c < t.channels.size(); ++c) values[t.channels[c]] = t.frames[i].values[c];
    j["values"] = std::move(values);
    return j;
}

}  // namespace

std::unique_ptr<httplib::Server> make_server(std::shared_ptr<SessionService> svc) {
    auto server = std::make_unique<httplib::Server>();
    auto& s = *server;

    s.Post("/sessions", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 201, svc->create_session(parse_body(req))); });
    });
    s.Get("/sessions", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->list_sessions(query_size(req, "offset", 0), query_size(req, "limit", 50))); });
    });
    s.Get(R"(/sessions/([0-9a-zA-Z_-]+))", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->get_session(req.matches[1])); });
    });
    s.Post(R"(/sessions/([0-9a-zA-Z_-]+)/generate)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->generate(req.matches[1])); });
    });
    s.Post(R"(/sessions/([0-9a-zA-Z_-]+)/feedback)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = parse_body(req);
            reply(res, 200, svc->feedback(req.matches[1], body.value("text", "")));
        });
    });
    s.Get(R"(/sessions/([0-9a-zA-Z_-]+)/rounds/(\d+)/trajectory)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto t = svc->trajectory(req.matches[1], std::stoi(req.matches[2]));
            double rate = 1.0;  // 1 = real time
            if (req.has_param("rate")) {
                try {
                    rate = std::stod(req.get_param_value("rate"));
                } catch (const std::logic_error&) {
                    throw PreconditionError("rate must be a number");
                }
                if (rate < 0) throw PreconditionError("rate must not be negative");
            }
            res.set_header("Cache-Control", "no-cache");
            // The stream owns a reference to the immutable trajectory; nothing is locked.
            res.set_chunked_content_provider("text/event-stream", [t, rate](std::size_t, httplib::DataSink& sink) {
                const auto delay = rate > 0 ? std::chrono::duration<double>(t->step_s / rate) : std::chrono::duration<double>(0);
                std::size_t next_event = 0;
                for (std::size_t i = 0; i < t->frames.size(); ++i) {
                    if (!sink.is_writable()) return false;
                    std::string chunk = sse("frame", frame_json(*t, i));
                    while (next_event < t->events.size() && t->events[next_event].t <= t->frames[i].t + 1e-9)
                        chunk += sse("event", t->events[next_event++]);
                    if (!sink.write(chunk.data(), chunk.size())) return false;
                    if (rate > 0 && i + 1 < t->frames.size()) std::this_thread::sleep_for(delay);
                }
                std::string tail;
                while (next_event < t->events.size()) tail += sse("event", t->events[next_event++]);
                tail += sse("complete", json{{"frames", t->frames.size()}, {"events", t->events.size()}});
                if (!sink.write(tail.data(), tail.size())) return false;
                sink.done();
                return true;
            });
        });
    });
    s.Get("/skills", [svc](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->list_skills()); });
    });
    s.Post("/skills", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 201, svc->save_skill(parse_body(req))); });
    });
    s.Get("/embodiments", [svc](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->embodiments()); });
    });
    s.Get("/scenarios", [svc](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, svc->scenarios()); });
    });
    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 404 && res.body.empty()) reply_error(res, 404, "NotFound", "no such route");
    });
    return server;
}

namespace {
std::atomic<httplib::Server*> g_server{nullptr};
extern "C" void on_signal(int) {
    if (auto* s = g_server.load()) s->stop();
}
}  // namespace

int run(const ServiceConfig& config) {
    auto svc = std::make_shared<SessionService>(config, make_gateway(config));
    auto server = make_server(svc);
    int port = config.port;
    if (port == 0) {
        port = server->bind_to_any_port(config.host);
        if (port < 0) throw Error("BindFailed", "cannot bind " + config.host);
    } else if (!server->bind_to_port(config.host, port)) {
        throw Error("BindFailed", "cannot bind " + config.host + ":" + std::to_string(port));
    }
    g_server = server.get();
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << config.host << ":" << port << std::endl;
    server->listen_after_bind();
    g_server = nullptr;
    return 0;
}

}  // namespace genem::service
