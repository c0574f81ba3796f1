#include <cstdlib>

#include <httplib.h>

#include "genem/llm/gateway.hpp"

namespace genem::llm {

using nlohmann::json;

LiveBackend::LiveBackend(std::string endpoint, std::string api_key, std::chrono::seconds timeout)
    : key_(std::move(api_key)), timeout_(timeout) {
    const auto scheme = endpoint.find("://");
    const auto path = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (scheme == std::string::npos) throw PreconditionError("LLM endpoint must be an http(s) URL");
    base_ = endpoint.substr(0, path);
    path_ = path == std::string::npos ? "/v1/chat/completions" : endpoint.substr(path);
}

std::optional<LiveBackend> LiveBackend::from_env() {
    const char* endpoint = std::getenv("GENEM_LLM_ENDPOINT");
    const char* key = std::getenv("GENEM_LLM_KEY");
    if (!endpoint || !key || !*endpoint || !*key) return std::nullopt;
    return LiveBackend(endpoint, key);
}

std::string LiveBackend::complete(const CompletionRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    const json body{{"model", request.model_id}, {"temperature", request.temperature}, {"messages", messages}};

    httplib::Client client(base_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    const httplib::Headers headers{{"Authorization", "Bearer " + key_}};
    const auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw TransportError("LLM request failed: " + httplib::to_string(res.error()), true);
    if (res->status == 401 || res->status == 403) throw AuthError("LLM endpoint rejected the credentials");
    if (res->status == 429 || res->status >= 500)
        throw TransportError("LLM endpoint returned HTTP " + std::to_string(res->status), true);
    if (res->status != 200) throw TransportError("LLM endpoint returned HTTP " + std::to_string(res->status), false);
    try {
        const auto j = json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("LLM endpoint returned an unexpected body", false);
    }
}

}  // namespace genem::llm
