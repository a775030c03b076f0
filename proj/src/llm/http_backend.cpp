#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "stepwise/llm/http_backend.hpp"

#include "stepwise/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <thread>

namespace stepwise::llm {

using nlohmann::json;

HttpChatBackend::HttpChatBackend(HttpChatConfig config) : config_(std::move(config)) {
    if (config_.model.empty()) throw ConfigError("http backend needs a model name");
    if (config_.max_attempts < 1) throw ConfigError("http backend needs max_attempts >= 1");
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint must be an absolute URL: " + config_.endpoint);
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base_ = config_.endpoint;
        path_ = "/";
    } else {
        base_ = config_.endpoint.substr(0, path_start);
        path_ = config_.endpoint.substr(path_start);
    }
    const std::string scheme = config_.endpoint.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("unsupported endpoint scheme: " + scheme);
}

std::string HttpChatBackend::request_body(const CompletionRequest& request) const {
    nlohmann::ordered_json body;
    body["model"] = config_.model;
    body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    return body.dump();
}

std::string HttpChatBackend::parse_reply(const std::string& body) {
    try {
        const auto j = json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed chat-completions reply: ") + e.what());
    }
}

std::string HttpChatBackend::complete(const CompletionRequest& request) {
    const std::string body = request_body(request);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key == nullptr || *key == '\0') throw BackendError("environment variable " + config_.api_key_env + " is not set");
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    std::string last_error;
    auto delay = config_.backoff_base;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        const auto res = client.Post(path_, headers, body, "application/json");
        if (res && res->status == 200) {
            std::string content = parse_reply(res->body);
            std::lock_guard lock(mutex_);
            last_ = RawExchange{body, res->body};
            return content;
        }
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
        } else {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status != 429 && res->status < 500) break;
        }
        spdlog::warn("{} completion attempt {}/{} failed: {}", to_string(request.role), attempt, config_.max_attempts,
                     last_error);
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
    throw BackendError("completion failed after retries: " + last_error);
}

std::optional<RawExchange> HttpChatBackend::last_exchange() const {
    std::lock_guard lock(mutex_);
    return last_;
}

}  // namespace stepwise::llm
