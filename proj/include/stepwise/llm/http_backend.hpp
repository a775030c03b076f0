#pragma once

#include "stepwise/llm/backend.hpp"

#include <chrono>
#include <mutex>
#include <string>

namespace stepwise::llm {

struct HttpChatConfig {
    // Full URL of the chat-completions route, e.g. https://host/v1/chat/completions
    std::string endpoint;
    std::string model;
    // Name of the environment variable that holds the API key; empty for none.
    std::string api_key_env;
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::seconds timeout{60};
};

// Chat-completions client. Transport failures, 429 and 5xx replies are
// retried with exponential backoff; other 4xx replies fail immediately.
class HttpChatBackend final : public CompletionBackend {
public:
    explicit HttpChatBackend(HttpChatConfig config);

    std::string complete(const CompletionRequest& request) override;
    std::optional<RawExchange> last_exchange() const override;

    const HttpChatConfig& config() const { return config_; }

    // Request body sent for `request`.
    std::string request_body(const CompletionRequest& request) const;
    // Message content of a chat-completions reply body.
    static std::string parse_reply(const std::string& body);

private:
    HttpChatConfig config_;
    std::string base_;  // scheme://host[:port]
    std::string path_;
    mutable std::mutex mutex_;
    std::optional<RawExchange> last_;
};

}  // namespace stepwise::llm
