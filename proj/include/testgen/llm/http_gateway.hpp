#pragma once

#include <functional>

#include "testgen/llm/gateway.hpp"

namespace testgen::llm {

// One HTTP exchange as seen by the retry loop.
struct HttpExchange {
    bool transport_ok = false;  // false: connect/timeout failure
    int status = 0;
    std::string body;
    std::string error;
};

// url is the full endpoint URL; body is the JSON request.
using HttpTransport = std::function<HttpExchange(const std::string& url, const std::string& body,
                                                 const std::string& api_key)>;

// Chat-completion client over the common JSON shape: messages, temperature,
// max_tokens. Retries transient failures with exponential backoff; 4xx
// authentication errors are never retried.
class HttpChatGateway : public ChatGateway {
public:
    HttpChatGateway();
    explicit HttpChatGateway(HttpTransport transport);

    Completion complete(const std::string& prompt_text, const SamplingConfig& cfg) override;

private:
    HttpTransport transport_;
};

}  // namespace testgen::llm
