#pragma once

// Chat-completions transport. Kept out of fmclient.hpp so offline users do not
// pull in httplib.

#include <cstdlib>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "omni/fmclient.hpp"

namespace omni::fm {

struct HttpConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::string model = "gpt-4";
    int timeout_seconds = 120;

    // OMNI_BASE_URL, OMNI_API_KEY, OMNI_MODEL override the defaults.
    static HttpConfig from_env() {
        HttpConfig c;
        if (const char* v = std::getenv("OMNI_BASE_URL")) c.base_url = v;
        if (const char* v = std::getenv("OMNI_API_KEY")) c.api_key = v;
        if (const char* v = std::getenv("OMNI_MODEL")) c.model = v;
        return c;
    }
};

inline std::string request_body(const CompletionRequest& r) {
    nlohmann::json msgs = nlohmann::json::array();
    if (!r.system_text.empty()) msgs.push_back({{"role", "system"}, {"content", r.system_text}});
    msgs.push_back({{"role", "user"}, {"content", r.user_text}});
    nlohmann::json body = {{"model", r.model_name},
                           {"messages", msgs},
                           {"temperature", r.temperature},
                           {"max_tokens", r.max_tokens}};
    return body.dump();
}

inline std::string response_text(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed response body: ") + e.what());
    }
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw ProtocolError("response body lacks choices[0].message.content");
    }
}

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpConfig cfg = HttpConfig::from_env()) : cfg_(std::move(cfg)) {}

    std::string complete(const CompletionRequest& r) override {
        httplib::Client cli(cfg_.base_url);
        cli.set_read_timeout(cfg_.timeout_seconds, 0);
        cli.set_connection_timeout(30, 0);
        httplib::Headers h;
        if (!cfg_.api_key.empty()) h.emplace("Authorization", "Bearer " + cfg_.api_key);
        CompletionRequest req = r;
        if (req.model_name.empty() || req.model_name == "mock") req.model_name = cfg_.model;
        auto res = cli.Post(cfg_.path, h, request_body(req), "application/json");
        if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
        if (res->status == 429 || res->status >= 500)
            throw TransportError("server returned " + std::to_string(res->status));
        if (res->status != 200) throw ProtocolError("server returned " + std::to_string(res->status));
        return response_text(res->body);
    }

private:
    HttpConfig cfg_;
};

}  // namespace omni::fm
