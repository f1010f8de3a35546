#pragma once

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "omni/error.hpp"

namespace omni::fm {

struct CompletionRequest {
    std::string system_text;
    std::string user_text;
    std::string model_name = "mock";
    double temperature = 0.0;
    int max_tokens = 1024;
};

namespace detail {
inline void put_field(std::string& out, const char* name, const std::string& v) {
    out += name;
    out += '=';
    out += std::to_string(v.size());
    out += ':';
    out += v;
    out += '\n';
}

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

// Fixed field order, length-prefixed values: no separator ambiguity, every
// value byte counts.
inline std::string canonical(const CompletionRequest& r) {
    std::string out;
    detail::put_field(out, "model", r.model_name);
    detail::put_field(out, "temperature", detail::fmt_double(r.temperature));
    detail::put_field(out, "max_tokens", std::to_string(r.max_tokens));
    detail::put_field(out, "system", r.system_text);
    detail::put_field(out, "user", r.user_text);
    return out;
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline std::string cache_key(const CompletionRequest& r) { return sha256_hex(canonical(r)); }

// ------------------------------------------------------------------ cache

namespace detail {
inline std::string escape(const std::string& s) {
    std::string o;
    o.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': o += "\\\\"; break;
            case '\n': o += "\\n"; break;
            case '\t': o += "\\t"; break;
            case '\r': o += "\\r"; break;
            default: o += c;
        }
    }
    return o;
}

inline std::string unescape(const std::string& s) {
    std::string o;
    o.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            const char n = s[++i];
            o += n == 'n' ? '\n' : n == 't' ? '\t' : n == 'r' ? '\r' : n;
        } else {
            o += s[i];
        }
    }
    return o;
}
}  // namespace detail

struct CacheEntry {
    std::string key;
    std::string request;
    std::string response;
    long long created_at = 0;
};

// Append-only: one escaped, tab-separated record per line
// (key, created_at, canonical request, response). Later lines win.
class PromptCache {
public:
    PromptCache() = default;
    explicit PromptCache(std::string path) : path_(std::move(path)) { load(); }

    std::optional<std::string> lookup(const std::string& key) const {
        std::shared_lock lk(mu_);
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        return it->second.response;
    }

    void store(const CompletionRequest& req, const std::string& response) {
        CacheEntry e{cache_key(req), canonical(req), response,
                     std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count()};
        std::unique_lock lk(mu_);
        if (!path_.empty()) {
            std::ofstream out(path_, std::ios::app | std::ios::binary);
            if (!out) throw Error("cannot append to cache " + path_);
            out << e.key << '\t' << e.created_at << '\t' << detail::escape(e.request) << '\t'
                << detail::escape(e.response) << '\n';
            out.flush();
        }
        index_[e.key] = std::move(e);
    }

    std::size_t size() const {
        std::shared_lock lk(mu_);
        return index_.size();
    }

private:
    std::string path_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, CacheEntry> index_;

    void load() {
        std::ifstream in(path_, std::ios::binary);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::size_t b = 0;
            for (;;) {
                auto t = line.find('\t', b);
                f.push_back(line.substr(b, t == std::string::npos ? std::string::npos : t - b));
                if (t == std::string::npos) break;
                b = t + 1;
            }
            // a torn last line from a crash is skipped
            if (f.size() != 4) continue;
            CacheEntry e{f[0], detail::unescape(f[2]), detail::unescape(f[3]), std::atoll(f[1].c_str())};
            if (sha256_hex(e.request) != e.key) continue;
            index_[e.key] = std::move(e);
        }
    }
};

// --------------------------------------------------------------- backends

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const CompletionRequest& r) = 0;
};

struct Matcher {
    enum class Kind { exact, substring, pattern };
    Kind kind = Kind::exact;
    std::string text;

    static Matcher exact(std::string s) { return {Kind::exact, std::move(s)}; }
    static Matcher substring(std::string s) { return {Kind::substring, std::move(s)}; }
    static Matcher pattern(std::string s) { return {Kind::pattern, std::move(s)}; }

    bool matches(const std::string& user) const {
        switch (kind) {
            case Kind::exact: return user == text;
            case Kind::substring: return user.find(text) != std::string::npos;
            case Kind::pattern: return std::regex_match(user, std::regex(text));
        }
        return false;
    }
};

using Responder = std::function<std::string(const CompletionRequest&)>;

struct Rule {
    Matcher matcher;
    std::variant<std::string, Responder> response;
};

// Test double: first matching rule answers. Strict mode refuses unmatched prompts.
class ScriptedBackend : public Backend {
public:
    ScriptedBackend() = default;
    ScriptedBackend(std::vector<Rule> rules, bool strict = true, std::string fallback = "")
        : rules_(std::move(rules)), strict_(strict), fallback_(std::move(fallback)) {}

    void add(Matcher m, std::string text) { rules_.push_back({std::move(m), std::move(text)}); }
    void add(Matcher m, Responder fn) { rules_.push_back({std::move(m), std::move(fn)}); }
    void set_lenient(std::string fallback) {
        strict_ = false;
        fallback_ = std::move(fallback);
    }

    std::string complete(const CompletionRequest& r) override {
        calls_.fetch_add(1);
        for (const auto& rule : rules_) {
            if (!rule.matcher.matches(r.user_text)) continue;
            if (auto s = std::get_if<std::string>(&rule.response)) return *s;
            return std::get<Responder>(rule.response)(r);
        }
        if (strict_) throw ProtocolError("scripted backend: no rule matches prompt");
        return fallback_;
    }

    std::size_t calls() const { return calls_.load(); }

private:
    std::vector<Rule> rules_;
    bool strict_ = true;
    std::string fallback_;
    std::atomic<std::size_t> calls_{0};
};

inline std::string scripted_complete(const std::vector<Rule>& rules, const CompletionRequest& r,
                                     bool strict = true, const std::string& fallback = "") {
    ScriptedBackend b(rules, strict, fallback);
    return b.complete(r);
}

// ----------------------------------------------------------------- client

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds first_backoff{1000};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Cache in front of a backend. Transport failures are retried with doubling
// backoff; protocol errors are not.
class FmClient {
public:
    FmClient(std::shared_ptr<Backend> backend, std::shared_ptr<PromptCache> cache = std::make_shared<PromptCache>(),
             RetryPolicy retry = {}, Sleeper sleep = {})
        : backend_(std::move(backend)), cache_(std::move(cache)), retry_(retry), sleep_(std::move(sleep)) {
        if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }

    struct Completion {
        std::string text;
        bool cached = false;
    };

    std::string complete(const CompletionRequest& r, bool bypass_cache = false) {
        return complete_detailed(r, bypass_cache).text;
    }

    Completion complete_detailed(const CompletionRequest& r, bool bypass_cache = false) {
        if (r.user_text.empty()) throw PreconditionError("empty user text");
        const std::string key = cache_key(r);
        if (!bypass_cache)
            if (auto hit = cache_->lookup(key)) return {*hit, true};
        auto delay = retry_.first_backoff;
        for (int attempt = 1;; ++attempt) {
            try {
                std::string out = backend_->complete(r);
                backend_calls_.fetch_add(1);
                cache_->store(r, out);
                return {std::move(out), false};
            } catch (const TransportError&) {
                backend_calls_.fetch_add(1);
                if (attempt >= retry_.attempts) throw;
                sleep_(delay);
                delay *= 2;
            }
        }
    }

    std::size_t backend_calls() const { return backend_calls_.load(); }
    PromptCache& cache() { return *cache_; }

private:
    std::shared_ptr<Backend> backend_;
    std::shared_ptr<PromptCache> cache_;
    RetryPolicy retry_;
    Sleeper sleep_;
    std::atomic<std::size_t> backend_calls_{0};
};

}  // namespace omni::fm
