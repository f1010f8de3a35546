#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omni {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// record_evaluation got a t_eval map that does not cover every tracked task.
class IncompleteEvaluationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

// Backend answered but the payload is unusable (bad status, bad body, no rule).
class ProtocolError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ProposalError : public Error {
public:
    enum class Kind { missing_section, count_mismatch, task_parse };
    ProposalError(Kind k, const std::string& msg) : Error(msg), kind_(k) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace omni
