#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace assoc {

// Two families of failure. FormatError covers unreadable or malformed input
// (the CLI maps it to exit code 2); DomainError covers well-formed input that
// violates an operation's preconditions (exit code 1).

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LoadError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Syntax error in a clause file, positioned at 1-based line/column.
class ParseError : public FormatError {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : FormatError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class RangeRestrictionError : public FormatError {
public:
    RangeRestrictionError(const std::string& variable, const std::string& clause_id)
        : FormatError("clause " + clause_id + " is not range-restricted: head variable " + variable +
                      " does not occur in the body"),
          variable_(variable),
          clause_id_(clause_id) {}

    const std::string& variable() const noexcept { return variable_; }
    const std::string& clause_id() const noexcept { return clause_id_; }

private:
    std::string variable_;
    std::string clause_id_;
};

class ArityClashError : public FormatError {
public:
    using FormatError::FormatError;
};

class OutOfVocabularyError : public DomainError {
public:
    explicit OutOfVocabularyError(std::vector<std::string> words)
        : DomainError(make_message(words)), words_(std::move(words)) {}

    const std::vector<std::string>& words() const noexcept { return words_; }

private:
    static std::string make_message(const std::vector<std::string>& words) {
        std::string msg = "out of vocabulary:";
        for (const auto& w : words) msg += " " + w;
        return msg;
    }

    std::vector<std::string> words_;
};

class ContractViolation : public DomainError {
public:
    using DomainError::DomainError;
};

/// A distance with no in-vocabulary words on one side.
class UndefinedDistanceError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace assoc
