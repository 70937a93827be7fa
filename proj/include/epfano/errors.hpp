#pragma once

#include <stdexcept>
#include <string>

namespace epfano {

/// Base class for every library failure. `kind()` is a stable machine-readable
/// tag used by the CLI error line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what) : Error("singular", what) {}
};

class IllConditionedError : public Error {
public:
    explicit IllConditionedError(const std::string& what) : Error("ill-conditioned", what) {}
};

class DegenerateFamilyError : public Error {
public:
    explicit DegenerateFamilyError(const std::string& what) : Error("degenerate-family", what) {}
};

class NotAnEpError : public Error {
public:
    explicit NotAnEpError(const std::string& what) : Error("not-an-ep", what) {}
};

class StepSizeError : public Error {
public:
    explicit StepSizeError(const std::string& what) : Error("step-size", what) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error("schema", what) {}
};

}  // namespace epfano
