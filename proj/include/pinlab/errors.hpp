#pragma once

#include <stdexcept>
#include <string>

namespace pinlab {

/// Base for all pinning-library failures. `kind()` is stable and is what the
/// CLI prints on the diagnostic stream before exiting with status 3.
class PinlabError : public std::runtime_error {
public:
    PinlabError(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DivergentSum : PinlabError {
    explicit DivergentSum(const std::string& what) : PinlabError("DivergentSum", what) {}
};

struct NotRecurrent : PinlabError {
    explicit NotRecurrent(const std::string& what) : PinlabError("NotRecurrent", what) {}
};

struct CapExceeded : PinlabError {
    explicit CapExceeded(const std::string& what) : PinlabError("CapExceeded", what) {}
};

struct NoBracket : PinlabError {
    explicit NoBracket(const std::string& what) : PinlabError("NoBracket", what) {}
};

struct Unsupported : PinlabError {
    explicit Unsupported(const std::string& what) : PinlabError("Unsupported", what) {}
};

struct AtCriticalPoint : PinlabError {
    explicit AtCriticalPoint(const std::string& what) : PinlabError("AtCriticalPoint", what) {}
};

struct InvalidLaw : PinlabError {
    explicit InvalidLaw(const std::string& what) : PinlabError("InvalidLaw", what) {}
};

struct NumericalFailure : PinlabError {
    explicit NumericalFailure(const std::string& what) : PinlabError("NumericalFailure", what) {}
};

}  // namespace pinlab
