#pragma once

#include <stdexcept>
#include <string>

namespace pdae {

enum class ErrorCode {
    SingularMatrix,
    DimensionMismatch,
    NoExactSolution,
    DegenerateStencil,
    UnsupportedStageCount,
    PoleOfR,
    SingularA,
    HypothesisViolated,
    UnknownClassicalDaeOrder,
    SingularStageMatrix,
    NonintegerStepCount,
    IrregularPencil,
    NonpositiveError,
    ConfigError,
};

const char* error_code_name(ErrorCode c);

class PdaeError : public std::runtime_error {
public:
    PdaeError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace pdae
