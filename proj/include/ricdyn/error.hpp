#pragma once

#include <stdexcept>
#include <string>

namespace ricdyn {

enum class ErrorKind {
    Domain,             // argument outside the operation's domain
    UnphysicalState,    // C_I <= 0, alpha <= 0, nonpositive variance
    Degeneracy,         // quantity undefined at a special point (coherent-state kappa0)
    Singularity,        // denominator vanished / trajectory hit a pole or the alpha floor
    BlowUp,             // |C| exceeded the configured bound
    FocalPoint,         // propagator evaluated at a caustic
    WronskianViolation,
    ZeroCentroid,
    GridTooCoarse,
    Integration,        // step-size control gave up
    Parse,
    Validation,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures that arise while evolving or evaluating a valid
    /// problem (blow-up, caustic, ...), as opposed to bad input.
    bool is_numerical() const noexcept;

private:
    ErrorKind kind_;
};

}  // namespace ricdyn
