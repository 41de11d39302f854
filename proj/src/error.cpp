#include "ricdyn/error.hpp"

namespace ricdyn {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::UnphysicalState: return "unphysical state";
        case ErrorKind::Degeneracy: return "degenerate configuration";
        case ErrorKind::Singularity: return "singularity";
        case ErrorKind::BlowUp: return "blow-up";
        case ErrorKind::FocalPoint: return "focal point";
        case ErrorKind::WronskianViolation: return "wronskian violation";
        case ErrorKind::ZeroCentroid: return "zero centroid";
        case ErrorKind::GridTooCoarse: return "grid too coarse";
        case ErrorKind::Integration: return "integration failure";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Validation: return "validation error";
    }
    return "error";
}

bool Error::is_numerical() const noexcept {
    switch (kind_) {
        case ErrorKind::Singularity:
        case ErrorKind::BlowUp:
        case ErrorKind::FocalPoint:
        case ErrorKind::Integration:
            return true;
        default:
            return false;
    }
}

}  // namespace ricdyn
