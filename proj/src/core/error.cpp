#include "core/error.hpp"

namespace csf {

const char *to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Config: return "config_error";
    case ErrorKind::PoleProximity: return "pole_proximity";
    case ErrorKind::DegenerateEdge: return "degenerate_edge";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::NonPositiveOmega: return "non_positive_omega";
    case ErrorKind::ShapeMismatch: return "shape_mismatch";
    case ErrorKind::InsufficientSamples: return "insufficient_samples";
    case ErrorKind::Io: return "io_error";
    case ErrorKind::Internal: return "internal_error";
    }
    return "unknown";
}

} // namespace csf
