#include "hilbert_ir/error.hpp"

namespace hir {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::configuration: return "configuration error";
    case ErrorCode::usage: return "usage error";
    case ErrorCode::undefined_cosine: return "undefined cosine";
    case ErrorCode::empty_distribution: return "empty distribution";
    case ErrorCode::unsupported_basis: return "unsupported basis";
    case ErrorCode::resource: return "resource limit";
    case ErrorCode::lookup: return "lookup error";
    case ErrorCode::io: return "I/O error";
    case ErrorCode::format: return "format error";
    case ErrorCode::internal: return "internal error";
    }
    return "unknown error";
}

}  // namespace hir
