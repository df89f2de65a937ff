#pragma once

#include <stdexcept>
#include <string>

namespace hir {

enum class ErrorCode {
    domain,
    configuration,
    usage,
    undefined_cosine,
    empty_distribution,
    unsupported_basis,
    resource,
    lookup,
    io,
    format,
    internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), m_code(code)
    {}

    [[nodiscard]] ErrorCode code() const noexcept { return m_code; }

  private:
    ErrorCode m_code;
};

}  // namespace hir
