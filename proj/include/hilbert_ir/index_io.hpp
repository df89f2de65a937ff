#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hilbert_ir/error.hpp"
#include "hilbert_ir/index.hpp"

namespace hir {

// HILX layout, little-endian:
//
//   "HILX"                          magic
//   u32                             format version (1)
//   u8 basis kind, u16 order, u8 normalization, f64 laguerre scale,
//   u64 document count, u64 vocabulary size, u64 tokenizer hash
//   per document:  u64 id, u64 length, u32 n + n bytes name
//   per term:      u32 n + n bytes (sorted)
//   per term:      u64 posting count, then per posting
//                  u64 doc id, u32 tf, (order + 1) x f64 coefficients
//   u32                             CRC-32 of everything above

inline constexpr char index_magic[4] = {'H', 'I', 'L', 'X'};
inline constexpr std::uint32_t index_format_version = 1;

enum class FormatErrorKind { magic_mismatch, version_mismatch, truncated, checksum_mismatch, malformed };

const char* to_string(FormatErrorKind kind);

class FormatError : public Error {
  public:
    FormatError(FormatErrorKind kind, const std::string& what)
        : Error(ErrorCode::format, what), m_kind(kind)
    {}

    [[nodiscard]] FormatErrorKind kind() const noexcept { return m_kind; }

  private:
    FormatErrorKind m_kind;
};

std::vector<std::uint8_t> serialize_index(const Index& index);
/// Throws FormatError; never returns a partial index.
Index deserialize_index(std::span<const std::uint8_t> bytes);

void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

struct AuditCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    [[nodiscard]] bool passed() const;
};

/// Checks the checksum, structure, vector lengths and the normalized-domain
/// Bessel bound sum gamma_k^2 <= tf / L of every posting.
AuditReport audit_index_bytes(std::span<const std::uint8_t> bytes);

}  // namespace hir
