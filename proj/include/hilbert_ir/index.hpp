#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hilbert_ir/distribution.hpp"
#include "hilbert_ir/tokenizer.hpp"

namespace hir {

using DocId = std::uint64_t;
using TermId = std::uint32_t;

struct DocumentRecord {
    DocId doc_id = 0;
    std::string external_name;
    std::uint64_t length = 1;

    bool operator==(const DocumentRecord&) const = default;
};

struct Posting {
    DocId doc_id = 0;
    std::uint32_t term_frequency = 0;
    CoefficientVector coeffs;

    bool operator==(const Posting&) const = default;
};

enum class Normalization : std::uint8_t { raw = 0, normalized = 1 };

struct IndexMetadata {
    BasisKind kind = BasisKind::legendre;
    unsigned order = default_order;
    Normalization normalization = Normalization::normalized;
    /// Laguerre scale on the normalized domain; 0 for the other families.
    double laguerre_scale = 0.0;
    std::uint64_t tokenizer_hash = 0;
    std::uint64_t document_count = 0;
    std::uint64_t vocabulary_size = 0;

    /// The unit-domain basis every stored vector is expressed in.
    [[nodiscard]] BasisSpec basis() const;

    bool operator==(const IndexMetadata&) const = default;
};

struct SourceDocument {
    std::string name;
    std::string text;
};

struct IndexOptions {
    BasisKind kind = BasisKind::legendre;
    unsigned order = default_order;
    /// Laguerre scale as a fraction of the unit domain; <= 0 picks 0.075.
    double laguerre_scale = 0.0;
    TokenizerConfig tokenizer = TokenizerConfig::english();
};

/// A posting seen from its document: which term, and where it is stored.
struct DocumentTerm {
    TermId term_id = 0;
    std::uint32_t posting_index = 0;
};

/// Immutable inverted index. Postings carry the term frequency and the
/// normalized-domain coefficient vector; raw positions are not kept.
class Index {
  public:
    /// Throws FormatError(malformed) when the parts are inconsistent.
    Index(IndexMetadata metadata,
          std::vector<DocumentRecord> documents,
          std::vector<std::string> vocabulary,
          std::vector<std::vector<Posting>> postings);

    [[nodiscard]] const IndexMetadata& metadata() const noexcept { return m_metadata; }
    [[nodiscard]] const BasisSpec& basis() const noexcept { return m_basis; }
    [[nodiscard]] std::span<const DocumentRecord> documents() const noexcept { return m_documents; }
    [[nodiscard]] std::span<const std::string> vocabulary() const noexcept { return m_vocabulary; }
    [[nodiscard]] std::span<const std::vector<Posting>> all_postings() const noexcept { return m_postings; }

    [[nodiscard]] std::optional<TermId> term_id(std::string_view term) const;
    [[nodiscard]] const std::string& term(TermId id) const { return m_vocabulary.at(id); }

    /// Postings sorted by doc_id; empty for unknown terms.
    [[nodiscard]] std::span<const Posting> postings_for(std::string_view term) const;
    [[nodiscard]] std::span<const Posting> postings_for(TermId id) const { return m_postings.at(id); }

    /// Throws ErrorCode::lookup for unknown ids.
    [[nodiscard]] const DocumentRecord& document(DocId id) const;
    [[nodiscard]] std::optional<DocId> find_document(std::string_view name) const;

    /// The document's terms in term-id order.
    [[nodiscard]] std::span<const DocumentTerm> document_terms(DocId id) const;
    /// The posting of `term` in `doc`, if any.
    [[nodiscard]] const Posting* posting(std::string_view term, DocId doc) const;

    [[nodiscard]] double average_length() const noexcept { return m_average_length; }

    bool operator==(const Index& other) const;

  private:
    IndexMetadata m_metadata;
    BasisSpec m_basis;
    std::vector<DocumentRecord> m_documents;
    std::vector<std::string> m_vocabulary;
    std::vector<std::vector<Posting>> m_postings;
    std::unordered_map<std::string, TermId> m_term_ids;
    std::vector<std::vector<DocumentTerm>> m_forward;
    double m_average_length = 0.0;
};

Index build_index(std::span<const SourceDocument> docs, const IndexOptions& options);

/// Every regular file of `dir`, in filename order, as one UTF-8 document.
std::vector<SourceDocument> read_corpus(const std::filesystem::path& dir);

}  // namespace hir
