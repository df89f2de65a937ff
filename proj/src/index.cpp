#include "hilbert_ir/index.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hilbert_ir/error.hpp"
#include "hilbert_ir/index_io.hpp"

namespace hir {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw FormatError(FormatErrorKind::malformed, what); }

}  // namespace

BasisSpec IndexMetadata::basis() const
{
    switch (kind) {
    case BasisKind::fourier: return BasisSpec::fourier(order, 1.0);
    case BasisKind::legendre: return BasisSpec::legendre(order, 1.0);
    case BasisKind::laguerre: return BasisSpec::laguerre(order, 1.0, laguerre_scale);
    }
    return BasisSpec::legendre(order, 1.0);
}

Index::Index(IndexMetadata metadata,
             std::vector<DocumentRecord> documents,
             std::vector<std::string> vocabulary,
             std::vector<std::vector<Posting>> postings)
    : m_metadata(metadata),
      m_documents(std::move(documents)),
      m_vocabulary(std::move(vocabulary)),
      m_postings(std::move(postings))
{
    if (m_metadata.normalization != Normalization::normalized) {
        malformed("only normalized-domain indexes are supported");
    }
    try {
        m_basis = m_metadata.basis();
    } catch (const Error& e) {
        malformed(std::string("invalid basis metadata: ") + e.what());
    }
    if (m_metadata.document_count != m_documents.size() || m_metadata.vocabulary_size != m_vocabulary.size()
        || m_postings.size() != m_vocabulary.size()) {
        malformed("metadata counts disagree with the stored tables");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m_documents.size(); ++i) {
        if (m_documents[i].doc_id != i) {
            malformed("document ids must be dense and ascending");
        }
        if (m_documents[i].length < 1) {
            malformed("document length must be at least 1");
        }
        total += static_cast<double>(m_documents[i].length);
    }
    m_average_length = m_documents.empty() ? 0.0 : total / static_cast<double>(m_documents.size());

    m_term_ids.reserve(m_vocabulary.size());
    m_forward.resize(m_documents.size());
    for (std::size_t t = 0; t < m_vocabulary.size(); ++t) {
        if (t > 0 && !(m_vocabulary[t - 1] < m_vocabulary[t])) {
            malformed("vocabulary must be sorted and unique");
        }
        m_term_ids.emplace(m_vocabulary[t], static_cast<TermId>(t));
        const auto& list = m_postings[t];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& p = list[i];
            if (p.doc_id >= m_documents.size() || (i > 0 && list[i - 1].doc_id >= p.doc_id)) {
                malformed("postings must reference known documents in ascending order");
            }
            if (p.term_frequency < 1) {
                malformed("posting with zero term frequency");
            }
            if (p.coeffs.basis != m_basis || p.coeffs.coeffs.size() != m_basis.size()) {
                malformed("posting coefficients do not match the index basis");
            }
            m_forward[p.doc_id].push_back({static_cast<TermId>(t), static_cast<std::uint32_t>(i)});
        }
    }
}

std::optional<TermId> Index::term_id(std::string_view term) const
{
    auto it = m_term_ids.find(std::string(term));
    if (it == m_term_ids.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::span<const Posting> Index::postings_for(std::string_view term) const
{
    auto id = term_id(term);
    if (!id) {
        return {};
    }
    return m_postings[*id];
}

const DocumentRecord& Index::document(DocId id) const
{
    if (id >= m_documents.size()) {
        throw Error(ErrorCode::lookup, "no document with id " + std::to_string(id));
    }
    return m_documents[id];
}

std::optional<DocId> Index::find_document(std::string_view name) const
{
    for (const auto& d : m_documents) {
        if (d.external_name == name) {
            return d.doc_id;
        }
    }
    return std::nullopt;
}

std::span<const DocumentTerm> Index::document_terms(DocId id) const
{
    if (id >= m_forward.size()) {
        throw Error(ErrorCode::lookup, "no document with id " + std::to_string(id));
    }
    return m_forward[id];
}

const Posting* Index::posting(std::string_view term, DocId doc) const
{
    const auto list = postings_for(term);
    auto it = std::lower_bound(
        list.begin(), list.end(), doc, [](const Posting& p, DocId d) { return p.doc_id < d; });
    if (it == list.end() || it->doc_id != doc) {
        return nullptr;
    }
    return &*it;
}

bool Index::operator==(const Index& other) const
{
    return m_metadata == other.m_metadata && m_documents == other.m_documents
        && m_vocabulary == other.m_vocabulary && m_postings == other.m_postings;
}

Index build_index(std::span<const SourceDocument> docs, const IndexOptions& options)
{
    if (docs.empty()) {
        throw Error(ErrorCode::usage, "cannot build an index without documents");
    }
    IndexMetadata metadata;
    metadata.kind = options.kind;
    metadata.order = options.order;
    metadata.normalization = Normalization::normalized;
    metadata.laguerre_scale = options.kind == BasisKind::laguerre
        ? (options.laguerre_scale > 0.0 ? options.laguerre_scale : default_laguerre_fraction)
        : 0.0;
    metadata.tokenizer_hash = options.tokenizer.hash();
    const BasisSpec basis = metadata.basis();

    std::vector<DocumentRecord> documents;
    std::map<std::string, std::vector<Posting>> by_term;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto length = std::max<std::uint32_t>(1, token_count(docs[d].text));
        documents.push_back({d, docs[d].name, length});

        std::map<std::string, std::vector<std::uint32_t>> positions;
        for (auto& token : tokenize(docs[d].text, options.tokenizer)) {
            positions[std::move(token.term)].push_back(token.position);
        }
        for (auto& [term, ps] : positions) {
            const TermDistribution dist{PositionSet(std::move(ps), length)};
            by_term[term].push_back(
                {d, static_cast<std::uint32_t>(dist.positions.size()), expand_normalized(dist, basis)});
        }
    }

    std::vector<std::string> vocabulary;
    std::vector<std::vector<Posting>> postings;
    vocabulary.reserve(by_term.size());
    postings.reserve(by_term.size());
    for (auto& [term, list] : by_term) {
        vocabulary.push_back(term);
        postings.push_back(std::move(list));
    }
    metadata.document_count = documents.size();
    metadata.vocabulary_size = vocabulary.size();
    return Index(metadata, std::move(documents), std::move(vocabulary), std::move(postings));
}

std::vector<SourceDocument> read_corpus(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorCode::io, "corpus directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        throw Error(ErrorCode::io, "cannot list " + dir.string() + ": " + ec.message());
    }
    std::sort(files.begin(), files.end());
    std::vector<SourceDocument> docs;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::io, "cannot read " + path.string());
        }
        std::ostringstream text;
        text << in.rdbuf();
        docs.push_back({path.filename().string(), text.str()});
    }
    return docs;
}

}  // namespace hir
