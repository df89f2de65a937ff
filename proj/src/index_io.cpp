#include "hilbert_ir/index_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

namespace hir {

namespace {

constexpr double bessel_slack = 1e-12;

class Writer {
  public:
    void u8(std::uint8_t v) { m_bytes.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void str(const std::string& s)
    {
        u32(static_cast<std::uint32_t>(s.size()));
        m_bytes.insert(m_bytes.end(), s.begin(), s.end());
    }
    void raw(const char* data, std::size_t n) { m_bytes.insert(m_bytes.end(), data, data + n); }

    std::vector<std::uint8_t> take() { return std::move(m_bytes); }
    [[nodiscard]] std::span<const std::uint8_t> bytes() const { return m_bytes; }

  private:
    void put(std::uint64_t v, int width)
    {
        for (int i = 0; i < width; ++i) {
            m_bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::vector<std::uint8_t> m_bytes;
};

struct OutOfData {};

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> bytes) : m_bytes(bytes) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    std::string str()
    {
        const auto n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(m_bytes.data() + m_pos), n);
        m_pos += n;
        return s;
    }
    /// Guards counts read from the file against the bytes that remain.
    void need_records(std::uint64_t count, std::size_t record_size)
    {
        if (record_size > 0 && count > remaining() / record_size) {
            throw OutOfData{};
        }
    }
    [[nodiscard]] std::size_t remaining() const { return m_bytes.size() - m_pos; }

  private:
    void need(std::size_t n)
    {
        if (n > remaining()) {
            throw OutOfData{};
        }
    }
    std::uint64_t get(int width)
    {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(m_bytes[m_pos + i]) << (8 * i);
        }
        m_pos += static_cast<std::size_t>(width);
        return v;
    }

    std::span<const std::uint8_t> m_bytes;
    std::size_t m_pos = 0;
};

std::uint32_t trailing_crc(std::span<const std::uint8_t> bytes)
{
    Reader r(bytes.subspan(bytes.size() - 4));
    return r.u32();
}

// Parses the body (everything before the checksum). Throws OutOfData when
// the body ends early, FormatError for everything else.
Index parse_body(std::span<const std::uint8_t> body)
{
    Reader r(body);
    r.need_records(1, 8);
    r.u32();  // magic, already checked
    r.u32();  // version, already checked

    IndexMetadata metadata;
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(BasisKind::laguerre)) {
        throw FormatError(FormatErrorKind::malformed, "unknown basis kind " + std::to_string(kind));
    }
    metadata.kind = static_cast<BasisKind>(kind);
    metadata.order = r.u16();
    const auto normalization = r.u8();
    if (normalization > static_cast<std::uint8_t>(Normalization::normalized)) {
        throw FormatError(FormatErrorKind::malformed, "unknown normalization mode");
    }
    metadata.normalization = static_cast<Normalization>(normalization);
    metadata.laguerre_scale = r.f64();
    metadata.document_count = r.u64();
    metadata.vocabulary_size = r.u64();
    metadata.tokenizer_hash = r.u64();

    BasisSpec basis;
    try {
        basis = metadata.basis();
    } catch (const Error& e) {
        throw FormatError(FormatErrorKind::malformed, std::string("invalid basis metadata: ") + e.what());
    }

    r.need_records(metadata.document_count, 20);
    std::vector<DocumentRecord> documents;
    documents.reserve(metadata.document_count);
    for (std::uint64_t i = 0; i < metadata.document_count; ++i) {
        DocumentRecord d;
        d.doc_id = r.u64();
        d.length = r.u64();
        d.external_name = r.str();
        documents.push_back(std::move(d));
    }

    r.need_records(metadata.vocabulary_size, 4);
    std::vector<std::string> vocabulary;
    vocabulary.reserve(metadata.vocabulary_size);
    for (std::uint64_t i = 0; i < metadata.vocabulary_size; ++i) {
        vocabulary.push_back(r.str());
    }

    const std::size_t posting_size = 12 + 8 * basis.size();
    std::vector<std::vector<Posting>> postings(metadata.vocabulary_size);
    for (auto& list : postings) {
        const auto count = r.u64();
        r.need_records(count, posting_size);
        list.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Posting p;
            p.doc_id = r.u64();
            p.term_frequency = r.u32();
            p.coeffs = CoefficientVector::zero(basis);
            for (auto& c : p.coeffs.coeffs) {
                c = r.f64();
            }
            list.push_back(std::move(p));
        }
    }
    if (r.remaining() != 0) {
        throw FormatError(FormatErrorKind::malformed, "trailing bytes after postings");
    }
    return Index(metadata, std::move(documents), std::move(vocabulary), std::move(postings));
}

void check_header(std::span<const std::uint8_t> bytes)
{
    const std::size_t head = std::min<std::size_t>(bytes.size(), 4);
    if (std::memcmp(bytes.data(), index_magic, head) != 0) {
        throw FormatError(FormatErrorKind::magic_mismatch, "not a HILX index (bad magic)");
    }
    if (bytes.size() < 12) {
        throw FormatError(FormatErrorKind::truncated, "index file truncated in the header");
    }
    Reader r(bytes.subspan(4, 4));
    const auto version = r.u32();
    if (version != index_format_version) {
        throw FormatError(
            FormatErrorKind::version_mismatch,
            "unsupported index format version " + std::to_string(version));
    }
}

}  // namespace

const char* to_string(FormatErrorKind kind)
{
    switch (kind) {
    case FormatErrorKind::magic_mismatch: return "magic mismatch";
    case FormatErrorKind::version_mismatch: return "version mismatch";
    case FormatErrorKind::truncated: return "truncated";
    case FormatErrorKind::checksum_mismatch: return "checksum mismatch";
    case FormatErrorKind::malformed: return "malformed";
    }
    return "unknown";
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks for very large buffers
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1U << 30));
        crc = crc32(crc, bytes.data() + offset, chunk);
        offset += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize_index(const Index& index)
{
    const auto& m = index.metadata();
    Writer w;
    w.raw(index_magic, 4);
    w.u32(index_format_version);
    w.u8(static_cast<std::uint8_t>(m.kind));
    w.u16(static_cast<std::uint16_t>(m.order));
    w.u8(static_cast<std::uint8_t>(m.normalization));
    w.f64(m.laguerre_scale);
    w.u64(m.document_count);
    w.u64(m.vocabulary_size);
    w.u64(m.tokenizer_hash);
    for (const auto& d : index.documents()) {
        w.u64(d.doc_id);
        w.u64(d.length);
        w.str(d.external_name);
    }
    for (const auto& term : index.vocabulary()) {
        w.str(term);
    }
    for (const auto& list : index.all_postings()) {
        w.u64(list.size());
        for (const auto& p : list) {
            w.u64(p.doc_id);
            w.u32(p.term_frequency);
            for (double c : p.coeffs.coeffs) {
                w.f64(c);
            }
        }
    }
    w.u32(crc32_of(w.bytes()));
    return w.take();
}

Index deserialize_index(std::span<const std::uint8_t> bytes)
{
    check_header(bytes);
    const auto body = bytes.first(bytes.size() - 4);
    const bool crc_ok = crc32_of(body) == trailing_crc(bytes);
    try {
        Index index = parse_body(crc_ok ? body : bytes);
        if (!crc_ok) {
            throw FormatError(FormatErrorKind::checksum_mismatch, "index checksum mismatch");
        }
        return index;
    } catch (const OutOfData&) {
        if (crc_ok) {
            throw FormatError(FormatErrorKind::malformed, "index structure overruns its data");
        }
        throw FormatError(FormatErrorKind::truncated, "index file truncated");
    } catch (const FormatError& e) {
        if (!crc_ok && e.kind() == FormatErrorKind::malformed) {
            throw FormatError(FormatErrorKind::checksum_mismatch, "index checksum mismatch");
        }
        throw;
    }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) {
        throw Error(ErrorCode::io, "cannot read " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::io, "cannot write " + path.string());
    }
}

void save_index(const Index& index, const std::filesystem::path& path)
{
    write_file(path, serialize_index(index));
}

Index load_index(const std::filesystem::path& path) { return deserialize_index(read_file(path)); }

bool AuditReport::passed() const
{
    for (const auto& c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

AuditReport audit_index_bytes(std::span<const std::uint8_t> bytes)
{
    AuditReport report;
    AuditCheck checksum{"checksum", true, ""};
    if (bytes.size() >= 4) {
        const auto stored = trailing_crc(bytes);
        const auto computed = crc32_of(bytes.first(bytes.size() - 4));
        if (stored != computed) {
            checksum.passed = false;
            std::ostringstream msg;
            msg << std::hex << "stored " << stored << ", computed " << computed;
            checksum.detail = msg.str();
        }
    } else {
        checksum.passed = false;
        checksum.detail = "file shorter than a checksum";
    }
    report.checks.push_back(checksum);

    std::optional<Index> index;
    AuditCheck structure{"structure", true, ""};
    try {
        index.emplace(deserialize_index(bytes));
    } catch (const FormatError& e) {
        structure.passed = false;
        structure.detail = std::string(to_string(e.kind())) + ": " + e.what();
    }
    report.checks.push_back(structure);
    if (!index) {
        return report;
    }

    AuditCheck lengths{"vector lengths", true, ""};
    AuditCheck bessel{"bessel bound", true, ""};
    std::size_t bessel_failures = 0;
    const auto expected = index->basis().size();
    for (std::size_t t = 0; t < index->vocabulary().size(); ++t) {
        for (const auto& p : index->postings_for(static_cast<TermId>(t))) {
            const auto& doc = index->document(p.doc_id);
            if (p.coeffs.coeffs.size() != expected || p.term_frequency > doc.length) {
                lengths.passed = false;
                lengths.detail = "term '" + index->term(static_cast<TermId>(t)) + "' in document "
                    + std::to_string(p.doc_id);
            }
            const double bound = static_cast<double>(p.term_frequency) / static_cast<double>(doc.length);
            const double energy = squared_norm(p.coeffs);
            if (!std::isfinite(energy) || energy > bound * (1.0 + bessel_slack)) {
                if (bessel_failures++ == 0) {
                    std::ostringstream msg;
                    msg.precision(17);
                    msg << "term '" << index->term(static_cast<TermId>(t)) << "' in document " << p.doc_id
                        << ": sum of squares " << energy << " exceeds tf/L " << bound;
                    bessel.detail = msg.str();
                }
                bessel.passed = false;
            }
        }
    }
    if (bessel_failures > 1) {
        bessel.detail += " (" + std::to_string(bessel_failures) + " postings in total)";
    }
    report.checks.push_back(lengths);
    report.checks.push_back(bessel);
    return report;
}

}  // namespace hir
