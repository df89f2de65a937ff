#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "hilbert_ir/basis.hpp"
#include "hilbert_ir/clustering.hpp"
#include "hilbert_ir/error.hpp"
#include "hilbert_ir/expansion.hpp"
#include "hilbert_ir/index.hpp"
#include "hilbert_ir/index_io.hpp"
#include "hilbert_ir/ranking.hpp"

namespace hir::cli {

namespace {

enum class OutputFormat { table, csv, jsonl };

struct Options {
    std::string corpus;
    std::string index;
    std::string basis = "legendre";
    unsigned order = default_order;
    double lambda = 0.0;
    bool no_stopwords = false;

    std::string query;
    std::string objective = "none";
    std::size_t top = 10;
    std::size_t depth = default_rerank_depth;
    std::string mode = "rerank";
    double weight = 1.0;
    std::string format = "table";

    std::size_t docs = 15;
    std::size_t terms = 40;
    std::size_t min_df = 2;
    double beta = 0.4;

    std::string doc;
    double threshold = 0.25;
    double cutoff = default_significance_cutoff;

    double length = 200.0;
    double position = 0.0;
    std::size_t samples = 201;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::string positions;
    std::size_t curve_samples = 0;
    bool normalized = false;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

OutputFormat parse_format(const std::string& name)
{
    if (name == "table") {
        return OutputFormat::table;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "jsonl" || name == "json-lines") {
        return OutputFormat::jsonl;
    }
    throw Error(ErrorCode::usage, "unknown output format '" + name + "'");
}

BasisSpec raw_basis(const Options& o, double length)
{
    const auto kind = parse_basis_kind(o.basis);
    switch (kind) {
    case BasisKind::fourier: return BasisSpec::fourier(o.order, length);
    case BasisKind::legendre: return BasisSpec::legendre(o.order, length);
    case BasisKind::laguerre: return BasisSpec::laguerre(o.order, length, o.lambda);
    }
    return BasisSpec::legendre(o.order, length);
}

std::vector<std::string> query_terms(const std::string& text)
{
    std::vector<std::string> terms;
    for (auto& t : tokenize(text, TokenizerConfig::none())) {
        terms.push_back(std::move(t.term));
    }
    if (terms.empty()) {
        throw Error(ErrorCode::usage, "query has no terms");
    }
    return terms;
}

void print_ranking(const Index& index, const RankedList& list, OutputFormat format, std::ostream& out)
{
    switch (format) {
    case OutputFormat::table:
        fmt::print(out, "{:>4}  {:>6}  {:<24}  {:>12}  {:>12}  {:>12}\n", "rank", "doc", "name", "baseline",
                   "positional", "combined");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list[i];
            fmt::print(out, "{:>4}  {:>6}  {:<24}  {:>12.6f}  {:>12.6f}  {:>12.6f}\n", i + 1, e.doc_id,
                       index.document(e.doc_id).external_name, e.baseline_score, e.positional_score,
                       e.combined_score);
        }
        break;
    case OutputFormat::csv:
        out << "rank,doc_id,name,baseline_score,positional_score,combined_score\r\n";
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list[i];
            out << i + 1 << ',' << e.doc_id << ',' << csv_field(index.document(e.doc_id).external_name) << ','
                << num(e.baseline_score) << ',' << num(e.positional_score) << ',' << num(e.combined_score)
                << "\r\n";
        }
        break;
    case OutputFormat::jsonl:
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list[i];
            nlohmann::json row = {{"rank", i + 1},
                                  {"doc_id", e.doc_id},
                                  {"name", index.document(e.doc_id).external_name},
                                  {"baseline_score", e.baseline_score},
                                  {"positional_score", e.positional_score},
                                  {"combined_score", e.combined_score}};
            out << row.dump() << '\n';
        }
        break;
    }
}

int cmd_index(const Options& o, std::ostream& out)
{
    const auto docs = read_corpus(o.corpus);
    if (docs.empty()) {
        throw Error(ErrorCode::usage, "corpus directory " + o.corpus + " contains no documents");
    }
    IndexOptions options;
    options.kind = parse_basis_kind(o.basis);
    options.order = o.order;
    options.laguerre_scale = o.lambda;
    if (o.no_stopwords) {
        options.tokenizer = TokenizerConfig::none();
    }
    const auto index = build_index(docs, options);
    const auto bytes = serialize_index(index);
    write_file(o.index, bytes);
    fmt::print(out, "documents: {}\nvocabulary: {}\nindex bytes: {}\n", index.documents().size(),
               index.vocabulary().size(), bytes.size());
    return success;
}

int cmd_search(const Options& o, std::ostream& out)
{
    const auto format = parse_format(o.format);
    const auto index = load_index(o.index);
    const auto terms = query_terms(o.query);
    const bool positional = o.objective != "none" && o.mode != "baseline";
    const auto baseline = baseline_rank(index, terms, positional ? std::max(o.top, o.depth) : o.top);
    RankedList ranking = baseline;
    if (positional) {
        const auto objective = ObjectiveSpec::parse(o.objective);
        if (o.mode == "rerank") {
            ranking = objective_rerank(index, terms, baseline, objective, o.depth);
        } else if (o.mode == "blend") {
            ranking = blend_rank(index, terms, baseline, objective, o.weight);
        } else {
            throw Error(ErrorCode::usage, "unknown ranking mode '" + o.mode + "'");
        }
    }
    if (ranking.size() > o.top) {
        ranking.resize(o.top);
    }
    print_ranking(index, ranking, format, out);
    return success;
}

int cmd_expand(const Options& o, std::ostream& out)
{
    const auto format = parse_format(o.format);
    const auto index = load_index(o.index);
    const auto terms = query_terms(o.query);
    ExpansionConfig config;
    config.num_docs = o.docs;
    config.num_terms = o.terms;
    config.min_doc_frequency = o.min_df;
    config.beta = o.beta;
    config.result_count = o.top;
    const auto result = expand_query(index, terms, config);
    switch (format) {
    case OutputFormat::table:
        out << "expanded terms:\n";
        for (const auto& t : result.expanded_terms) {
            fmt::print(out, "  {:<24} {:.6f}\n", t.term, t.score);
        }
        out << "ranking:\n";
        print_ranking(index, result.final_ranking, format, out);
        break;
    case OutputFormat::csv:
        out << "term,score\r\n";
        for (const auto& t : result.expanded_terms) {
            out << csv_field(t.term) << ',' << num(t.score) << "\r\n";
        }
        out << "\r\n";
        print_ranking(index, result.final_ranking, format, out);
        break;
    case OutputFormat::jsonl:
        for (const auto& t : result.expanded_terms) {
            out << nlohmann::json{{"expanded_term", t.term}, {"score", t.score}}.dump() << '\n';
        }
        print_ranking(index, result.final_ranking, format, out);
        break;
    }
    return success;
}

int cmd_cluster(const Options& o, std::ostream& out)
{
    const auto format = parse_format(o.format);
    const auto index = load_index(o.index);
    std::optional<DocId> doc = index.find_document(o.doc);
    if (!doc) {
        DocId id = 0;
        auto [ptr, ec] = std::from_chars(o.doc.data(), o.doc.data() + o.doc.size(), id);
        if (ec != std::errc() || ptr != o.doc.data() + o.doc.size()) {
            throw Error(ErrorCode::lookup, "no document named '" + o.doc + "'");
        }
        doc = id;
    }
    const auto clusters = cluster_terms(index, *doc, o.threshold, o.cutoff);
    switch (format) {
    case OutputFormat::table:
        fmt::print(out, "{:>7}  {:>4}  {:>12}  {:>12}  {:<11}  {}\n", "cluster", "size", "radius", "xi", "significant",
                   "terms");
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            const auto& c = clusters[i];
            fmt::print(out, "{:>7}  {:>4}  {:>12.6g}  {:>12.6g}  {:<11}  {}\n", i, c.terms.size(), c.radius,
                       c.significance, c.significant ? "yes" : "no", fmt::join(c.terms, " "));
        }
        break;
    case OutputFormat::csv:
        out << "cluster,term,radius,significance,significant\r\n";
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (const auto& t : clusters[i].terms) {
                out << i << ',' << csv_field(t) << ',' << num(clusters[i].radius) << ','
                    << num(clusters[i].significance) << ',' << (clusters[i].significant ? "true" : "false")
                    << "\r\n";
            }
        }
        break;
    case OutputFormat::jsonl:
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            const auto& c = clusters[i];
            out << nlohmann::json{{"cluster", i},
                                  {"terms", c.terms},
                                  {"radius", c.radius},
                                  {"significance", c.significance},
                                  {"significant", c.significant}}
                       .dump()
                << '\n';
        }
        break;
    }
    return success;
}

int cmd_kernel(const Options& o, std::ostream& out)
{
    const auto spec = raw_basis(o, o.length);
    if (o.samples < 1) {
        throw Error(ErrorCode::usage, "--samples must be at least 1");
    }
    const double lo = o.x_min.value_or(0.0);
    const double hi = o.x_max.value_or(o.length);
    out << "x,kernel\r\n";
    for (std::size_t i = 0; i < o.samples; ++i) {
        const double x = o.samples == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.samples - 1);
        out << num(x) << ',' << num(projection_kernel(spec, o.position, x).value) << "\r\n";
    }
    return success;
}

std::vector<std::uint32_t> parse_positions(const std::string& text)
{
    std::vector<std::uint32_t> positions;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::uint32_t p = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), p);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw Error(ErrorCode::usage, "bad position '" + item + "'");
        }
        positions.push_back(p);
    }
    return positions;
}

std::uint32_t doc_length_of(const Options& o)
{
    if (!(o.length >= 1.0) || o.length != std::floor(o.length) || o.length > 4294967295.0) {
        throw Error(ErrorCode::usage, "--length must be a positive integer token count");
    }
    return static_cast<std::uint32_t>(o.length);
}

int cmd_coeffs(const Options& o, std::ostream& out)
{
    const auto length = doc_length_of(o);
    const auto spec = raw_basis(o, o.normalized ? 1.0 : o.length);
    const TermDistribution dist{PositionSet(parse_positions(o.positions), length)};
    const auto cv = o.normalized ? expand_normalized(dist, spec) : expand(dist, spec);
    if (o.curve_samples > 0) {
        const double lo = o.x_min.value_or(0.0);
        const double hi = o.x_max.value_or(spec.domain_length);
        out << "x,value\r\n";
        for (std::size_t i = 0; i < o.curve_samples; ++i) {
            const double x = o.curve_samples == 1
                ? lo
                : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.curve_samples - 1);
            out << num(x) << ',' << num(reconstruct(cv, x)) << "\r\n";
        }
        return success;
    }
    out << "k,gamma\r\n";
    for (std::size_t k = 0; k < cv.size(); ++k) {
        out << k << ',' << num(cv[k]) << "\r\n";
    }
    return success;
}

int cmd_sphere(const Options& o, std::ostream& out)
{
    const auto length = doc_length_of(o);
    const auto spec = raw_basis(o, o.normalized ? 1.0 : o.length);
    const auto vectors = enumerate_sphere(spec, length);
    out << "subset";
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out << ",gamma_" << k;
    }
    out << "\r\n";
    for (std::size_t mask = 0; mask < vectors.size(); ++mask) {
        out << mask;
        for (double c : vectors[mask].coeffs) {
            out << ',' << num(c);
        }
        out << "\r\n";
    }
    return success;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const auto report = audit_index_bytes(read_file(o.index));
    for (const auto& check : report.checks) {
        out << (check.passed ? "ok    " : "FAIL  ") << check.name;
        if (!check.detail.empty()) {
            out << ": " << check.detail;
        }
        out << '\n';
    }
    return report.passed() ? success : data_failure;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::io: return io_failure;
    case ErrorCode::format:
    case ErrorCode::empty_distribution:
    case ErrorCode::internal: return data_failure;
    default: return usage_failure;
    }
}

void add_basis_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--basis", o.basis, "fourier, legendre or laguerre")->capture_default_str();
    cmd->add_option("--order", o.order, "truncation order n (even for fourier)")->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "laguerre scale (default 0.075 * length)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Positional retrieval with truncated orthonormal expansions", "hilx"};
    app.require_subcommand(1);

    auto* index = app.add_subcommand("index", "build an index from a directory of text files");
    index->add_option("--corpus", o.corpus, "corpus directory")->required();
    index->add_option("--index", o.index, "index file to write")->required();
    add_basis_flags(index, o);
    index->add_flag("--no-stopwords", o.no_stopwords, "keep every token");

    auto* search = app.add_subcommand("search", "BM25 search with optional objective reranking");
    search->add_option("--index", o.index)->required();
    search->add_option("--query", o.query)->required();
    search->add_option("--objective", o.objective, "none, first-third, last-third or interval:LO,HI")
        ->capture_default_str();
    search->add_option("--top", o.top)->capture_default_str();
    search->add_option("--depth", o.depth, "rerank depth")->capture_default_str();
    search->add_option("--mode", o.mode, "rerank, blend or baseline")
        ->capture_default_str()
        ->check(CLI::IsMember({"rerank", "blend", "baseline"}));
    search->add_option("--weight", o.weight, "positional weight in blend mode")->capture_default_str();
    search->add_option("--format", o.format, "table, csv or jsonl")->capture_default_str();

    auto* expand = app.add_subcommand("expand", "pseudo-relevance query expansion");
    expand->add_option("--index", o.index)->required();
    expand->add_option("--query", o.query)->required();
    expand->add_option("--docs", o.docs, "top documents inspected")->capture_default_str();
    expand->add_option("--terms", o.terms, "expansion terms kept")->capture_default_str();
    expand->add_option("--min-df", o.min_df)->capture_default_str();
    expand->add_option("--beta", o.beta, "weight of expansion terms")->capture_default_str();
    expand->add_option("--top", o.top)->capture_default_str();
    expand->add_option("--format", o.format)->capture_default_str();

    auto* cluster = app.add_subcommand("cluster", "cluster the terms of one document");
    cluster->add_option("--index", o.index)->required();
    cluster->add_option("--doc", o.doc, "document name or id")->required();
    cluster->add_option("--threshold", o.threshold, "complete-linkage cut")->capture_default_str();
    cluster->add_option("--cutoff", o.cutoff, "significance cutoff on xi")->capture_default_str();
    cluster->add_option("--format", o.format)->capture_default_str();

    auto* kernel = app.add_subcommand("kernel", "sample the projection kernel p_n(y, x) as CSV");
    add_basis_flags(kernel, o);
    kernel->add_option("--length", o.length, "domain length L")->capture_default_str();
    kernel->add_option("--position", o.position, "kernel centre y")->required();
    kernel->add_option("--samples", o.samples)->capture_default_str();
    kernel->add_option("--x-min", o.x_min);
    kernel->add_option("--x-max", o.x_max);

    auto* coeffs = app.add_subcommand("coeffs", "expansion coefficients (or the truncated curve) of a position set");
    add_basis_flags(coeffs, o);
    coeffs->add_option("--length", o.length, "document length in tokens")->required();
    coeffs->add_option("--positions", o.positions, "comma separated 1-based positions")->required();
    coeffs->add_option("--samples", o.curve_samples, "sample the truncated curve instead");
    coeffs->add_option("--x-min", o.x_min);
    coeffs->add_option("--x-max", o.x_max);
    coeffs->add_flag("--normalized", o.normalized, "expand on [0, 1]");

    auto* sphere = app.add_subcommand("sphere", "coefficient vectors of all 2^L term distributions as CSV");
    add_basis_flags(sphere, o);
    sphere->add_option("--length", o.length, "document length (<= 16)")->required();
    sphere->add_flag("--normalized", o.normalized, "expand on [0, 1]");

    auto* verify = app.add_subcommand("verify", "audit an index file");
    verify->add_option("--index", o.index)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? success : usage_failure;
    }

    try {
        if (index->parsed()) {
            return cmd_index(o, out);
        }
        if (search->parsed()) {
            return cmd_search(o, out);
        }
        if (expand->parsed()) {
            return cmd_expand(o, out);
        }
        if (cluster->parsed()) {
            return cmd_cluster(o, out);
        }
        if (kernel->parsed()) {
            return cmd_kernel(o, out);
        }
        if (coeffs->parsed()) {
            return cmd_coeffs(o, out);
        }
        if (sphere->parsed()) {
            return cmd_sphere(o, out);
        }
        if (verify->parsed()) {
            return cmd_verify(o, out);
        }
    } catch (const FormatError& e) {
        err << "hilx: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return data_failure;
    } catch (const Error& e) {
        err << "hilx: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "hilx: " << e.what() << '\n';
        return data_failure;
    }
    return usage_failure;
}

}  // namespace hir::cli
