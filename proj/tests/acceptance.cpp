// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cli.hpp"
#include "hilbert_ir/clustering.hpp"
#include "hilbert_ir/expansion.hpp"
#include "hilbert_ir/index_io.hpp"
#include "oracle.hpp"

using namespace hir;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double coefficient_rel_tol = 1e-9;
constexpr int coefficient_panels = 10000;
constexpr double coefficient_time_limit = 30.0;
constexpr double gram_tol = 1e-6;
constexpr double parseval_floor = 0.90;
constexpr double kernel_zero_tol = 1e-9;
constexpr double christoffel_tol = 1e-9;
constexpr double sphere_slack = 1e-12;
constexpr double sphere_time_limit = 5.0;
constexpr double radius_identity_tol = 1e-9;
constexpr double mirror_tol = 1e-9;

struct Outcome {
    bool passed = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

BasisSpec family(BasisKind kind, unsigned order, double length)
{
    switch (kind) {
    case BasisKind::fourier: return BasisSpec::fourier(order, length);
    case BasisKind::legendre: return BasisSpec::legendre(order, length);
    case BasisKind::laguerre: return BasisSpec::laguerre(order, length);
    }
    return BasisSpec::legendre(order, length);
}

constexpr BasisKind all_kinds[] = {BasisKind::fourier, BasisKind::legendre, BasisKind::laguerre};

std::string words(const std::string& tag, std::uint32_t length, const std::map<std::uint32_t, std::string>& placed)
{
    std::string text;
    for (std::uint32_t p = 1; p <= length; ++p) {
        auto it = placed.find(p);
        text += (it != placed.end() ? it->second : tag + "w" + std::to_string(p)) + " ";
    }
    return text;
}

IndexOptions plain(BasisKind kind, unsigned order)
{
    IndexOptions opts;
    opts.kind = kind;
    opts.order = order;
    opts.tokenizer = TokenizerConfig::none();
    return opts;
}

Outcome ac1_coefficients()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (auto kind : all_kinds) {
        for (int i = 0; i < 100; ++i) {
            const auto length = static_cast<std::uint32_t>(1 + rng() % 50);
            unsigned order = static_cast<unsigned>(rng() % 13);
            if (kind == BasisKind::fourier) {
                order &= ~1U;
            }
            const auto spec = family(kind, order, length);
            const auto positions = oracle::random_positions(rng, length);
            const auto got = expand({PositionSet(positions, length)}, spec);
            const auto want = oracle::quadrature_coefficients(spec, positions, length, coefficient_panels);
            worst = std::max(worst, oracle::relative_error(got.coeffs, want));
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= coefficient_rel_tol && elapsed <= coefficient_time_limit,
            fmt::format("max relative error {:.3g} (tol {:g}), {:.1f} s (limit {:g} s)", worst, coefficient_rel_tol,
                        elapsed, coefficient_time_limit)};
}

Outcome ac2_orthonormality()
{
    const unsigned order = 12;
    double worst = 0.0;
    for (auto kind : all_kinds) {
        const auto spec = family(kind, order, 1.0);
        // the Laguerre weight is below 1e-40 past 200 lambda
        const double hi = kind == BasisKind::laguerre ? 200.0 * spec.laguerre_scale : spec.domain_length;
        const int panels = kind == BasisKind::laguerre ? 200000 : 20000;
        const double h = hi / panels;
        std::vector<std::vector<double>> gram(order + 1, std::vector<double>(order + 1, 0.0));
        std::vector<double> phi(order + 1);
        for (int i = 0; i <= panels; ++i) {
            const double x = i * h;
            const double w = h / 3.0 * (i == 0 || i == panels ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
            eval_basis(spec, x, phi);
            for (unsigned j = 0; j <= order; ++j) {
                for (unsigned k = 0; k <= order; ++k) {
                    gram[j][k] += w * phi[j] * phi[k];
                }
            }
        }
        for (unsigned j = 0; j <= order; ++j) {
            for (unsigned k = 0; k <= order; ++k) {
                worst = std::max(worst, std::fabs(gram[j][k] - (j == k ? 1.0 : 0.0)));
            }
        }
    }
    return {worst <= gram_tol, fmt::format("max |G - I| {:.3g} (tol {:g})", worst, gram_tol)};
}

Outcome ac3_bessel_parseval()
{
    std::mt19937_64 rng(103);
    std::size_t violations = 0;
    std::size_t checked = 0;
    double lowest_ratio = 1.0;
    for (auto kind : all_kinds) {
        for (int i = 0; i < 100; ++i) {
            const auto length = static_cast<std::uint32_t>(1 + rng() % 50);
            const TermDistribution d{PositionSet(oracle::random_positions(rng, length), length)};
            const double bound = d.squared_norm();
            const unsigned order = kind == BasisKind::laguerre ? 60 : 200;
            const auto cv = expand(d, family(kind, order, length));
            double partial = 0.0;
            for (double g : cv.coeffs) {
                const double next = partial + g * g;
                violations += (next < partial || next > bound) ? 1 : 0;
                partial = next;
                ++checked;
            }
        }
    }
    for (auto kind : {BasisKind::fourier, BasisKind::legendre}) {
        for (int i = 0; i < 100; ++i) {
            const std::uint32_t length = 20;
            const TermDistribution d{PositionSet(oracle::random_positions(rng, length), length)};
            const auto cv = expand(d, family(kind, 200, length));
            lowest_ratio = std::min(lowest_ratio, squared_norm(cv) / d.squared_norm());
        }
    }
    return {violations == 0 && lowest_ratio >= parseval_floor,
            fmt::format("{} of {} partial sums violate monotonicity or the bound; lowest n=200 L=20 ratio {:.4f} "
                        "(floor {:.2f})",
                        violations, checked, lowest_ratio, parseval_floor)};
}

Outcome ac4_kernel_zeros()
{
    const auto spec = BasisSpec::fourier(6, 200.0);
    double worst = 0.0;
    for (double y : {20.0, 100.0}) {
        for (double sign : {-1.0, 1.0}) {
            worst = std::max(worst, std::fabs(projection_kernel(spec, y, y + sign * 200.0 / 13.0).value));
        }
    }
    return {worst <= kernel_zero_tol, fmt::format("max |p(y, y +- 200/13)| {:.3g} (tol {:g})", worst, kernel_zero_tol)};
}

Outcome ac5_christoffel_darboux()
{
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> pos(0.0, 200.0);
    double worst = 0.0;
    for (const auto& spec : {BasisSpec::legendre(6, 200.0), BasisSpec::laguerre(6, 200.0, 15.0)}) {
        for (int i = 0; i < 1000; ++i) {
            const double y = pos(rng);
            const double x = pos(rng);
            worst = std::max(worst, std::fabs(projection_kernel(spec, y, x).value - oracle::direct_kernel(spec, y, x)));
        }
    }
    return {worst <= christoffel_tol,
            fmt::format("max |closed form - direct sum| {:.3g} over 2000 pairs (tol {:g})", worst, christoffel_tol)};
}

Outcome ac6_term_sphere()
{
    const auto start = Clock::now();
    const auto spec = BasisSpec::legendre(2, 9.0);
    const auto sphere = term_sphere(spec);
    const auto vectors = enumerate_sphere(spec, 9);
    double farthest = 0.0;
    for (const auto& v : vectors) {
        farthest = std::max(farthest, norm_difference(v, sphere.center));
    }
    const bool center_ok = sphere.center.coeffs == std::vector<double>{1.5, 0.0, 0.0} && sphere.radius == 1.5;

    // integral of (1/2 - f)^2, exact cell by cell since f is constant on each token
    std::mt19937_64 rng(106);
    std::size_t mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        const auto length = static_cast<std::uint32_t>(1 + rng() % 200);
        const TermDistribution d{PositionSet(oracle::random_positions(rng, length), length)};
        double integral = 0.0;
        for (std::uint32_t cell = 0; cell < length; ++cell) {
            const double gap = 0.5 - indicator_value(d, cell + 0.5);
            integral += gap * gap;
        }
        const double r0 = term_sphere(BasisSpec::legendre(2, length)).radius;
        mismatches += (integral != length / 4.0 || std::fabs(r0 * r0 - length / 4.0) > 1e-15 * length) ? 1 : 0;
    }
    const double elapsed = seconds_since(start);
    const bool passed = vectors.size() == 512 && center_ok && farthest <= 1.5 * (1.0 + sphere_slack) && mismatches == 0
        && elapsed <= sphere_time_limit;
    return {passed,
            fmt::format("{} vectors, farthest {:.17g} from center (radius 1.5, slack {:g}); L/4 identity failed {} of "
                        "100; {:.2f} s (limit {:g} s)",
                        vectors.size(), farthest, sphere_slack, mismatches, elapsed, sphere_time_limit)};
}

Outcome ac7_radius_identity()
{
    std::mt19937_64 rng(107);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto spec = BasisSpec::legendre(static_cast<unsigned>(rng() % 13), 1.0);
        const auto q = 1 + rng() % 100;
        std::vector<CoefficientVector> pts;
        for (std::size_t j = 0; j < q; ++j) {
            CoefficientVector v = CoefficientVector::zero(spec);
            for (auto& c : v.coeffs) {
                c = normal(rng);
            }
            pts.push_back(std::move(v));
        }
        worst = std::max(worst, std::fabs(centroid_radius(pts) - pairwise_radius(pts)));
    }
    return {worst <= radius_identity_tol,
            fmt::format("max |centroid - pairwise| {:.3g} (tol {:g})", worst, radius_identity_tol)};
}

Outcome ac8_objective_ranking()
{
    // 10 documents with the query term in the first third, 10 with it in the
    // last; equal lengths and occurrence counts so only placement differs
    const std::uint32_t length = 60;
    std::mt19937_64 rng(108);
    std::vector<SourceDocument> docs;
    std::vector<SourceDocument> mirrored;
    std::uniform_int_distribution<std::uint32_t> first(1, length / 3);
    std::uniform_int_distribution<std::uint32_t> last(2 * length / 3 + 1, length);
    for (int i = 0; i < 20; ++i) {
        auto& pick = i < 10 ? first : last;
        std::map<std::uint32_t, std::string> placed;
        while (placed.size() < 2) {
            placed[pick(rng)] = "q";
        }
        std::map<std::uint32_t, std::string> flipped;
        for (const auto& [p, w] : placed) {
            flipped[length + 1 - p] = w;
        }
        const auto tag = "d" + std::to_string(i);
        docs.push_back({tag, words(tag, length, placed)});
        mirrored.push_back({tag, words(tag, length, flipped)});
    }
    for (int i = 0; i < 5; ++i) {
        docs.push_back({"f" + std::to_string(i), "filler " + std::to_string(i)});
        mirrored.push_back(docs.back());
    }

    const std::vector<std::string> q{"q"};
    std::vector<std::string> problems;
    double mirror_worst = 0.0;
    for (auto kind : {BasisKind::fourier, BasisKind::legendre}) {
        const auto idx = build_index(docs, plain(kind, 6));
        const auto base = baseline_rank(idx, q, 100);
        const auto check = [&](const ObjectiveSpec& objective, bool first_wins, const char* label) {
            const auto ranked = objective_rerank(idx, q, base, objective, base.size());
            for (std::size_t i = 0; i < ranked.size(); ++i) {
                const bool in_first = ranked[i].doc_id < 10;
                const bool expect_first = first_wins ? i < 10 : i >= 10;
                if (in_first != expect_first) {
                    problems.push_back(fmt::format("{} {}", to_string(kind), label));
                    return;
                }
            }
        };
        check(ObjectiveSpec::first_third(), true, "first-third");
        check(ObjectiveSpec::last_third(), false, "last-third");

        const auto mir = build_index(mirrored, plain(kind, 6));
        const auto f = objective_coefficients(idx.metadata(), ObjectiveSpec::first_third());
        const auto l = objective_coefficients(mir.metadata(), ObjectiveSpec::last_third());
        for (DocId d = 0; d < 20; ++d) {
            mirror_worst = std::max(mirror_worst, std::fabs(similarity(query_distribution(idx, d, q), f)
                                                            - similarity(query_distribution(mir, d, q), l)));
        }
    }
    std::string detail = problems.empty() ? "objective order separates thirds" : "misordered:";
    for (const auto& p : problems) {
        detail += " " + p;
    }
    return {problems.empty() && mirror_worst <= mirror_tol,
            fmt::format("{} (fourier, legendre n=6); mirror deviation {:.3g} (tol {:g})", detail, mirror_worst,
                        mirror_tol)};
}

Outcome ac9_query_expansion()
{
    std::vector<SourceDocument> docs;
    const std::uint32_t q_at[] = {4, 20, 9, 33, 15};
    for (int i = 0; i < 5; ++i) {
        const std::uint32_t p = q_at[i];
        const auto tag = "d" + std::to_string(i);
        docs.push_back({tag, words(tag, 40, {{p, "q"}, {p + 1, "t"}, {(p + 20) % 40 + 1, "far"}, {(p + 12) % 40 + 1, "mid"}})});
    }
    docs.push_back({"held", words("held", 30, {{10, "t"}})});
    for (int i = 0; i < 10; ++i) {
        docs.push_back({"f" + std::to_string(i), "filler text number " + std::to_string(i)});
    }
    const auto idx = build_index(docs, plain(BasisKind::fourier, 6));
    const DocId held = *idx.find_document("held");
    ExpansionConfig config;
    config.num_docs = 5;
    const auto result = expand_query(idx, std::vector<std::string>{"q"}, config);

    const auto contains = [&](const RankedList& list) {
        return std::any_of(list.begin(), list.end(), [&](const RankedEntry& e) { return e.doc_id == held; });
    };
    const bool top = !result.expanded_terms.empty() && result.expanded_terms.front().term == "t";
    const bool retrieved = contains(result.final_ranking) && !contains(result.baseline);
    return {top && retrieved,
            fmt::format("top expansion term '{}'; held-out document in baseline: {}, after expansion: {}",
                        result.expanded_terms.empty() ? "" : result.expanded_terms.front().term,
                        contains(result.baseline), contains(result.final_ranking))};
}

struct TempDir {
    fs::path path;

    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("hilx_acceptance_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int hilx(const std::vector<std::string>& args, std::string* out_text = nullptr)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    if (out_text) {
        *out_text = out.str();
    }
    return code;
}

void write_corpus(const fs::path& dir)
{
    fs::create_directories(dir);
    std::ofstream(dir / "a.txt") << "The quick brown fox jumps over the lazy dog near the river bank.";
    std::ofstream(dir / "b.txt") << "A lazy afternoon by the river: the dog sleeps while the fox watches.";
    std::ofstream(dir / "c.txt") << "Quick rivers carry brown water past foxes, dogs and sleeping farmers.";
    std::ofstream(dir / "d.txt") << "Farmers watch the weather; rivers rise and the bank floods.";
}

Outcome ac10_round_trip()
{
    TempDir tmp;
    write_corpus(tmp.path / "corpus");
    const auto corpus = read_corpus(tmp.path / "corpus");
    bool lossless = true;
    for (auto kind : all_kinds) {
        IndexOptions opts;
        opts.kind = kind;
        const auto idx = build_index(corpus, opts);
        const auto path = tmp.path / ("rt_" + std::string(to_string(kind)) + ".hilx");
        save_index(idx, path);
        const auto back = load_index(path);
        lossless = lossless && back == idx && serialize_index(back) == read_file(path);
    }

    const auto path = (tmp.path / "fresh.hilx").string();
    const bool built = hilx({"index", "--corpus", (tmp.path / "corpus").string(), "--index", path}) == 0;
    const int fresh = hilx({"verify", "--index", path});
    const auto bytes = read_file(path);

    auto flipped = bytes;
    flipped[flipped.size() / 2] ^= 0x04;
    write_file(tmp.path / "flip.hilx", flipped);

    auto bessel = bytes;
    const double huge = 10.0;
    std::memcpy(bessel.data() + bessel.size() - 12, &huge, 8);
    const auto crc = crc32_of(std::span(bessel).first(bessel.size() - 4));
    for (int i = 0; i < 4; ++i) {
        bessel[bessel.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
    }
    write_file(tmp.path / "bessel.hilx", bessel);

    write_file(tmp.path / "cut.hilx", std::span(bytes).first(bytes.size() - 20));

    const int flip_code = hilx({"verify", "--index", (tmp.path / "flip.hilx").string()});
    const int bessel_code = hilx({"verify", "--index", (tmp.path / "bessel.hilx").string()});
    const int cut_code = hilx({"verify", "--index", (tmp.path / "cut.hilx").string()});
    const int want = cli::data_failure;
    return {lossless && built && fresh == 0 && flip_code == want && bessel_code == want && cut_code == want,
            fmt::format("round trip lossless: {}; verify exit codes fresh {}, byte flip {}, bessel {}, truncated {} "
                        "(expected 0, {}, {}, {})",
                        lossless, fresh, flip_code, bessel_code, cut_code, want, want, want)};
}

Outcome ac11_determinism()
{
    TempDir tmp;
    write_corpus(tmp.path / "corpus");
    const auto session = [&](const std::string& name) {
        const auto index = (tmp.path / name).string();
        std::string transcript;
        std::string out;
        const std::vector<std::vector<std::string>> steps{
            {"index", "--corpus", (tmp.path / "corpus").string(), "--index", index},
            {"search", "--index", index, "--query", "lazy river", "--objective", "first-third", "--format", "csv"},
            {"search", "--index", index, "--query", "fox", "--format", "jsonl"},
            {"expand", "--index", index, "--query", "river", "--format", "jsonl"},
            {"cluster", "--index", index, "--doc", "a.txt", "--format", "csv"},
        };
        for (const auto& args : steps) {
            const int code = hilx(args, &out);
            transcript += std::to_string(code) + "\n" + out;
        }
        const auto bytes = read_file(index);
        return std::make_pair(transcript, bytes);
    };
    const auto [first_out, first_bytes] = session("one.hilx");
    const auto [second_out, second_bytes] = session("two.hilx");
    const bool same = first_out == second_out && first_bytes == second_bytes;
    return {same, fmt::format("outputs {} bytes, index {} bytes; identical: {}", first_out.size(), first_bytes.size(),
                              same)};
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 coefficient oracle equivalence", ac1_coefficients},
        {"AC2 orthonormality", ac2_orthonormality},
        {"AC3 Bessel and Parseval", ac3_bessel_parseval},
        {"AC4 Fourier kernel zeros", ac4_kernel_zeros},
        {"AC5 Christoffel-Darboux consistency", ac5_christoffel_darboux},
        {"AC6 term sphere", ac6_term_sphere},
        {"AC7 cluster radius identity", ac7_radius_identity},
        {"AC8 objective ranking", ac8_objective_ranking},
        {"AC9 query expansion", ac9_query_expansion},
        {"AC10 index round trip and verify", ac10_round_trip},
        {"AC11 end-to-end determinism", ac11_determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        failures += outcome.passed ? 0 : 1;
        std::printf("[%s] %s: %s\n", outcome.passed ? "PASS" : "FAIL", name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
