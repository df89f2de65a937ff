#include "hilbert_ir/tokenizer.hpp"

namespace hir {

namespace {

constexpr const char* english_stopwords[] = {
    "a",    "an",   "and",   "are",  "as",   "at",   "be",    "but",  "by",   "for",  "from",
    "has",  "have", "he",    "her",  "his",  "i",    "if",    "in",   "into", "is",   "it",
    "its",  "no",   "not",   "of",   "on",   "or",   "she",   "such", "that", "the",  "their",
    "then", "there", "these", "they", "this", "to",   "was",   "were", "will", "with", "you",
};

bool is_token_byte(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(unsigned char c)
{
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
}

template <typename Visit>
void scan(std::string_view text, Visit&& visit)
{
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_token_byte(c)) {
            current.push_back(lower(c));
        } else if (!current.empty()) {
            visit(current);
            current.clear();
        }
    }
    if (!current.empty()) {
        visit(current);
    }
}

}  // namespace

TokenizerConfig TokenizerConfig::english()
{
    TokenizerConfig config;
    for (const char* w : english_stopwords) {
        config.stopwords.insert(w);
    }
    return config;
}

std::uint64_t TokenizerConfig::hash() const
{
    std::uint64_t h = 14695981039346656037ULL;
    const auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ULL;
    };
    for (const auto& word : stopwords) {
        for (char c : word) {
            mix(static_cast<unsigned char>(c));
        }
        mix(0);
    }
    return h;
}

std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config)
{
    std::vector<Token> tokens;
    std::uint32_t position = 0;
    scan(text, [&](const std::string& term) {
        ++position;
        if (!config.stopwords.contains(term)) {
            tokens.push_back({term, position});
        }
    });
    return tokens;
}

std::uint32_t token_count(std::string_view text)
{
    std::uint32_t count = 0;
    scan(text, [&](const std::string&) { ++count; });
    return count;
}

}  // namespace hir
