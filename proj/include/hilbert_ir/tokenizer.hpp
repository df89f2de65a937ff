#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hir {

struct TokenizerConfig {
    std::set<std::string> stopwords;

    /// The shipped English stopword list.
    static TokenizerConfig english();
    static TokenizerConfig none() { return {}; }

    /// FNV-1a over the sorted stopword list; recorded in index metadata.
    [[nodiscard]] std::uint64_t hash() const;
};

struct Token {
    std::string term;
    std::uint32_t position = 0;

    bool operator==(const Token&) const = default;
};

/// Lowercased alphanumeric tokens with 1-based positions over the whole
/// stream. Stopwords consume a position but are not emitted.
std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config);

/// Number of tokens in `text`, stopwords included.
std::uint32_t token_count(std::string_view text);

}  // namespace hir
