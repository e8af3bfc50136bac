#pragma once

// Turns a selected word group into candidate ingredient names by reading
// order, concatenation and delimiter splitting.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ocrbench/clustering.hpp"
#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

/// Code points that separate ingredients. Always contains the Latin comma.
class DelimiterSet {
public:
    static constexpr char32_t kComma = U',';
    static constexpr char32_t kSemicolon = U';';
    static constexpr char32_t kIdeographicComma = U'、';
    static constexpr char32_t kArabicComma = U'،';
    static constexpr char32_t kFullStop = U'.';
    static constexpr char32_t kMiddleDot = U'·';

    explicit DelimiterSet(bool full_stop = true)
        : points_{kComma, kSemicolon, kIdeographicComma, kArabicComma, kMiddleDot} {
        if (full_stop) points_.insert(kFullStop);
    }

    explicit DelimiterSet(std::set<char32_t> points) : points_(std::move(points)) {
        if (!points_.count(kComma)) throw ConfigError("delimiter set must contain U+002C COMMA");
    }

    bool contains(char32_t c) const { return points_.count(c) > 0; }
    bool full_stop() const { return contains(kFullStop); }
    const std::set<char32_t>& points() const noexcept { return points_; }

private:
    std::set<char32_t> points_;
};

/// Canonical header tokens ("ingredients", "zutaten", ...) removed before
/// splitting. File format: UTF-8, one token per line, '#' comments.
class StopList {
public:
    StopList() = default;

    explicit StopList(const std::vector<std::string>& tokens) {
        for (const auto& t : tokens)
            if (!unicode::trim(t).empty()) tokens_.insert(canonicalize(t).value());
    }

    static StopList parse(std::string_view text) {
        std::vector<std::string> tokens;
        std::istringstream in{std::string(text)};
        for (std::string line; std::getline(in, line);) {
            const auto t = unicode::trim(line);
            if (t.empty() || t.front() == '#') continue;
            tokens.push_back(t);
        }
        return StopList(tokens);
    }

    static StopList load(const std::filesystem::path& path) { return parse(detail::read_file(path)); }

    /// True for a header word, optionally followed by ':' or U+FF1A, and for a
    /// bare colon.
    bool is_header(std::string_view word) const {
        auto text = unicode::to_u32(canonicalize(word).value());
        while (!text.empty() && (text.back() == U':' || text.back() == U'：')) text.pop_back();
        text = unicode::trim(std::u32string_view(text));
        return text.empty() || tokens_.count(unicode::to_utf8(text)) > 0;
    }

    std::size_t size() const noexcept { return tokens_.size(); }

private:
    std::set<std::string> tokens_;
};

struct CandidateIngredient {
    CanonicalName name;
    std::vector<std::size_t> source_word_indices; ///< indices into the input list, in reading order
    Rect bbox;
};

/// Rows by centroid-y single linkage (tolerance 0.5 x median height), rows
/// top to bottom, words left to right; identical centroids keep input order.
inline std::vector<std::size_t> reading_order_indices(std::span<const WordBox> words, double row_tolerance_multiplier = 0.5) {
    std::vector<std::size_t> out;
    if (words.empty()) return out;
    for (const auto& row : group_rows(words, row_tolerance_multiplier * median_height(words)))
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

inline std::vector<WordBox> reading_order(std::span<const WordBox> words) {
    std::vector<WordBox> out;
    for (auto i : reading_order_indices(words)) out.push_back(words[i]);
    return out;
}

/// Words in reading order, header words dropped, joined with single spaces,
/// split on delimiters. Each non-empty fragment becomes a candidate carrying
/// the words that contributed at least one code point to it.
inline std::vector<CandidateIngredient> extract_ingredients(std::span<const WordBox> words,
                                                            const DelimiterSet& delims = DelimiterSet{},
                                                            const StopList& stop_list = {}) {
    constexpr std::size_t kSeparator = static_cast<std::size_t>(-1);
    std::u32string joined;
    std::vector<std::size_t> owner;
    for (auto i : reading_order_indices(words)) {
        if (stop_list.size() && stop_list.is_header(words[i].text())) continue;
        if (!joined.empty()) {
            joined.push_back(U' ');
            owner.push_back(kSeparator);
        }
        for (char32_t c : unicode::to_u32(words[i].text())) {
            joined.push_back(c);
            owner.push_back(i);
        }
    }

    std::vector<CandidateIngredient> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        while (begin < end && unicode::is_space(joined[begin])) ++begin;
        while (end > begin && unicode::is_space(joined[end - 1])) --end;
        if (begin == end) return;
        CandidateIngredient cand{canonicalize(unicode::to_utf8(joined.substr(begin, end - begin))), {}, {}};
        for (std::size_t k = begin; k < end; ++k) {
            const auto w = owner[k];
            if (w == kSeparator) continue;
            if (cand.source_word_indices.empty() || cand.source_word_indices.back() != w) {
                cand.bbox = cand.source_word_indices.empty() ? words[w].bbox() : bounding_union(cand.bbox, words[w].bbox());
                cand.source_word_indices.push_back(w);
            }
        }
        out.push_back(std::move(cand));
    };

    std::size_t start = 0;
    for (std::size_t k = 0; k < joined.size(); ++k) {
        if (delims.contains(joined[k])) {
            emit(start, k);
            start = k + 1;
        }
    }
    emit(start, joined.size());
    return out;
}

/// extract_ingredients per line, concatenated in line order.
inline std::vector<CandidateIngredient> extract_from_lines(const std::vector<std::vector<WordBox>>& lines,
                                                           const DelimiterSet& delims = DelimiterSet{},
                                                           const StopList& stop_list = {}) {
    std::vector<CandidateIngredient> out;
    for (const auto& line : lines)
        for (auto& c : extract_ingredients(line, delims, stop_list)) out.push_back(std::move(c));
    return out;
}

inline std::vector<CanonicalName> names_of(const std::vector<CandidateIngredient>& candidates) {
    std::vector<CanonicalName> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.name);
    return out;
}

} // namespace ocrbench
