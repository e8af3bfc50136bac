#pragma once

// UTF-8 helpers over ICU. Strings travel through the toolkit as UTF-8
// std::string; code-point work happens on std::u32string.

#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ocrbench/errors.hpp"

namespace ocrbench::unicode {

inline std::u32string to_u32(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

inline std::string to_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) c = 0xFFFD;
        uint8_t buf[4];
        int32_t n = 0;
        U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
    return out;
}

inline std::size_t code_point_count(std::string_view utf8) {
    return to_u32(utf8).size();
}

inline bool is_space(char32_t c) {
    return u_isUWhiteSpace(static_cast<UChar32>(c));
}

/// East-Asian wide or fullwidth code points.
inline bool is_wide(char32_t c) {
    const auto w = u_getIntPropertyValue(static_cast<UChar32>(c), UCHAR_EAST_ASIAN_WIDTH);
    return w == U_EA_WIDE || w == U_EA_FULLWIDTH;
}

inline std::u32string trim(std::u32string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return std::u32string(text.substr(b, e - b));
}

inline std::string trim(std::string_view utf8) {
    return to_utf8(trim(std::u32string_view(to_u32(utf8))));
}

inline std::vector<std::u32string> split_whitespace(std::u32string_view text) {
    std::vector<std::u32string> tokens;
    std::u32string current;
    for (char32_t c : text) {
        if (is_space(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::vector<std::string> split_whitespace(std::string_view utf8) {
    std::vector<std::string> out;
    for (const auto& t : split_whitespace(std::u32string_view(to_u32(utf8)))) out.push_back(to_utf8(t));
    return out;
}

namespace detail {

inline std::string to_std(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

inline const icu::Normalizer2& nfc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
    return *n;
}

} // namespace detail

inline std::string nfc(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    auto r = detail::nfc_instance().normalize(s, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    return detail::to_std(r);
}

/// Full Unicode case folding (default mappings, not the Turkic variant).
inline std::string case_fold(std::string_view utf8) {
    auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    s.foldCase(U_FOLD_CASE_DEFAULT);
    return detail::to_std(s);
}

} // namespace ocrbench::unicode
