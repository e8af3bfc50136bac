#pragma once

// Domain types shared by every stage of the pipeline.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrbench/errors.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

struct Point {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle in pixels. Real-valued: proportional line splitting
/// produces sub-pixel boxes.
struct Rect {
    double x = 0;
    double y = 0;
    double width = 0;
    double height = 0;

    double right() const noexcept { return x + width; }
    double bottom() const noexcept { return y + height; }
    bool has_positive_extent() const noexcept { return width > 0 && height > 0; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline Point centroid(const Rect& box) {
    return {box.x + box.width / 2, box.y + box.height / 2};
}

inline Rect bounding_union(const Rect& a, const Rect& b) {
    const double x0 = std::min(a.x, b.x);
    const double y0 = std::min(a.y, b.y);
    const double x1 = std::max(a.right(), b.right());
    const double y1 = std::max(a.bottom(), b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

/// One recognized word with geometry.
class WordBox {
public:
    WordBox(std::string_view text, Rect bbox, std::optional<double> confidence = std::nullopt,
            std::optional<std::int64_t> line_id = std::nullopt)
        : text_(unicode::trim(text)), bbox_(bbox), confidence_(confidence), line_id_(line_id) {
        if (text_.empty()) throw ValidationError("word text is empty");
        if (!bbox_.has_positive_extent() || !std::isfinite(bbox_.x) || !std::isfinite(bbox_.y) ||
            !std::isfinite(bbox_.width) || !std::isfinite(bbox_.height))
            throw ValidationError("word box for '" + text_ + "' must have finite positive extent");
        if (confidence_ && !(*confidence_ >= 0.0 && *confidence_ <= 1.0))
            throw ValidationError("word confidence must lie in [0,1]");
        if (line_id_ && *line_id_ < 0) throw ValidationError("line_id must be non-negative");
    }

    const std::string& text() const noexcept { return text_; }
    const Rect& bbox() const noexcept { return bbox_; }
    const std::optional<double>& confidence() const noexcept { return confidence_; }
    const std::optional<std::int64_t>& line_id() const noexcept { return line_id_; }
    Point center() const { return centroid(bbox_); }

    WordBox with_bbox(Rect bbox) const { return WordBox(text_, bbox, confidence_, line_id_); }
    WordBox with_text(std::string_view text) const { return WordBox(text, bbox_, confidence_, line_id_); }

    friend bool operator==(const WordBox&, const WordBox&) = default;

private:
    std::string text_;
    Rect bbox_;
    std::optional<double> confidence_;
    std::optional<std::int64_t> line_id_;
};

struct ImageSize {
    double width = 0;
    double height = 0;

    friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Word-level output for one image, whatever engine produced it.
struct OcrDocument {
    std::string image_id;
    std::string engine_id;
    std::vector<WordBox> words;
    std::optional<ImageSize> image_size;

    /// Boxes may overhang the image by this much (engine rounding).
    static constexpr double kBoundsTolerancePx = 2.0;

    void validate() const {
        if (!image_size) return;
        const double tol = kBoundsTolerancePx;
        for (const auto& w : words) {
            const auto& b = w.bbox();
            if (b.x < -tol || b.y < -tol || b.right() > image_size->width + tol ||
                b.bottom() > image_size->height + tol)
                throw ValidationError("word '" + w.text() + "' in " + image_id + " lies outside the image");
        }
    }

    friend bool operator==(const OcrDocument&, const OcrDocument&) = default;
};

enum class LabelSource { real, synthetic };

struct Ingredient {
    std::string name;
    Rect bbox;

    friend bool operator==(const Ingredient&, const Ingredient&) = default;
};

/// Per-image ingredient annotations. Names are stored as printed (NFC);
/// case folding happens at comparison time.
struct GroundTruthLabel {
    std::string image_id;
    std::string language;
    std::vector<Ingredient> ingredients;
    LabelSource source = LabelSource::real;

    friend bool operator==(const GroundTruthLabel&, const GroundTruthLabel&) = default;
};

/// Trimmed, case-folded, NFC-normalized ingredient name.
class CanonicalName {
public:
    const std::string& value() const noexcept { return value_; }

    friend bool operator==(const CanonicalName&, const CanonicalName&) = default;
    friend auto operator<=>(const CanonicalName&, const CanonicalName&) = default;

private:
    explicit CanonicalName(std::string v) : value_(std::move(v)) {}
    friend CanonicalName canonicalize(std::string_view raw);

    std::string value_;
};

/// Fold then normalize. Iterated to a fixed point because folding and NFC do
/// not commute for a handful of code points.
inline CanonicalName canonicalize(std::string_view raw) {
    std::string s = unicode::trim(raw);
    if (s.empty()) throw EmptyNameError();
    for (int round = 0; round < 4; ++round) {
        std::string next = unicode::nfc(unicode::case_fold(s));
        if (next == s) break;
        s = std::move(next);
    }
    return CanonicalName(std::move(s));
}

} // namespace ocrbench
