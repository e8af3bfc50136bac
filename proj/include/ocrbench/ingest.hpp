#pragma once

// Input side: COCO ground truth, the normalized-OCR interchange
// format, line-to-word conversion, and the language-stratified split.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/random.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

using Warnings = std::vector<std::string>;

// ---------------------------------------------------------------------------
// COCO

struct CocoImage {
    std::int64_t id = 0;
    std::string file_name;
    double width = 0;
    double height = 0;
    std::optional<std::string> language;

    friend bool operator==(const CocoImage&, const CocoImage&) = default;
};

struct CocoAnnotation {
    std::int64_t id = 0;
    std::int64_t image_id = 0;
    std::int64_t category_id = 1;
    Rect bbox;
    std::string name;
    std::optional<std::string> language;

    friend bool operator==(const CocoAnnotation&, const CocoAnnotation&) = default;
};

struct CocoCategory {
    std::int64_t id = 1;
    std::string name = "ingredient";

    friend bool operator==(const CocoCategory&, const CocoCategory&) = default;
};

struct CocoDataset {
    std::vector<CocoImage> images;
    std::vector<CocoAnnotation> annotations;
    std::vector<CocoCategory> categories;

    friend bool operator==(const CocoDataset&, const CocoDataset&) = default;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + path.string());
    return bytes;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("error writing " + path.string());
}

inline nlohmann::json parse_json(std::string_view bytes, const std::string& what) {
    try {
        return nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed " + what + ": " + e.what(), e.byte);
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    return obj.at(key);
}

inline std::int64_t as_int(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
    return v.get<std::int64_t>();
}

inline double as_number(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(where + ": number is not finite");
    return d;
}

inline std::string as_string(const nlohmann::json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": expected a string");
    return v.get<std::string>();
}

inline Rect as_bbox(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) throw ParseError(where + ": bbox must be [x, y, w, h]");
    return {as_number(v[0], where), as_number(v[1], where), as_number(v[2], where), as_number(v[3], where)};
}

inline nlohmann::json bbox_json(const Rect& r) { return nlohmann::json::array({r.x, r.y, r.width, r.height}); }

} // namespace detail

/// Parses a COCO object-detection document whose annotations carry
/// `attributes: {name, language}`. Unknown keys are ignored.
inline CocoDataset parse_coco(std::string_view bytes) {
    const auto doc = detail::parse_json(bytes, "COCO document");
    if (!doc.is_object()) throw ParseError("COCO document must be a JSON object");

    CocoDataset ds;
    const auto& images = detail::require(doc, "images", "COCO");
    if (!images.is_array()) throw ParseError("COCO: 'images' must be an array");
    std::set<std::int64_t> image_ids;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& im = images[i];
        const std::string where = "images[" + std::to_string(i) + "]";
        CocoImage img;
        img.id = detail::as_int(detail::require(im, "id", where), where + ".id");
        img.file_name = detail::as_string(detail::require(im, "file_name", where), where + ".file_name");
        img.width = detail::as_number(detail::require(im, "width", where), where + ".width");
        img.height = detail::as_number(detail::require(im, "height", where), where + ".height");
        if (im.contains("language")) img.language = detail::as_string(im["language"], where + ".language");
        if (!image_ids.insert(img.id).second)
            throw ValidationError("duplicate image id " + std::to_string(img.id));
        ds.images.push_back(std::move(img));
    }

    if (doc.contains("categories")) {
        const auto& cats = doc["categories"];
        if (!cats.is_array()) throw ParseError("COCO: 'categories' must be an array");
        for (std::size_t i = 0; i < cats.size(); ++i) {
            const std::string where = "categories[" + std::to_string(i) + "]";
            CocoCategory c;
            c.id = detail::as_int(detail::require(cats[i], "id", where), where + ".id");
            c.name = detail::as_string(detail::require(cats[i], "name", where), where + ".name");
            ds.categories.push_back(std::move(c));
        }
    }

    std::set<std::int64_t> dangling;
    if (doc.contains("annotations")) {
        const auto& anns = doc["annotations"];
        if (!anns.is_array()) throw ParseError("COCO: 'annotations' must be an array");
        for (std::size_t i = 0; i < anns.size(); ++i) {
            const auto& a = anns[i];
            const std::string where = "annotations[" + std::to_string(i) + "]";
            CocoAnnotation ann;
            ann.id = detail::as_int(detail::require(a, "id", where), where + ".id");
            ann.image_id = detail::as_int(detail::require(a, "image_id", where), where + ".image_id");
            if (a.contains("category_id")) ann.category_id = detail::as_int(a["category_id"], where + ".category_id");
            ann.bbox = detail::as_bbox(detail::require(a, "bbox", where), where + ".bbox");
            const auto& attrs = detail::require(a, "attributes", where);
            ann.name = detail::as_string(detail::require(attrs, "name", where + ".attributes"), where + ".attributes.name");
            if (attrs.contains("language"))
                ann.language = detail::as_string(attrs["language"], where + ".attributes.language");
            if (ann.bbox.x < 0 || ann.bbox.y < 0 || ann.bbox.width < 0 || ann.bbox.height < 0)
                throw ValidationError(where + ": bbox values must be non-negative");
            if (ann.bbox.width == 0 || ann.bbox.height == 0)
                throw ValidationError(where + ": bbox has zero area");
            if (!image_ids.count(ann.image_id)) dangling.insert(ann.image_id);
            ds.annotations.push_back(std::move(ann));
        }
    }
    if (!dangling.empty()) throw ReferentialIntegrityError({dangling.begin(), dangling.end()});
    return ds;
}

inline CocoDataset load_coco(const std::filesystem::path& path) { return parse_coco(detail::read_file(path)); }

inline std::string serialize_coco(const CocoDataset& ds) {
    nlohmann::ordered_json doc;
    auto& images = doc["images"] = nlohmann::ordered_json::array();
    for (const auto& im : ds.images) {
        nlohmann::ordered_json j;
        j["id"] = im.id;
        j["file_name"] = im.file_name;
        j["width"] = im.width;
        j["height"] = im.height;
        if (im.language) j["language"] = *im.language;
        images.push_back(std::move(j));
    }
    auto& anns = doc["annotations"] = nlohmann::ordered_json::array();
    for (const auto& a : ds.annotations) {
        nlohmann::ordered_json j;
        j["id"] = a.id;
        j["image_id"] = a.image_id;
        j["category_id"] = a.category_id;
        j["bbox"] = {a.bbox.x, a.bbox.y, a.bbox.width, a.bbox.height};
        j["area"] = a.bbox.width * a.bbox.height;
        j["iscrowd"] = 0;
        nlohmann::ordered_json attrs;
        attrs["name"] = a.name;
        if (a.language) attrs["language"] = *a.language;
        j["attributes"] = std::move(attrs);
        anns.push_back(std::move(j));
    }
    auto& cats = doc["categories"] = nlohmann::ordered_json::array();
    for (const auto& c : ds.categories) cats.push_back({{"id", c.id}, {"name", c.name}});
    return doc.dump(1) + "\n";
}

/// Resolves each image's language: the image-level tag wins; otherwise the
/// most frequent annotation tag (ties to the lexicographically smallest).
/// Images with no tag at all are absent from the result.
inline std::map<std::int64_t, std::string> resolve_languages(const CocoDataset& ds, Warnings* warnings = nullptr) {
    std::map<std::int64_t, std::map<std::string, int>> votes;
    for (const auto& a : ds.annotations)
        if (a.language) ++votes[a.image_id][*a.language];

    std::map<std::int64_t, std::string> out;
    for (const auto& im : ds.images) {
        const auto it = votes.find(im.id);
        std::optional<std::string> from_anns;
        if (it != votes.end()) {
            int best = -1;
            for (const auto& [lang, n] : it->second)
                if (n > best) best = n, from_anns = lang;
            if (it->second.size() > 1 && warnings)
                warnings->push_back("image " + std::to_string(im.id) + ": annotations disagree on language");
        }
        if (im.language) {
            if (from_anns && *from_anns != *im.language && warnings)
                warnings->push_back("image " + std::to_string(im.id) + ": image-level language '" + *im.language +
                                    "' overrides annotation language '" + *from_anns + "'");
            out[im.id] = *im.language;
        } else if (from_anns) {
            out[im.id] = *from_anns;
        }
    }
    return out;
}

/// Key used to pair OCR documents with ground truth: the file name stem.
inline std::string image_key(const CocoImage& im) {
    return std::filesystem::path(im.file_name).stem().string();
}

/// One GroundTruthLabel per image, in image-id order. Names are trimmed and
/// NFC-normalized; images without annotations yield labels with no
/// ingredients (excluded from evaluation downstream).
inline std::vector<GroundTruthLabel> labels_from_coco(const CocoDataset& ds, LabelSource source = LabelSource::real,
                                                      Warnings* warnings = nullptr) {
    const auto languages = resolve_languages(ds, warnings);
    std::map<std::int64_t, GroundTruthLabel> labels;
    for (const auto& im : ds.images) {
        auto& l = labels[im.id];
        l.image_id = image_key(im);
        const auto lang = languages.find(im.id);
        l.language = lang == languages.end() ? std::string("und") : lang->second;
        l.source = source;
    }
    for (const auto& a : ds.annotations) {
        std::string name = unicode::nfc(unicode::trim(a.name));
        if (name.empty()) throw ValidationError("annotation " + std::to_string(a.id) + " has an empty name");
        labels[a.image_id].ingredients.push_back({std::move(name), a.bbox});
    }
    std::vector<GroundTruthLabel> out;
    out.reserve(labels.size());
    for (auto& [id, l] : labels) out.push_back(std::move(l));
    return out;
}

// ---------------------------------------------------------------------------
// Line-level to word-level conversion

/// Splits a line into whitespace tokens and gives each a horizontal slice of
/// the line box proportional to its code-point count. Each separating space
/// is weighted as one code point.
inline std::vector<WordBox> lines_to_words(std::string_view line_text, const Rect& line_bbox,
                                           std::optional<std::int64_t> line_id = std::nullopt,
                                           std::optional<double> confidence = std::nullopt) {
    if (!line_bbox.has_positive_extent()) throw ValidationError("line box must have positive extent");
    const auto tokens = unicode::split_whitespace(std::u32string_view(unicode::to_u32(line_text)));
    std::vector<WordBox> words;
    if (tokens.empty()) return words;
    if (tokens.size() == 1) {
        words.emplace_back(unicode::to_utf8(tokens.front()), line_bbox, confidence, line_id);
        return words;
    }

    std::size_t slots = tokens.size() - 1;
    for (const auto& t : tokens) slots += t.size();
    const double total = static_cast<double>(slots);
    std::size_t offset = 0;
    for (const auto& t : tokens) {
        const std::size_t end = offset + t.size();
        const double left = line_bbox.x + line_bbox.width * static_cast<double>(offset) / total;
        const double right =
            end == slots ? line_bbox.right() : line_bbox.x + line_bbox.width * static_cast<double>(end) / total;
        words.emplace_back(unicode::to_utf8(t), Rect{left, line_bbox.y, right - left, line_bbox.height}, confidence,
                           line_id);
        offset = end + 1;
    }
    return words;
}

// ---------------------------------------------------------------------------
// Normalized-OCR interchange format
//
//   {image_id, engine_id, granularity: "word"|"line",
//    items: [{text, bbox: [x,y,w,h], confidence?, line_id?}], image_size?: [w,h]}

enum class Granularity { word, line };

inline Granularity parse_granularity(const nlohmann::json& v, const std::string& where) {
    const auto s = detail::as_string(v, where);
    if (s == "word") return Granularity::word;
    if (s == "line") return Granularity::line;
    throw ParseError(where + ": granularity must be \"word\" or \"line\"");
}

/// Converts one interchange document to word level. Line items go through
/// lines_to_words; their line_id (or item index) is kept on every word.
inline OcrDocument normalize_engine_output(std::string_view bytes) {
    const auto doc = detail::parse_json(bytes, "OCR document");
    if (!doc.is_object()) throw ParseError("OCR document must be a JSON object");

    OcrDocument out;
    out.image_id = detail::as_string(detail::require(doc, "image_id", "OCR"), "image_id");
    out.engine_id = detail::as_string(detail::require(doc, "engine_id", "OCR"), "engine_id");
    const auto granularity = parse_granularity(detail::require(doc, "granularity", "OCR"), "granularity");
    if (doc.contains("image_size")) {
        const auto& sz = doc["image_size"];
        if (!sz.is_array() || sz.size() != 2) throw ParseError("image_size must be [w, h]");
        out.image_size = ImageSize{detail::as_number(sz[0], "image_size"), detail::as_number(sz[1], "image_size")};
    }
    const auto& items = detail::require(doc, "items", "OCR");
    if (!items.is_array()) throw ParseError("'items' must be an array");

    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        const std::string where = "items[" + std::to_string(i) + "]";
        if (it.contains("granularity") && parse_granularity(it["granularity"], where) != granularity)
            throw MixedGranularityError(where + " declares a granularity different from the document");
        const auto text = detail::as_string(detail::require(it, "text", where), where + ".text");
        const auto bbox = detail::as_bbox(detail::require(it, "bbox", where), where + ".bbox");
        if (!bbox.has_positive_extent()) throw ParseError(where + ": bbox must have positive width and height");
        std::optional<double> conf;
        if (it.contains("confidence") && !it["confidence"].is_null()) {
            conf = detail::as_number(it["confidence"], where + ".confidence");
            if (*conf < 0 || *conf > 1) throw ParseError(where + ": confidence outside [0,1]");
        }
        std::optional<std::int64_t> line_id;
        if (it.contains("line_id") && !it["line_id"].is_null()) {
            line_id = detail::as_int(it["line_id"], where + ".line_id");
            if (*line_id < 0) throw ParseError(where + ": line_id must be non-negative");
        }

        if (granularity == Granularity::word) {
            const auto trimmed = unicode::trim(text);
            if (trimmed.empty()) throw ParseError(where + ": word text is empty");
            if (unicode::split_whitespace(trimmed).size() > 1)
                throw MixedGranularityError(where + ": word-level item contains whitespace ('" + trimmed + "')");
            out.words.emplace_back(trimmed, bbox, conf, line_id);
        } else {
            if (!line_id) line_id = static_cast<std::int64_t>(i);
            for (auto& w : lines_to_words(text, bbox, line_id, conf)) out.words.push_back(std::move(w));
        }
    }
    out.validate();
    return out;
}

inline OcrDocument load_ocr_document(const std::filesystem::path& path) {
    try {
        return normalize_engine_output(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

/// Serializes a word-level document in the interchange format.
inline std::string write_interchange(const OcrDocument& doc) {
    nlohmann::ordered_json j;
    j["image_id"] = doc.image_id;
    j["engine_id"] = doc.engine_id;
    j["granularity"] = "word";
    auto& items = j["items"] = nlohmann::ordered_json::array();
    for (const auto& w : doc.words) {
        nlohmann::ordered_json item;
        item["text"] = w.text();
        item["bbox"] = {w.bbox().x, w.bbox().y, w.bbox().width, w.bbox().height};
        if (w.confidence()) item["confidence"] = *w.confidence();
        if (w.line_id()) item["line_id"] = *w.line_id();
        items.push_back(std::move(item));
    }
    if (doc.image_size) j["image_size"] = {doc.image_size->width, doc.image_size->height};
    return j.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Stratified split

enum class Split { train, test };

inline const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

struct SplitAssignment {
    std::map<std::int64_t, Split> assignment;
    std::uint64_t seed = 0;
    double test_fraction = 0;
    Warnings warnings;
};

/// Per language stratum: sort image ids, shuffle with xoshiro256** seeded by
/// `seed` (strata visited in language order, one generator throughout), and
/// send the first round(fraction * size) images to test. Singleton strata
/// stay in train.
inline SplitAssignment stratified_split(const CocoDataset& ds, std::uint64_t seed, double test_fraction) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ValidationError("test fraction must lie in the open interval (0, 1)");

    SplitAssignment out;
    out.seed = seed;
    out.test_fraction = test_fraction;
    const auto languages = resolve_languages(ds, &out.warnings);

    std::map<std::string, std::vector<std::int64_t>> strata;
    for (const auto& im : ds.images) {
        const auto it = languages.find(im.id);
        if (it == languages.end())
            throw ValidationError("image " + std::to_string(im.id) + " has no language attribute");
        strata[it->second].push_back(im.id);
    }

    Xoshiro256 rng(seed);
    for (auto& [lang, ids] : strata) {
        std::sort(ids.begin(), ids.end());
        if (ids.size() == 1) {
            out.assignment[ids.front()] = Split::train;
            out.warnings.push_back("language '" + lang + "' has a single image; assigned to train");
            continue;
        }
        for (std::size_t i = ids.size() - 1; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);
        const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(ids.size())));
        for (std::size_t i = 0; i < ids.size(); ++i) out.assignment[ids[i]] = i < n_test ? Split::test : Split::train;
    }
    return out;
}

inline std::string split_csv(const SplitAssignment& split) {
    std::string out = "image_id,split\n";
    for (const auto& [id, s] : split.assignment) out += std::to_string(id) + "," + to_string(s) + "\n";
    return out;
}

} // namespace ocrbench
