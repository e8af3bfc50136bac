#pragma once

// Template-driven synthetic ingredient labels at the word-box level, and an
// OCR noise simulator covering small-font dropout, curvature, cross-panel
// chimeras, delimiter misreads and character confusions.
//
// Geometry model: every code point advances 0.5 x font height (1.0 for East
// Asian wide characters); word boxes are exactly as tall as the font height.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocrbench/clustering.hpp"
#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/ingest.hpp"
#include "ocrbench/random.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

enum class LayoutFamily { A, B, C, D };

inline const char* to_string(LayoutFamily f) {
    switch (f) {
    case LayoutFamily::A: return "A";
    case LayoutFamily::B: return "B";
    case LayoutFamily::C: return "C";
    case LayoutFamily::D: return "D";
    }
    return "?";
}

/// A: one ingredient per row. B: delimiter-joined paragraph. C: parallel
/// narrow columns, one word per line, centered. D: dense delimiter-joined
/// block without spaces after delimiters.
struct LayoutTemplate {
    LayoutFamily family = LayoutFamily::A;
    std::string id;
    ImageSize page_size{600, 800};
    std::pair<int, int> ingredient_count{5, 10};
    std::pair<double, double> font_height{14, 20};
    int column_count = 1;
    double row_gap = 0.7;     ///< vertical space between rows, in font heights
    double word_gap = 0.6;    ///< horizontal space between words, in font heights
    double column_gap = 48;   ///< px between panels
    double margin = 24;       ///< px
    bool header = true;       ///< print the language's "Ingredients:" header
    std::pair<int, int> distractor_lines{0, 0}; ///< C only: non-ingredient panel height
    bool distractor_left = false;

    void validate() const {
        if (id.empty()) throw ConfigError("template id is empty");
        const auto bad = [&](const std::string& m) { return ConfigError("template " + id + ": " + m); };
        if (ingredient_count.first < 1 || ingredient_count.second < ingredient_count.first)
            throw bad("invalid ingredient_count range");
        if (!(font_height.first > 0) || font_height.second < font_height.first) throw bad("invalid font_height range");
        if (row_gap < 0 || word_gap < 0 || column_gap < 0 || margin < 0) throw bad("negative spacing");
        if (!(page_size.width > 0 && page_size.height > 0)) throw bad("page size must be positive");
        if (distractor_lines.first < 0 || distractor_lines.second < distractor_lines.first)
            throw bad("invalid distractor_lines range");
        if (family == LayoutFamily::C) {
            if (column_count < 2) throw bad("C family needs at least two columns");
        } else {
            if (column_count != 1) throw bad("only the C family has several columns");
            if (distractor_lines.second > 0) throw bad("distractor panels are C-family only");
        }
        if (family == LayoutFamily::D && font_height.second > 8) throw bad("D family font height must be <= 8 px");
    }
};

inline LayoutFamily parse_family(const std::string& s) {
    if (s == "A") return LayoutFamily::A;
    if (s == "B") return LayoutFamily::B;
    if (s == "C") return LayoutFamily::C;
    if (s == "D") return LayoutFamily::D;
    throw ConfigError("unknown layout family '" + s + "'");
}

inline LayoutTemplate template_from_json(const nlohmann::json& j) {
    LayoutTemplate t;
    try {
        t.id = j.at("id").get<std::string>();
        t.family = parse_family(j.at("family").get<std::string>());
        const auto& page = j.at("page_size");
        t.page_size = {page.at(0).get<double>(), page.at(1).get<double>()};
        t.ingredient_count = {j.at("ingredient_count").at(0).get<int>(), j.at("ingredient_count").at(1).get<int>()};
        t.font_height = {j.at("font_height").at(0).get<double>(), j.at("font_height").at(1).get<double>()};
        t.column_count = j.value("column_count", 1);
        t.row_gap = j.value("row_gap", t.row_gap);
        t.word_gap = j.value("word_gap", t.word_gap);
        t.column_gap = j.value("column_gap", t.column_gap);
        t.margin = j.value("margin", t.margin);
        t.header = j.value("header", t.header);
        if (j.contains("distractor_lines"))
            t.distractor_lines = {j["distractor_lines"].at(0).get<int>(), j["distractor_lines"].at(1).get<int>()};
        t.distractor_left = j.value("distractor_side", std::string("right")) == "left";
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed layout template: ") + e.what());
    }
    t.validate();
    return t;
}

/// Templates file: {"templates": [ {...}, ... ]}.
inline std::vector<LayoutTemplate> load_templates(const std::filesystem::path& path) {
    const auto doc = detail::parse_json(detail::read_file(path), "template file");
    std::vector<LayoutTemplate> out;
    for (const auto& j : doc.at("templates")) out.push_back(template_from_json(j));
    return out;
}

// ---------------------------------------------------------------------------
// Language-dependent text

namespace synth_text {

inline std::string header_for(const std::string& language) {
    static const std::map<std::string, std::string> headers = {
        {"ar", "المكونات:"},    {"da", "Ingredienser:"}, {"de", "Zutaten:"},     {"en", "Ingredients:"},
        {"fi", "Ainesosat:"},   {"fr", "Ingrédients:"},  {"it", "Ingredienti:"}, {"ja", "原材料名："},
        {"nl", "Ingrediënten:"}, {"no", "Ingredienser:"}, {"pt", "Ingredientes:"}, {"sv", "Ingredienser:"},
        {"th", "ส่วนประกอบ:"},  {"tr", "İçindekiler:"},
    };
    const auto it = headers.find(language);
    return it == headers.end() ? std::string("Ingredients:") : it->second;
}

inline std::string delimiter_for(const std::string& language) {
    if (language == "ja" || language == "zh") return "、";
    if (language == "ar") return "،";
    return ",";
}

/// Scripts written without spaces between words.
inline bool no_space_script(const std::string& language) {
    return language == "ja" || language == "zh" || language == "th";
}

/// Non-ingredient packaging text used for distractor panels.
inline const std::vector<std::string>& distractor_words() {
    static const std::vector<std::string> words = {
        "Nutrition", "Energy",   "2010kJ",  "480kcal", "Per",      "100g",     "Serving", "Protein",  "6.2g",
        "Carbohydrate", "Fibre", "24g",     "Sodium",  "0.4g",     "Reference", "Intake", "Best",     "Before",
        "Net",      "Weight",    "250g",    "Store",   "Cool",     "Dry",      "Place",   "Product",  "Made",
        "EAN",      "5012345678900", "Lot", "L2381",   "www.example.com", "Recycle", "Crunchy", "Original", "Family",
        "Pack",     "Value",     "Premium", "Quality", "Since",    "1921",     "Brand",   "Limited",
    };
    return words;
}

inline std::string capitalize_ascii(std::string s) {
    if (!s.empty() && s.front() >= 'a' && s.front() <= 'z') s.front() = static_cast<char>(s.front() - 'a' + 'A');
    return s;
}

} // namespace synth_text

// ---------------------------------------------------------------------------
// Synthetic labels

struct WordPlacement {
    int panel = 0;           ///< column / panel index, left to right
    int row = 0;             ///< visual row within the page
    bool distractor = false; ///< belongs to a non-ingredient panel

    friend bool operator==(const WordPlacement&, const WordPlacement&) = default;
};

struct SyntheticLabel {
    std::string image_id;
    std::string language;
    std::string template_id;
    LayoutFamily family = LayoutFamily::A;
    std::uint64_t seed = 0;
    GroundTruthLabel truth;
    OcrDocument ideal_words; ///< noise-free, exact geometry
    std::vector<WordPlacement> placement; ///< parallel to ideal_words.words
    bool rtl_simplified = false;          ///< RTL script laid out left to right
};

namespace detail {

inline double advance(char32_t c, double font_height) {
    return font_height * (unicode::is_wide(c) ? 1.0 : 0.5);
}

/// A word under construction: its code points and, per code point, the
/// index of the ingredient it belongs to (-1 for delimiters and headers).
struct Token {
    std::u32string text;
    std::vector<int> owner;
    bool distractor = false;

    double width(double h) const {
        double w = 0;
        for (char32_t c : text) w += advance(c, h);
        return w;
    }
};

inline Token plain_token(std::string_view s, bool distractor = false) {
    Token t;
    t.text = unicode::to_u32(s);
    t.owner.assign(t.text.size(), -1);
    t.distractor = distractor;
    return t;
}

/// Tokens of a delimiter-joined stream; with `space_after_delimiter` false
/// the delimiter glues names together (D family).
inline std::vector<Token> tokenize_names(const std::vector<std::string>& names, const std::string& delimiter,
                                         bool space_after_delimiter, bool break_after_delimiter) {
    std::vector<Token> tokens;
    Token current;
    auto flush = [&] {
        if (!current.text.empty()) tokens.push_back(std::move(current));
        current = Token{};
    };
    const auto delim = unicode::to_u32(delimiter);
    for (std::size_t n = 0; n < names.size(); ++n) {
        for (char32_t c : unicode::to_u32(names[n])) {
            if (unicode::is_space(c)) {
                flush();
                continue;
            }
            current.text.push_back(c);
            current.owner.push_back(static_cast<int>(n));
        }
        if (n + 1 < names.size()) {
            for (char32_t c : delim) {
                current.text.push_back(c);
                current.owner.push_back(-1);
            }
            if (space_after_delimiter || break_after_delimiter) flush();
        }
    }
    flush();
    return tokens;
}

struct Placed {
    Token token;
    double x = 0;
    double y = 0;
    WordPlacement where;
};

} // namespace detail

/// Lays out a template with names drawn without replacement from `vocab`.
/// Deterministic per (template, vocabulary, seed). The page grows beyond the
/// template's nominal size when the content needs it.
inline SyntheticLabel instantiate(const LayoutTemplate& tmpl, const VocabularySet& vocab, std::uint64_t seed,
                                  std::string image_id = {}) {
    tmpl.validate();
    const auto max_count = static_cast<std::size_t>(tmpl.ingredient_count.second);
    if (vocab.size() < max_count)
        throw ValidationError("vocabulary '" + vocab.language() + "' has " + std::to_string(vocab.size()) +
                              " entries; template " + tmpl.id + " needs at least " + std::to_string(max_count));

    Xoshiro256 rng(seed);
    const std::string& lang = vocab.language();
    const double h = tmpl.font_height.first + (tmpl.font_height.second - tmpl.font_height.first) * rng.uniform();
    const auto n = static_cast<std::size_t>(rng.between(tmpl.ingredient_count.first, tmpl.ingredient_count.second));

    std::vector<const CanonicalName*> pool;
    for (const auto& e : vocab.entries()) pool.push_back(&e);
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    std::vector<std::string> names;
    const bool capitalize = tmpl.family == LayoutFamily::A || tmpl.family == LayoutFamily::C;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(capitalize ? synth_text::capitalize_ascii(pool[i]->value()) : pool[i]->value());

    const std::string delimiter = synth_text::delimiter_for(lang);
    const double pitch = h * (1 + tmpl.row_gap);
    const double gap = h * tmpl.word_gap;
    const double left = tmpl.margin;
    const double top = tmpl.margin;
    std::vector<detail::Placed> placed;

    auto flow = [&](const std::vector<detail::Token>& tokens, double wrap_width, double word_gap) {
        double x = left;
        int row = 0;
        for (const auto& t : tokens) {
            const double w = t.width(h);
            if (x > left && x + w > left + wrap_width) {
                x = left;
                ++row;
            }
            placed.push_back({t, x, top + row * pitch, {0, row, false}});
            x += w + word_gap;
        }
    };

    switch (tmpl.family) {
    case LayoutFamily::A: {
        int row = 0;
        if (tmpl.header) placed.push_back({detail::plain_token(synth_text::header_for(lang)), left, top, {0, row++, false}});
        const auto tokens = detail::tokenize_names(names, delimiter, true, true);
        int current_name = -1;
        double x = left;
        for (const auto& t : tokens) {
            int name = -1;
            for (int o : t.owner) name = std::max(name, o);
            if (name != current_name && current_name != -1) {
                ++row;
                x = left;
            }
            current_name = name;
            placed.push_back({t, x, top + row * pitch, {0, row, false}});
            x += t.width(h) + gap;
        }
        break;
    }
    case LayoutFamily::B: {
        std::vector<detail::Token> tokens;
        if (tmpl.header) tokens.push_back(detail::plain_token(synth_text::header_for(lang)));
        for (auto& t : detail::tokenize_names(names, delimiter, true, true)) tokens.push_back(std::move(t));
        flow(tokens, tmpl.page_size.width - 2 * tmpl.margin, gap);
        break;
    }
    case LayoutFamily::D: {
        std::vector<detail::Token> tokens;
        if (tmpl.header) tokens.push_back(detail::plain_token(synth_text::header_for(lang)));
        const bool glue = synth_text::no_space_script(lang);
        for (auto& t : detail::tokenize_names(names, delimiter, false, glue)) tokens.push_back(std::move(t));
        flow(tokens, tmpl.page_size.width - 2 * tmpl.margin, glue ? 0.0 : gap);
        break;
    }
    case LayoutFamily::C: {
        const auto k = static_cast<std::size_t>(tmpl.column_count);
        const std::size_t per_column = (n + k - 1) / k;
        const auto tokens = detail::tokenize_names(names, delimiter, true, true);

        std::vector<std::vector<detail::Token>> panels(k);
        for (const auto& t : tokens) {
            int name = 0;
            for (int o : t.owner) name = std::max(name, o);
            panels[std::min(k - 1, static_cast<std::size_t>(name) / per_column)].push_back(t);
        }
        std::vector<detail::Token> distractor;
        const auto d_lines = rng.between(tmpl.distractor_lines.first, tmpl.distractor_lines.second);
        const auto& dwords = synth_text::distractor_words();
        for (std::int64_t i = 0; i < d_lines; ++i)
            distractor.push_back(detail::plain_token(dwords[rng.below(dwords.size())], true));

        std::vector<const std::vector<detail::Token>*> order;
        if (!distractor.empty() && tmpl.distractor_left) order.push_back(&distractor);
        for (const auto& p : panels)
            if (!p.empty()) order.push_back(&p);
        if (!distractor.empty() && !tmpl.distractor_left) order.push_back(&distractor);

        double x = left;
        int panel = 0;
        for (const auto* p : order) {
            double width = 0;
            for (const auto& t : *p) width = std::max(width, t.width(h));
            int row = 0;
            for (const auto& t : *p) {
                placed.push_back({t, x + (width - t.width(h)) / 2, top + row * pitch, {panel, row, t.distractor}});
                ++row;
            }
            x += width + tmpl.column_gap;
            ++panel;
        }
        break;
    }
    }

    SyntheticLabel label;
    label.language = lang;
    label.template_id = tmpl.id;
    label.family = tmpl.family;
    label.seed = seed;
    label.rtl_simplified = lang == "ar";
    if (image_id.empty()) {
        std::ostringstream id;
        id << tmpl.id << '-' << lang << '-' << std::hex << seed;
        image_id = id.str();
    }
    label.image_id = image_id;

    double page_w = tmpl.page_size.width, page_h = tmpl.page_size.height;
    std::vector<std::optional<Rect>> name_boxes(n);
    for (const auto& p : placed) {
        const double w = p.token.width(h);
        page_w = std::max(page_w, p.x + w + tmpl.margin);
        page_h = std::max(page_h, p.y + h + tmpl.margin);
        label.ideal_words.words.emplace_back(unicode::to_utf8(p.token.text), Rect{p.x, p.y, w, h}, std::nullopt,
                                             p.where.row);
        label.placement.push_back(p.where);
        double cx = p.x;
        for (std::size_t c = 0; c < p.token.text.size(); ++c) {
            const double a = detail::advance(p.token.text[c], h);
            if (const int o = p.token.owner[c]; o >= 0) {
                const Rect glyph{cx, p.y, a, h};
                auto& nb = name_boxes[static_cast<std::size_t>(o)];
                nb = nb ? bounding_union(*nb, glyph) : glyph;
            }
            cx += a;
        }
    }

    label.ideal_words.image_id = label.image_id;
    label.ideal_words.engine_id = "synthetic";
    label.ideal_words.image_size = ImageSize{page_w, page_h};
    label.truth.image_id = label.image_id;
    label.truth.language = lang;
    label.truth.source = LabelSource::synthetic;
    for (std::size_t i = 0; i < n; ++i) label.truth.ingredients.push_back({names[i], *name_boxes[i]});
    return label;
}

// ---------------------------------------------------------------------------
// Noise

/// Character confusions, "from<TAB>to" per line, '#' comments. A source may
/// span two code points ("rn" -> "m").
class ConfusionTable {
public:
    ConfusionTable() = default;

    void add(std::u32string from, std::u32string to) {
        if (from.empty() || from.size() > 2) throw ConfigError("confusion source must be one or two code points");
        table_[std::move(from)].push_back(std::move(to));
    }

    static ConfusionTable parse(std::string_view text) {
        ConfusionTable t;
        std::istringstream in{std::string(text)};
        int line_no = 0;
        for (std::string line; std::getline(in, line);) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (unicode::trim(line).empty() || unicode::trim(line).front() == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw ConfigError("confusion table line " + std::to_string(line_no) + ": expected from<TAB>to");
            t.add(unicode::to_u32(line.substr(0, tab)), unicode::to_u32(line.substr(tab + 1)));
        }
        return t;
    }

    static ConfusionTable load(const std::filesystem::path& path) { return parse(detail::read_file(path)); }

    /// Candidates for the text starting at `pos`, preferring two-code-point
    /// sources. Returns the source length, or 0 with no candidates.
    std::size_t lookup(std::u32string_view text, std::size_t pos, const std::vector<std::u32string>** out) const {
        for (std::size_t len : {std::size_t{2}, std::size_t{1}}) {
            if (pos + len > text.size()) continue;
            const auto it = table_.find(std::u32string(text.substr(pos, len)));
            if (it != table_.end()) {
                *out = &it->second;
                return len;
            }
        }
        return 0;
    }

    bool empty() const noexcept { return table_.empty(); }

private:
    std::map<std::u32string, std::vector<std::u32string>> table_;
};

struct NoiseConfig {
    double char_substitution_rate = 0;
    double word_drop_rate = 0;            ///< small-font dropout
    double delimiter_corruption_rate = 0; ///< delimiter -> '.' or deleted, equal odds
    double panel_merge_rate = 0;          ///< same-row words of adjacent panels fused, C family
    double curvature_amplitude = 0;       ///< px of sinusoidal y displacement
    std::uint64_t seed = 0;

    void validate() const {
        for (double r : {char_substitution_rate, word_drop_rate, delimiter_corruption_rate, panel_merge_rate})
            if (!(r >= 0 && r <= 1)) throw ConfigError("noise rates must lie in [0,1]");
        if (!(curvature_amplitude >= 0)) throw ConfigError("curvature amplitude must be non-negative");
    }

    /// Total recognition collapse typical of mixed-script CJK labels.
    static NoiseConfig cjk_failure(std::uint64_t seed) {
        NoiseConfig c;
        c.char_substitution_rate = 0.5;
        c.word_drop_rate = 0.8;
        c.seed = seed;
        return c;
    }
};

inline NoiseConfig noise_from_json(const nlohmann::json& j) {
    NoiseConfig c;
    try {
        c.char_substitution_rate = j.value("char_substitution_rate", 0.0);
        c.word_drop_rate = j.value("word_drop_rate", 0.0);
        c.delimiter_corruption_rate = j.value("delimiter_corruption_rate", 0.0);
        c.panel_merge_rate = j.value("panel_merge_rate", 0.0);
        c.curvature_amplitude = j.value("curvature_amplitude", 0.0);
        c.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed noise config: ") + e.what());
    }
    c.validate();
    return c;
}

namespace detail {

inline bool is_ingredient_delimiter(char32_t c) {
    return c == U',' || c == U';' || c == U'、' || c == U'،' || c == U'·';
}

inline std::u32string strip_trailing_delimiters(std::u32string s) {
    while (!s.empty() && (is_ingredient_delimiter(s.back()) || s.back() == U'.')) s.pop_back();
    return s;
}

} // namespace detail

/// Applies the noise modes in a fixed order: panel merges, curvature,
/// character substitutions, delimiter corruption, word dropout.
inline OcrDocument corrupt(const SyntheticLabel& label, const NoiseConfig& cfg, const ConfusionTable& confusions) {
    cfg.validate();
    Xoshiro256 rng(cfg.seed);
    const auto& ideal = label.ideal_words.words;

    struct Item {
        std::u32string text;
        Rect box;
        std::optional<std::int64_t> line_id;
    };
    std::vector<Item> items;
    items.reserve(ideal.size());

    std::vector<bool> consumed(ideal.size());
    std::map<std::size_t, std::size_t> merge_with;
    if (label.family == LayoutFamily::C && cfg.panel_merge_rate > 0) {
        std::map<std::pair<int, int>, std::size_t> at;
        for (std::size_t i = 0; i < ideal.size(); ++i) at[{label.placement[i].row, label.placement[i].panel}] = i;
        for (const auto& [key, i] : at) {
            const auto right = at.find({key.first, key.second + 1});
            if (right == at.end() || consumed[i] || consumed[right->second]) continue;
            if (rng.bernoulli(cfg.panel_merge_rate)) {
                merge_with[i] = right->second;
                consumed[i] = consumed[right->second] = true;
            }
        }
    }
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (const auto m = merge_with.find(i); m != merge_with.end()) {
            const auto& r = ideal[m->second];
            items.push_back({detail::strip_trailing_delimiters(unicode::to_u32(ideal[i].text())) + unicode::to_u32(r.text()),
                             bounding_union(ideal[i].bbox(), r.bbox()), ideal[i].line_id()});
        } else if (!consumed[i]) {
            items.push_back({unicode::to_u32(ideal[i].text()), ideal[i].bbox(), ideal[i].line_id()});
        }
    }

    if (cfg.curvature_amplitude > 0 && label.ideal_words.image_size) {
        const double page_w = label.ideal_words.image_size->width;
        for (auto& it : items)
            it.box.y += cfg.curvature_amplitude * std::sin(std::numbers::pi * centroid(it.box).x / page_w);
    }

    if (cfg.char_substitution_rate > 0 && !confusions.empty()) {
        for (auto& it : items) {
            std::u32string out;
            for (std::size_t pos = 0; pos < it.text.size();) {
                const std::vector<std::u32string>* candidates = nullptr;
                const std::size_t len = confusions.lookup(it.text, pos, &candidates);
                if (len && rng.bernoulli(cfg.char_substitution_rate)) {
                    out += (*candidates)[rng.below(candidates->size())];
                    pos += len;
                } else {
                    out.push_back(it.text[pos++]);
                }
            }
            it.text = std::move(out);
        }
    }

    if (cfg.delimiter_corruption_rate > 0) {
        for (auto& it : items) {
            std::u32string out;
            for (char32_t c : it.text) {
                if (detail::is_ingredient_delimiter(c) && rng.bernoulli(cfg.delimiter_corruption_rate)) {
                    if (rng.below(2) == 0) out.push_back(U'.');
                } else {
                    out.push_back(c);
                }
            }
            it.text = std::move(out);
        }
    }

    OcrDocument doc;
    doc.image_id = label.image_id;
    doc.engine_id = label.ideal_words.engine_id;
    doc.image_size = label.ideal_words.image_size;
    // The sinusoid only pushes boxes down, by at most the amplitude.
    if (doc.image_size) doc.image_size->height += cfg.curvature_amplitude;
    for (auto& it : items) {
        if (cfg.word_drop_rate > 0 && rng.bernoulli(cfg.word_drop_rate)) continue;
        const auto text = unicode::trim(std::u32string_view(it.text));
        if (text.empty()) continue;
        doc.words.emplace_back(unicode::to_utf8(text), it.box, std::nullopt, it.line_id);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Corpora

struct CorpusItem {
    SyntheticLabel label;
    OcrDocument ocr;
};

/// Round-robin over (template, vocabulary) pairs. Item i gets layout seed
/// derive_seed(seed, i), noise seed derive_seed(noise.seed, i) and image id
/// "syn_%05d".
inline std::vector<CorpusItem> generate_corpus(std::span<const LayoutTemplate> templates,
                                               std::span<const VocabularySet> vocabs, std::size_t count,
                                               const NoiseConfig& noise, std::uint64_t seed,
                                               const ConfusionTable& confusions) {
    if (count < 1) throw ValidationError("corpus count must be at least 1");
    if (templates.empty() || vocabs.empty()) throw ValidationError("corpus needs templates and vocabularies");
    noise.validate();
    std::vector<CorpusItem> out;
    out.reserve(count);
    const std::size_t pairs = templates.size() * vocabs.size();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t p = i % pairs;
        const auto& tmpl = templates[p / vocabs.size()];
        const auto& vocab = vocabs[p % vocabs.size()];
        char id[32];
        std::snprintf(id, sizeof id, "syn_%05zu", i);
        auto label = instantiate(tmpl, vocab, derive_seed(seed, i), id);
        NoiseConfig item_noise = noise;
        item_noise.seed = derive_seed(noise.seed, i);
        auto ocr = corrupt(label, item_noise, confusions);
        out.push_back({std::move(label), std::move(ocr)});
    }
    return out;
}

/// COCO ground truth for a corpus: image ids 1..n, file names "<image_id>.png".
inline CocoDataset corpus_to_coco(std::span<const CorpusItem> corpus) {
    CocoDataset ds;
    ds.categories.push_back({});
    std::int64_t ann_id = 1;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& l = corpus[i].label;
        const auto image_id = static_cast<std::int64_t>(i + 1);
        const auto size = l.ideal_words.image_size.value_or(ImageSize{});
        ds.images.push_back({image_id, l.image_id + ".png", size.width, size.height, l.language});
        for (const auto& ing : l.truth.ingredients)
            ds.annotations.push_back({ann_id++, image_id, 1, ing.bbox, ing.name, l.language});
    }
    return ds;
}

inline std::string corpus_manifest(std::span<const CorpusItem> corpus) {
    std::string out = "image_id,template_id,language,seed,rtl_simplified\n";
    for (const auto& item : corpus) {
        const auto& l = item.label;
        out += l.image_id + "," + l.template_id + "," + l.language + "," + std::to_string(l.seed) + "," +
               (l.rtl_simplified ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace ocrbench
