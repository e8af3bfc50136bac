#include <gtest/gtest.h>

#include "ocrbench/core_model.hpp"
#include "ocrbench/random.hpp"
#include "support.hpp"

using namespace ocrbench;

TEST(Canonicalize, TrimsAndFolds) { EXPECT_EQ(canonicalize("  Gelatin ").value(), "gelatin"); }

TEST(Canonicalize, ComposesToNfc) {
    // E + U+0301 in, precomposed lowercase U+00E9 out.
    EXPECT_EQ(canonicalize("E\xCC\x81" "330").value(), "\xC3\xA9" "330");
}

TEST(Canonicalize, EmptyAfterTrimIsDistinguished) {
    EXPECT_THROW(canonicalize(""), EmptyNameError);
    EXPECT_THROW(canonicalize(" \t\n"), EmptyNameError);
}

TEST(Canonicalize, FullWidthAndIdeographicSpaceTrimmed) {
    EXPECT_EQ(canonicalize("\xE3\x80\x80" "砂糖\xE3\x80\x80").value(), "砂糖");
}

TEST(Canonicalize, Idempotent) {
    for (const char* s : {"Gelatin", "ÉCLAIR", "İçindekiler", "Straße", "ﬁsh", "Ångström", "ΣΊΣΥΦΟΣ", "砂糖",
                          "E\xCC\x81" "clair", "  mixed Case  "}) {
        const auto once = canonicalize(s);
        EXPECT_EQ(canonicalize(once.value()), once) << s;
    }
}

TEST(Canonicalize, CaseInsensitiveEquality) {
    EXPECT_EQ(canonicalize("SUGAR"), canonicalize("sugar"));
    EXPECT_EQ(canonicalize("Straße"), canonicalize("STRASSE"));
}

TEST(Centroid, Midpoints) {
    EXPECT_EQ(centroid({0, 0, 10, 4}), (Point{5, 2}));
    EXPECT_EQ(centroid({3, 7, 1, 1}), (Point{3.5, 7.5}));
    EXPECT_EQ(centroid({-2, 0, 4, 2}), (Point{0, 1}));
}

TEST(WordBox, RejectsDegenerateInput) {
    EXPECT_THROW(WordBox("", Rect{0, 0, 1, 1}), ValidationError);
    EXPECT_THROW(WordBox("x", Rect{0, 0, 0, 1}), ValidationError);
    EXPECT_THROW(WordBox("x", Rect{0, 0, 1, 1}, 1.5), ValidationError);
    EXPECT_THROW(WordBox("x", Rect{0, 0, 1, 1}, std::nullopt, -1), ValidationError);
    EXPECT_NO_THROW(WordBox("x", Rect{-3, 0, 1, 1}));
}

TEST(OcrDocument, BoundsCheckAllowsSmallOverhang) {
    auto d = testsupport::doc_of({testsupport::word("a", 99, 0, 2, 10)});
    d.image_size = ImageSize{100, 100};
    EXPECT_NO_THROW(d.validate());
    d.words.push_back(testsupport::word("b", 98, 0, 10, 10));
    EXPECT_THROW(d.validate(), ValidationError);
}

TEST(Random, SeededStreamsAreReproducible) {
    Xoshiro256 a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        differs |= x != c();
    }
    EXPECT_TRUE(differs);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Random, BelowStaysInRange) {
    Xoshiro256 r(7);
    std::vector<int> hist(7);
    for (int i = 0; i < 7000; ++i) {
        const auto v = r.below(7);
        ASSERT_LT(v, 7u);
        ++hist[v];
    }
    for (int h : hist) EXPECT_GT(h, 800);
}
