#include "interp/sl2.hpp"
#include "interp/theory.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace interp;

namespace {

Mat2 L() { return Mat2::gen_L(); }
Mat2 R() { return Mat2::gen_R(); }

std::vector<std::string> words_upto(unsigned n) {
    std::vector<std::string> out{""};
    for (auto& s : strings_upto(n)) out.push_back(s);
    return out;
}

}  // namespace

TEST_CASE("multiplication and determinant") {
    CHECK(mat_mul(L(), R()) == Mat2{1, 1, 1, 2});
    CHECK(mat_mul(L(), L()) == Mat2{1, 0, 2, 1});
    Mat2 a{3, 5, 7, 11};
    CHECK(mat_mul(a, Mat2::identity()) == a);
    CHECK(det(Mat2::identity()) == 1);
    CHECK(det(Mat2{1, 1, 1, 2}) == 1);
    CHECK(det(Mat2{1, 1, 1, 1}) == 0);
}

TEST_CASE("encode") {
    CHECK(encode("0") == L());
    CHECK(encode("01") == Mat2{1, 1, 1, 2});
    CHECK(encode("") == Mat2::identity());
    CHECK_THROWS_AS(encode("012"), CodecError);
}

TEST_CASE("strip_last and decode") {
    auto [m1, b1] = strip_last(Mat2{1, 1, 1, 2});
    CHECK(m1 == L());
    CHECK(b1 == 1);
    auto [m0, b0] = strip_last(Mat2{2, 1, 1, 1});
    CHECK(m0 == R());
    CHECK(b0 == 0);
    CHECK_THROWS(strip_last(Mat2::identity()));
    CHECK(decode(Mat2{1, 1, 1, 2}) == "01");
    CHECK(decode(Mat2::identity()).empty());
    CHECK_THROWS_AS(decode(Mat2{1, 1, 1, 1}), CodecError);
}

TEST_CASE("atoms") {
    CHECK(is_atom(L(), 5));
    CHECK_FALSE(is_atom(encode("01"), 3));
    CHECK(is_atom(Mat2::identity(), 3));
}

TEST_CASE("enumerate_unimodular bound 1") {
    auto all = enumerate_unimodular(1);
    std::vector<Mat2> expect;
    for (int bits = 0; bits < 16; ++bits) {
        Mat2 m{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1};
        if (det(m) == 1) expect.push_back(m);
    }
    std::sort(expect.begin(), expect.end());
    auto got = all;
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
    for (const auto& m : all) {
        CHECK(det(m) == 1);
        CHECK(encode(decode(m)) == m);
    }
}

TEST_CASE("mat_prefix") {
    CHECK(mat_prefix(encode("0"), encode("01")));
    CHECK_FALSE(mat_prefix(encode("1"), encode("01")));
    CHECK(mat_prefix(encode("01"), encode("01")));
}

TEST_CASE("parse_matrix") {
    CHECK(parse_matrix("1,1;1,2") == Mat2{1, 1, 1, 2});
    CHECK(parse_matrix("1,1;1,2").str() == "1,1;1,2");
    CHECK_THROWS(parse_matrix("1,1;1"));
    CHECK_THROWS(parse_matrix("1,-1;0,1"));
}

TEST_CASE("property: homomorphism for |a|+|b| <= 16") {
    auto words = words_upto(8);
    for (const auto& a : words)
        for (const auto& b : words) REQUIRE(encode(a + b) == mat_mul(encode(a), encode(b)));
    std::mt19937 rng(1);
    auto long_words = strings_upto(12);
    for (int i = 0; i < 2000; ++i) {
        const auto& a = long_words[rng() % long_words.size()];
        auto rest = strings_upto(static_cast<unsigned>(16 - a.size()));
        const auto& b = rest[rng() % rest.size()];
        REQUIRE(encode(a + b) == mat_mul(encode(a), encode(b)));
    }
}

TEST_CASE("property: bijection") {
    for (const auto& a : words_upto(12)) REQUIRE(decode(encode(a)) == a);
    for (const auto& m : enumerate_unimodular(40)) REQUIRE(encode(decode(m)) == m);
}

TEST_CASE("property: determinant is multiplicative") {
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> d(0, 1000);
    for (int i = 0; i < 500; ++i) {
        Mat2 a{d(rng), d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng), d(rng)};
        REQUIRE(det(mat_mul(a, b)) == det(a) * det(b));
    }
}

TEST_CASE("property: strip_last decreases the entry sum") {
    for (const auto& m : enumerate_unimodular(50)) {
        if (m.is_identity()) continue;
        auto [p, bit] = strip_last(m);
        REQUIRE(p.entry_sum() < m.entry_sum());
        REQUIRE(det(p) == 1);
        REQUIRE((bit == 0 || bit == 1));
    }
}

TEST_CASE("property: mat_prefix agrees with string prefixes") {
    auto words = strings_upto(5);
    for (const auto& a : words)
        for (const auto& b : words) {
            bool expect = b.compare(0, a.size(), a) == 0 && a.size() <= b.size();
            REQUIRE(mat_prefix(encode(a), encode(b)) == expect);
        }
}

TEST_CASE("property: only L and R are atoms up to 6") {
    std::vector<Mat2> atoms;
    for (const auto& m : enumerate_unimodular(6))
        if (!m.is_identity() && is_atom(m, 6)) atoms.push_back(m);
    std::sort(atoms.begin(), atoms.end());
    std::vector<Mat2> expect{L(), R()};
    std::sort(expect.begin(), expect.end());
    CHECK(atoms == expect);
}
