#include "interp/sl2.hpp"

#include <algorithm>
#include <tuple>

namespace interp {

bool Mat2::operator<(const Mat2& o) const { return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d); }

BigInt Mat2::max_entry() const { return std::max({a, b, c, d}); }

std::string Mat2::str() const {
    return a.str() + "," + b.str() + ";" + c.str() + "," + d.str();
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

BigInt det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

Mat2 encode(const std::string& bits) {
    Mat2 acc = Mat2::identity();
    for (char ch : bits) {
        if (ch == '0') acc = mat_mul(acc, Mat2::gen_L());
        else if (ch == '1') acc = mat_mul(acc, Mat2::gen_R());
        else throw CodecError(std::string("not a bit: '") + ch + "'");
    }
    return acc;
}

static void check_unimodular(const Mat2& m) {
    if (m.a < 0 || m.b < 0 || m.c < 0 || m.d < 0) throw CodecError("negative entry in " + m.str());
    if (det(m) != 1) throw CodecError("determinant of " + m.str() + " is " + det(m).str() + ", not 1");
}

// Right multiplication by L adds the second column to the first, by R the
// first to the second, so the last letter is read off the column order.
std::pair<Mat2, int> strip_last(const Mat2& m) {
    check_unimodular(m);
    if (m.is_identity()) throw CodecError("identity has no last letter");
    if (m.a >= m.b && m.c >= m.d) return {{m.a - m.b, m.b, m.c - m.d, m.d}, 0};
    if (m.a <= m.b && m.c <= m.d) return {{m.a, m.b - m.a, m.c, m.d - m.c}, 1};
    throw CodecError("no predecessor for " + m.str());
}

std::string decode(const Mat2& m) {
    check_unimodular(m);
    std::string rev;
    Mat2 cur = m;
    while (!cur.is_identity()) {
        auto [p, bit] = strip_last(cur);
        rev.push_back(bit ? '1' : '0');
        cur = std::move(p);
    }
    return {rev.rbegin(), rev.rend()};
}

std::vector<std::pair<Mat2, Mat2>> factorizations(const Mat2& m, unsigned bound) {
    if (bound < 1) throw CodecError("bound must be at least 1");
    std::vector<std::pair<Mat2, Mat2>> out;
    auto box = enumerate_unimodular(bound);
    for (const auto& x : box) {
        if (x.is_identity()) continue;
        for (const auto& y : box) {
            if (y.is_identity()) continue;
            if (mat_mul(x, y) == m) out.emplace_back(x, y);
        }
    }
    return out;
}

bool is_atom(const Mat2& m, unsigned bound) {
    if (det(m) != 1) throw CodecError("is_atom needs a determinant-1 matrix");
    return factorizations(m, bound).empty();
}

std::vector<Mat2> enumerate_unimodular(unsigned bound) {
    std::vector<Mat2> out;
    for (unsigned a = 0; a <= bound; ++a)
        for (unsigned b = 0; b <= bound; ++b)
            for (unsigned c = 0; c <= bound; ++c)
                for (unsigned d = 0; d <= bound; ++d)
                    if (static_cast<long>(a) * d - static_cast<long>(b) * c == 1) out.push_back({a, b, c, d});
    return out;
}

bool mat_prefix(const Mat2& a, const Mat2& b) {
    check_unimodular(a);
    check_unimodular(b);
    if (a.is_identity() || b.is_identity()) throw CodecError("mat_prefix is defined on non-identity matrices");
    if (a == b) return true;
    BigInt m = b.max_entry();
    if (a.max_entry() > m) return false;
    // C is forced by A^{-1} B; it only has to satisfy the box and det conditions.
    BigInt c1 = a.d * b.a - a.b * b.c, c2 = a.d * b.b - a.b * b.d;
    BigInt c3 = a.a * b.c - a.c * b.a, c4 = a.a * b.d - a.c * b.b;
    if (c1 < 0 || c2 < 0 || c3 < 0 || c4 < 0) return false;
    if (c1 > m || c2 > m || c3 > m || c4 > m) return false;
    Mat2 c{c1, c2, c3, c4};
    return !c.is_identity() && det(c) == 1;
}

Mat2 parse_matrix(const std::string& text) {
    std::vector<BigInt> v;
    std::string cur;
    std::size_t row_breaks = 0;
    auto flush = [&]() {
        if (cur.empty() || !std::all_of(cur.begin(), cur.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw CodecError("bad matrix literal '" + text + "', expected a,b;c,d");
        v.emplace_back(cur);
        cur.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == ',' || ch == ';') {
            flush();
            if (ch == ';') {
                ++row_breaks;
                if (v.size() != 2) throw CodecError("bad matrix literal '" + text + "', expected a,b;c,d");
            }
        } else {
            cur.push_back(ch);
        }
    }
    flush();
    if (v.size() != 4 || row_breaks != 1) throw CodecError("bad matrix literal '" + text + "', expected a,b;c,d");
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace interp
