#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace interp {

using BigInt = boost::multiprecision::cpp_int;

// [[a, b], [c, d]] with nonnegative entries.
struct Mat2 {
    BigInt a, b, c, d;

    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(const Mat2& o) const { return !(*this == o); }
    bool operator<(const Mat2& o) const;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 gen_L() { return {1, 0, 1, 1}; }  // letter 0
    static Mat2 gen_R() { return {1, 1, 0, 1}; }  // letter 1

    bool is_identity() const { return *this == identity(); }
    BigInt max_entry() const;
    BigInt entry_sum() const { return a + b + c + d; }
    std::string str() const;  // "a,b;c,d"
};

class CodecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Mat2 mat_mul(const Mat2& x, const Mat2& y);
BigInt det(const Mat2& m);

// Letters are '0' and '1'; the empty string maps to the identity.
Mat2 encode(const std::string& bits);
std::pair<Mat2, int> strip_last(const Mat2& m);
std::string decode(const Mat2& m);

// No det-1 factors B, C with entries in [0, bound], both non-identity, and BC = A.
bool is_atom(const Mat2& m, unsigned bound);
// Nontrivial factorizations (B, C) of A with entries in [0, bound].
std::vector<std::pair<Mat2, Mat2>> factorizations(const Mat2& m, unsigned bound);
std::vector<Mat2> enumerate_unimodular(unsigned bound);
bool mat_prefix(const Mat2& a, const Mat2& b);

Mat2 parse_matrix(const std::string& text);

}  // namespace interp
