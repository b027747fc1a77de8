#include "gen.hpp"
#include "interp/evaluator.hpp"
#include "interp/interpretations.hpp"
#include "interp/theory.hpp"
#include "interp/translation.hpp"

#include <doctest.h>

using namespace interp;

namespace {

const Signature& qsig() { return get_theory("Q").sig; }
FormulaPtr q(const std::string& s) { return parse_formula(s, qsig()); }

std::string shown(const Value& v) { return value_str(v); }

}  // namespace

TEST_CASE("ranges") {
    auto s = strings_range(2).elements;
    REQUIRE(s.size() == 6);
    CHECK(shown(s[0]) == "0");
    CHECK(shown(s[5]) == "11");
    auto n = nats_range(3).elements;
    REQUIRE(n.size() == 4);
    CHECK(shown(n[3]) == "3");
    CHECK(make_range("strings_upto(2)").elements == s);
    CHECK(make_range("nats_upto(3)").elements == n);
    CHECK(make_range("strings_eps_upto(1)").elements.size() == 3);
    CHECK_THROWS(make_range("strings_upto(0)"));
    CHECK_THROWS(make_range("ints(4)"));
}

TEST_CASE("tuple image of the matrix translation") {
    auto img = tuple_image(get_interpretation("wd_in_r").translation, strings_upto(2));
    std::set<std::vector<std::string>> got;
    for (const auto& t : img) {
        std::vector<std::string> row;
        for (const auto& v : t) row.push_back(value_str(v));
        got.insert(row);
    }
    std::set<std::vector<std::string>> expect{{"1", "0", "1", "1"}, {"1", "1", "0", "1"}, {"1", "0", "2", "1"},
                                              {"1", "1", "1", "2"}, {"2", "1", "1", "1"}, {"1", "2", "0", "1"}};
    CHECK(got == expect);
}

TEST_CASE("evaluate") {
    auto r = nats_range(5);
    CHECK(evaluate(StructureId::Naturals, r, q("(all x (= (plus x zero) x))"), {}));
    auto v = check_sentence(StructureId::Naturals, r, q("(all x (= (times x x) x))"));
    CHECK(v.status == VerdictStatus::Fails);
    REQUIRE(v.counterexample.size() == 1);
    CHECK(v.counterexample[0].first == "x");
    CHECK(shown(v.counterexample[0].second) == "2");

    const auto& id = get_theory("ID");
    CHECK(evaluate(StructureId::BitStrings, strings_range(3), instantiate_schema(id, "ID4", SchemaParam::word("01")),
                   {}));
}

TEST_CASE("check_sentence") {
    auto r = nats_range(8);
    CHECK(check_sentence(StructureId::Naturals, r, get_theory("Q").axioms[1].formula).status == VerdictStatus::Holds);
    auto v = check_sentence(StructureId::Naturals, r, q("(all x (ex y (= (S y) x)))"));
    CHECK(v.status == VerdictStatus::Fails);
    REQUIRE_FALSE(v.counterexample.empty());
    CHECK(shown(v.counterexample[0].second) == "0");
    CHECK_THROWS(check_sentence(StructureId::Naturals, r, q("(= x x)")));
}

TEST_CASE("translated AT0 of id2_in_id holds") {
    const auto& e = get_interpretation("id2_in_id");
    FormulaPtr at0;
    for (const auto& a : get_theory("ID2").axioms)
        if (a.label == "AT0") at0 = a.formula;
    REQUIRE(at0);
    auto v = check_sentence(StructureId::BitStrings, strings_range(4), translate_formula(at0, e.translation));
    CHECK(v.status == VerdictStatus::Holds);
}

TEST_CASE("budget") {
    EvalOptions o;
    o.budget = 50;
    auto v = check_sentence(StructureId::Naturals, nats_range(30),
                            q("(all x (all y (all z (= (plus (plus x y) z) (plus x (plus y z))))))"), o);
    CHECK(v.status == VerdictStatus::BudgetExceeded);
}

TEST_CASE("atoms are exact past the range") {
    auto r = nats_range(3);
    CHECK(evaluate(StructureId::Naturals, r, q("(= (plus (S (S (S zero))) (S (S (S (S zero))))) (S (S (S (S (S (S (S zero))))))))"), {}));
    EvalOptions strict;
    strict.strict = true;
    CHECK_FALSE(evaluate(StructureId::Naturals, r, q("(ex y (= y (S (S (S (S zero))))))"), {}, strict));
}

TEST_CASE("segment relations agree with segment_sets") {
    auto r = strings_range(8);
    const auto& sig3 = get_theory("ID4").sig;
    auto pre = parse_formula("(pre p q)", sig3), suff = parse_formula("(suff p q)", sig3),
         sub = parse_formula("(sub p q)", sig3);
    Evaluator ev(StructureId::BitStrings, r);
    auto ys = strings_upto(8);
    for (std::size_t i = 0; i < ys.size(); i += 13) {
        const auto& y = ys[i];
        auto seg = segment_sets(y);
        std::set<std::string> p(seg.pref.begin(), seg.pref.end()), s(seg.suff.begin(), seg.suff.end()),
            u(seg.sub.begin(), seg.sub.end());
        for (const auto& x : strings_upto(static_cast<unsigned>(y.size()))) {
            Assignment a{{"p", x}, {"q", y}};
            REQUIRE(ev.evaluate(pre, a) == (p.count(x) == 1));
            REQUIRE(ev.evaluate(suff, a) == (s.count(x) == 1));
            REQUIRE(ev.evaluate(sub, a) == (u.count(x) == 1));
        }
    }
}

TEST_CASE("shorthands evaluate like their expansions") {
    auto r = nats_range(6);
    auto lhs = expand_shorthand("leq_l", {var("a"), var("b")});
    for (unsigned a = 0; a <= 6; ++a)
        for (unsigned b = 0; b <= 6; ++b)
            CHECK(evaluate(StructureId::Naturals, r, lhs, {{"a", BigInt(a)}, {"b", BigInt(b)}}) == (a <= b));
    auto sub = expand_shorthand("subseq_s", {var("a"), var("b")});
    auto sr = strings_range(4);
    for (const auto& a : strings_upto(3))
        for (const auto& b : strings_upto(3))
            CHECK(evaluate(StructureId::BitStrings, sr, sub, {{"a", a}, {"b", b}}) ==
                  (b.find(a) != std::string::npos));
}

TEST_CASE("property: agrees with the naive evaluator") {
    EvalOptions strict;
    strict.strict = true;
    testgen::FormulaGen nat_gen(structure_signature(StructureId::Naturals), 21);
    testgen::FormulaGen str_gen(structure_signature(StructureId::BitStrings), 22);
    testgen::FormulaGen eps_gen(structure_signature(StructureId::BitStringsEps), 23);
    int checked = 0;
    for (int i = 0; i < 70; ++i) {
        auto f = nat_gen.sentence(3);
        auto r = nats_range(static_cast<unsigned>(2 + i % 4));
        REQUIRE(evaluate(StructureId::Naturals, r, f, {}, strict) == naive_evaluate(StructureId::Naturals, r, f, {}));
        ++checked;
    }
    for (int i = 0; i < 70; ++i) {
        auto f = str_gen.sentence(3);
        auto r = strings_range(1 + i % 2);
        REQUIRE(evaluate(StructureId::BitStrings, r, f, {}, strict) ==
                naive_evaluate(StructureId::BitStrings, r, f, {}));
        ++checked;
    }
    for (int i = 0; i < 60; ++i) {
        auto f = eps_gen.sentence(3);
        auto r = strings_range(1 + i % 2, true);
        REQUIRE(evaluate(StructureId::BitStringsEps, r, f, {}, strict) ==
                naive_evaluate(StructureId::BitStringsEps, r, f, {}));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("property: existential sentences are monotone in the range") {
    EvalOptions strict;
    strict.strict = true;
    testgen::FormulaGen gen(structure_signature(StructureId::BitStrings), 31);
    int upward = 0;
    for (int i = 0; i < 150; ++i) {
        auto body = gen.existential(3);
        auto fv = free_variables(body);
        auto f = fv.empty() ? body : exists_all(fv, body);
        bool small = evaluate(StructureId::BitStrings, strings_range(1), f, {}, strict);
        bool large = evaluate(StructureId::BitStrings, strings_range(3), f, {}, strict);
        if (small) {
            REQUIRE(large);
            ++upward;
        }
    }
    CHECK(upward > 0);
}

TEST_CASE("evaluator reuse") {
    Evaluator ev(StructureId::Naturals, nats_range(6));
    auto f = q("(all x (ex y (= y (S x))))");
    CHECK(ev.check_sentence(f).status == VerdictStatus::Holds);
    auto before = ev.block_count();
    CHECK(ev.check_sentence(f).status == VerdictStatus::Holds);
    CHECK(ev.block_count() == before);
}
