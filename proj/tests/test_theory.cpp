#include "interp/evaluator.hpp"
#include "interp/theory.hpp"

#include <doctest.h>

#include <set>

using namespace interp;

namespace {

std::set<std::string> brute_windows(const std::string& a, int which) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j <= a.size(); ++j) {
            if (which == 0 && i != 0) continue;
            if (which == 1 && j != a.size()) continue;
            out.insert(a.substr(i, j - i));
        }
    return out;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("numerals and biterals") {
    CHECK(print(numeral(0)) == "zero");
    CHECK(print(numeral(2)) == "(S (S zero))");
    CHECK(print(numeral(5)) == "(S (S (S (S (S zero)))))");
    CHECK(print(biteral("0")) == "zero");
    CHECK(print(biteral("10")) == "(o one zero)");
    CHECK(print(biteral("011")) == "(o (o zero one) one)");
    CHECK_THROWS(biteral(""));
    CHECK(print(biteral("", true)) == "eps");
}

TEST_CASE("segment sets") {
    auto s = segment_sets("01");
    CHECK(s.pref == std::vector<std::string>{"0", "01"});
    CHECK(s.suff == std::vector<std::string>{"1", "01"});
    CHECK(s.sub == std::vector<std::string>{"0", "1", "01"});
    auto z = segment_sets("0");
    CHECK(z.pref == std::vector<std::string>{"0"});
    CHECK(z.sub == std::vector<std::string>{"0"});
    CHECK(segment_sets("010").sub == std::vector<std::string>{"0", "1", "01", "10", "010"});
}

TEST_CASE("catalog contents") {
    CHECK(get_theory("Q").axioms.size() == 7);
    CHECK(get_theory("Q").schemas.empty());
    CHECK(get_theory("R").axioms.empty());
    CHECK(get_theory("R").schemas.size() == 5);
    CHECK(get_theory("IQ2").axioms.size() == get_theory("IQ").axioms.size() + 8);
    CHECK(get_theory("D").axioms.size() == 7);
    CHECK(get_theory("TCeps").axioms.size() == 8);
    CHECK(get_theory("ID").axioms.size() == 3);
    CHECK(get_theory("ID").schemas.size() == 1);
    CHECK(get_theory("ID*").axioms.size() == 3);
    CHECK(get_theory("ID*").schemas.size() == 1);
    CHECK(get_theory("IDbar").axioms.size() == get_theory("ID").axioms.size() + 2);
    CHECK(get_theory("ID*").sig.relations.empty());
    CHECK_THROWS_AS(get_theory("nope"), std::invalid_argument);
}

TEST_CASE("schema instances") {
    const auto& id = get_theory("ID");
    CHECK(print(instantiate_schema(id, "ID4", SchemaParam::word("01"))) ==
          "(all x (iff (pre x (o zero one)) (or (= x zero) (= x (o zero one)))))");
    CHECK(print(instantiate_schema(get_theory("R"), "R1", SchemaParam::nat_pair(2, 1))) ==
          "(= (plus (S (S zero)) (S zero)) (S (S (S zero))))");
    CHECK_THROWS(instantiate_schema(id, "ID4", SchemaParam::nat(1)));
}

TEST_CASE("shorthands") {
    auto x = var("x"), y = var("y");
    CHECK(print(expand_shorthand("leq_l", {x, y})) == "(ex z (= (plus z x) y))");
    CHECK(print(expand_shorthand("lt_l", {x, y})) == "(ex r (and (not (= r zero)) (= (plus r x) y)))");
    auto s = print(expand_shorthand("subseq_s", {x, y}));
    CHECK(s.rfind("(or (= x y) (ex u (ex v", 0) == 0);
    CHECK(s.find("(o (o u x) v)") != std::string::npos);
}

TEST_CASE("class formulas") {
    auto mk = get_class_formula("MatK");
    CHECK(mk.params.size() == 4);
    CHECK(print(mk.body) ==
          "(and (not (and (= a#1 (S zero)) (and (= a#2 zero) (and (= a#3 zero) (= a#4 (S zero))))))"
          " (= (times a#1 a#4) (plus (S zero) (times a#2 a#3))))");
    CHECK(get_class_formula("MatMul").params.size() == 12);
    CHECK(get_class_formula("MatPrefix").params.size() == 8);
    for (const auto& n : class_names()) {
        const auto& c = get_class_formula(n);
        std::set<std::string> fv(c.body->free.begin(), c.body->free.end());
        CHECK(fv == std::set<std::string>(c.params.begin(), c.params.end()));
        check_well_formed(c.body, get_theory(c.home).sig);
    }
}

TEST_CASE("schema parameters") {
    const auto& wd = get_theory("WD");
    SchemaBounds b{5, 2};
    CHECK(schema_params(wd.schema("WD3"), b).size() == 6);
    auto p = parse_schema_param(ParamKind::BitsPair, "01,1");
    CHECK(p == SchemaParam::word_pair("01", "1"));
    CHECK(p.str() == "01,1");
    CHECK(parse_schema_param(ParamKind::Nat, "3") == SchemaParam::nat(3));
}

TEST_CASE("property: schema instances are closed, well formed and round-trip") {
    SchemaBounds b{8, 5};
    for (const auto& name : theory_names()) {
        const auto& t = get_theory(name);
        for (const auto& s : t.schemas)
            for (const auto& p : schema_params(s, b)) {
                auto f = instantiate_schema(t, s.name, p);
                REQUIRE(is_sentence(f));
                check_well_formed(f, t.sig);
                REQUIRE(structurally_equal(parse_formula(print(f), t.sig), f));
            }
    }
}

TEST_CASE("property: numerals and biterals are injective") {
    std::set<std::string> nums, bits;
    for (unsigned n = 0; n <= 8; ++n) REQUIRE(nums.insert(print(numeral(n))).second);
    for (const auto& a : strings_upto(5)) REQUIRE(bits.insert(print(biteral(a))).second);
}

TEST_CASE("property: segment sets match brute force") {
    for (const auto& a : strings_upto(10)) {
        auto s = segment_sets(a);
        REQUIRE(as_set(s.pref) == brute_windows(a, 0));
        REQUIRE(as_set(s.suff) == brute_windows(a, 1));
        REQUIRE(as_set(s.sub) == brute_windows(a, 2));
    }
}

TEST_CASE("class extensions on the standard structures") {
    SUBCASE("K_id2 holds on every nonempty string") {
        auto r = strings_range(4);
        const auto& k = get_class_formula("K_id2");
        for (const auto& v : r.elements)
            CHECK(evaluate(StructureId::BitStrings, r, k.at_vars({"w"}), {{"w", v}}));
    }
    SUBCASE("suff_id3 defines the suffix relation") {
        auto r = strings_range(4);
        const auto& c = get_class_formula("suff_id3");
        Evaluator ev(StructureId::BitStrings, r);
        for (const auto& a : strings_upto(3))
            for (const auto& b : strings_upto(3)) {
                bool expect = b.size() >= a.size() && b.compare(b.size() - a.size(), a.size(), a) == 0;
                CHECK(ev.evaluate(c.at_vars({"p", "q"}), {{"p", a}, {"q", b}}) == expect);
            }
    }
    SUBCASE("MatK holds exactly on non-identity encodings") {
        auto r = nats_range(6);
        const auto& c = get_class_formula("MatK");
        Evaluator ev(StructureId::Naturals, r);
        for (const auto& m : enumerate_unimodular(4)) {
            Assignment s{{"a", BigInt(m.a)}, {"b", BigInt(m.b)}, {"c", BigInt(m.c)}, {"d", BigInt(m.d)}};
            CHECK(ev.evaluate(c.at_vars({"a", "b", "c", "d"}), s) == !m.is_identity());
        }
    }
}
