#include "gen.hpp"
#include "interp/evaluator.hpp"
#include "interp/interpretations.hpp"
#include "interp/theory.hpp"
#include "interp/translation.hpp"

#include <doctest.h>

#include <algorithm>

using namespace interp;

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::size_t count_kind(const std::vector<Obligation>& obs, ObligationKind k) {
    return std::count_if(obs.begin(), obs.end(), [&](const Obligation& o) { return o.kind == k; });
}

void check_alpha_same(const RelativeTranslation& a, const RelativeTranslation& b) {
    REQUIRE(a.m == b.m);
    CHECK(a.domain.params == b.domain.params);
    CHECK(alpha_equal(a.domain.body, b.domain.body));
    auto same = [](const std::map<std::string, Definition>& x, const std::map<std::string, Definition>& y) {
        REQUIRE(x.size() == y.size());
        for (const auto& [k, d] : x) {
            REQUIRE(y.count(k));
            CHECK(d.params == y.at(k).params);
            CHECK(alpha_equal(d.body, y.at(k).body));
        }
    };
    same(a.relations, b.relations);
    same(a.functions, b.functions);
    same(a.constants, b.constants);
}

}  // namespace

TEST_CASE("term translation") {
    const auto& wd = get_interpretation("wd_in_r").translation;
    auto id = identity_translation(get_theory("ID").sig);
    auto two = id;
    two.m = 2;
    CHECK(print(translate_term(var("x"), {"w1", "w2"}, two)) == "(and (= w1 x#1) (= w2 x#2))");

    auto zero = translate_term(cnst("zero"), {"w1", "w2", "w3", "w4"}, wd);
    MatTerms w{var("w1"), var("w2"), var("w3"), var("w4")};
    auto is_l = mat_equal(w, mat_literal(1, 0, 1, 1));
    auto r = nats_range(2);
    CHECK(check_sentence(StructureId::Naturals, r, exists_all({"w1", "w2", "w3", "w4"}, conj(zero, is_l))).status ==
          VerdictStatus::Holds);
    CHECK(check_sentence(StructureId::Naturals, r, forall_all({"w1", "w2", "w3", "w4"}, imp(zero, is_l))).status ==
          VerdictStatus::Holds);
    CHECK(sorted(free_variables(zero)) == std::vector<std::string>{"w1", "w2", "w3", "w4"});

    auto cat = translate_term(parse_term("(o x y)", id.source), {"w"}, id);
    std::string s = print(cat);
    CHECK(s.rfind("(ex v1#1 (ex v2#1 (and", 0) == 0);
    CHECK(s.find("(= v1#1 x#1)") != std::string::npos);
    CHECK(s.find("(= v2#1 y#1)") != std::string::npos);
    CHECK(s.find("(= w (o v1#1 v2#1))") != std::string::npos);
}

TEST_CASE("formula translation") {
    const auto& idsig = get_theory("ID").sig;
    auto id = identity_translation(idsig);
    // Each argument of an atom gets its own fresh tuple, bare variables included.
    CHECK(print(translate_formula(parse_formula("(all x (= x x))", idsig), id)) ==
          "(all x#1 (imp (= x#1 x#1) (ex v1#1 (ex v2#1 (and (= v1#1 v1#1) (and (= v2#1 v2#1)"
          " (and (= v1#1 x#1) (and (= v2#1 x#1) (= v1#1 v2#1)))))))))");

    const auto& wd = get_interpretation("wd_in_r").translation;
    auto ex = translate_formula(parse_formula("(ex y (= x y))", get_theory("WD").sig), wd);
    CHECK(ex->kind == Formula::Kind::Exists);
    CHECK(sorted(free_variables(ex)) == std::vector<std::string>{"x#1", "x#2", "x#3", "x#4"});
    std::string s = print(ex);
    CHECK(s.rfind("(ex y#1 (ex y#2 (ex y#3 (ex y#4 (and", 0) == 0);
    for (int i = 1; i <= 4; ++i) CHECK(s.find("(= v2#" + std::to_string(i) + " y#" + std::to_string(i) + ")") != std::string::npos);

    const auto& qsig = get_theory("Q").sig;
    auto q2 = get_theory("Q").axioms[1].formula;
    auto tq = translate_formula(q2, identity_translation(qsig));
    for (unsigned n : {3u, 6u})
        CHECK(check_sentence(StructureId::Naturals, nats_range(n), tq).status ==
              check_sentence(StructureId::Naturals, nats_range(n), q2).status);
}

TEST_CASE("obligation lists") {
    const auto& q = get_theory("Q");
    auto obs = obligations(identity_translation(q.sig), q, {});
    CHECK(obs.size() == 1 + 3 + 1 + 7);
    CHECK(obs[0].label == "domain");
    CHECK(count_kind(obs, ObligationKind::FunctionTotalUnique) == 3);
    CHECK(count_kind(obs, ObligationKind::ConstantExistsUnique) == 1);
    CHECK(count_kind(obs, ObligationKind::AxiomTranslation) == 7);
    for (const auto& o : obs) CHECK(is_sentence(o.sentence));

    const auto& wd = get_theory("WD");
    SchemaBounds b{5, 2};
    auto wobs = obligations(get_interpretation("wd_in_r").translation, wd, b);
    std::size_t instances = 0;
    for (const auto& s : wd.schemas) instances += schema_params(s, b).size();
    CHECK(wobs.size() == 1 + 1 + 2 + instances);
    CHECK(count_kind(wobs, ObligationKind::SchemaInstanceTranslation) == instances);
    CHECK(schema_params(wd.schema("WD3"), b).size() == 6);

    auto eqt = identity_translation(q.sig);
    eqt.equality = Definition{{"x", "y"}, parse_formula("(= x y)", q.sig)};
    auto eobs = obligations(eqt, q, {});
    CHECK(count_kind(eobs, ObligationKind::EqualityAxiom) == 3 + 3);
    CHECK(eobs.size() == obs.size() + 6);
}

TEST_CASE("validation") {
    auto t = identity_translation(get_theory("ID").sig);
    t.relations.erase("pre");
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    auto u = identity_translation(get_theory("ID").sig);
    u.domain = Definition{{"x"}, parse_formula("(= x y)", u.target)};
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("property: free-variable law and determinism") {
    struct Case {
        const char* entry;
        unsigned seed;
    };
    for (auto c : {Case{"wd_in_r", 41}, Case{"id2_in_id", 42}, Case{"iq_in_iqstar", 43}, Case{"tceps_in_q2", 44}}) {
        const auto& tau = get_interpretation(c.entry).translation;
        testgen::FormulaGen gen(tau.source, c.seed);
        for (int i = 0; i < 50; ++i) {
            auto f = gen.formula(3);
            auto t1 = translate_formula(f, tau);
            auto t2 = translate_formula(f, tau);
            REQUIRE(print(t1) == print(t2));
            std::vector<std::string> expect;
            for (const auto& x : free_variables(f))
                for (const auto& xi : copies(x, tau.m)) expect.push_back(xi);
            REQUIRE(sorted(free_variables(t1)) == sorted(expect));
            auto s = gen.sentence(3);
            REQUIRE(is_sentence(translate_formula(s, tau)));
        }
    }
}

TEST_CASE("compose") {
    auto a = get_interpretation("id5_in_id4").translation;
    auto b = get_interpretation("id4_in_id3").translation;
    auto c = get_interpretation("id3_in_id2").translation;
    auto left = compose(compose(a, b), c);
    auto right = compose(a, compose(b, c));
    check_alpha_same(left, right);
    CHECK(left.source.name == a.source.name);
    CHECK(left.target.name == c.target.name);
    CHECK(left.chain.size() == 3);

    auto id = identity_translation(a.source);
    check_alpha_same(compose(id, a), a);
    check_alpha_same(compose(a, identity_translation(a.target)), a);
    CHECK_THROWS(compose(b, a));

    auto ladder = pipeline({"idstar_in_id5", "id5_in_id4", "id4_in_id3", "id3_in_id2", "id2_in_id"});
    CHECK(ladder.m == 1);
    CHECK(ladder.source.name == "ID*");
    CHECK(ladder.target.name == "ID");
    auto iq = pipeline({"iqstar_in_iqpp", "iqpp_in_iqp"});
    CHECK(iq.source.name == "IQ*");
    CHECK(iq.target.name == "IQ+");
    CHECK_THROWS(pipeline({}));
}

TEST_CASE("identity is a unit for the matrix translation") {
    const auto& wd = get_interpretation("wd_in_r").translation;
    auto c = compose(wd, identity_translation(wd.target));
    CHECK(c.m == 4);
    check_alpha_same(c, wd);
}
