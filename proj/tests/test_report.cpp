#include "interp/report.hpp"

#include <doctest.h>

using namespace interp;

TEST_CASE("empty report renders") {
    VerificationReport r;
    r.interpretation = "none";
    finalize_report(r);
    auto j = nlohmann::json::parse(render_report(r, "json"));
    CHECK(j["obligations"].is_array());
    CHECK(j["obligations"].empty());
    CHECK(j["summary"]["total"] == 0);
    CHECK(exit_code(r) == 0);
    CHECK_THROWS_AS(render_report(r, "xml"), std::invalid_argument);
}

TEST_CASE("failing record carries a counterexample") {
    VerificationReport r;
    r.interpretation = "x";
    ObligationRecord ok;
    ok.label = "b";
    ok.kind = ObligationKind::AxiomTranslation;
    ObligationRecord bad;
    bad.label = "a";
    bad.kind = ObligationKind::AxiomTranslation;
    bad.verdict = VerdictStatus::Fails;
    bad.counterexample = {{"x#1", BigInt(2)}};
    r.records = {ok, bad};
    finalize_report(r);
    CHECK(r.records[0].label == "a");
    CHECK(r.summary.fails == 1);
    CHECK(r.summary.holds == 1);
    CHECK(exit_code(r) == 1);
    auto j = nlohmann::json::parse(render_report(r, "json"));
    CHECK(j["obligations"][0]["verdict"] == "fails");
    CHECK(j["obligations"][0]["counterexample"][0]["value"] == "2");
    CHECK_FALSE(j["obligations"][1].contains("counterexample"));
    CHECK(render_report(r, "text").find("counterexample: x#1=2") != std::string::npos);

    r.records[0].verdict = VerdictStatus::BudgetExceeded;
    finalize_report(r);
    CHECK(exit_code(r) == 2);
}

TEST_CASE("reports are deterministic") {
    auto a = render_report(run_verification("iq_in_iqstar"), "json");
    auto b = render_report(run_verification("iq_in_iqstar"), "json");
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    for (const char* k : {"interpretation", "bounds", "obligations", "summary"}) CHECK(j.contains(k));
    CHECK(j["summary"]["holds"] == j["summary"]["total"]);
    CHECK_FALSE(j["obligations"][0].contains("elapsed_ms"));
}

TEST_CASE("starved bounds are reported honestly") {
    VerifyOptions o;
    o.bounds.len = 1;
    o.bounds.nat = 1;
    o.budget = 2000000;
    o.strict = true;
    auto r = run_verification("wd_in_r", o);
    CHECK(r.summary.fails + r.summary.budget_exceeded > 0);
    CHECK(exit_code(r) != 0);
    CHECK(r.summary.total == r.records.size());
}

TEST_CASE("exact witnesses outside a small range") {
    VerifyOptions o;
    o.bounds.len = 1;
    auto r = run_verification("iq_in_iqstar", o);
    CHECK(exit_code(r) == 0);
    o.strict = true;
    auto s = run_verification("iq_in_iqstar", o);
    CHECK(s.summary.fails > 0);
}

TEST_CASE("unknown entry and malformed bounds") {
    CHECK_THROWS(run_verification("nope"));
    VerifyOptions o;
    o.bounds.nat = 0;
    CHECK_THROWS(run_verification("iq_in_iqstar", o));
}

TEST_CASE("fnv1a") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
