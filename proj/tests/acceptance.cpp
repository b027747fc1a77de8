// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "gen.hpp"
#include "interp/evaluator.hpp"
#include "interp/interpretations.hpp"
#include "interp/report.hpp"
#include "interp/sl2.hpp"
#include "interp/theory.hpp"
#include "interp/translation.hpp"

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <set>

using namespace interp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s) {
        o.ok = false;
        o.detail += fmt::format("; over the {:.0f} s limit", limit_s);
    }
    if (!o.ok) ++failures;
    fmt::print("{} criterion {}: {} ({}; {:.2f} s)\n", o.ok ? "PASS" : "FAIL", id, name, o.detail, s);
    std::fflush(stdout);
}

std::vector<std::string> words_upto(unsigned n) {
    std::vector<std::string> out{""};
    for (auto& s : strings_upto(n)) out.push_back(s);
    return out;
}

Outcome codec_bijection() {
    std::size_t strings = 0, bad = 0;
    for (const auto& a : strings_upto(12)) {
        ++strings;
        if (decode(encode(a)) != a) ++bad;
    }
    std::size_t mats = 0;
    for (const auto& m : enumerate_unimodular(40)) {
        ++mats;
        if (encode(decode(m)) != m) ++bad;
    }
    return {bad == 0 && strings == 8190, fmt::format("{} strings, {} matrices, {} mismatches", strings, mats, bad)};
}

Outcome homomorphism() {
    auto words = words_upto(12);
    std::vector<Mat2> enc;
    for (const auto& w : words) enc.push_back(encode(w));
    std::size_t pairs = 0, bad = 0;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (words[i].size() + words[j].size() > 12) continue;
            ++pairs;
            if (encode(words[i] + words[j]) != mat_mul(enc[i], enc[j])) ++bad;
        }
    return {bad == 0, fmt::format("{} pairs, {} mismatches", pairs, bad)};
}

Outcome atoms() {
    bool ok = is_atom(Mat2::gen_L(), 6) && is_atom(Mat2::gen_R(), 6);
    std::string counts;
    for (const char* w : {"00", "01", "10", "11"}) {
        auto n = factorizations(encode(w), 6).size();
        counts += fmt::format(" {}:{}", w, n);
        ok = ok && n == 1;
    }
    return {ok, "factorizations" + counts};
}

bool is_prefix(const std::string& a, const std::string& b) {
    return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

Outcome prefix_oracle() {
    std::size_t pairs = 0, bad = 0;
    auto small = strings_upto(4);
    for (const auto& a : small)
        for (const auto& b : small) {
            ++pairs;
            if (mat_prefix(encode(a), encode(b)) != is_prefix(a, b)) ++bad;
        }
    auto words = strings_upto(6);
    std::vector<Mat2> enc;
    for (const auto& w : words) enc.push_back(encode(w));
    auto t0 = Clock::now();
    std::size_t full = 0;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            ++full;
            if (mat_prefix(enc[i], enc[j]) != is_prefix(words[i], words[j])) ++bad;
        }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    return {bad == 0 && s < 60,
            fmt::format("{} pairs up to length 4, {} up to length 6 (full sweep), {} mismatches", pairs, full, bad)};
}

Outcome segment_definitions() {
    auto range = strings_range(6);
    Evaluator ev(StructureId::BitStrings, range);
    const auto& suff = get_class_formula("suff_id3");
    const auto& sub = get_class_formula("sub_id4");
    auto fs = suff.at_vars({"p", "q"});
    auto fu = sub.at_vars({"p", "q"});
    std::size_t checked = 0, bad = 0;
    for (const auto& y : strings_upto(5)) {
        auto seg = segment_sets(y);
        std::set<std::string> sf(seg.suff.begin(), seg.suff.end()), sb(seg.sub.begin(), seg.sub.end());
        for (const auto& xv : range.elements) {
            const auto& x = std::get<std::string>(xv);
            Assignment a{{"p", x}, {"q", y}};
            checked += 2;
            if (ev.evaluate(fs, a) != (sf.count(x) == 1)) ++bad;
            if (ev.evaluate(fu, a) != (sb.count(x) == 1)) ++bad;
        }
    }
    return {bad == 0, fmt::format("{} memberships, {} mismatches", checked, bad)};
}

Outcome suite() {
    std::size_t total = 0, holds = 0;
    std::string bad;
    for (const auto& name : list_interpretations()) {
        auto r = run_verification(name);
        total += r.summary.total;
        holds += r.summary.holds;
        if (exit_code(r) != 0) {
            bad += " " + name;
            for (const auto& rec : r.records)
                if (rec.verdict != VerdictStatus::Holds) bad += fmt::format("[{}:{}]", rec.label, to_string(rec.verdict));
        }
    }
    return {bad.empty() && holds == total,
            fmt::format("{} entries, {}/{} obligations hold{}", list_interpretations().size(), holds, total,
                        bad.empty() ? "" : ", not holding:" + bad)};
}

// Fixed corpus: random sentences over WD plus a few hand-written ones.
std::vector<FormulaPtr> transport_corpus() {
    const auto& sig = get_theory("WD").sig;
    std::vector<FormulaPtr> out;
    for (const char* s : {"(all x (all y (all z (= (o (o x y) z) (o x (o y z))))))",
                          "(all x (pre x x))",
                          "(all x (ex y (pre x y)))",
                          "(ex x (all y (pre x y)))",
                          "(all x (all y (imp (pre x y) (pre x (o y zero)))))",
                          "(all x (not (= (o x zero) (o x one))))",
                          "(ex x (ex y (and (not (= x y)) (= (o x y) (o y x)))))",
                          "(all x (or (pre zero x) (pre one x)))",
                          "(all x (ex y (or (= x zero) (or (= x one) (= x (o y zero))))))",
                          "(ex x (= (o x x) (o zero zero)))"})
        out.push_back(parse_formula(s, sig));
    testgen::FormulaGen gen(sig, 77, {"x", "y", "z"});
    while (out.size() < 50) out.push_back(gen.sentence(3));
    return out;
}

Outcome transport() {
    const auto& e = get_interpretation("wd_in_r");
    auto strings = strings_upto(4);
    auto target = tuple_range(tuple_image(e.translation, strings));
    auto source = strings_range(4);
    Evaluator src(StructureId::BitStrings, source);
    Evaluator tgt(StructureId::Naturals, target);
    std::size_t agree = 0, n = 0, true_count = 0;
    std::string bad;
    for (const auto& f : transport_corpus()) {
        ++n;
        bool a = src.evaluate(f, {});
        true_count += a;
        bool b = tgt.evaluate(translate_formula(f, e.translation), {});
        if (a == b) ++agree;
        else bad += " #" + std::to_string(n);
    }
    return {agree == n && n == 50, fmt::format("{}/{} agree, {} true in the source{}", agree, n, true_count,
                                               bad.empty() ? "" : ", differ:" + bad)};
}

Outcome translation_shape() {
    std::size_t n = 0, bad = 0;
    unsigned seed = 100;
    for (const char* name : {"wd_in_r", "id2_in_id", "iq_in_iqstar", "tceps_in_q2"}) {
        const auto& tau = get_interpretation(name).translation;
        testgen::FormulaGen gen(tau.source, seed++);
        for (int i = 0; i < 50; ++i, ++n) {
            auto f = gen.formula(3);
            auto t = translate_formula(f, tau);
            if (print(t) != print(translate_formula(f, tau))) ++bad;
            std::set<std::string> expect, got(free_variables(t).begin(), free_variables(t).end());
            for (const auto& x : free_variables(f))
                for (const auto& xi : copies(x, tau.m)) expect.insert(xi);
            if (expect != got) ++bad;
            auto s = gen.sentence(3);
            if (!is_sentence(translate_formula(s, tau))) ++bad;
        }
    }
    std::vector<RelativeTranslation> ladder;
    for (const char* name : {"idstar_in_id5", "id5_in_id4", "id4_in_id3", "id3_in_id2", "id2_in_id"})
        ladder.push_back(get_interpretation(name).translation);
    std::size_t triples = 0;
    for (std::size_t i = 0; i + 2 < ladder.size(); ++i) {
        ++triples;
        auto l = compose(compose(ladder[i], ladder[i + 1]), ladder[i + 2]);
        auto r = compose(ladder[i], compose(ladder[i + 1], ladder[i + 2]));
        bool same = l.m == r.m && alpha_equal(l.domain.body, r.domain.body) && l.relations.size() == r.relations.size();
        for (const auto& [k, d] : l.relations) same = same && alpha_equal(d.body, r.relations.at(k).body);
        for (const auto& [k, d] : l.functions) same = same && alpha_equal(d.body, r.functions.at(k).body);
        for (const auto& [k, d] : l.constants) same = same && alpha_equal(d.body, r.constants.at(k).body);
        if (!same) ++bad;
    }
    return {bad == 0, fmt::format("{} formulas, {} ladder triples, {} violations", n, triples, bad)};
}

Outcome catalog_fidelity() {
    struct Want {
        const char* theory;
        std::size_t axioms, schemas;
    };
    std::string bad;
    for (auto w : {Want{"Q", 7, 0}, Want{"D", 7, 0}, Want{"TCeps", 8, 0}, Want{"ID", 3, 1}, Want{"ID*", 3, 1}}) {
        const auto& t = get_theory(w.theory);
        if (t.axioms.size() != w.axioms || t.schemas.size() != w.schemas)
            bad += fmt::format(" {}={}+{}", w.theory, t.axioms.size(), t.schemas.size());
    }
    struct Shape {
        const char* theory;
        const char* schema;
        SchemaParam param;
        const char* text;
    };
    for (const auto& s : {Shape{"ID", "ID4", SchemaParam::word("01"),
                                "(all x (iff (pre x (o zero one)) (or (= x zero) (= x (o zero one)))))"},
                          Shape{"IQ", "IQ3", SchemaParam::nat(1),
                                "(all x (iff (leq x (S zero)) (or (= x zero) (= x (S zero)))))"},
                          Shape{"R", "R1", SchemaParam::nat_pair(2, 1),
                                "(= (plus (S (S zero)) (S zero)) (S (S (S zero))))"}}) {
        auto got = print(instantiate_schema(get_theory(s.theory), s.schema, s.param));
        if (got != s.text) bad += fmt::format(" {}[{}]", s.schema, s.param.str());
    }
    return {bad.empty(), bad.empty() ? "counts and instance shapes match" : "mismatch:" + bad};
}

}  // namespace

int main() {
    criterion(1, "codec bijection", 10, codec_bijection);
    criterion(2, "monoid homomorphism", 10, homomorphism);
    criterion(3, "atoms of the matrix monoid", 5, atoms);
    criterion(4, "prefix relation oracle", 0, prefix_oracle);
    criterion(5, "suffix and substring definitions", 0, segment_definitions);
    criterion(6, "interpretation suite", 600, suite);
    criterion(7, "transport along wd_in_r", 0, transport);
    criterion(8, "translation determinism and shape", 0, translation_shape);
    criterion(9, "theory catalog fidelity", 0, catalog_fidelity);
    fmt::print("{} of 9 criteria failed\n", failures);
    return failures ? 1 : 0;
}
