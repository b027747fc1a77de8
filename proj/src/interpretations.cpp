#include "interp/interpretations.hpp"

#include <map>

namespace interp {

namespace {

Definition from_class(const std::string& name) {
    const auto& c = get_class_formula(name);
    return {c.params, c.body};
}

RelativeTranslation identity_between(const std::string& name, const std::string& source, const std::string& target) {
    RelativeTranslation t = identity_translation(get_theory(source).sig);
    t.name = name;
    t.identity = false;
    t.target = get_theory(target).sig;
    return t;
}

// Constant and product definitions shared by the matrix translations.
struct MatrixDefs {
    Definition zero, one, eps, product;
};

const MatrixDefs& matrix_defs() {
    static const MatrixDefs d = [] {
        MatrixDefs m;
        auto w = tuple_names("w", 4);
        auto W = tuple_vars("w", 4);
        m.zero = {w, mat_equal(W, mat_literal(1, 0, 1, 1))};
        m.one = {w, mat_equal(W, mat_literal(1, 1, 0, 1))};
        m.eps = {w, mat_equal(W, mat_literal(1, 0, 0, 1))};
        m.product = from_class("MatMul");
        return m;
    }();
    return d;
}

RelativeTranslation matrix_translation(const std::string& name, const std::string& source, const std::string& target,
                                       const std::string& domain) {
    RelativeTranslation t;
    t.name = name;
    t.source = get_theory(source).sig;
    t.target = get_theory(target).sig;
    t.m = 4;
    t.domain = from_class(domain);
    const auto& md = matrix_defs();
    t.constants["zero"] = md.zero;
    t.constants["one"] = md.one;
    if (t.source.is_constant("eps")) t.constants["eps"] = md.eps;
    t.functions["o"] = md.product;
    if (t.source.is_relation("pre")) t.relations["pre"] = from_class("MatPrefix");
    return t;
}

FormulaPtr forall_matrices(const std::vector<std::string>& bases, const FormulaPtr& body) {
    std::vector<std::string> vs;
    for (const auto& b : bases)
        for (const auto& n : tuple_names(b, 4)) vs.push_back(n);
    return forall_all(vs, body);
}

// Facts about the det-1 class used to justify the domain of tceps_in_q2.
std::vector<Obligation> tc_lemmas() {
    const auto& Ke = get_class_formula("MatK_eps");
    auto A = tuple_vars("a", 4), B = tuple_vars("b", 4);
    auto L = mat_literal(1, 0, 1, 1), R = mat_literal(1, 1, 0, 1), Id = mat_literal(1, 0, 0, 1);
    auto AL = mat_product_terms(A, L), AR = mat_product_terms(A, R);
    auto BL = mat_product_terms(B, L), BR = mat_product_terms(B, R);
    auto both = conj(Ke.at(A), Ke.at(B));
    auto dj = forall_matrices({"a", "b"}, imp(both, neg(mat_equal(AL, BR))));
    auto rc = forall_matrices({"a", "b"}, imp(both, imp(neg(mat_equal(A, B)),
                                                         conj(neg(mat_equal(AL, BL)), neg(mat_equal(AR, BR))))));
    auto pred = exists_all(tuple_names("b", 4), conj(Ke.at(B), disj(mat_equal(A, BL), mat_equal(A, BR))));
    auto pd = forall_matrices({"a"}, imp(Ke.at(A), disj(mat_equal(A, Id), pred)));
    return {{ObligationKind::Lemma, "lemma:DJ", dj},
            {ObligationKind::Lemma, "lemma:RC", rc},
            {ObligationKind::Lemma, "lemma:PD", pd}};
}

// Every element of the outer range is in the domain; keeps the relativized
// checks from holding vacuously.
Obligation covers_range(const RelativeTranslation& t) {
    auto xs = copies("x", t.m);
    return {ObligationKind::Lemma, "lemma:domain-covers-range", forall_all(xs, t.domain.at(xs))};
}

InterpretationEntry entry(RelativeTranslation t, const std::string& source, const std::string& target,
                          VerificationPlan plan) {
    InterpretationEntry e;
    e.name = t.name;
    e.source = source;
    e.target = target;
    e.translation = std::move(t);
    e.plan = plan;
    e.translation.validate();
    e.lemmas.push_back(covers_range(e.translation));
    return e;
}

VerificationPlan strings_plan() {
    VerificationPlan p;
    p.structure = StructureId::BitStrings;
    p.len = 5;
    return p;
}

VerificationPlan nats_plan(unsigned bound, std::optional<unsigned> inner = std::nullopt) {
    VerificationPlan p;
    p.structure = StructureId::Naturals;
    p.nat = bound;
    p.inner = inner;
    return p;
}

VerificationPlan matrix_plan(unsigned tuple_len, bool eps) {
    VerificationPlan p;
    p.structure = StructureId::Naturals;
    p.tuple_len = tuple_len;
    p.tuple_eps = eps;
    return p;
}

struct Registry {
    std::vector<std::string> order;
    std::map<std::string, InterpretationEntry> entries;

    void add(InterpretationEntry e) {
        order.push_back(e.name);
        entries.emplace(e.name, std::move(e));
    }

    Registry() {
        {
            auto t = identity_between("id_in_idstar", "ID", "ID*");
            t.relations["pre"] = from_class("prefix_def");
            add(entry(t, "ID", "ID*", strings_plan()));
        }
        {
            auto t = identity_between("iq_in_iqstar", "IQ", "IQ*");
            t.relations["leq"] = from_class("leq_iqstar");
            add(entry(t, "IQ", "IQ*", nats_plan(12)));
        }
        {
            auto t = identity_between("id2_in_id", "ID2", "ID");
            t.domain = from_class("K_id2");
            add(entry(t, "ID2", "ID", strings_plan()));
        }
        {
            auto t = identity_between("id3_in_id2", "ID3", "ID2");
            t.relations["suff"] = from_class("suff_id3");
            add(entry(t, "ID3", "ID2", strings_plan()));
        }
        {
            auto t = identity_between("id4_in_id3", "ID4", "ID3");
            t.relations["sub"] = from_class("sub_id4");
            add(entry(t, "ID4", "ID3", strings_plan()));
        }
        {
            auto t = identity_between("id5_in_id4", "ID5", "ID4");
            t.relations["suff"] = from_class("suff_id5");
            add(entry(t, "ID5", "ID4", strings_plan()));
        }
        {
            auto t = identity_between("idstar_in_id5", "ID*", "ID5");
            t.domain = from_class("K_idstar");
            add(entry(t, "ID*", "ID5", strings_plan()));
        }
        {
            auto t = identity_between("iqpp_in_iqp", "IQ++", "IQ+");
            t.relations["leq"] = from_class("leq_iqpp");
            add(entry(t, "IQ++", "IQ+", nats_plan(12)));
        }
        {
            auto t = identity_between("iqstar_in_iqpp", "IQ*", "IQ++");
            t.domain = from_class("K_iqstar");
            add(entry(t, "IQ*", "IQ++", nats_plan(12)));
        }
        add(entry(matrix_translation("wd_in_r", "WD", "R", "MatJ"), "WD", "R", matrix_plan(4, false)));
        add(entry(matrix_translation("idbar_in_iq2", "IDbar", "IQ2", "MatJ"), "IDbar", "IQ2", matrix_plan(4, false)));
        {
            auto e = entry(matrix_translation("tceps_in_q2", "TCeps", "Q2", "I"), "TCeps", "Q2", matrix_plan(3, true));
            for (auto& l : tc_lemmas()) e.lemmas.push_back(std::move(l));
            add(std::move(e));
        }
        {
            auto t = identity_between("iq2_in_iq", "IQ2", "IQ");
            t.domain = from_class("N");
            add(entry(t, "IQ2", "IQ", nats_plan(10, 12)));
        }
        {
            auto t = identity_between("q2_in_q", "Q2", "Q");
            t.domain = from_class("M");
            add(entry(t, "Q2", "Q", nats_plan(10, 3)));
        }
    }
};

const Registry& registry() {
    static const Registry r;
    return r;
}

}  // namespace

const std::vector<std::string>& list_interpretations() { return registry().order; }

const InterpretationEntry& get_interpretation(const std::string& name) {
    const auto& r = registry();
    auto it = r.entries.find(name);
    if (it == r.entries.end()) throw std::invalid_argument("unknown interpretation: " + name);
    return it->second;
}

RelativeTranslation pipeline(const std::vector<std::string>& names) {
    if (names.empty()) throw std::invalid_argument("pipeline needs at least one interpretation");
    RelativeTranslation acc = get_interpretation(names.front()).translation;
    for (std::size_t i = 1; i < names.size(); ++i) acc = compose(acc, get_interpretation(names[i]).translation);
    return acc;
}

std::vector<std::vector<Value>> tuple_image(const RelativeTranslation& tau, const std::vector<std::string>& strings) {
    const Signature& src = tau.source;
    if (!src.is_function("o") || !src.is_constant("zero") || !src.is_constant("one"))
        throw std::invalid_argument("tuple_image needs a translation from a string signature");
    Evaluator ev(StructureId::Naturals, nats_range(1));
    auto solve = [&](const Definition& d, const std::vector<std::string>& unknown, const Assignment& given) {
        auto w = ev.find_witness(unknown, d.body, given);
        if (!w) throw std::invalid_argument("translation " + tau.name + " gives no value for a string image");
        std::vector<Value> out;
        for (const auto& n : unknown) out.push_back(w->at(n));
        return out;
    };
    auto constant = [&](const std::string& c) {
        const Definition& d = tau.constants.at(c);
        return solve(d, d.params, {});
    };
    const auto letter0 = constant("zero");
    const auto letter1 = constant("one");
    const Definition& prod = tau.functions.at("o");
    std::map<std::string, std::vector<Value>> memo;
    std::vector<std::vector<Value>> out;
    for (const auto& s : strings) {
        if (s.empty()) {
            if (!src.is_constant("eps")) throw std::invalid_argument("the empty string needs an eps constant");
            out.push_back(constant("eps"));
            continue;
        }
        std::vector<Value> acc = s[0] == '0' ? letter0 : letter1;
        for (std::size_t i = 1; i < s.size(); ++i) {
            std::string key = s.substr(0, i + 1);
            auto it = memo.find(key);
            if (it != memo.end()) {
                acc = it->second;
                continue;
            }
            const auto& next = s[i] == '0' ? letter0 : letter1;
            Assignment given;
            std::vector<std::string> value(prod.params.end() - tau.m, prod.params.end());
            for (unsigned k = 0; k < tau.m; ++k) {
                given[prod.params[k]] = acc[k];
                given[prod.params[tau.m + k]] = next[k];
            }
            acc = solve(prod, value, given);
            memo[key] = acc;
        }
        out.push_back(acc);
    }
    return out;
}

ResolvedBounds resolve_bounds(const InterpretationEntry& e, const BoundsOverride& o) {
    ResolvedBounds r;
    r.plan = e.plan;
    auto& p = r.plan;
    auto positive = [](std::optional<unsigned> v, const char* what) {
        if (v && *v == 0) throw std::invalid_argument(std::string(what) + " must be positive");
    };
    positive(o.len, "--len");
    positive(o.nat, "--nat");
    positive(o.inner, "--inner");
    positive(o.alpha, "--alpha");
    if (o.len) {
        if (e.translation.m > 1) p.tuple_len = *o.len;
        else p.len = *o.len;
    }
    if (o.nat) p.nat = *o.nat;
    if (o.inner) p.inner = *o.inner;
    if (o.alpha) p.schema.max_len = *o.alpha;
    if (o.n) p.schema.max_n = *o.n;
    if (p.len > 12 || p.tuple_len > 10) throw std::invalid_argument("string length bound too large");
    if (p.nat > 100000) throw std::invalid_argument("natural bound too large");

    if (e.translation.m > 1) {
        std::vector<std::string> base;
        if (p.tuple_eps) base.push_back("");
        for (auto& s : strings_upto(p.tuple_len)) base.push_back(s);
        r.range = tuple_range(tuple_image(e.translation, base));
        if (p.inner) r.range.inner = nats_range(*p.inner).elements;
    } else if (p.structure == StructureId::Naturals) {
        r.range = nats_range(p.nat);
        if (p.inner) r.range.inner = nats_range(*p.inner).elements;
    } else {
        r.range = strings_range(p.len, p.structure == StructureId::BitStringsEps);
        if (p.inner) r.range.inner = strings_range(*p.inner, p.structure == StructureId::BitStringsEps).elements;
    }
    return r;
}

std::vector<Obligation> entry_obligations(const InterpretationEntry& e, const SchemaBounds& b) {
    auto out = obligations(e.translation, get_theory(e.source), b);
    out.insert(out.end(), e.lemmas.begin(), e.lemmas.end());
    return out;
}

nlohmann::json entry_json(const InterpretationEntry& e) {
    nlohmann::json j;
    j["name"] = e.name;
    j["source"] = e.source;
    j["target"] = e.target;
    j["translation"] = translation_json(e.translation);
    nlohmann::json plan;
    plan["structure"] = structure_name(e.plan.structure);
    if (e.translation.m > 1) {
        plan["tuples"] = std::string(e.plan.tuple_eps ? "strings_eps_upto(" : "strings_upto(") +
                         std::to_string(e.plan.tuple_len) + ")";
    } else if (e.plan.structure == StructureId::Naturals) {
        plan["range"] = "nats_upto(" + std::to_string(e.plan.nat) + ")";
    } else {
        plan["range"] = "strings_upto(" + std::to_string(e.plan.len) + ")";
    }
    if (e.plan.inner) plan["inner"] = *e.plan.inner;
    plan["schema_max_len"] = e.plan.schema.max_len;
    plan["schema_max_n"] = e.plan.schema.max_n;
    j["plan"] = plan;
    nlohmann::json lemmas = nlohmann::json::array();
    for (const auto& l : e.lemmas) lemmas.push_back({{"label", l.label}, {"sentence", print(l.sentence)}});
    j["lemmas"] = lemmas;
    return j;
}

}  // namespace interp
