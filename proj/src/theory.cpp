#include "interp/theory.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace interp {

std::string to_string(ParamKind k) {
    switch (k) {
        case ParamKind::Nat: return "nat";
        case ParamKind::NatPair: return "nat_pair";
        case ParamKind::Bits: return "bits";
        case ParamKind::BitsPair: return "bits_pair";
    }
    return "?";
}

ParamKind SchemaParam::kind() const {
    if (bits.empty()) return nats.size() == 2 ? ParamKind::NatPair : ParamKind::Nat;
    return bits.size() == 2 ? ParamKind::BitsPair : ParamKind::Bits;
}

std::string SchemaParam::str() const {
    std::string out;
    for (std::size_t i = 0; i < nats.size(); ++i) out += (i ? "," : "") + std::to_string(nats[i]);
    for (std::size_t i = 0; i < bits.size(); ++i) out += (i ? "," : "") + bits[i];
    return out;
}

static std::vector<std::string> split_comma(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

SchemaParam parse_schema_param(ParamKind kind, const std::string& text) {
    auto parts = split_comma(text);
    bool pair = kind == ParamKind::NatPair || kind == ParamKind::BitsPair;
    if (parts.size() != (pair ? 2u : 1u))
        throw std::invalid_argument("parameter '" + text + "' does not match kind " + to_string(kind));
    SchemaParam p;
    for (const auto& s : parts) {
        if (s.empty()) throw std::invalid_argument("empty parameter component in '" + text + "'");
        if (kind == ParamKind::Nat || kind == ParamKind::NatPair) {
            if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 9)
                throw std::invalid_argument("not a natural number: '" + s + "'");
            p.nats.push_back(static_cast<unsigned>(std::stoul(s)));
        } else {
            if (!std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; }))
                throw std::invalid_argument("not a bit string: '" + s + "'");
            p.bits.push_back(s);
        }
    }
    return p;
}

const Schema& Theory::schema(const std::string& n) const {
    for (const auto& s : schemas)
        if (s.name == n) return s;
    throw std::invalid_argument("theory " + name + " has no schema " + n);
}

std::vector<std::string> strings_upto(unsigned L) {
    std::vector<std::string> out;
    std::vector<std::string> layer = {""};
    for (unsigned len = 1; len <= L; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer) {
            next.push_back(s + '0');
            next.push_back(s + '1');
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::vector<SchemaParam> schema_params(const Schema& s, const SchemaBounds& b) {
    std::vector<SchemaParam> all;
    switch (s.kind) {
        case ParamKind::Nat:
            for (unsigned n = 0; n <= b.max_n; ++n) all.push_back(SchemaParam::nat(n));
            break;
        case ParamKind::NatPair:
            for (unsigned n = 0; n <= b.max_n; ++n)
                for (unsigned m = 0; m <= b.max_n; ++m) all.push_back(SchemaParam::nat_pair(n, m));
            break;
        case ParamKind::Bits:
            for (const auto& a : strings_upto(b.max_len)) all.push_back(SchemaParam::word(a));
            break;
        case ParamKind::BitsPair: {
            auto ws = strings_upto(b.max_len);
            for (const auto& a : ws)
                for (const auto& c : ws) all.push_back(SchemaParam::word_pair(a, c));
            break;
        }
    }
    if (!s.admits) return all;
    std::vector<SchemaParam> out;
    for (auto& p : all)
        if (s.admits(p)) out.push_back(std::move(p));
    return out;
}

TermPtr numeral(unsigned n) {
    TermPtr t = cnst("zero");
    for (unsigned i = 0; i < n; ++i) t = app("S", {t});
    return t;
}

TermPtr biteral(const std::string& bits, bool allow_empty) {
    if (bits.empty()) {
        if (!allow_empty) throw std::invalid_argument("biteral of the empty string needs the eps signature");
        return cnst("eps");
    }
    TermPtr t;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument(std::string("not a bit: '") + c + "'");
        TermPtr letter = cnst(c == '0' ? "zero" : "one");
        t = t ? app("o", {t, letter}) : letter;
    }
    return t;
}

SegmentSets segment_sets(const std::string& alpha) {
    if (alpha.empty()) throw std::invalid_argument("segment_sets needs a nonempty string");
    std::set<std::pair<std::size_t, std::string>> pre, suf, sub;
    std::size_t n = alpha.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t len = 1; i + len <= n; ++len) {
            std::string w = alpha.substr(i, len);
            sub.insert({len, w});
            if (i == 0) pre.insert({len, w});
            if (i + len == n) suf.insert({len, w});
        }
    auto flat = [](const std::set<std::pair<std::size_t, std::string>>& s) {
        std::vector<std::string> out;
        for (const auto& [l, w] : s) out.push_back(w);
        return out;
    };
    return {flat(pre), flat(suf), flat(sub)};
}

// ---- shorthands ----------------------------------------------------------

namespace {

std::string pick_name(const std::string& preferred, const std::set<std::string>& avoid) {
    std::string n = preferred;
    while (avoid.count(n)) n = primed(n);
    return n;
}

FormulaPtr disj_eqs(const TermPtr& x, const std::vector<TermPtr>& ts) {
    std::vector<FormulaPtr> ds;
    for (const auto& t : ts) ds.push_back(eq(x, t));
    return disj_all(ds);
}

std::vector<TermPtr> biterals(const std::vector<std::string>& ws) {
    std::vector<TermPtr> out;
    for (const auto& w : ws) out.push_back(biteral(w));
    return out;
}

std::vector<TermPtr> numerals_upto(unsigned n) {
    std::vector<TermPtr> out;
    for (unsigned k = 0; k <= n; ++k) out.push_back(numeral(k));
    return out;
}

TermPtr cat(TermPtr a, TermPtr b) { return app("o", {std::move(a), std::move(b)}); }
TermPtr add(TermPtr a, TermPtr b) { return app("plus", {std::move(a), std::move(b)}); }
TermPtr mul(TermPtr a, TermPtr b) { return app("times", {std::move(a), std::move(b)}); }

}  // namespace

const std::vector<std::string>& shorthand_names() {
    static const std::vector<std::string> names = {"subseq_s", "leq_l", "lt_l", "prefix_def", "sub_def"};
    return names;
}

FormulaPtr expand_shorthand(const std::string& name, const std::vector<TermPtr>& args) {
    if (std::find(shorthand_names().begin(), shorthand_names().end(), name) == shorthand_names().end())
        throw std::invalid_argument("unknown shorthand: " + name);
    if (args.size() != 2) throw std::invalid_argument("shorthand " + name + " takes two arguments");
    std::set<std::string> avoid;
    for (const auto& a : args) collect_variables(a, avoid);
    const TermPtr& x = args[0];
    const TermPtr& y = args[1];
    if (name == "leq_l") {
        auto z = pick_name("z", avoid);
        return exists(z, eq(add(var(z), x), y));
    }
    if (name == "lt_l") {
        auto r = pick_name("r", avoid);
        return exists(r, conj(neg(eq(var(r), cnst("zero"))), eq(add(var(r), x), y)));
    }
    if (name == "prefix_def") {
        auto z = pick_name("z", avoid);
        return disj(eq(y, x), exists(z, eq(y, cat(x, var(z)))));
    }
    if (name == "subseq_s") {
        auto u = pick_name("u", avoid);
        avoid.insert(u);
        auto v = pick_name("v", avoid);
        auto U = var(u), V = var(v);
        return disj(eq(x, y), exists(u, exists(v, disj_all({eq(y, cat(U, x)), eq(y, cat(x, V)),
                                                             eq(y, cat(cat(U, x), V))}))));
    }
    // sub_def
    auto u = pick_name("u", avoid);
    return disj_all({rel("pre", {x, y}), rel("suff", {x, y}),
                     exists(u, conj(rel("pre", {var(u), y}), rel("suff", {x, var(u)})))});
}

// ---- signatures and theories --------------------------------------------

namespace {

Signature arithmetic(const std::string& name, bool with_leq) {
    Signature s;
    s.name = name;
    s.constants = {"zero"};
    s.functions = {{"S", 1}, {"plus", 2}, {"times", 2}};
    if (with_leq) s.relations = {{"leq", 2}};
    s.validate();
    return s;
}

Signature strings(const std::string& name, std::vector<std::string> rels, bool eps = false) {
    Signature s;
    s.name = name;
    s.constants = {"zero", "one"};
    if (eps) s.constants.insert("eps");
    s.functions = {{"o", 2}};
    for (const auto& r : rels) s.relations[r] = 2;
    s.validate();
    return s;
}

// Atoms naming a shorthand or an already defined class are replaced by
// their expansion, so definitions can be written in terms of each other.
FormulaPtr expand_macros(const FormulaPtr& f, const std::map<std::string, ClassFormula>& classes) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Eq: return f;
        case K::Rel: {
            auto it = classes.find(f->name);
            if (it != classes.end()) return it->second.at(f->terms);
            if (std::find(shorthand_names().begin(), shorthand_names().end(), f->name) != shorthand_names().end())
                return expand_shorthand(f->name, f->terms);
            return f;
        }
        case K::Not: return neg(expand_macros(f->lhs, classes));
        case K::Forall:
        case K::Exists: return make_quantifier(f->kind, f->name, expand_macros(f->lhs, classes));
        default: return make_binary(f->kind, expand_macros(f->lhs, classes), expand_macros(f->rhs, classes));
    }
}

FormulaPtr quantify_all(Formula::Kind k, const std::vector<std::string>& vs, FormulaPtr body) {
    for (std::size_t i = vs.size(); i-- > 0;) body = make_quantifier(k, vs[i], body);
    return body;
}

struct Catalog {
    std::map<std::string, Theory> theories;
    std::map<std::string, ClassFormula> classes;
    std::vector<std::string> class_order;

    Theory& add_theory(const std::string& name, Signature sig) {
        sig.name = name;
        Theory t;
        t.name = name;
        t.sig = std::move(sig);
        return theories.emplace(name, std::move(t)).first->second;
    }

    FormulaPtr parse_in(const std::string& home, const std::string& text) {
        Signature sig = theories.at(home).sig;
        for (const auto& [n, c] : classes) sig.relations[n] = static_cast<int>(c.params.size());
        for (const auto& n : shorthand_names()) sig.relations[n] = 2;
        return expand_macros(parse_formula(text, sig), classes);
    }

    void axiom(Theory& t, const std::string& label, const std::string& text) {
        auto f = parse_in(t.name, text);
        if (!is_sentence(f)) throw std::logic_error("axiom " + label + " is not closed");
        t.axioms.push_back({label, f});
    }

    void copy_axioms(Theory& to, const std::string& from, const std::vector<std::string>& labels) {
        const Theory& src = theories.at(from);
        for (const auto& l : labels) {
            auto it = std::find_if(src.axioms.begin(), src.axioms.end(), [&](const Axiom& a) { return a.label == l; });
            if (it == src.axioms.end()) throw std::logic_error("no axiom " + l + " in " + from);
            to.axioms.push_back(*it);
        }
    }

    void add_class(const std::string& name, std::vector<std::string> params, const std::string& home,
                   FormulaPtr body) {
        const auto& fv = body->free;
        std::set<std::string> a(fv.begin(), fv.end()), b(params.begin(), params.end());
        if (a != b || b.size() != params.size())
            throw std::logic_error("class " + name + " has free variables other than its parameters");
        check_well_formed(body, theories.at(home).sig);
        classes.emplace(name, ClassFormula{name, std::move(params), std::move(body), home});
        class_order.push_back(name);
    }

    void defclass(const std::string& name, std::vector<std::string> params, const std::string& home,
                  const std::string& text) {
        add_class(name, std::move(params), home, parse_in(home, text));
    }

    Catalog();
    void build_theories();
    void build_classes();
};

Schema numeral_disjunction(const std::string& name, bool biconditional, bool lengthwise) {
    return {name, ParamKind::Nat,
            [=](const SchemaParam& p) {
                unsigned n = p.nats.at(0);
                auto x = var("x");
                FormulaPtr lhs = lengthwise ? expand_shorthand("leq_l", {x, numeral(n)}) : rel("leq", {x, numeral(n)});
                auto rhs = disj_eqs(x, numerals_upto(n));
                return forall("x", biconditional ? iff(lhs, rhs) : imp(lhs, rhs));
            },
            nullptr};
}

// forall x (R x alpha <-> OR over the chosen segments).
Schema segment_biconditional(const std::string& name, const std::string& relation,
                             std::vector<std::string> SegmentSets::*which) {
    return {name, ParamKind::Bits,
            [=](const SchemaParam& p) {
                const auto& a = p.bits.at(0);
                auto x = var("x");
                auto segs = segment_sets(a).*which;
                return forall("x", iff(rel(relation, {x, biteral(a)}), disj_eqs(x, biterals(segs))));
            },
            nullptr};
}

Schema substring_star(const std::string& name) {
    return {name, ParamKind::Bits,
            [=](const SchemaParam& p) {
                const auto& a = p.bits.at(0);
                auto x = var("x");
                return forall("x", imp(expand_shorthand("subseq_s", {x, biteral(a)}),
                                       disj_eqs(x, biterals(segment_sets(a).sub))));
            },
            nullptr};
}

bool distinct_pair(const SchemaParam& p) {
    if (!p.bits.empty()) return p.bits[0] != p.bits[1];
    return p.nats[0] != p.nats[1];
}

Catalog::Catalog() {
    build_theories();
    build_classes();
}

void Catalog::build_theories() {
    // Arithmetic.
    {
        auto& q = add_theory("Q", arithmetic("Q", false));
        axiom(q, "Q1", "(all x (all y (imp (not (= x y)) (not (= (S x) (S y))))))");
        axiom(q, "Q2", "(all x (not (= (S x) zero)))");
        axiom(q, "Q3", "(all x (or (= x zero) (ex y (= x (S y)))))");
        axiom(q, "Q4", "(all x (= (plus x zero) x))");
        axiom(q, "Q5", "(all x (all y (= (plus x (S y)) (S (plus x y)))))");
        axiom(q, "Q6", "(all x (= (times x zero) zero))");
        axiom(q, "Q7", "(all x (all y (= (times x (S y)) (plus (times x y) x))))");
    }
    {
        auto& r = add_theory("R", arithmetic("R", true));
        r.schemas.push_back({"R1", ParamKind::NatPair,
                             [](const SchemaParam& p) {
                                 unsigned n = p.nats[0], m = p.nats[1];
                                 return eq(add(numeral(n), numeral(m)), numeral(n + m));
                             },
                             nullptr});
        r.schemas.push_back({"R2", ParamKind::NatPair,
                             [](const SchemaParam& p) {
                                 unsigned n = p.nats[0], m = p.nats[1];
                                 return eq(mul(numeral(n), numeral(m)), numeral(n * m));
                             },
                             nullptr});
        r.schemas.push_back({"R3", ParamKind::NatPair,
                             [](const SchemaParam& p) { return neg(eq(numeral(p.nats[0]), numeral(p.nats[1]))); },
                             distinct_pair});
        r.schemas.push_back(numeral_disjunction("R4", false, false));
        r.schemas.push_back({"R5", ParamKind::Nat,
                             [](const SchemaParam& p) {
                                 auto x = var("x");
                                 auto n = numeral(p.nats[0]);
                                 return forall("x", disj(rel("leq", {x, n}), rel("leq", {n, x})));
                             },
                             nullptr});
    }
    const std::vector<std::string> iq_base = {"Q1", "Q2", "Q4", "Q5", "Q6", "Q7"};
    {
        auto& t = add_theory("IQ", arithmetic("IQ", true));
        copy_axioms(t, "Q", iq_base);
        t.schemas.push_back(numeral_disjunction("IQ3", true, false));
    }
    {
        auto& t = add_theory("IQ*", arithmetic("IQ*", false));
        copy_axioms(t, "Q", iq_base);
        t.schemas.push_back(numeral_disjunction("IQ3*", false, true));
    }
    {
        auto& t = add_theory("IQ+", arithmetic("IQ+", true));
        copy_axioms(t, "Q", iq_base);
        axiom(t, "P1", "(all x (all y (all z (= (plus (plus x y) z) (plus x (plus y z))))))");
        axiom(t, "P2", "(all x (all y (all z (= (times x (plus y z)) (plus (times x y) (times x z))))))");
        axiom(t, "P3", "(all x (all y (all z (= (times (times x y) z) (times x (times y z))))))");
        t.schemas.push_back(numeral_disjunction("IQ3", true, false));
    }
    {
        auto& t = add_theory("IQ++", arithmetic("IQ++", true));
        copy_axioms(t, "IQ+", {"Q1", "Q2", "Q4", "Q5", "Q6", "Q7", "P1", "P2", "P3"});
        axiom(t, "PP1", "(all x (leq zero x))");
        axiom(t, "PP2", "(all x (all y (imp (leq x y) (leq (S x) (S y)))))");
        t.schemas.push_back(numeral_disjunction("IQ3", true, false));
    }
    const std::vector<std::pair<std::string, std::string>> ring = {
        {"I", "(all x (all y (all z (= (times x (plus y z)) (plus (times x y) (times x z))))))"},
        {"II", "(all x (all y (all z (= (plus (plus x y) z) (plus x (plus y z))))))"},
        {"III", "(all x (all y (all z (= (times (times x y) z) (times x (times y z))))))"},
        {"IV", "(all x (all y (= (plus x y) (plus y x))))"},
        {"V", "(all x (all y (= (times x y) (times y x))))"},
        {"VI", "(all x (all y (all z (imp (= (plus x z) (plus y z)) (= x y)))))"},
        {"VII", "(all x (all y (imp (= (plus x y) zero) (and (= x zero) (= y zero)))))"},
        {"VIII", "(all x (all y (imp (= (times x y) zero) (or (= x zero) (= y zero)))))"},
    };
    {
        auto& t = add_theory("IQ2", arithmetic("IQ2", true));
        copy_axioms(t, "Q", iq_base);
        for (const auto& [l, s] : ring) axiom(t, l, s);
        t.schemas.push_back(numeral_disjunction("IQ3", true, false));
    }
    {
        auto& t = add_theory("Q2", arithmetic("Q2", false));
        copy_axioms(t, "Q", {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7"});
        for (std::size_t i = 0; i < 6; ++i) axiom(t, ring[i].first, ring[i].second);
        axiom(t, "TRI", "(all x (all y (or (lt_l x y) (or (= x y) (lt_l y x)))))");
    }

    // Concatenation.
    {
        auto& t = add_theory("WD", strings("WD", {"pre"}));
        t.schemas.push_back({"WD1", ParamKind::BitsPair,
                             [](const SchemaParam& p) {
                                 return eq(cat(biteral(p.bits[0]), biteral(p.bits[1])), biteral(p.bits[0] + p.bits[1]));
                             },
                             nullptr});
        t.schemas.push_back({"WD2", ParamKind::BitsPair,
                             [](const SchemaParam& p) { return neg(eq(biteral(p.bits[0]), biteral(p.bits[1]))); },
                             distinct_pair});
        t.schemas.push_back(segment_biconditional("WD3", "pre", &SegmentSets::pref));
    }
    const std::vector<std::pair<std::string, std::string>> d13 = {
        {"1", "(all x (all y (all z (= (o (o x y) z) (o x (o y z))))))"},
        {"2", "(all x (all y (imp (not (= x y)) (and (not (= (o x zero) (o y zero))) (not (= (o x one) (o y one)))))))"},
        {"3", "(all x (all y (not (= (o x zero) (o y one)))))"},
    };
    {
        auto& t = add_theory("D", strings("D", {"pre"}));
        for (const auto& [l, s] : d13) axiom(t, "D" + l, s);
        axiom(t, "D4", "(all x (iff (pre x zero) (= x zero)))");
        axiom(t, "D5", "(all x (iff (pre x one) (= x one)))");
        axiom(t, "D6", "(all x (all y (iff (pre x (o y zero)) (or (= x (o y zero)) (pre x y)))))");
        axiom(t, "D7", "(all x (all y (iff (pre x (o y one)) (or (= x (o y one)) (pre x y)))))");
    }
    auto id_core = [&](Theory& t) {
        for (const auto& [l, s] : d13) axiom(t, "ID" + l, s);
    };
    const std::string bar5 =
        "(all x (all y (imp (not (= x y)) (and (not (= (o zero x) (o zero y))) (not (= (o one x) (o one y)))))))";
    const std::string bar6 = "(all x (all y (not (= (o zero x) (o one y)))))";
    {
        auto& t = add_theory("ID", strings("ID", {"pre"}));
        id_core(t);
        t.schemas.push_back(segment_biconditional("ID4", "pre", &SegmentSets::pref));
    }
    {
        auto& t = add_theory("ID*", strings("ID*", {}));
        id_core(t);
        t.schemas.push_back(substring_star("ID4*"));
    }
    {
        auto& t = add_theory("IDbar", strings("IDbar", {"pre"}));
        id_core(t);
        axiom(t, "ID5bar", bar5);
        axiom(t, "ID6bar", bar6);
        t.schemas.push_back(segment_biconditional("ID4", "pre", &SegmentSets::pref));
    }
    {
        auto& t = add_theory("IDbar*", strings("IDbar*", {}));
        id_core(t);
        axiom(t, "ID5bar", bar5);
        axiom(t, "ID6bar", bar6);
        t.schemas.push_back(substring_star("ID4*"));
    }
    auto atoms = [&](Theory& t) {
        axiom(t, "AT0", "(all x (all y (not (= (o x y) zero))))");
        axiom(t, "AT1", "(all x (all y (not (= (o x y) one))))");
    };
    {
        auto& t = add_theory("ID2", strings("ID2", {"pre"}));
        id_core(t);
        atoms(t);
        t.schemas.push_back(segment_biconditional("ID4", "pre", &SegmentSets::pref));
    }
    {
        auto& t = add_theory("ID3", strings("ID3", {"pre", "suff"}));
        id_core(t);
        atoms(t);
        t.schemas.push_back(segment_biconditional("ID4", "pre", &SegmentSets::pref));
        t.schemas.push_back(segment_biconditional("ID4suff", "suff", &SegmentSets::suff));
    }
    for (const char* name : {"ID4", "ID5"}) {
        auto& t = add_theory(name, strings(name, {"pre", "suff", "sub"}));
        id_core(t);
        atoms(t);
        if (std::string(name) == "ID5") {
            axiom(t, "SA1", "(all x (and (suff zero (o x zero)) (suff one (o x one))))");
            axiom(t, "SA2",
                  "(all x (all y (imp (suff x y) (and (suff (o x zero) (o y zero)) (suff (o x one) (o y one))))))");
        }
        t.schemas.push_back(segment_biconditional("ID4", "pre", &SegmentSets::pref));
        t.schemas.push_back(segment_biconditional("ID4suff", "suff", &SegmentSets::suff));
        t.schemas.push_back(segment_biconditional("ID4sub", "sub", &SegmentSets::sub));
    }
    {
        auto& t = add_theory("TC", strings("TC", {}));
        axiom(t, "TC1", "(all x (all y (all z (= (o x (o y z)) (o (o x y) z)))))");
        axiom(t, "TC2",
              "(all x (all y (all z (all w (imp (= (o x y) (o z w)) (or (and (= x z) (= y w)) (ex u (or (and (= z "
              "(o x u)) (= (o u w) y)) (and (= x (o z u)) (= (o u y) w))))))))))");
        axiom(t, "TC3", "(all x (all y (not (= (o x y) zero))))");
        axiom(t, "TC4", "(all x (all y (not (= (o x y) one))))");
        axiom(t, "TC5", "(not (= zero one))");
    }
    {
        auto& t = add_theory("TCeps", strings("TCeps", {}, true));
        axiom(t, "TCe1", "(all x (and (= (o eps x) x) (= (o x eps) x)))");
        axiom(t, "TCe2", "(all x (all y (all z (= (o x (o y z)) (o (o x y) z)))))");
        axiom(t, "TCe3",
              "(all x (all y (all z (all w (imp (= (o x y) (o z w)) (ex u (or (and (= z (o x u)) (= (o u w) y)) "
              "(and (= x (o z u)) (= (o u y) w)))))))))");
        axiom(t, "TCe4", "(not (= zero eps))");
        axiom(t, "TCe5", "(all x (all y (imp (= (o x y) zero) (or (= x eps) (= y eps)))))");
        axiom(t, "TCe6", "(not (= one eps))");
        axiom(t, "TCe7", "(all x (all y (imp (= (o x y) one) (or (= x eps) (= y eps)))))");
        axiom(t, "TCe8", "(not (= zero one))");
    }
}

}  // namespace

std::vector<std::string> tuple_names(const std::string& base, unsigned m) {
    std::vector<std::string> out;
    for (unsigned i = 1; i <= m; ++i) out.push_back(base + "#" + std::to_string(i));
    return out;
}

std::vector<TermPtr> tuple_vars(const std::string& base, unsigned m) {
    std::vector<TermPtr> out;
    for (const auto& n : tuple_names(base, m)) out.push_back(var(n));
    return out;
}

MatTerms mat_literal(unsigned a, unsigned b, unsigned c, unsigned d) {
    return {numeral(a), numeral(b), numeral(c), numeral(d)};
}

FormulaPtr mat_equal(const MatTerms& x, const MatTerms& y) {
    return conj_all({eq(x[0], y[0]), eq(x[1], y[1]), eq(x[2], y[2]), eq(x[3], y[3])});
}

MatTerms mat_product_terms(const MatTerms& x, const MatTerms& y) {
    return {add(mul(x[0], y[0]), mul(x[1], y[2])), add(mul(x[0], y[1]), mul(x[1], y[3])),
            add(mul(x[2], y[0]), mul(x[3], y[2])), add(mul(x[2], y[1]), mul(x[3], y[3]))};
}

FormulaPtr mat_product_is(const MatTerms& x, const MatTerms& y, const MatTerms& z) {
    auto p = mat_product_terms(x, y);
    return conj_all({eq(z[0], p[0]), eq(z[1], p[1]), eq(z[2], p[2]), eq(z[3], p[3])});
}

namespace {

void Catalog::build_classes() {
    // Strings.
    defclass("K1_id2", {"x"}, "ID", "(or (= x zero) (or (= x one) (ex y (or (= x (o y zero)) (= x (o y one))))))");
    defclass("K2_id2", {"y"}, "ID",
             "(and (K1_id2 y) (all x (imp (K1_id2 x) (and (not (= (o x y) zero)) (not (= (o x y) one))))))");
    defclass("K_id2", {"w"}, "ID", "(and (K2_id2 w) (all z (imp (K2_id2 z) (K2_id2 (o z w)))))");
    defclass("suff_id3", {"x", "y"}, "ID2",
             "(and (or (= y x) (ex u (= y (o u x))))"
             " (and (all u (imp (pre u x) (or (= u zero) (or (= u one)"
             " (ex v (and (pre v u) (or (= u (o v zero)) (= u (o v one)))))))))"
             " (and (all z (imp (pre z x) (pre z z)))"
             " (and (all z (imp (pre z x) (all w (imp (pre w z) (all v (imp (pre v w) (pre v z)))))))"
             " (and (pre x x)"
             " (all z (imp (pre z x) (all w (imp (pre w z) (pre w x))))))))))");
    defclass("sub_id4", {"x", "y"}, "ID3", "(sub_def x y)");
    defclass("J_id5", {"u"}, "ID4",
             "(and (sub u u)"
             " (and (all w (imp (sub w u) (sub w w)))"
             " (and (all w (imp (sub w u) (all v0 (imp (sub v0 w) (all v1 (imp (sub v1 v0) (sub v1 w)))))))"
             " (and (all w (imp (sub w u) (or (= w zero) (or (= w one)"
             " (ex v (and (sub v w) (or (= w (o v zero)) (= w (o v one)))))))))"
             " (and (all w (imp (sub w u) (all x (imp (= w (o x zero)) (suff zero w)))))"
             " (and (all w (imp (sub w u) (all x (imp (= w (o x one)) (suff one w)))))"
             " (and (all w (imp (sub w u) (all x (all y (imp (and (= w (o y zero)) (suff x y)) (sub (o x zero) w))))))"
             " (all w (imp (sub w u) (all x (all y (imp (and (= w (o y one)) (suff x y)) (sub (o x one) w)))))))))))))");
    defclass("suff_id5", {"x", "y"}, "ID4", "(or (and (J_id5 y) (suff x y)) (and (not (J_id5 y)) (= x x)))");
    defclass("K1_idstar", {"u"}, "ID5", "(all x (suff u (o x u)))");
    defclass("K_idstar", {"u"}, "ID5", "(and (K1_idstar u) (all v (imp (K1_idstar v) (K1_idstar (o v u)))))");
    defclass("prefix_def", {"x", "y"}, "ID*", "(prefix_def x y)");

    // Arithmetic.
    defclass("G_iq", {"u"}, "IQ+",
             "(and (leq u u)"
             " (and (all w (imp (leq w u) (leq w w)))"
             " (and (all w (imp (leq w u) (all v0 (imp (leq v0 w) (all v1 (imp (leq v1 v0) (leq v1 w)))))))"
             " (and (all w (imp (leq w u) (or (= w zero) (ex v (and (leq v w) (= w (S v)))))))"
             " (and (all w (imp (leq w u) (all x (imp (= w (S x)) (leq zero w)))))"
             " (all w (imp (leq w u) (all x (all y (imp (and (= w (S y)) (leq x y)) (leq (S x) w)))))))))))");
    defclass("leq_iqpp", {"x", "y"}, "IQ+", "(or (and (G_iq y) (leq x y)) (and (not (G_iq y)) (= x x)))");
    defclass("leq_iqstar", {"x", "y"}, "IQ", "(leq_l x y)");
    defclass("K1_iqstar", {"u"}, "IQ++", "(all x (leq u (plus x u)))");
    defclass("K2_iqstar", {"u"}, "IQ++", "(and (K1_iqstar u) (all x (imp (K1_iqstar x) (K1_iqstar (plus x u)))))");
    defclass("K_iqstar", {"u"}, "IQ++", "(and (K2_iqstar u) (all x (imp (K2_iqstar x) (K2_iqstar (times x u)))))");

    defclass("N0", {"u"}, "Q",
             "(and (= (plus zero u) u)"
             " (and (all x (imp (= (plus x u) zero) (and (= x zero) (= u zero))))"
             " (and (all x (= (plus (S x) u) (S (plus x u))))"
             " (and (all x (all y (= (plus (plus x y) u) (plus x (plus y u)))))"
             " (and (all x (all y (imp (= (plus x u) (plus y u)) (= x y))))"
             " (= (times zero u) zero))))))");
    defclass("N1", {"u"}, "Q",
             "(and (N0 u)"
             " (and (all x (imp (N0 x) (= (plus x u) (plus u x))))"
             " (and (all x (imp (N0 x) (all y (= (times x (plus y u)) (plus (times x y) (times x u))))))"
             " (and (all x (imp (N0 x) (imp (= (times x u) zero) (or (= x zero) (= u zero)))))"
             " (all x (imp (N0 x) (= (times (S x) u) (plus (times x u) u))))))))");
    defclass("N2", {"u"}, "Q",
             "(and (N1 u)"
             " (and (all x (imp (N1 x) (all y (imp (N1 y) (= (times (times x y) u) (times x (times y u)))))))"
             " (all x (imp (N1 x) (= (times x u) (times u x))))))");
    defclass("N3", {"u"}, "Q", "(and (N2 u) (all x (imp (N2 x) (N2 (plus x u)))))");
    defclass("N", {"u"}, "Q", "(and (N3 u) (all x (imp (N3 x) (N3 (times x u)))))");
    defclass("leq_N", {"u", "v"}, "Q", "(ex r (and (N r) (= (plus u r) v)))");
    defclass("M0", {"u"}, "Q",
             "(and (N u)"
             " (and (all v (imp (leq_N v u) (N v)))"
             " (all x (all y (imp (and (leq_N x u) (leq_N y u)) (or (leq_N x y) (leq_N y x)))))))");
    defclass("M1", {"u"}, "Q", "(and (M0 u) (all x (imp (M0 x) (M0 (plus x u)))))");
    defclass("M", {"u"}, "Q", "(and (M1 u) (all x (imp (M1 x) (M1 (times x u)))))");

    // Matrices as 4-tuples.
    auto A = tuple_vars("a", 4), B = tuple_vars("b", 4), C = tuple_vars("c", 4);
    auto an = tuple_names("a", 4), bn = tuple_names("b", 4), cn = tuple_names("c", 4);
    auto unimodular = [](const MatTerms& x) {
        return eq(mul(x[0], x[3]), add(numeral(1), mul(x[1], x[2])));
    };
    const auto id = mat_literal(1, 0, 0, 1);
    // The trivial equations keep all four coordinates free.
    add_class("MatJ", an, "Q",
              conj_all({neg(eq(A[0], cnst("zero"))), eq(A[1], A[1]), eq(A[2], A[2]), eq(A[3], A[3])}));
    add_class("MatK_eps", an, "Q", unimodular(A));
    add_class("MatK", an, "Q", conj(neg(mat_equal(A, id)), unimodular(A)));
    add_class("MatMul", [&] {
        auto v = an;
        v.insert(v.end(), bn.begin(), bn.end());
        v.insert(v.end(), cn.begin(), cn.end());
        return v;
    }(), "Q", mat_product_is(A, B, C));
    const auto& K = classes.at("MatK");
    const auto& Ke = classes.at("MatK_eps");
    {
        // b_i is the largest entry of B; the box condition is repeated under it.
        std::vector<FormulaPtr> cases;
        for (int i = 0; i < 4; ++i) {
            std::vector<FormulaPtr> is_max, box;
            for (int j = 0; j < 4; ++j)
                if (j != i) is_max.push_back(rel("leq", {B[j], B[i]}));
            for (int k = 0; k < 4; ++k) box.push_back(rel("leq", {A[k], B[i]}));
            for (int k = 0; k < 4; ++k) box.push_back(rel("leq", {C[k], B[i]}));
            box.push_back(mat_product_is(A, C, B));
            auto witness = quantify_all(Formula::Kind::Exists, cn, conj(K.at(C), conj_all(box)));
            cases.push_back(conj(conj_all(is_max), disj(mat_equal(A, B), witness)));
        }
        auto params = an;
        params.insert(params.end(), bn.begin(), bn.end());
        add_class("MatPrefix", params, "R", conj(K.at(A), conj(K.at(B), disj_all(cases))));
    }
    {
        auto params = bn;
        params.insert(params.end(), an.begin(), an.end());
        add_class("PrecK", params, "Q2",
                  quantify_all(Formula::Kind::Exists, cn, conj(Ke.at(C), mat_product_is(B, C, A))));
    }
    {
        auto W = tuple_vars("w", 4), X = tuple_vars("x", 4), Y = tuple_vars("y", 4), Z = tuple_vars("z", 4),
             U = tuple_vars("u", 4);
        auto xy = mat_product_terms(X, Y), zw = mat_product_terms(Z, W);
        auto split = disj(conj(mat_product_is(X, U, Z), mat_product_is(U, W, Y)),
                          conj(mat_product_is(Z, U, X), mat_product_is(U, Y, W)));
        auto editor = imp(conj(Ke.at(Y), mat_equal(xy, zw)),
                          quantify_all(Formula::Kind::Exists, tuple_names("u", 4), conj(Ke.at(U), split)));
        std::vector<std::string> bound = tuple_names("x", 4);
        for (const auto& n : tuple_names("z", 4)) bound.push_back(n);
        for (const auto& n : tuple_names("y", 4)) bound.push_back(n);
        add_class("H", tuple_names("w", 4), "Q2", conj(Ke.at(W), quantify_all(Formula::Kind::Forall, bound, editor)));
    }
    {
        const auto& H = classes.at("H");
        std::vector<TermPtr> ba = B;
        ba.insert(ba.end(), A.begin(), A.end());
        auto closed = quantify_all(Formula::Kind::Forall, bn, imp(classes.at("PrecK").at(ba), H.at(B)));
        add_class("I", an, "Q2", conj(H.at(A), closed));
    }
}

Catalog& catalog() {
    static Catalog c;
    return c;
}

}  // namespace

const std::vector<std::string>& theory_names() {
    static const std::vector<std::string> names = {"R",   "Q",   "WD",  "D",   "ID",  "ID*",   "IDbar",
                                                   "IDbar*", "IQ", "IQ*", "IQ+", "IQ++", "IQ2", "Q2",
                                                   "TC",  "TCeps", "ID2", "ID3", "ID4", "ID5"};
    return names;
}

const Theory& get_theory(const std::string& name) {
    auto& c = catalog();
    auto it = c.theories.find(name);
    if (it == c.theories.end()) throw std::invalid_argument("unknown theory: " + name);
    return it->second;
}

FormulaPtr instantiate_schema(const Theory& t, const std::string& schema, const SchemaParam& p) {
    const Schema& s = t.schema(schema);
    if (p.kind() != s.kind)
        throw std::invalid_argument("schema " + schema + " expects a " + to_string(s.kind) + " parameter");
    for (const auto& b : p.bits)
        if (b.empty()) throw std::invalid_argument("schema parameters must be nonempty bit strings");
    if (s.admits && !s.admits(p))
        throw std::invalid_argument("parameter " + p.str() + " is outside the side condition of " + schema);
    return s.generate(p);
}

const std::vector<std::string>& class_names() { return catalog().class_order; }

const ClassFormula& get_class_formula(const std::string& name) {
    auto& c = catalog();
    auto it = c.classes.find(name);
    if (it == c.classes.end()) throw std::invalid_argument("unknown class: " + name);
    return it->second;
}

nlohmann::json theory_json(const Theory& t) {
    nlohmann::json j;
    j["name"] = t.name;
    j["signature"]["constants"] = std::vector<std::string>(t.sig.constants.begin(), t.sig.constants.end());
    j["signature"]["functions"] = t.sig.functions;
    j["signature"]["relations"] = t.sig.relations;
    j["axioms"] = nlohmann::json::array();
    for (const auto& a : t.axioms) j["axioms"].push_back({{"label", a.label}, {"formula", print(a.formula)}});
    j["schemas"] = nlohmann::json::array();
    for (const auto& s : t.schemas) j["schemas"].push_back({{"name", s.name}, {"kind", to_string(s.kind)}});
    return j;
}

}  // namespace interp
