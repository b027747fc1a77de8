#include "interp/translation.hpp"

#include <algorithm>

namespace interp {

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

void check_definition(const std::string& what, const Definition& d, std::size_t count, const Signature& target) {
    if (!d.body) throw std::invalid_argument(what + ": missing formula");
    if (d.params.size() != count)
        throw std::invalid_argument(what + ": expected " + std::to_string(count) + " designated variables, got " +
                                    std::to_string(d.params.size()));
    auto ps = as_set(d.params);
    if (ps.size() != d.params.size()) throw std::invalid_argument(what + ": designated variables repeat");
    auto fv = as_set(d.body->free);
    if (fv != ps) throw std::invalid_argument(what + ": free variables differ from the designated ones");
    check_well_formed(d.body, target);
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<std::string> tuple_block(const std::string& base, std::size_t i, unsigned m) {
    return copies(base + std::to_string(i), m);
}

}  // namespace

std::vector<std::string> copies(const std::string& x, unsigned m) {
    std::vector<std::string> out;
    out.reserve(m);
    for (unsigned i = 1; i <= m; ++i) out.push_back(x + "#" + std::to_string(i));
    return out;
}

Definition function_graph(const std::string& f, int arity) {
    Definition d;
    std::vector<TermPtr> args;
    for (int i = 1; i <= arity; ++i) {
        d.params.push_back("x" + std::to_string(i));
        args.push_back(var(d.params.back()));
    }
    d.params.push_back("y");
    d.body = eq(var("y"), app(f, std::move(args)));
    return d;
}

void RelativeTranslation::validate() const {
    source.validate();
    target.validate();
    if (m < 1) throw std::invalid_argument("translation dimension must be at least 1");
    const std::string who = "translation " + name;
    check_definition(who + " domain", domain, m, target);
    for (const auto& [r, n] : source.relations) {
        auto it = relations.find(r);
        if (it == relations.end()) throw std::invalid_argument(who + ": no definition for relation " + r);
        check_definition(who + " relation " + r, it->second, m * n, target);
    }
    for (const auto& [f, n] : source.functions) {
        auto it = functions.find(f);
        if (it == functions.end()) throw std::invalid_argument(who + ": no definition for function " + f);
        check_definition(who + " function " + f, it->second, m * (n + 1), target);
    }
    for (const auto& c : source.constants) {
        auto it = constants.find(c);
        if (it == constants.end()) throw std::invalid_argument(who + ": no definition for constant " + c);
        check_definition(who + " constant " + c, it->second, m, target);
    }
    for (const auto& [r, d] : relations)
        if (!source.is_relation(r)) throw std::invalid_argument(who + ": defines unknown relation " + r);
    for (const auto& [f, d] : functions)
        if (!source.is_function(f)) throw std::invalid_argument(who + ": defines unknown function " + f);
    for (const auto& [c, d] : constants)
        if (!source.is_constant(c)) throw std::invalid_argument(who + ": defines unknown constant " + c);
    if (equality) check_definition(who + " equality", *equality, 2 * m, target);
}

RelativeTranslation identity_translation(const Signature& sig) {
    RelativeTranslation t;
    t.name = "identity(" + sig.name + ")";
    t.source = sig;
    t.target = sig;
    t.m = 1;
    t.identity = true;
    t.domain = {{"x"}, eq(var("x"), var("x"))};
    for (const auto& [r, n] : sig.relations) {
        Definition d;
        std::vector<TermPtr> args;
        for (int i = 1; i <= n; ++i) {
            d.params.push_back("x" + std::to_string(i));
            args.push_back(var(d.params.back()));
        }
        d.body = rel(r, std::move(args));
        t.relations.emplace(r, std::move(d));
    }
    for (const auto& [f, n] : sig.functions) t.functions.emplace(f, function_graph(f, n));
    for (const auto& c : sig.constants) t.constants.emplace(c, Definition{{"y"}, eq(var("y"), cnst(c))});
    return t;
}

std::vector<std::string> FreshTuples::next() {
    std::string base;
    do {
        base = "v" + std::to_string(++k_);
    } while (avoid_.count(base));
    return copies(base, m_);
}

std::set<std::string> variable_bases(const FormulaPtr& f) {
    std::set<std::string> out;
    for (const auto& v : all_variables(f)) out.insert(v.substr(0, v.find('#')));
    return out;
}

// ---- clause 5 and clauses 6 to 9 ------------------------------------------

namespace {

FormulaPtr equal_tuples(const RelativeTranslation& tau, const std::vector<std::string>& x,
                        const std::vector<std::string>& y) {
    if (tau.equality) return tau.equality->at(concat(x, y));
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < x.size(); ++i) parts.push_back(eq(var(x[i]), var(y[i])));
    return conj_all(parts);
}

const Definition& lookup(const std::map<std::string, Definition>& defs, const std::string& sym,
                         const RelativeTranslation& tau) {
    auto it = defs.find(sym);
    if (it == defs.end()) throw std::invalid_argument("translation " + tau.name + " has no definition for " + sym);
    return it->second;
}

// Atom over argument terms: one fresh tuple per argument, each in the domain,
// each pinned to its term, then the defining formula on the tuples.
FormulaPtr translate_args(const std::vector<TermPtr>& args, const RelativeTranslation& tau, FreshTuples& fresh,
                          const std::function<FormulaPtr(const std::vector<std::vector<std::string>>&)>& core) {
    std::vector<std::vector<std::string>> tuples;
    for (std::size_t i = 0; i < args.size(); ++i) tuples.push_back(fresh.next());
    std::vector<FormulaPtr> parts;
    for (const auto& w : tuples) parts.push_back(tau.domain.at(w));
    for (std::size_t i = 0; i < args.size(); ++i) parts.push_back(translate_term(args[i], tuples[i], tau, fresh));
    parts.push_back(core(tuples));
    std::vector<std::string> bound;
    for (const auto& w : tuples) bound.insert(bound.end(), w.begin(), w.end());
    return exists_all(bound, conj_all(parts));
}

FormulaPtr translate_rec(const FormulaPtr& f, const RelativeTranslation& tau, const std::set<std::string>& avoid) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Eq: {
            FreshTuples fresh(avoid, tau.m);
            return translate_args(f->terms, tau, fresh, [&](const auto& ws) { return equal_tuples(tau, ws[0], ws[1]); });
        }
        case K::Rel: {
            const Definition& d = lookup(tau.relations, f->name, tau);
            FreshTuples fresh(avoid, tau.m);
            return translate_args(f->terms, tau, fresh, [&](const auto& ws) {
                std::vector<std::string> flat;
                for (const auto& w : ws) flat.insert(flat.end(), w.begin(), w.end());
                return d.at(flat);
            });
        }
        case K::Not: return neg(translate_rec(f->lhs, tau, avoid));
        case K::Forall:
        case K::Exists: {
            auto xs = copies(f->name, tau.m);
            auto body = translate_rec(f->lhs, tau, avoid);
            auto dom = tau.domain.at(xs);
            if (f->kind == K::Forall) return forall_all(xs, imp(dom, body));
            return exists_all(xs, conj(dom, body));
        }
        default: return make_binary(f->kind, translate_rec(f->lhs, tau, avoid), translate_rec(f->rhs, tau, avoid));
    }
}

}  // namespace

FormulaPtr translate_term(const TermPtr& t, const std::vector<std::string>& w, const RelativeTranslation& tau,
                          FreshTuples& fresh) {
    if (w.size() != tau.m) throw std::invalid_argument("translate_term: need one value variable per coordinate");
    switch (t->kind) {
        case Term::Kind::Var: {
            auto xs = copies(t->name, tau.m);
            std::vector<FormulaPtr> parts;
            for (unsigned i = 0; i < tau.m; ++i) parts.push_back(eq(var(w[i]), var(xs[i])));
            return conj_all(parts);
        }
        case Term::Kind::Const: return lookup(tau.constants, t->name, tau).at(w);
        case Term::Kind::App: {
            const Definition& d = lookup(tau.functions, t->name, tau);
            return translate_args(t->args, tau, fresh, [&](const auto& ws) {
                std::vector<std::string> flat;
                for (const auto& u : ws) flat.insert(flat.end(), u.begin(), u.end());
                flat.insert(flat.end(), w.begin(), w.end());
                return d.at(flat);
            });
        }
    }
    return nullptr;
}

FormulaPtr translate_term(const TermPtr& t, const std::vector<std::string>& value_vars,
                          const RelativeTranslation& tau) {
    std::set<std::string> avoid;
    collect_variables(t, avoid);
    for (const auto& v : value_vars) avoid.insert(v);
    std::set<std::string> bases;
    for (const auto& v : avoid) bases.insert(v.substr(0, v.find('#')));
    FreshTuples fresh(bases, tau.m);
    return translate_term(t, value_vars, tau, fresh);
}

FormulaPtr translate_formula(const FormulaPtr& f, const RelativeTranslation& tau) {
    return translate_rec(f, tau, variable_bases(f));
}

// ---- obligations ----------------------------------------------------------

std::string to_string(ObligationKind k) {
    switch (k) {
        case ObligationKind::DomainNonempty: return "domain-nonempty";
        case ObligationKind::FunctionTotalUnique: return "function-total-unique";
        case ObligationKind::ConstantExistsUnique: return "constant-exists-unique";
        case ObligationKind::AxiomTranslation: return "axiom";
        case ObligationKind::SchemaInstanceTranslation: return "schema-instance";
        case ObligationKind::EqualityAxiom: return "equality";
        case ObligationKind::Lemma: return "lemma";
    }
    return "?";
}

namespace {

// exists b (dom b and phi(b) and all c (dom c and phi(c) -> c = b))
FormulaPtr exists_unique(const RelativeTranslation& tau, const std::function<FormulaPtr(const std::vector<std::string>&)>& phi) {
    auto b = copies("b", tau.m);
    auto c = copies("c", tau.m);
    auto unique = forall_all(c, imp(conj(tau.domain.at(c), phi(c)), equal_tuples(tau, c, b)));
    return exists_all(b, conj(tau.domain.at(b), conj(phi(b), unique)));
}

FormulaPtr all_in_domain(const RelativeTranslation& tau, const std::vector<std::vector<std::string>>& tuples,
                         const FormulaPtr& body) {
    if (tuples.empty()) return body;
    std::vector<FormulaPtr> doms;
    std::vector<std::string> vars;
    for (const auto& t : tuples) {
        doms.push_back(tau.domain.at(t));
        vars.insert(vars.end(), t.begin(), t.end());
    }
    return forall_all(vars, imp(conj_all(doms), body));
}

std::vector<Obligation> equality_obligations(const RelativeTranslation& tau) {
    std::vector<Obligation> out;
    auto x = copies("x", tau.m), y = copies("y", tau.m), z = copies("z", tau.m);
    auto E = [&](const auto& a, const auto& b) { return equal_tuples(tau, a, b); };
    out.push_back({ObligationKind::EqualityAxiom, "equality:reflexivity", all_in_domain(tau, {x}, E(x, x))});
    out.push_back({ObligationKind::EqualityAxiom, "equality:symmetry", all_in_domain(tau, {x, y}, imp(E(x, y), E(y, x)))});
    out.push_back({ObligationKind::EqualityAxiom, "equality:transitivity",
                   all_in_domain(tau, {x, y, z}, imp(conj(E(x, y), E(y, z)), E(x, z)))});
    auto congruence = [&](int n, bool function, const Definition& d) {
        std::vector<std::vector<std::string>> as, bs, all;
        std::vector<FormulaPtr> hyps;
        std::vector<std::string> fa, fb;
        for (int i = 1; i <= n; ++i) {
            as.push_back(tuple_block("a", i, tau.m));
            bs.push_back(tuple_block("b", i, tau.m));
            hyps.push_back(E(as.back(), bs.back()));
            fa.insert(fa.end(), as.back().begin(), as.back().end());
            fb.insert(fb.end(), bs.back().begin(), bs.back().end());
        }
        all = as;
        all.insert(all.end(), bs.begin(), bs.end());
        if (!function) return all_in_domain(tau, all, imp(conj(conj_all(hyps), d.at(fa)), d.at(fb)));
        auto u = copies("u", tau.m), v = copies("v", tau.m);
        all.push_back(u);
        all.push_back(v);
        hyps.push_back(d.at(concat(fa, u)));
        hyps.push_back(d.at(concat(fb, v)));
        return all_in_domain(tau, all, imp(conj_all(hyps), E(u, v)));
    };
    for (const auto& [f, n] : tau.source.functions)
        out.push_back({ObligationKind::EqualityAxiom, "equality:" + f, congruence(n, true, tau.functions.at(f))});
    for (const auto& [r, n] : tau.source.relations)
        out.push_back({ObligationKind::EqualityAxiom, "equality:" + r, congruence(n, false, tau.relations.at(r))});
    return out;
}

}  // namespace

std::vector<Obligation> obligations(const RelativeTranslation& tau, const Theory& source, const SchemaBounds& bounds) {
    if (!same_symbols(tau.source, source.sig))
        throw std::invalid_argument("translation " + tau.name + " does not start from the signature of " + source.name);
    std::vector<Obligation> out;
    out.push_back({ObligationKind::DomainNonempty, "domain", exists_all(tau.domain.params, tau.domain.body)});
    for (const auto& [f, n] : tau.source.functions) {
        std::vector<std::vector<std::string>> args;
        std::vector<std::string> flat;
        for (int i = 1; i <= n; ++i) {
            args.push_back(tuple_block("a", i, tau.m));
            flat.insert(flat.end(), args.back().begin(), args.back().end());
        }
        const Definition& d = lookup(tau.functions, f, tau);
        auto body = exists_unique(tau, [&](const auto& value) { return d.at(concat(flat, value)); });
        out.push_back({ObligationKind::FunctionTotalUnique, "function:" + f, all_in_domain(tau, args, body)});
    }
    for (const auto& c : tau.source.constants) {
        const Definition& d = lookup(tau.constants, c, tau);
        out.push_back({ObligationKind::ConstantExistsUnique, "constant:" + c,
                       exists_unique(tau, [&](const auto& value) { return d.at(value); })});
    }
    for (const auto& a : source.axioms)
        out.push_back({ObligationKind::AxiomTranslation, "axiom:" + a.label, translate_formula(a.formula, tau)});
    for (const auto& s : source.schemas)
        for (const auto& p : schema_params(s, bounds))
            out.push_back({ObligationKind::SchemaInstanceTranslation, "schema:" + s.name + "[" + p.str() + "]",
                           translate_formula(s.generate(p), tau)});
    if (!tau.default_equality())
        for (auto& o : equality_obligations(tau)) out.push_back(std::move(o));
    return out;
}

// ---- composition ----------------------------------------------------------

namespace {

// Name of coordinate j of the pushed copy of q; base#i becomes base#((i-1)m2+j).
std::string flat_name(const std::string& q, unsigned j, unsigned m2) {
    auto h = q.rfind('#');
    if (h != std::string::npos && h + 1 < q.size() &&
        std::all_of(q.begin() + h + 1, q.end(), [](char c) { return c >= '0' && c <= '9'; }) && q.size() - h < 8) {
        unsigned i = static_cast<unsigned>(std::stoul(q.substr(h + 1)));
        if (i >= 1) return q.substr(0, h) + "#" + std::to_string((i - 1) * m2 + j);
    }
    return q + "#" + std::to_string(j);
}

Definition push(const Definition& d, const RelativeTranslation& second, bool with_domain) {
    auto body = translate_formula(d.body, second);
    std::vector<std::string> from, to;
    std::vector<FormulaPtr> doms;
    for (const auto& q : d.params) {
        auto cs = copies(q, second.m);
        for (unsigned j = 1; j <= second.m; ++j) to.push_back(flat_name(q, j, second.m));
        from.insert(from.end(), cs.begin(), cs.end());
        if (with_domain) doms.push_back(second.domain.at(cs));
    }
    if (with_domain) {
        doms.push_back(body);
        body = conj_all(doms);
    }
    if (as_set(to).size() != to.size()) throw std::invalid_argument("compose: flattened variable names collide");
    return {to, rename_free(body, from, to)};
}

RelativeTranslation compose_two(const RelativeTranslation& a, const RelativeTranslation& b) {
    RelativeTranslation r;
    r.name = a.name + " ; " + b.name;
    r.source = a.source;
    r.target = b.target;
    r.m = a.m * b.m;
    r.domain = push(a.domain, b, true);
    for (const auto& [k, d] : a.relations) r.relations.emplace(k, push(d, b, false));
    for (const auto& [k, d] : a.functions) r.functions.emplace(k, push(d, b, false));
    for (const auto& [k, d] : a.constants) r.constants.emplace(k, push(d, b, false));
    if (a.equality || b.equality) {
        Definition e;
        if (a.equality) {
            e = *a.equality;
        } else {
            auto x = copies("x", a.m), y = copies("y", a.m);
            e.params = concat(x, y);
            e.body = equal_tuples(a, x, y);
        }
        r.equality = push(e, b, false);
    }
    return r;
}

std::vector<TranslationPtr> parts_of(const RelativeTranslation& t) {
    if (!t.chain.empty()) return t.chain;
    if (t.identity) return {};
    return {std::make_shared<const RelativeTranslation>(t)};
}

}  // namespace

RelativeTranslation compose(const RelativeTranslation& first, const RelativeTranslation& second) {
    if (!same_symbols(first.target, second.source))
        throw std::invalid_argument("compose: " + first.name + " ends at " + first.target.name + " but " + second.name +
                                    " starts at " + second.source.name);
    auto parts = parts_of(first);
    auto more = parts_of(second);
    parts.insert(parts.end(), more.begin(), more.end());
    if (parts.empty()) return identity_translation(first.source);
    if (parts.size() == 1) return *parts.front();
    RelativeTranslation acc = *parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = compose_two(acc, *parts[i]);
    acc.chain = parts;
    acc.identity = false;
    return acc;
}

// ---- serialization --------------------------------------------------------

namespace {

nlohmann::json definition_json(const Definition& d) {
    return {{"params", d.params}, {"formula", print(d.body)}};
}

}  // namespace

nlohmann::json translation_json(const RelativeTranslation& tau) {
    nlohmann::json j;
    j["name"] = tau.name;
    j["source"] = tau.source.name;
    j["target"] = tau.target.name;
    j["dimension"] = tau.m;
    j["domain"] = definition_json(tau.domain);
    nlohmann::json rels = nlohmann::json::object(), fns = nlohmann::json::object(), cs = nlohmann::json::object();
    for (const auto& [k, d] : tau.relations) rels[k] = definition_json(d);
    for (const auto& [k, d] : tau.functions) fns[k] = definition_json(d);
    for (const auto& [k, d] : tau.constants) cs[k] = definition_json(d);
    j["relations"] = rels;
    j["functions"] = fns;
    j["constants"] = cs;
    j["equality"] = tau.equality ? definition_json(*tau.equality) : nlohmann::json("coordinatewise");
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& p : tau.chain) chain.push_back(p->name);
    j["chain"] = chain;
    return j;
}

}  // namespace interp
