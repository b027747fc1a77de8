#include "interp/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace interp {

namespace {

const std::set<std::string> kReserved = {"=", "not", "and", "or", "imp", "iff", "all", "ex"};

void merge_free(std::vector<std::string>& into, const std::vector<std::string>& from) {
    for (const auto& v : from)
        if (std::find(into.begin(), into.end(), v) == into.end()) into.push_back(v);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s < a ? UINT64_MAX : s;
}

std::uint64_t term_size(const TermPtr& t) {
    std::uint64_t s = 1;
    for (const auto& a : t->args) s = sat_add(s, term_size(a));
    return s;
}

}  // namespace

bool is_reserved(const std::string& token) { return kReserved.count(token) != 0; }

bool is_variable_name(const std::string& token) {
    if (token.empty() || !(token[0] >= 'a' && token[0] <= 'z')) return false;
    for (char c : token) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
        if (!ok) return false;
    }
    return !is_reserved(token);
}

void Signature::validate() const {
    std::set<std::string> seen;
    auto claim = [&](const std::string& s) {
        if (s.empty()) throw std::invalid_argument("empty symbol in signature " + name);
        if (is_reserved(s)) throw std::invalid_argument("reserved token used as symbol: " + s);
        for (char c : s)
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
                throw std::invalid_argument("bad character in symbol: " + s);
        if (!seen.insert(s).second) throw std::invalid_argument("symbol declared twice: " + s);
    };
    for (const auto& c : constants) claim(c);
    for (const auto& [f, n] : functions) {
        claim(f);
        if (n < 1) throw std::invalid_argument("function arity must be positive: " + f);
    }
    for (const auto& [r, n] : relations) {
        claim(r);
        if (n < 1) throw std::invalid_argument("relation arity must be positive: " + r);
    }
}

bool same_symbols(const Signature& a, const Signature& b) {
    return a.constants == b.constants && a.functions == b.functions && a.relations == b.relations;
}

// ---- construction -------------------------------------------------------

TermPtr var(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = name;
    t->free = {name};
    return t;
}

TermPtr cnst(const std::string& name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Const;
    t->name = name;
    return t;
}

TermPtr app(const std::string& fn, std::vector<TermPtr> args) {
    if (args.empty()) throw std::invalid_argument("function application needs arguments: " + fn);
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::App;
    t->name = fn;
    for (const auto& a : args) merge_free(t->free, a->free);
    t->args = std::move(args);
    return t;
}

static FormulaPtr make_atom(Formula::Kind k, const std::string& name, std::vector<TermPtr> ts) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->name = name;
    std::uint64_t s = 1;
    for (const auto& t : ts) {
        merge_free(f->free, t->free);
        s = sat_add(s, term_size(t));
    }
    f->size = s;
    f->terms = std::move(ts);
    return f;
}

FormulaPtr eq(TermPtr a, TermPtr b) { return make_atom(Formula::Kind::Eq, "", {std::move(a), std::move(b)}); }

FormulaPtr rel(const std::string& r, std::vector<TermPtr> args) {
    if (args.empty()) throw std::invalid_argument("relation atom needs arguments: " + r);
    return make_atom(Formula::Kind::Rel, r, std::move(args));
}

FormulaPtr neg(FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Not;
    f->free = a->free;
    f->size = sat_add(a->size, 1);
    f->lhs = std::move(a);
    return f;
}

FormulaPtr make_binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free = a->free;
    merge_free(f->free, b->free);
    f->size = sat_add(sat_add(a->size, b->size), 1);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make_binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make_binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr imp(FormulaPtr a, FormulaPtr b) { return make_binary(Formula::Kind::Imp, std::move(a), std::move(b)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return make_binary(Formula::Kind::Iff, std::move(a), std::move(b)); }

FormulaPtr make_quantifier(Formula::Kind k, const std::string& v, FormulaPtr body) {
    if (v.empty()) throw std::invalid_argument("empty bound variable");
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->name = v;
    for (const auto& x : body->free)
        if (x != v) f->free.push_back(x);
    f->size = sat_add(body->size, 1);
    f->lhs = std::move(body);
    return f;
}

FormulaPtr forall(const std::string& v, FormulaPtr body) {
    return make_quantifier(Formula::Kind::Forall, v, std::move(body));
}
FormulaPtr exists(const std::string& v, FormulaPtr body) {
    return make_quantifier(Formula::Kind::Exists, v, std::move(body));
}

static FormulaPtr fold_right(Formula::Kind k, const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw std::invalid_argument("empty connective list");
    FormulaPtr acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) acc = make_binary(k, fs[i], acc);
    return acc;
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) { return fold_right(Formula::Kind::And, fs); }
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs) { return fold_right(Formula::Kind::Or, fs); }

FormulaPtr forall_all(const std::vector<std::string>& vs, FormulaPtr body) {
    for (std::size_t i = vs.size(); i-- > 0;) body = forall(vs[i], body);
    return body;
}

FormulaPtr exists_all(const std::vector<std::string>& vs, FormulaPtr body) {
    for (std::size_t i = vs.size(); i-- > 0;) body = exists(vs[i], body);
    return body;
}

// ---- parsing ------------------------------------------------------------

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

struct Token {
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({std::string(1, c), i});
            ++i;
        } else {
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
                   s[j] != ')')
                ++j;
            out.push_back({s.substr(i, j - i), i});
            i = j;
        }
    }
    return out;
}

class Parser {
public:
    Parser(const std::string& text, const Signature& sig) : toks_(tokenize(text)), sig_(sig), len_(text.size()) {}

    Syntax parse_any() {
        Syntax out;
        if (looks_like_formula()) out = formula();
        else out = term();
        finish();
        return out;
    }
    TermPtr parse_term_only() {
        auto t = term();
        finish();
        return t;
    }
    FormulaPtr parse_formula_only() {
        auto f = formula();
        finish();
        return f;
    }

private:
    std::vector<Token> toks_;
    const Signature& sig_;
    std::size_t len_;
    std::size_t i_ = 0;

    std::size_t here() const { return i_ < toks_.size() ? toks_[i_].pos : len_; }
    void finish() {
        if (i_ != toks_.size()) throw ParseError("trailing input '" + toks_[i_].text + "'", toks_[i_].pos);
    }
    const Token& next() {
        if (i_ >= toks_.size()) throw ParseError("unexpected end of input", len_);
        return toks_[i_++];
    }
    void expect(const std::string& s) {
        std::size_t p = here();
        const Token& t = next();
        if (t.text != s) throw ParseError("expected '" + s + "' but found '" + t.text + "'", p);
    }
    bool looks_like_formula() const {
        if (toks_.size() < 2 || toks_[0].text != "(") return false;
        const std::string& h = toks_[1].text;
        return is_reserved(h) || sig_.is_relation(h);
    }

    TermPtr term() {
        std::size_t p = here();
        const Token& t = next();
        if (t.text == ")") throw ParseError("unexpected ')'", p);
        if (t.text != "(") {
            if (sig_.is_constant(t.text)) return cnst(t.text);
            if (sig_.is_function(t.text)) throw ParseError("function symbol used without arguments: " + t.text, p);
            if (sig_.is_relation(t.text)) throw ParseError("relation symbol in term position: " + t.text, p);
            if (is_variable_name(t.text)) return var(t.text);
            throw ParseError("undeclared symbol '" + t.text + "'", p);
        }
        std::size_t hp = here();
        const Token& head = next();
        if (!sig_.is_function(head.text)) {
            if (is_reserved(head.text) || sig_.is_relation(head.text))
                throw ParseError("formula where a term was expected", hp);
            throw ParseError("undeclared function symbol '" + head.text + "'", hp);
        }
        std::vector<TermPtr> args;
        while (i_ < toks_.size() && toks_[i_].text != ")") args.push_back(term());
        expect(")");
        int arity = sig_.functions.at(head.text);
        if (static_cast<int>(args.size()) != arity)
            throw ParseError("arity mismatch for " + head.text + ": expected " + std::to_string(arity) +
                                 ", got " + std::to_string(args.size()),
                             hp);
        return app(head.text, std::move(args));
    }

    FormulaPtr formula() {
        std::size_t p = here();
        expect("(");
        std::size_t hp = here();
        std::string head = next().text;
        FormulaPtr out;
        if (head == "=") {
            auto a = term();
            auto b = term();
            out = eq(a, b);
        } else if (head == "not") {
            out = neg(formula());
        } else if (head == "and" || head == "or" || head == "imp" || head == "iff") {
            auto a = formula();
            auto b = formula();
            Formula::Kind k = head == "and"  ? Formula::Kind::And
                              : head == "or" ? Formula::Kind::Or
                              : head == "imp" ? Formula::Kind::Imp
                                              : Formula::Kind::Iff;
            out = make_binary(k, a, b);
        } else if (head == "all" || head == "ex") {
            std::size_t vp = here();
            std::string v = next().text;
            if (sig_.declares(v) || !is_variable_name(v)) throw ParseError("expected a variable, found '" + v + "'", vp);
            auto body = formula();
            out = head == "all" ? forall(v, body) : exists(v, body);
        } else if (sig_.is_relation(head)) {
            std::vector<TermPtr> args;
            while (i_ < toks_.size() && toks_[i_].text != ")") args.push_back(term());
            int arity = sig_.relations.at(head);
            if (static_cast<int>(args.size()) != arity)
                throw ParseError("arity mismatch for " + head + ": expected " + std::to_string(arity) + ", got " +
                                     std::to_string(args.size()),
                                 hp);
            out = rel(head, std::move(args));
        } else {
            (void)p;
            throw ParseError("undeclared relation or connective '" + head + "'", hp);
        }
        expect(")");
        return out;
    }
};

}  // namespace

Syntax parse(const std::string& text, const Signature& sig) { return Parser(text, sig).parse_any(); }
TermPtr parse_term(const std::string& text, const Signature& sig) { return Parser(text, sig).parse_term_only(); }
FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
    return Parser(text, sig).parse_formula_only();
}

// ---- printing -----------------------------------------------------------

namespace {

void print_to(std::string& out, const TermPtr& t) {
    if (t->kind != Term::Kind::App) {
        out += t->name;
        return;
    }
    out += '(';
    out += t->name;
    for (const auto& a : t->args) {
        out += ' ';
        print_to(out, a);
    }
    out += ')';
}

const char* connective(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::And: return "and";
        case Formula::Kind::Or: return "or";
        case Formula::Kind::Imp: return "imp";
        case Formula::Kind::Iff: return "iff";
        case Formula::Kind::Forall: return "all";
        case Formula::Kind::Exists: return "ex";
        default: return "";
    }
}

void print_to(std::string& out, const FormulaPtr& f) {
    out += '(';
    switch (f->kind) {
        case Formula::Kind::Eq:
        case Formula::Kind::Rel:
            out += f->kind == Formula::Kind::Eq ? "=" : f->name;
            for (const auto& t : f->terms) {
                out += ' ';
                print_to(out, t);
            }
            break;
        case Formula::Kind::Not:
            out += "not ";
            print_to(out, f->lhs);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            out += connective(f->kind);
            out += ' ';
            out += f->name;
            out += ' ';
            print_to(out, f->lhs);
            break;
        default:
            out += connective(f->kind);
            out += ' ';
            print_to(out, f->lhs);
            out += ' ';
            print_to(out, f->rhs);
    }
    out += ')';
}

}  // namespace

std::string print(const TermPtr& t) {
    std::string s;
    print_to(s, t);
    return s;
}

std::string print(const FormulaPtr& f) {
    std::string s;
    print_to(s, f);
    return s;
}

std::string print(const Syntax& x) {
    return std::visit([](const auto& p) { return print(p); }, x);
}

// ---- variables ----------------------------------------------------------

const std::vector<std::string>& free_variables(const TermPtr& t) { return t->free; }
const std::vector<std::string>& free_variables(const FormulaPtr& f) { return f->free; }
bool is_sentence(const FormulaPtr& f) { return f->free.empty(); }

bool occurs_free(const std::string& v, const FormulaPtr& f) {
    return std::find(f->free.begin(), f->free.end(), v) != f->free.end();
}

void collect_variables(const TermPtr& t, std::set<std::string>& out) {
    if (t->kind == Term::Kind::Var) out.insert(t->name);
    for (const auto& a : t->args) collect_variables(a, out);
}

std::set<std::string> all_variables(const FormulaPtr& f) {
    std::set<std::string> out;
    std::unordered_set<const Formula*> seen;
    std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
        if (!seen.insert(g.get()).second) return;
        for (const auto& t : g->terms) collect_variables(t, out);
        if (g->is_quantifier()) out.insert(g->name);
        if (g->lhs) go(g->lhs);
        if (g->rhs) go(g->rhs);
    };
    go(f);
    return out;
}

std::string primed(const std::string& name) {
    auto h = name.find('#');
    if (h == std::string::npos) return name + '\'';
    return name.substr(0, h) + '\'' + name.substr(h);
}

std::vector<std::string> fresh_variables(const std::set<std::string>& avoid, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t k = 1; out.size() < count; ++k) {
        std::string n = "v" + std::to_string(k);
        if (!avoid.count(n)) out.push_back(n);
    }
    return out;
}

// ---- substitution -------------------------------------------------------

TermPtr substitute(const TermPtr& t, const Substitution& map) {
    if (t->free.empty()) return t;
    if (t->kind == Term::Kind::Var) {
        auto it = map.find(t->name);
        return it == map.end() ? t : it->second;
    }
    bool changed = false;
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) {
        args.push_back(substitute(a, map));
        changed |= args.back() != a;
    }
    return changed ? app(t->name, std::move(args)) : t;
}

namespace {

FormulaPtr subst_rec(const FormulaPtr& f, const Substitution& map) {
    bool relevant = false;
    for (const auto& v : f->free)
        if (map.count(v)) {
            relevant = true;
            break;
        }
    if (!relevant) return f;

    switch (f->kind) {
        case Formula::Kind::Eq:
        case Formula::Kind::Rel: {
            std::vector<TermPtr> ts;
            for (const auto& t : f->terms) ts.push_back(substitute(t, map));
            return f->kind == Formula::Kind::Eq ? eq(ts[0], ts[1]) : rel(f->name, std::move(ts));
        }
        case Formula::Kind::Not: return neg(subst_rec(f->lhs, map));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            Substitution inner;
            std::set<std::string> image_vars;
            for (const auto& v : f->lhs->free) {
                if (v == f->name) continue;
                auto it = map.find(v);
                if (it == map.end()) continue;
                inner.emplace(v, it->second);
                for (const auto& w : it->second->free) image_vars.insert(w);
            }
            if (inner.empty()) return f;
            std::string bound = f->name;
            if (image_vars.count(bound)) {
                std::set<std::string> taken(image_vars);
                for (const auto& v : f->lhs->free) taken.insert(v);
                std::string cand = bound;
                while (taken.count(cand)) cand = primed(cand);
                inner[bound] = var(cand);
                bound = cand;
            }
            return make_quantifier(f->kind, bound, subst_rec(f->lhs, inner));
        }
        default: return make_binary(f->kind, subst_rec(f->lhs, map), subst_rec(f->rhs, map));
    }
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const Substitution& map) { return subst_rec(f, map); }

FormulaPtr rename_free(const FormulaPtr& f, const std::vector<std::string>& from, const std::vector<std::string>& to) {
    if (from.size() != to.size()) throw std::invalid_argument("rename_free: length mismatch");
    Substitution m;
    for (std::size_t i = 0; i < from.size(); ++i)
        if (from[i] != to[i]) m.emplace(from[i], var(to[i]));
    return m.empty() ? f : substitute(f, m);
}

// ---- equality -----------------------------------------------------------

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!structurally_equal(a->args[i], b->args[i])) return false;
    return true;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name || a->size != b->size || a->terms.size() != b->terms.size())
        return false;
    for (std::size_t i = 0; i < a->terms.size(); ++i)
        if (!structurally_equal(a->terms[i], b->terms[i])) return false;
    if (a->lhs && !structurally_equal(a->lhs, b->lhs)) return false;
    if (a->rhs && !structurally_equal(a->rhs, b->rhs)) return false;
    return true;
}

namespace {

// Bound variables are compared by binder depth; free ones by name.
struct AlphaEnv {
    std::vector<std::string> left, right;

    int lookup(const std::vector<std::string>& side, const std::string& v) const {
        for (std::size_t i = side.size(); i-- > 0;)
            if (side[i] == v) return static_cast<int>(i);
        return -1;
    }
};

bool alpha_term(const TermPtr& a, const TermPtr& b, const AlphaEnv& env) {
    if (a->kind != b->kind) return false;
    if (a->kind == Term::Kind::Var) {
        int i = env.lookup(env.left, a->name), j = env.lookup(env.right, b->name);
        if (i != j) return false;
        return i >= 0 || a->name == b->name;
    }
    if (a->name != b->name || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_term(a->args[i], b->args[i], env)) return false;
    return true;
}

bool alpha_rec(const FormulaPtr& a, const FormulaPtr& b, AlphaEnv& env) {
    if (a->kind != b->kind || a->size != b->size) return false;
    if (a == b) {
        bool identity = true;
        for (const auto& v : a->free)
            if (env.lookup(env.left, v) != env.lookup(env.right, v)) {
                identity = false;
                break;
            }
        if (identity) return true;
    }
    switch (a->kind) {
        case Formula::Kind::Eq:
        case Formula::Kind::Rel:
            if (a->name != b->name || a->terms.size() != b->terms.size()) return false;
            for (std::size_t i = 0; i < a->terms.size(); ++i)
                if (!alpha_term(a->terms[i], b->terms[i], env)) return false;
            return true;
        case Formula::Kind::Not: return alpha_rec(a->lhs, b->lhs, env);
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            env.left.push_back(a->name);
            env.right.push_back(b->name);
            bool r = alpha_rec(a->lhs, b->lhs, env);
            env.left.pop_back();
            env.right.pop_back();
            return r;
        }
        default: return alpha_rec(a->lhs, b->lhs, env) && alpha_rec(a->rhs, b->rhs, env);
    }
}

}  // namespace

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
    AlphaEnv env;
    return alpha_rec(a, b, env);
}

// ---- well-formedness ----------------------------------------------------

void check_well_formed(const TermPtr& t, const Signature& sig) {
    switch (t->kind) {
        case Term::Kind::Var:
            if (sig.declares(t->name)) throw std::invalid_argument("variable shadows declared symbol: " + t->name);
            if (!is_variable_name(t->name)) throw std::invalid_argument("bad variable name: " + t->name);
            return;
        case Term::Kind::Const:
            if (!sig.is_constant(t->name)) throw std::invalid_argument("undeclared constant: " + t->name);
            return;
        case Term::Kind::App: {
            auto it = sig.functions.find(t->name);
            if (it == sig.functions.end()) throw std::invalid_argument("undeclared function: " + t->name);
            if (static_cast<int>(t->args.size()) != it->second)
                throw std::invalid_argument("arity mismatch for " + t->name);
            for (const auto& a : t->args) check_well_formed(a, sig);
        }
    }
}

void check_well_formed(const FormulaPtr& f, const Signature& sig) {
    std::unordered_set<const Formula*> seen;
    std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
        if (!seen.insert(g.get()).second) return;
        switch (g->kind) {
            case Formula::Kind::Eq:
                if (g->terms.size() != 2) throw std::invalid_argument("equality needs two terms");
                break;
            case Formula::Kind::Rel: {
                auto it = sig.relations.find(g->name);
                if (it == sig.relations.end()) throw std::invalid_argument("undeclared relation: " + g->name);
                if (static_cast<int>(g->terms.size()) != it->second)
                    throw std::invalid_argument("arity mismatch for " + g->name);
                break;
            }
            case Formula::Kind::Forall:
            case Formula::Kind::Exists:
                if (sig.declares(g->name) || !is_variable_name(g->name))
                    throw std::invalid_argument("bad bound variable: " + g->name);
                break;
            default: break;
        }
        for (const auto& t : g->terms) check_well_formed(t, sig);
        if (g->lhs) go(g->lhs);
        if (g->rhs) go(g->rhs);
    };
    go(f);
}

}  // namespace interp

namespace interp {

namespace {

struct RenamedBody {
    FormulaPtr source;  // keeps the key pointer alive
    FormulaPtr renamed;
};

FormulaPtr renamed_body(const FormulaPtr& body, const std::vector<std::string>& from,
                        const std::vector<std::string>& to) {
    static std::map<std::pair<const Formula*, std::vector<std::string>>, RenamedBody> cache;
    auto key = std::make_pair(body.get(), to);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.renamed;
    auto r = rename_free(body, from, to);
    cache.emplace(key, RenamedBody{body, r});
    return r;
}

}  // namespace

FormulaPtr instantiate(const std::vector<std::string>& params, const FormulaPtr& body,
                       const std::vector<TermPtr>& args) {
    if (params.size() != args.size()) throw std::invalid_argument("instantiate: wrong number of arguments");
    bool identity = true;
    for (std::size_t i = 0; i < params.size(); ++i)
        if (args[i]->kind != Term::Kind::Var || args[i]->name != params[i]) identity = false;
    if (identity) return body;
    if (body->size <= kShareThreshold) {
        Substitution m;
        for (std::size_t i = 0; i < params.size(); ++i) m.emplace(params[i], args[i]);
        return substitute(body, m);
    }
    std::set<std::string> arg_vars;
    for (const auto& a : args) collect_variables(a, arg_vars);
    std::vector<std::string> names = params;
    bool clash = false;
    for (const auto& n : names)
        if (arg_vars.count(n)) clash = true;
    FormulaPtr shared = body;
    if (clash) {
        std::set<std::string> taken(arg_vars.begin(), arg_vars.end());
        for (const auto& v : body->free) taken.insert(v);
        for (auto& n : names) {
            while (taken.count(n)) n = primed(n);
            taken.insert(n);
        }
        shared = renamed_body(body, params, names);
    }
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < names.size(); ++i) parts.push_back(eq(var(names[i]), args[i]));
    parts.push_back(shared);
    return exists_all(names, conj_all(parts));
}

FormulaPtr instantiate_vars(const std::vector<std::string>& params, const FormulaPtr& body,
                            const std::vector<std::string>& args) {
    std::vector<TermPtr> ts;
    for (const auto& a : args) ts.push_back(var(a));
    return instantiate(params, body, ts);
}

}  // namespace interp
