#include "interp/evaluator.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace interp {

namespace {

std::size_t hash_big(const BigInt& v) {
    const auto& be = v.backend();
    std::size_t h = be.sign() ? 0x9e3779b97f4a7c15ull : 0;
    for (unsigned i = 0; i < be.size(); ++i) h = (h * 1000003u) ^ static_cast<std::size_t>(be.limbs()[i]);
    return h;
}

struct ValueHash {
    std::size_t operator()(const Value& v) const {
        if (v.index() == 0) return hash_big(std::get<0>(v));
        return std::hash<std::string>{}(std::get<1>(v)) ^ 0x5bd1e995u;
    }
};

const BigInt& nat(const Value& v) { return std::get<BigInt>(v); }
const std::string& str(const Value& v) { return std::get<std::string>(v); }

std::vector<std::string> all_strings(unsigned L, bool eps) {
    std::vector<std::string> out;
    if (eps) out.push_back("");
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

// Splits "base#k" into (base, k); k = 0 when the name has no numeric suffix.
std::pair<std::string, unsigned> split_tuple_name(const std::string& n) {
    auto h = n.rfind('#');
    if (h == std::string::npos || h + 1 == n.size()) return {n, 0};
    unsigned k = 0;
    for (std::size_t i = h + 1; i < n.size(); ++i) {
        if (n[i] < '0' || n[i] > '9') return {n, 0};
        k = k * 10 + static_cast<unsigned>(n[i] - '0');
        if (k > 1000000) return {n, 0};
    }
    return {n.substr(0, h), k};
}

void check_unique(const std::vector<Value>& vs, const std::string& what) {
    if (vs.empty()) throw std::invalid_argument(what + " is empty");
    std::unordered_set<Value, ValueHash> seen;
    for (const auto& v : vs)
        if (!seen.insert(v).second) throw std::invalid_argument(what + " repeats " + value_str(v));
}

}  // namespace

std::string value_str(const Value& v) {
    if (v.index() == 0) return nat(v).str();
    return str(v).empty() ? "eps" : str(v);
}

bool value_less(const Value& a, const Value& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (a.index() == 0) return nat(a) < nat(b);
    const auto& x = str(a);
    const auto& y = str(b);
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
}

std::string structure_name(StructureId s) {
    switch (s) {
        case StructureId::BitStrings: return "BitStrings";
        case StructureId::BitStringsEps: return "BitStringsEps";
        case StructureId::Naturals: return "Naturals";
    }
    return "?";
}

StructureId structure_by_name(const std::string& name) {
    if (name == "BitStrings") return StructureId::BitStrings;
    if (name == "BitStringsEps") return StructureId::BitStringsEps;
    if (name == "Naturals") return StructureId::Naturals;
    throw std::invalid_argument("unknown structure: " + name + " (BitStrings, BitStringsEps, Naturals)");
}

const Signature& structure_signature(StructureId s) {
    static const Signature strings = [] {
        Signature g;
        g.name = "BitStrings";
        g.constants = {"zero", "one"};
        g.functions = {{"o", 2}};
        g.relations = {{"pre", 2}, {"suff", 2}, {"sub", 2}};
        return g;
    }();
    static const Signature strings_eps = [] {
        Signature g = strings;
        g.name = "BitStringsEps";
        g.constants.insert("eps");
        return g;
    }();
    static const Signature nats = [] {
        Signature g;
        g.name = "Naturals";
        g.constants = {"zero"};
        g.functions = {{"S", 1}, {"plus", 2}, {"times", 2}};
        g.relations = {{"leq", 2}};
        return g;
    }();
    switch (s) {
        case StructureId::BitStrings: return strings;
        case StructureId::BitStringsEps: return strings_eps;
        default: return nats;
    }
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Holds: return "holds";
        case VerdictStatus::Fails: return "fails";
        case VerdictStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

// ---- ranges -------------------------------------------------------------

const std::vector<Value>& QuantifierRange::for_var(const std::string& name) const {
    auto it = overrides.find(name);
    if (it != overrides.end()) return it->second;
    if (inner && name.find('#') == std::string::npos) return *inner;
    return elements;
}

void QuantifierRange::validate() const {
    check_unique(elements, "range");
    if (inner) check_unique(*inner, "inner range");
    for (const auto& [n, vs] : overrides) check_unique(vs, "override for " + n);
    if (!tuples.empty()) {
        if (dim == 0) throw std::invalid_argument("tuple range without a dimension");
        std::set<std::vector<std::string>> seen;
        for (const auto& t : tuples) {
            if (t.size() != dim) throw std::invalid_argument("tuple of the wrong size in range");
            std::vector<std::string> k;
            for (const auto& v : t) k.push_back(value_str(v));
            if (!seen.insert(k).second) throw std::invalid_argument("tuple range repeats an entry");
        }
    }
}

QuantifierRange strings_range(unsigned max_len, bool with_eps) {
    if (max_len < 1) throw std::invalid_argument("string length bound must be at least 1");
    QuantifierRange r;
    for (auto& s : all_strings(max_len, with_eps)) r.elements.emplace_back(std::move(s));
    return r;
}

QuantifierRange nats_range(unsigned max) {
    QuantifierRange r;
    for (unsigned i = 0; i <= max; ++i) r.elements.emplace_back(BigInt(i));
    return r;
}

QuantifierRange tuple_range(std::vector<std::vector<Value>> tuples) {
    if (tuples.empty()) throw std::invalid_argument("empty tuple range");
    QuantifierRange r;
    r.dim = static_cast<unsigned>(tuples.front().size());
    std::vector<Value> coords;
    for (const auto& t : tuples)
        for (const auto& v : t) coords.push_back(v);
    std::sort(coords.begin(), coords.end(), value_less);
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    r.elements = std::move(coords);
    r.tuples = std::move(tuples);
    r.validate();
    return r;
}

QuantifierRange make_range(const std::string& spec) {
    auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
        throw std::invalid_argument("range spec must look like strings_upto(L) or nats_upto(B): " + spec);
    std::string head = spec.substr(0, open);
    std::string arg = spec.substr(open + 1, spec.size() - open - 2);
    long n = 0;
    try {
        std::size_t used = 0;
        n = std::stol(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number in range spec: " + spec);
    }
    if (n < 0) throw std::invalid_argument("range bound must be nonnegative: " + spec);
    if (n > 24) throw std::invalid_argument("range bound too large: " + spec);
    if (head == "strings_upto") return strings_range(static_cast<unsigned>(n), false);
    if (head == "strings_eps_upto") return strings_range(static_cast<unsigned>(n), true);
    if (head == "nats_upto") {
        if (n > 1000000) throw std::invalid_argument("range bound too large: " + spec);
        return nats_range(static_cast<unsigned>(n));
    }
    throw std::invalid_argument("unknown range kind: " + head);
}

// ---- compiled blocks ----------------------------------------------------
//
// A block is a maximal run of same-polarity quantifiers and connectives
// flattened into variables and leaves. It succeeds when some assignment of
// its variables gives every leaf its wanted truth value. Exists nodes are
// compiled wanting true (success = true); Forall nodes wanting false
// (success = a counterexample).

namespace {

enum class Fn : std::uint8_t { S, Plus, Times, Cat };
enum class Rl : std::uint8_t { Leq, Pre, Suff, Sub };

struct TNode {
    enum K : std::uint8_t { Var, Const, App } k;
    Fn fn = Fn::S;
    int slot = -1;
    int a = -1, b = -1;
    int c = -1;  // index into consts
};

struct ENode {
    enum K : std::uint8_t { Eq, Rel, Not, And, Or, Imp, Iff, Ref } k;
    Rl rel = Rl::Leq;
    int a = -1, b = -1;
    int ref = -1;
    bool ref_forall = false;
    std::vector<int> args;  // slots, in the nested block's parameter order
};

struct VarInfo {
    std::string name;
    int range = 0;
    int group = -1;
};

struct Leaf {
    int expr;
    bool want;
    std::vector<int> vars;  // block variable indices, distinct
};

struct Block {
    bool forall_mode = false;
    int nparams = 0;
    std::vector<VarInfo> vars;
    std::vector<TNode> terms;
    std::vector<ENode> exprs;
    std::vector<Value> consts;
    std::vector<Leaf> leaves;
    std::vector<std::vector<int>> leaves_of_var;
    // Leaves that can ever yield candidates for the variable.
    std::vector<std::vector<int>> cand_leaves_of_var;
    std::vector<int> ground;
    std::vector<std::vector<int>> groups;
};

struct MemoKey {
    int id;
    std::vector<Value> params;
    bool operator==(const MemoKey& o) const { return id == o.id && params == o.params; }
};

struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.id) * 0x100000001b3ull;
        ValueHash vh;
        for (const auto& v : k.params) h = (h ^ vh(v)) * 0x100000001b3ull;
        return h;
    }
};

// Candidate set for one variable; absent means no information.
struct Cand {
    bool known = false;
    std::vector<Value> vals;
};

Cand unknown() { return {}; }
Cand known_set(std::vector<Value> v) { return {true, std::move(v)}; }

Cand best_of(Cand a, Cand b) {
    if (!a.known) return b;
    if (!b.known) return a;
    if (a.vals.size() <= b.vals.size()) return a;
    return b;
}

Cand union_of(Cand a, Cand b) {
    if (!a.known || !b.known) return unknown();
    if (a.vals.empty()) return b;
    if (b.vals.empty()) return a;
    std::unordered_set<Value, ValueHash> seen(a.vals.begin(), a.vals.end());
    for (auto& v : b.vals)
        if (seen.insert(v).second) a.vals.push_back(std::move(v));
    return a;
}

constexpr std::size_t kCandidateCap = 200000;

}  // namespace

struct Evaluator::Impl {
    StructureId st;
    QuantifierRange range;
    EvalOptions opts;
    bool strings;
    bool eps;

    std::deque<Block> blocks;
    std::unordered_map<std::string, int> interned;
    std::map<std::pair<const Formula*, bool>, std::pair<int, FormulaPtr>> by_pointer;
    std::unordered_map<MemoKey, bool, MemoHash> memo;
    std::uint64_t nodes = 0;

    std::vector<const std::vector<Value>*> ranges;
    std::vector<std::unordered_set<Value, ValueHash>> members;
    std::map<std::string, int> override_index;

    Impl(StructureId s, QuantifierRange r, EvalOptions o) : st(s), range(std::move(r)), opts(o) {
        range.validate();
        strings = st != StructureId::Naturals;
        eps = st == StructureId::BitStringsEps;
        for (const auto& v : range.elements)
            if ((v.index() == 1) != strings) throw std::invalid_argument("range elements do not match the structure");
        add_range(&range.elements);
        if (range.inner) add_range(&*range.inner);
    }

    int add_range(const std::vector<Value>* vs) {
        ranges.push_back(vs);
        members.emplace_back(vs->begin(), vs->end());
        return static_cast<int>(ranges.size()) - 1;
    }

    int range_index(const std::string& name) {
        auto it = range.overrides.find(name);
        if (it != range.overrides.end()) {
            auto o = override_index.find(name);
            if (o != override_index.end()) return o->second;
            int id = add_range(&it->second);
            override_index[name] = id;
            return id;
        }
        if (range.inner && name.find('#') == std::string::npos) return 1;
        return 0;
    }

    void tick() {
        ++nodes;
        if (opts.budget && nodes > opts.budget) throw BudgetExceeded();
    }

    // -- structure ---------------------------------------------------------

    Value constant(const std::string& c) const {
        if (strings) {
            if (c == "zero") return std::string("0");
            if (c == "one") return std::string("1");
            if (c == "eps" && eps) return std::string();
        } else if (c == "zero") {
            return BigInt(0);
        }
        throw std::invalid_argument("structure " + structure_name(st) + " does not interpret constant " + c);
    }

    Fn function(const std::string& f, std::size_t arity) const {
        if (strings && f == "o" && arity == 2) return Fn::Cat;
        if (!strings) {
            if (f == "S" && arity == 1) return Fn::S;
            if (f == "plus" && arity == 2) return Fn::Plus;
            if (f == "times" && arity == 2) return Fn::Times;
        }
        throw std::invalid_argument("structure " + structure_name(st) + " does not interpret function " + f);
    }

    Rl relation(const std::string& r, std::size_t arity) const {
        if (arity == 2) {
            if (!strings && r == "leq") return Rl::Leq;
            if (strings && r == "pre") return Rl::Pre;
            if (strings && r == "suff") return Rl::Suff;
            if (strings && r == "sub") return Rl::Sub;
        }
        throw std::invalid_argument("structure " + structure_name(st) + " does not interpret relation " + r);
    }

    static Value apply(Fn f, const Value& a, const Value* b) {
        switch (f) {
            case Fn::S: return BigInt(nat(a) + 1);
            case Fn::Plus: return BigInt(nat(a) + nat(*b));
            case Fn::Times: return BigInt(nat(a) * nat(*b));
            case Fn::Cat: return str(a) + str(*b);
        }
        return a;
    }

    static bool holds(Rl r, const Value& a, const Value& b) {
        switch (r) {
            case Rl::Leq: return nat(a) <= nat(b);
            case Rl::Pre: {
                const auto& x = str(a);
                const auto& y = str(b);
                return x.size() <= y.size() && y.compare(0, x.size(), x) == 0;
            }
            case Rl::Suff: {
                const auto& x = str(a);
                const auto& y = str(b);
                return x.size() <= y.size() && y.compare(y.size() - x.size(), x.size(), x) == 0;
            }
            case Rl::Sub: return str(b).find(str(a)) != std::string::npos;
        }
        return false;
    }

    // -- compilation -------------------------------------------------------

    struct Builder {
        Impl& im;
        Block b;
        std::vector<std::pair<std::string, int>> scope;

        int lookup(const std::string& n) const {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == n) return it->second;
            throw std::invalid_argument("no value for free variable " + n);
        }

        int term(const TermPtr& t) {
            TNode n{};
            switch (t->kind) {
                case Term::Kind::Var:
                    n.k = TNode::Var;
                    n.slot = lookup(t->name);
                    break;
                case Term::Kind::Const:
                    n.k = TNode::Const;
                    n.c = static_cast<int>(b.consts.size());
                    b.consts.push_back(im.constant(t->name));
                    break;
                case Term::Kind::App: {
                    Fn f = im.function(t->name, t->args.size());
                    int a = term(t->args[0]);
                    int c = t->args.size() > 1 ? term(t->args[1]) : -1;
                    // Fold ground subterms such as numerals.
                    bool ground = b.terms[a].k == TNode::Const && (c < 0 || b.terms[c].k == TNode::Const);
                    if (ground) {
                        Value v = apply(f, b.consts[b.terms[a].c], c < 0 ? nullptr : &b.consts[b.terms[c].c]);
                        n.k = TNode::Const;
                        n.c = static_cast<int>(b.consts.size());
                        b.consts.push_back(std::move(v));
                    } else {
                        n.k = TNode::App;
                        n.fn = f;
                        n.a = a;
                        n.b = c;
                    }
                    break;
                }
            }
            b.terms.push_back(n);
            return static_cast<int>(b.terms.size()) - 1;
        }

        int expr(const FormulaPtr& f) {
            ENode n{};
            using K = Formula::Kind;
            switch (f->kind) {
                case K::Eq:
                    n.k = ENode::Eq;
                    n.a = term(f->terms[0]);
                    n.b = term(f->terms[1]);
                    break;
                case K::Rel:
                    n.k = ENode::Rel;
                    n.rel = im.relation(f->name, f->terms.size());
                    n.a = term(f->terms[0]);
                    n.b = term(f->terms[1]);
                    break;
                case K::Not:
                    n.k = ENode::Not;
                    n.a = expr(f->lhs);
                    break;
                case K::And:
                case K::Or:
                case K::Imp:
                case K::Iff:
                    n.k = f->kind == K::And ? ENode::And
                          : f->kind == K::Or ? ENode::Or
                          : f->kind == K::Imp ? ENode::Imp
                                              : ENode::Iff;
                    n.a = expr(f->lhs);
                    n.b = expr(f->rhs);
                    break;
                case K::Forall:
                case K::Exists:
                    n.k = ENode::Ref;
                    n.ref_forall = f->kind == K::Forall;
                    n.ref = im.compile(f, !n.ref_forall);
                    for (const auto& v : f->free) n.args.push_back(lookup(v));
                    break;
            }
            b.exprs.push_back(std::move(n));
            return static_cast<int>(b.exprs.size()) - 1;
        }

        void slots_of_term(int t, std::vector<int>& out) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) out.push_back(n.slot);
            if (n.k == TNode::App) {
                slots_of_term(n.a, out);
                if (n.b >= 0) slots_of_term(n.b, out);
            }
        }

        void slots_of_expr(int e, std::vector<int>& out) const {
            const auto& n = b.exprs[e];
            switch (n.k) {
                case ENode::Eq:
                case ENode::Rel:
                    slots_of_term(n.a, out);
                    slots_of_term(n.b, out);
                    break;
                case ENode::Not: slots_of_expr(n.a, out); break;
                case ENode::Ref: out.insert(out.end(), n.args.begin(), n.args.end()); break;
                default:
                    slots_of_expr(n.a, out);
                    slots_of_expr(n.b, out);
            }
        }

        void flatten(const FormulaPtr& f, bool want) {
            using K = Formula::Kind;
            if (f->kind == K::Not) return flatten(f->lhs, !want);
            if (want && f->kind == K::And) {
                flatten(f->lhs, true);
                flatten(f->rhs, true);
                return;
            }
            if (!want && f->kind == K::Or) {
                flatten(f->lhs, false);
                flatten(f->rhs, false);
                return;
            }
            if (!want && f->kind == K::Imp) {
                flatten(f->lhs, true);
                flatten(f->rhs, false);
                return;
            }
            if ((want && f->kind == K::Exists) || (!want && f->kind == K::Forall)) {
                int slot = b.nparams + static_cast<int>(b.vars.size());
                b.vars.push_back({f->name, 0, -1});
                scope.push_back({f->name, slot});
                flatten(f->lhs, want);
                scope.pop_back();
                return;
            }
            Leaf leaf{expr(f), want, {}};
            std::vector<int> slots;
            slots_of_expr(leaf.expr, slots);
            for (int s : slots)
                if (s >= b.nparams) {
                    int v = s - b.nparams;
                    if (std::find(leaf.vars.begin(), leaf.vars.end(), v) == leaf.vars.end()) leaf.vars.push_back(v);
                }
            b.leaves.push_back(std::move(leaf));
        }

        void finish() {
            for (auto& v : b.vars) v.range = im.range_index(v.name);
            unsigned m = im.range.dim;
            if (m >= 1 && !im.range.tuples.empty()) {
                for (std::size_t i = 0; i < b.vars.size();) {
                    auto [base, k] = split_tuple_name(b.vars[i].name);
                    bool ok = k == 1 && i + m <= b.vars.size();
                    for (unsigned j = 0; ok && j < m; ++j) {
                        const auto& n = b.vars[i + j].name;
                        auto sp = split_tuple_name(n);
                        ok = sp.first == base && sp.second == j + 1 && !im.range.overrides.count(n);
                    }
                    if (!ok) {
                        ++i;
                        continue;
                    }
                    std::vector<int> g;
                    for (unsigned j = 0; j < m; ++j) {
                        b.vars[i + j].group = static_cast<int>(b.groups.size());
                        g.push_back(static_cast<int>(i + j));
                    }
                    b.groups.push_back(std::move(g));
                    i += m;
                }
            }
            b.leaves_of_var.assign(b.vars.size(), {});
            b.cand_leaves_of_var.assign(b.vars.size(), {});
            for (std::size_t l = 0; l < b.leaves.size(); ++l) {
                if (b.leaves[l].vars.empty()) b.ground.push_back(static_cast<int>(l));
                for (int v : b.leaves[l].vars) {
                    b.leaves_of_var[v].push_back(static_cast<int>(l));
                    if (may_constrain(b.leaves[l].expr, b.leaves[l].want, b.nparams + v))
                        b.cand_leaves_of_var[v].push_back(static_cast<int>(l));
                }
            }
        }

        bool term_has(int t, int slot) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) return n.slot == slot;
            if (n.k == TNode::App) return term_has(n.a, slot) || (n.b >= 0 && term_has(n.b, slot));
            return false;
        }

        // Static counterpart of Search::cand: false when no assignment of the
        // other variables can produce a candidate set.
        bool may_constrain(int e, bool want, int slot) const {
            const auto& n = b.exprs[e];
            switch (n.k) {
                case ENode::Eq: return want && term_has(n.a, slot) != term_has(n.b, slot);
                case ENode::Rel: return want && term_has(n.a, slot) && !term_has(n.b, slot);
                case ENode::Not: return may_constrain(n.a, !want, slot);
                case ENode::And:
                    return want ? may_constrain(n.a, true, slot) || may_constrain(n.b, true, slot)
                                : may_constrain(n.a, false, slot) && may_constrain(n.b, false, slot);
                case ENode::Or:
                    return want ? may_constrain(n.a, true, slot) && may_constrain(n.b, true, slot)
                                : may_constrain(n.a, false, slot) || may_constrain(n.b, false, slot);
                case ENode::Imp:
                    return want ? may_constrain(n.a, false, slot) && may_constrain(n.b, true, slot)
                                : may_constrain(n.a, true, slot) || may_constrain(n.b, false, slot);
                case ENode::Iff: {
                    bool at = may_constrain(n.a, true, slot), af = may_constrain(n.a, false, slot);
                    bool bt = may_constrain(n.b, true, slot), bf = may_constrain(n.b, false, slot);
                    return want ? (at || bt) && (af || bf) : (at || bf) && (af || bt);
                }
                case ENode::Ref: return false;
            }
            return false;
        }

        std::string key() const {
            std::string k;
            auto put = [&](long x) {
                k += std::to_string(x);
                k += ',';
            };
            put(b.forall_mode);
            put(b.nparams);
            k += "V";
            for (const auto& v : b.vars) {
                put(v.range);
                put(v.group);
            }
            k += "C";
            for (const auto& c : b.consts) {
                k += value_str(c);
                k += ',';
            }
            k += "T";
            for (const auto& t : b.terms) {
                put(t.k);
                put(static_cast<int>(t.fn));
                put(t.slot);
                put(t.a);
                put(t.b);
                put(t.c);
            }
            k += "E";
            for (const auto& e : b.exprs) {
                put(e.k);
                put(static_cast<int>(e.rel));
                put(e.a);
                put(e.b);
                put(e.ref);
                put(e.ref_forall);
                for (int a : e.args) put(a);
                k += ';';
            }
            k += "L";
            for (const auto& l : b.leaves) {
                put(l.expr);
                put(l.want);
            }
            return k;
        }
    };

    Block build(const FormulaPtr& f, bool want) {
        Builder bd{*this, {}, {}};
        bd.b.forall_mode = !want;
        bd.b.nparams = static_cast<int>(f->free.size());
        for (int i = 0; i < bd.b.nparams; ++i) bd.scope.push_back({f->free[i], i});
        bd.flatten(f, want);
        bd.finish();
        return std::move(bd.b);
    }

    int compile(const FormulaPtr& f, bool want) {
        auto pk = std::make_pair(f.get(), want);
        auto it = by_pointer.find(pk);
        if (it != by_pointer.end()) return it->second.first;
        Builder bd{*this, {}, {}};
        bd.b.forall_mode = !want;
        bd.b.nparams = static_cast<int>(f->free.size());
        for (int i = 0; i < bd.b.nparams; ++i) bd.scope.push_back({f->free[i], i});
        bd.flatten(f, want);
        bd.finish();
        std::string k = bd.key();
        int id;
        auto in = interned.find(k);
        if (in != interned.end()) {
            id = in->second;
        } else {
            id = static_cast<int>(blocks.size());
            blocks.push_back(std::move(bd.b));
            interned.emplace(std::move(k), id);
        }
        by_pointer.emplace(pk, std::make_pair(id, f));
        return id;
    }

    // -- search ------------------------------------------------------------

    struct Search {
        Impl& im;
        const Block& b;
        std::vector<Value> slots;
        std::vector<char> assigned;
        std::vector<int> pending;
        int unassigned;
        bool record = false;
        std::vector<std::pair<std::string, Value>> solution;
        std::vector<int> ready;  // leaves that became ground, stacked per depth

        Search(Impl& i, const Block& bl, const std::vector<Value>& params)
            : im(i), b(bl), slots(params), assigned(bl.nparams + bl.vars.size(), 0), unassigned(bl.vars.size()) {
            slots.resize(bl.nparams + bl.vars.size());
            std::fill(assigned.begin(), assigned.begin() + bl.nparams, 1);
            pending.reserve(bl.leaves.size());
            for (const auto& l : bl.leaves) pending.push_back(static_cast<int>(l.vars.size()));
        }

        bool run() {
            for (int l : b.ground) {
                im.tick();
                if (eval_expr(b.leaves[l].expr) != b.leaves[l].want) return false;
            }
            return dfs();
        }

        // -- evaluation of compiled nodes --

        Value term_value(int t) const {
            const auto& n = b.terms[t];
            switch (n.k) {
                case TNode::Var: return slots[n.slot];
                case TNode::Const: return b.consts[n.c];
                case TNode::App: {
                    Value ta, tc;
                    const Value& a = term_ref(n.a, ta);
                    if (n.b < 0) return apply(n.fn, a, nullptr);
                    return apply(n.fn, a, &term_ref(n.b, tc));
                }
            }
            return {};
        }

        // Avoids copying leaf values; tmp holds computed ones.
        const Value& term_ref(int t, Value& tmp) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) return slots[n.slot];
            if (n.k == TNode::Const) return b.consts[n.c];
            tmp = term_value(t);
            return tmp;
        }

        bool eval_expr(int e) {
            const auto& n = b.exprs[e];
            switch (n.k) {
                case ENode::Eq: {
                    Value ta, tb;
                    return term_ref(n.a, ta) == term_ref(n.b, tb);
                }
                case ENode::Rel: {
                    Value ta, tb;
                    return holds(n.rel, term_ref(n.a, ta), term_ref(n.b, tb));
                }
                case ENode::Not: return !eval_expr(n.a);
                case ENode::And: return eval_expr(n.a) && eval_expr(n.b);
                case ENode::Or: return eval_expr(n.a) || eval_expr(n.b);
                case ENode::Imp: return !eval_expr(n.a) || eval_expr(n.b);
                case ENode::Iff: return eval_expr(n.a) == eval_expr(n.b);
                case ENode::Ref: {
                    bool found = im.run_ref(n.ref, n.args, slots);
                    return n.ref_forall ? !found : found;
                }
            }
            return false;
        }

        // -- candidate analysis --

        bool term_contains(int t, int slot) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) return n.slot == slot;
            if (n.k == TNode::App) return term_contains(n.a, slot) || (n.b >= 0 && term_contains(n.b, slot));
            return false;
        }

        bool term_known(int t) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) return assigned[n.slot];
            if (n.k == TNode::App) return term_known(n.a) && (n.b < 0 || term_known(n.b));
            return true;
        }

        bool has_other_unknown(int t, int slot) const {
            const auto& n = b.terms[t];
            if (n.k == TNode::Var) return n.slot != slot && !assigned[n.slot];
            if (n.k == TNode::App) return has_other_unknown(n.a, slot) || (n.b >= 0 && has_other_unknown(n.b, slot));
            return false;
        }

        // Term value with slot := x and other unknowns := 0 (a lower bound).
        BigInt probe(int t, int slot, const BigInt& x) const {
            const auto& n = b.terms[t];
            switch (n.k) {
                case TNode::Var:
                    if (n.slot == slot) return x;
                    return assigned[n.slot] ? nat(slots[n.slot]) : BigInt(0);
                case TNode::Const: return nat(b.consts[n.c]);
                case TNode::App: {
                    BigInt a = probe(n.a, slot, x);
                    switch (n.fn) {
                        case Fn::S: return a + 1;
                        case Fn::Plus: return a + probe(n.b, slot, x);
                        case Fn::Times: return a * probe(n.b, slot, x);
                        default: return a;
                    }
                }
            }
            return 0;
        }

        // {x : probe(x) <= N}, or exact solutions of probe(x) = N when exact.
        Cand nat_bound(int t, int slot, const BigInt& N, bool exact) const {
            BigInt c0 = probe(t, slot, 0);
            BigInt top = N + 1;
            BigInt cN = probe(t, slot, top);
            if (c0 == cN) {
                if (exact) return c0 == N ? unknown() : known_set({});
                return c0 <= N ? unknown() : known_set({});
            }
            if (exact) {
                BigInt lo = 0, hi = top;
                while (lo < hi) {
                    BigInt mid = (lo + hi) / 2;
                    if (probe(t, slot, mid) >= N) hi = mid;
                    else lo = mid + 1;
                }
                if (probe(t, slot, lo) == N) return known_set({Value(lo)});
                return known_set({});
            }
            if (c0 > N) return known_set({});
            BigInt lo = 0, hi = N;  // largest x with probe(x) <= N
            while (lo < hi) {
                BigInt mid = (lo + hi + 1) / 2;
                if (probe(t, slot, mid) <= N) lo = mid;
                else hi = mid - 1;
            }
            if (lo + 1 > kCandidateCap) return unknown();
            std::vector<Value> out;
            for (BigInt x = 0; x <= lo; ++x) out.emplace_back(x);
            return known_set(std::move(out));
        }

        struct Pieces {
            std::string before, after;
            std::size_t known_len = 0;
            int hits = 0;
            int others = 0;
            bool after_started = false;
        };

        void pieces(int t, int slot, Pieces& p) const {
            const auto& n = b.terms[t];
            switch (n.k) {
                case TNode::App:
                    pieces(n.a, slot, p);
                    pieces(n.b, slot, p);
                    return;
                case TNode::Const:
                case TNode::Var: {
                    if (n.k == TNode::Var && n.slot == slot) {
                        ++p.hits;
                        p.after_started = true;
                        p.after.clear();
                        return;
                    }
                    if (n.k == TNode::Var && !assigned[n.slot]) {
                        ++p.others;
                        p.after_started = true;
                        return;
                    }
                    const std::string& s = n.k == TNode::Const ? str(b.consts[n.c]) : str(slots[n.slot]);
                    p.known_len += s.size();
                    if (!p.after_started) p.before += s;
                    else p.after += s;
                    return;
                }
            }
        }

        std::vector<Value> substrings(const std::string& N, std::size_t minlen, std::size_t maxlen) const {
            std::vector<Value> out;
            std::unordered_set<std::string> seen;
            for (std::size_t len = minlen; len <= maxlen && len <= N.size(); ++len)
                for (std::size_t i = 0; i + len <= N.size(); ++i) {
                    std::string w = N.substr(i, len);
                    if (seen.insert(w).second) out.emplace_back(std::move(w));
                }
            return out;
        }

        // Values of slot that could make the string term t equal to N (exact)
        // or a segment of N.
        Cand string_match(int t, int slot, const std::string& N, bool exact) const {
            Pieces p;
            pieces(t, slot, p);
            std::size_t minlen = im.eps ? 0 : 1;
            if (exact && p.others == 0 && p.hits == 1) {
                const auto& P = p.before;
                const auto& Q = p.after;
                if (N.size() < P.size() + Q.size() + minlen) return known_set({});
                if (N.compare(0, P.size(), P) != 0 || N.compare(N.size() - Q.size(), Q.size(), Q) != 0)
                    return known_set({});
                return known_set({Value(N.substr(P.size(), N.size() - P.size() - Q.size()))});
            }
            long room = static_cast<long>(N.size()) - static_cast<long>(p.known_len) -
                        static_cast<long>(p.others) * static_cast<long>(minlen);
            if (room < 0 || (room < static_cast<long>(minlen) * p.hits && exact)) return known_set({});
            std::size_t maxlen = static_cast<std::size_t>(room) / static_cast<std::size_t>(p.hits);
            if (maxlen < minlen) return known_set({});
            return known_set(substrings(N, minlen, maxlen));
        }

        Cand atom_cand(const ENode& n, int slot) const {
            bool in_a = term_contains(n.a, slot);
            bool in_b = term_contains(n.b, slot);
            if (n.k == ENode::Eq) {
                if (in_a == in_b) return unknown();
                int t = in_a ? n.a : n.b;
                int k = in_a ? n.b : n.a;
                if (!term_known(k)) return unknown();
                Value N = term_value(k);
                if (N.index() == 0) return nat_bound(t, slot, nat(N), !has_other_unknown(t, slot));
                return string_match(t, slot, str(N), true);
            }
            // Relations constrain their left argument by a known right one.
            if (!in_a || in_b || !term_known(n.b)) return unknown();
            Value N = term_value(n.b);
            if (n.rel == Rl::Leq) return nat_bound(n.a, slot, nat(N), false);
            const std::string& y = str(N);
            const auto& ta = b.terms[n.a];
            if (ta.k == TNode::Var) {
                std::vector<Value> out;
                std::size_t minlen = im.eps ? 0 : 1;
                if (n.rel == Rl::Sub) return known_set(substrings(y, minlen, y.size()));
                for (std::size_t len = minlen; len <= y.size(); ++len)
                    out.emplace_back(n.rel == Rl::Pre ? y.substr(0, len) : y.substr(y.size() - len));
                return known_set(std::move(out));
            }
            return string_match(n.a, slot, y, false);
        }

        Cand either(int a, bool wa, int c, bool wc, int slot) const {
            Cand x = cand(a, wa, slot);
            if (!x.known) return x;
            return union_of(std::move(x), cand(c, wc, slot));
        }

        Cand cand(int e, bool want, int slot) const {
            const auto& n = b.exprs[e];
            switch (n.k) {
                case ENode::Eq:
                case ENode::Rel: return want ? atom_cand(n, slot) : unknown();
                case ENode::Not: return cand(n.a, !want, slot);
                case ENode::And:
                    return want ? best_of(cand(n.a, true, slot), cand(n.b, true, slot))
                                : either(n.a, false, n.b, false, slot);
                case ENode::Or:
                    return want ? either(n.a, true, n.b, true, slot)
                                : best_of(cand(n.a, false, slot), cand(n.b, false, slot));
                case ENode::Imp:
                    return want ? either(n.a, false, n.b, true, slot)
                                : best_of(cand(n.a, true, slot), cand(n.b, false, slot));
                case ENode::Iff:
                    if (want)
                        return union_of(best_of(cand(n.a, true, slot), cand(n.b, true, slot)),
                                        best_of(cand(n.a, false, slot), cand(n.b, false, slot)));
                    return union_of(best_of(cand(n.a, true, slot), cand(n.b, false, slot)),
                                    best_of(cand(n.a, false, slot), cand(n.b, true, slot)));
                case ENode::Ref: return unknown();
            }
            return unknown();
        }

        Cand var_cand(int v) const {
            int slot = b.nparams + v;
            Cand best;
            for (int l : b.cand_leaves_of_var[v]) {
                if (pending[l] == 0) continue;
                best = best_of(std::move(best), cand(b.leaves[l].expr, b.leaves[l].want, slot));
                if (best.known && best.vals.size() <= 1) break;
            }
            if (!best.known) return best;
            const auto& info = b.vars[v];
            bool restrict = im.opts.strict || (b.forall_mode && best.vals.size() > 1);
            if (!restrict) {
                if (best.vals.size() > kCandidateCap) return unknown();
                return best;
            }
            if (info.group >= 0) return unknown();
            const auto& mem = im.members[info.range];
            std::vector<Value> kept;
            for (auto& x : best.vals)
                if (mem.count(x)) kept.push_back(std::move(x));
            return known_set(std::move(kept));
        }

        // -- depth-first search --

        using Step = std::pair<int, const Value*>;

        bool attempt(const Step* as, std::size_t count) {
            im.tick();
            const std::size_t first = ready.size();
            for (std::size_t i = 0; i < count; ++i) {
                int v = as[i].first;
                const Value& x = *as[i].second;
                int s = b.nparams + v;
                slots[s] = x;
                assigned[s] = 1;
                --unassigned;
                for (int l : b.leaves_of_var[v])
                    if (--pending[l] == 0) ready.push_back(l);
            }
            bool ok = true;
            for (std::size_t r = first; r < ready.size(); ++r) {
                int l = ready[r];
                im.tick();
                if (eval_expr(b.leaves[l].expr) != b.leaves[l].want) {
                    ok = false;
                    break;
                }
            }
            ready.resize(first);
            bool found = ok && dfs();
            for (std::size_t i = 0; i < count; ++i) {
                int s = b.nparams + as[i].first;
                int v = as[i].first;
                assigned[s] = 0;
                ++unassigned;
                for (int l : b.leaves_of_var[v]) ++pending[l];
            }
            return found;
        }

        bool dfs() {
            if (unassigned == 0) {
                if (record)
                    for (std::size_t i = 0; i < b.vars.size(); ++i)
                        solution.emplace_back(b.vars[i].name, slots[b.nparams + i]);
                return true;
            }
            int pick = -1;
            Cand best;
            if (!b.leaves.empty()) {
                for (std::size_t v = 0; v < b.vars.size(); ++v) {
                    if (assigned[b.nparams + v]) continue;
                    Cand c = var_cand(static_cast<int>(v));
                    if (!c.known) continue;
                    if (pick < 0 || c.vals.size() < best.vals.size()) {
                        pick = static_cast<int>(v);
                        best = std::move(c);
                        if (best.vals.size() <= 1) break;
                    }
                }
            }
            if (pick >= 0) {
                for (const auto& x : best.vals) {
                    Step st{pick, &x};
                    if (attempt(&st, 1)) return true;
                }
                return false;
            }
            int v = 0;
            while (assigned[b.nparams + v]) ++v;
            const auto& info = b.vars[v];
            if (info.group >= 0) {
                const auto& g = b.groups[info.group];
                std::vector<Step> as;
                as.reserve(g.size());
                for (const auto& tup : im.range.tuples) {
                    as.clear();
                    bool match = true;
                    for (std::size_t j = 0; j < g.size(); ++j) {
                        int s = b.nparams + g[j];
                        if (assigned[s]) {
                            if (!(slots[s] == tup[j])) {
                                match = false;
                                break;
                            }
                        } else {
                            as.emplace_back(g[j], &tup[j]);
                        }
                    }
                    if (match && attempt(as.data(), as.size())) return true;
                }
                return false;
            }
            for (const auto& x : *im.ranges[info.range]) {
                Step st{v, &x};
                if (attempt(&st, 1)) return true;
            }
            return false;
        }
    };

    // Keys are assembled in a pool of scratch buffers, one per nesting depth.
    std::vector<MemoKey> scratch;
    std::size_t depth = 0;

    bool run_ref(int id, const std::vector<int>& args, const std::vector<Value>& slots) {
        if (scratch.size() <= depth) scratch.resize(depth + 1);
        MemoKey& key = scratch[depth];
        key.id = id;
        key.params.resize(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) key.params[i] = slots[args[i]];
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        ++depth;
        bool r;
        try {
            Search s(*this, blocks[id], scratch[depth - 1].params);
            r = s.run();
        } catch (...) {
            --depth;
            throw;
        }
        --depth;
        memo.emplace(scratch[depth], r);
        return r;
    }
};

Evaluator::Evaluator(StructureId s, QuantifierRange range, EvalOptions opts)
    : impl_(std::make_unique<Impl>(s, std::move(range), opts)) {}

Evaluator::~Evaluator() = default;

StructureId Evaluator::structure() const { return impl_->st; }
const QuantifierRange& Evaluator::range() const { return impl_->range; }
std::uint64_t Evaluator::nodes_used() const { return impl_->nodes; }
std::size_t Evaluator::block_count() const { return impl_->blocks.size(); }

static std::vector<Value> param_values(const FormulaPtr& f, const Assignment& sigma) {
    std::vector<Value> ps;
    for (const auto& v : f->free) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw std::invalid_argument("assignment does not cover free variable " + v);
        ps.push_back(it->second);
    }
    return ps;
}

bool Evaluator::evaluate(const FormulaPtr& f, const Assignment& sigma) {
    auto ps = param_values(f, sigma);
    impl_->nodes = 0;
    Block b = impl_->build(f, true);
    Impl::Search s(*impl_, b, ps);
    return s.run();
}

Verdict Evaluator::check_sentence(const FormulaPtr& f) {
    if (!is_sentence(f)) throw std::invalid_argument("check_sentence needs a closed formula");
    impl_->nodes = 0;
    Verdict v;
    try {
        Block b = impl_->build(f, false);
        Impl::Search s(*impl_, b, {});
        s.record = true;
        if (s.run()) {
            v.status = VerdictStatus::Fails;
            v.counterexample = std::move(s.solution);
        }
    } catch (const BudgetExceeded&) {
        v.status = VerdictStatus::BudgetExceeded;
    }
    v.nodes = impl_->nodes;
    return v;
}

std::optional<Assignment> Evaluator::find_witness(const std::vector<std::string>& vars, const FormulaPtr& f,
                                                  const Assignment& sigma) {
    auto g = exists_all(vars, f);
    auto ps = param_values(g, sigma);
    impl_->nodes = 0;
    Block b = impl_->build(g, true);
    Impl::Search s(*impl_, b, ps);
    s.record = true;
    if (!s.run()) return std::nullopt;
    Assignment out;
    for (const auto& [n, x] : s.solution)
        if (std::find(vars.begin(), vars.end(), n) != vars.end()) out.emplace(n, x);
    return out;
}

bool evaluate(StructureId s, const QuantifierRange& r, const FormulaPtr& f, const Assignment& sigma,
              EvalOptions opts) {
    Evaluator ev(s, r, opts);
    return ev.evaluate(f, sigma);
}

Verdict check_sentence(StructureId s, const QuantifierRange& r, const FormulaPtr& f, EvalOptions opts) {
    Evaluator ev(s, r, opts);
    return ev.check_sentence(f);
}

// ---- reference evaluator ------------------------------------------------

namespace {

struct Naive {
    StructureId st;
    const QuantifierRange& r;

    Value term(const TermPtr& t, const Assignment& env) const {
        bool strings = st != StructureId::Naturals;
        switch (t->kind) {
            case Term::Kind::Var: {
                auto it = env.find(t->name);
                if (it == env.end()) throw std::invalid_argument("no value for free variable " + t->name);
                return it->second;
            }
            case Term::Kind::Const:
                if (strings && t->name == "zero") return std::string("0");
                if (strings && t->name == "one") return std::string("1");
                if (st == StructureId::BitStringsEps && t->name == "eps") return std::string();
                if (!strings && t->name == "zero") return BigInt(0);
                throw std::invalid_argument("structure does not interpret constant " + t->name);
            case Term::Kind::App: {
                std::vector<Value> a;
                for (const auto& x : t->args) a.push_back(term(x, env));
                if (strings && t->name == "o") return str(a[0]) + str(a[1]);
                if (!strings && t->name == "S") return BigInt(nat(a[0]) + 1);
                if (!strings && t->name == "plus") return BigInt(nat(a[0]) + nat(a[1]));
                if (!strings && t->name == "times") return BigInt(nat(a[0]) * nat(a[1]));
                throw std::invalid_argument("structure does not interpret function " + t->name);
            }
        }
        return {};
    }

    bool formula(const FormulaPtr& f, Assignment& env) const {
        using K = Formula::Kind;
        switch (f->kind) {
            case K::Eq: return term(f->terms[0], env) == term(f->terms[1], env);
            case K::Rel: {
                Value a = term(f->terms[0], env), b = term(f->terms[1], env);
                if (f->name == "leq") return nat(a) <= nat(b);
                const auto& x = str(a);
                const auto& y = str(b);
                if (f->name == "pre") return y.size() >= x.size() && y.substr(0, x.size()) == x;
                if (f->name == "suff") return y.size() >= x.size() && y.substr(y.size() - x.size()) == x;
                if (f->name == "sub") return y.find(x) != std::string::npos;
                throw std::invalid_argument("structure does not interpret relation " + f->name);
            }
            case K::Not: return !formula(f->lhs, env);
            case K::And: {
                bool a = formula(f->lhs, env), b = formula(f->rhs, env);
                return a && b;
            }
            case K::Or: {
                bool a = formula(f->lhs, env), b = formula(f->rhs, env);
                return a || b;
            }
            case K::Imp: {
                bool a = formula(f->lhs, env), b = formula(f->rhs, env);
                return !a || b;
            }
            case K::Iff: return formula(f->lhs, env) == formula(f->rhs, env);
            case K::Forall:
            case K::Exists: {
                auto saved = env.find(f->name) != env.end() ? std::optional<Value>(env[f->name]) : std::nullopt;
                bool all = true, any = false;
                for (const auto& x : r.for_var(f->name)) {
                    env[f->name] = x;
                    bool v = formula(f->lhs, env);
                    all = all && v;
                    any = any || v;
                }
                if (saved) env[f->name] = *saved;
                else env.erase(f->name);
                return f->kind == K::Forall ? all : any;
            }
        }
        return false;
    }
};

}  // namespace

Value eval_term(StructureId s, const TermPtr& t, const Assignment& sigma) {
    QuantifierRange dummy;
    return Naive{s, dummy}.term(t, sigma);
}

bool naive_evaluate(StructureId s, const QuantifierRange& r, const FormulaPtr& f, const Assignment& sigma) {
    Assignment env = sigma;
    return Naive{s, r}.formula(f, env);
}

}  // namespace interp
