#include "interp/evaluator.hpp"
#include "interp/interpretations.hpp"
#include "interp/logic.hpp"
#include "interp/report.hpp"
#include "interp/sl2.hpp"
#include "interp/theory.hpp"
#include "interp/translation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace interp;

namespace {

constexpr int kUsageError = 3;

struct Defaults {
    std::optional<unsigned> len, nat, inner, alpha, n;
    std::uint64_t budget = 0;
    bool timings = false;
    bool strict = false;
};

// Keys: len, nat, inner, alpha, n, budget, timings, strict.
Defaults load_config(const std::string& path) {
    Defaults d;
    if (path.empty()) return d;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "timings" || key == "strict") {
            if (!v.is_boolean()) throw std::invalid_argument("config value for " + key + " must be a boolean");
            (key == "timings" ? d.timings : d.strict) = v.get<bool>();
            continue;
        }
        if (!v.is_number_unsigned()) throw std::invalid_argument("config value for " + key + " must be a natural");
        if (key == "budget") d.budget = v.get<std::uint64_t>();
        else if (key == "len") d.len = v.get<unsigned>();
        else if (key == "nat") d.nat = v.get<unsigned>();
        else if (key == "inner") d.inner = v.get<unsigned>();
        else if (key == "alpha") d.alpha = v.get<unsigned>();
        else if (key == "n") d.n = v.get<unsigned>();
        else throw std::invalid_argument("unknown config key " + key);
    }
    return d;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_eval(const std::string& structure, const std::string& spec, const std::string& text, std::uint64_t budget,
             bool strict) {
    StructureId s = structure_by_name(structure);
    QuantifierRange r = make_range(spec);
    FormulaPtr f = parse_formula(text, structure_signature(s));
    if (!is_sentence(f)) throw std::invalid_argument("eval expects a sentence");
    EvalOptions eo;
    eo.budget = budget;
    eo.strict = strict;
    Verdict v = check_sentence(s, r, f, eo);
    std::cout << print(f) << "\n" << to_string(v.status);
    for (const auto& [name, val] : v.counterexample) std::cout << " " << name << "=" << value_str(val);
    std::cout << "\n";
    switch (v.status) {
        case VerdictStatus::Holds: return 0;
        case VerdictStatus::Fails: return 1;
        case VerdictStatus::BudgetExceeded: return 2;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interpforge: relative interpretations between weak theories, checked on finite ranges"};
    app.require_subcommand(1);

    std::string config_path;
    if (const char* env = std::getenv("INTERPFORGE_CONFIG")) config_path = env;
    app.add_option("--config", config_path, "JSON file with default bounds (also INTERPFORGE_CONFIG)");

    auto* theories = app.add_subcommand("theories", "List theories or show one");
    std::string th_action, th_name;
    theories->add_option("action", th_action, "list or show")->required()->check(CLI::IsMember({"list", "show"}));
    theories->add_option("name", th_name, "Theory name for show");

    auto* schema = app.add_subcommand("schema", "Print one schema instance");
    std::string sc_theory, sc_schema, sc_param;
    schema->add_option("theory", sc_theory)->required();
    schema->add_option("schema", sc_schema)->required();
    schema->add_option("param", sc_param, "n, n,m, bits or bits,bits")->required();

    auto* translate = app.add_subcommand("translate", "Translate a source formula");
    std::string tr_interp, tr_formula;
    translate->add_option("interp", tr_interp)->required();
    translate->add_option("formula", tr_formula)->required();

    auto* obls = app.add_subcommand("obligations", "List the obligations of an interpretation");
    std::string ob_interp;
    obls->add_option("interp", ob_interp)->required();
    std::optional<unsigned> ob_alpha, ob_n;
    obls->add_option("--alpha", ob_alpha, "Longest bit string schema parameter");
    obls->add_option("--n", ob_n, "Largest numeral schema parameter");
    bool ob_json = false;
    obls->add_flag("--json", ob_json);

    auto* verify = app.add_subcommand("verify", "Check every obligation on the entry's structure");
    std::string vf_interp;
    verify->add_option("interp", vf_interp)->required();
    std::optional<unsigned> vf_len, vf_nat, vf_inner, vf_alpha, vf_n;
    std::optional<std::uint64_t> vf_budget;
    verify->add_option("--len", vf_len, "String length bound (tuple base strings when m > 1)");
    verify->add_option("--nat", vf_nat, "Natural number bound");
    verify->add_option("--inner", vf_inner, "Bound for class-internal variables");
    verify->add_option("--alpha", vf_alpha, "Longest bit string schema parameter");
    verify->add_option("--n", vf_n, "Largest numeral schema parameter");
    verify->add_option("--budget", vf_budget, "Search nodes per obligation, 0 = unlimited");
    bool vf_json = false, vf_timings = false, vf_strict = false;
    verify->add_flag("--json", vf_json, "JSON report");
    verify->add_flag("--timings", vf_timings, "Record elapsed milliseconds");
    verify->add_flag("--strict", vf_strict, "Quantifiers see only the range, no exact witnesses");

    auto* encode_cmd = app.add_subcommand("encode", "Bit string to matrix");
    std::string en_bits;
    encode_cmd->add_option("bits", en_bits, "String over 0,1; eps for the empty string")->required();

    auto* decode_cmd = app.add_subcommand("decode", "Matrix a,b;c,d to bit string");
    std::string de_matrix;
    decode_cmd->add_option("matrix", de_matrix)->required();

    auto* eval = app.add_subcommand("eval", "Evaluate a sentence on a structure");
    std::string ev_structure, ev_range, ev_formula;
    std::uint64_t ev_budget = 0;
    bool ev_strict = false;
    eval->add_option("structure", ev_structure, "BitStrings, BitStringsEps or Naturals")->required();
    eval->add_option("range", ev_range, "strings_upto(L), strings_eps_upto(L) or nats_upto(B)")->required();
    eval->add_option("formula", ev_formula)->required();
    eval->add_option("--budget", ev_budget, "Search nodes, 0 = unlimited");
    eval->add_flag("--strict", ev_strict, "Quantifiers see only the range");

    auto* pipe = app.add_subcommand("pipeline", "Compose interpretations left to right");
    std::vector<std::string> pp_names;
    pipe->add_option("names", pp_names)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*theories) {
            if (th_action == "list") {
                for (const auto& n : theory_names()) {
                    const auto& t = get_theory(n);
                    std::cout << n << "  axioms=" << t.axioms.size() << " schemas=" << t.schemas.size() << "\n";
                }
                return 0;
            }
            if (th_name.empty()) throw std::invalid_argument("theories show needs a name");
            print_json(theory_json(get_theory(th_name)));
            return 0;
        }
        if (*schema) {
            const auto& t = get_theory(sc_theory);
            const auto& s = t.schema(sc_schema);
            std::cout << print(instantiate_schema(t, sc_schema, parse_schema_param(s.kind, sc_param))) << "\n";
            return 0;
        }
        if (*translate) {
            const auto& e = get_interpretation(tr_interp);
            FormulaPtr f = parse_formula(tr_formula, get_theory(e.source).sig);
            std::cout << print(translate_formula(f, e.translation)) << "\n";
            return 0;
        }
        if (*obls) {
            const auto& e = get_interpretation(ob_interp);
            BoundsOverride o;
            o.alpha = ob_alpha;
            o.n = ob_n;
            auto rb = resolve_bounds(e, o);
            auto list = entry_obligations(e, rb.plan.schema);
            if (ob_json) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& ob : list)
                    arr.push_back({{"label", ob.label}, {"kind", to_string(ob.kind)}, {"sentence", print(ob.sentence)}});
                print_json(arr);
            } else {
                for (const auto& ob : list) std::cout << ob.label << "\t" << print(ob.sentence) << "\n";
            }
            return 0;
        }
        if (*verify) {
            Defaults d = load_config(config_path);
            VerifyOptions vo;
            vo.bounds.len = vf_len ? vf_len : d.len;
            vo.bounds.nat = vf_nat ? vf_nat : d.nat;
            vo.bounds.inner = vf_inner ? vf_inner : d.inner;
            vo.bounds.alpha = vf_alpha ? vf_alpha : d.alpha;
            vo.bounds.n = vf_n ? vf_n : d.n;
            vo.budget = vf_budget ? *vf_budget : d.budget;
            vo.timings = vf_timings || d.timings;
            vo.strict = vf_strict || d.strict;
            auto rep = run_verification(vf_interp, vo);
            std::cout << render_report(rep, vf_json ? "json" : "text");
            return exit_code(rep);
        }
        if (*encode_cmd) {
            std::cout << encode(en_bits == "eps" ? std::string() : en_bits).str() << "\n";
            return 0;
        }
        if (*decode_cmd) {
            std::string s = decode(parse_matrix(de_matrix));
            std::cout << (s.empty() ? "eps" : s) << "\n";
            return 0;
        }
        if (*eval) return run_eval(ev_structure, ev_range, ev_formula, ev_budget, ev_strict);
        if (*pipe) {
            print_json(translation_json(pipeline(pp_names)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
