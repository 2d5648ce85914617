#include "sitcalc/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "sitcalc/decomposition.hpp"
#include "sitcalc/forgetting.hpp"
#include "sitcalc/oracle.hpp"
#include "sitcalc/progression.hpp"
#include "sitcalc/surface.hpp"

namespace sitcalc::cli {

namespace {

using json = nlohmann::json;

// A negative verdict; carries the exit code 1 through the dispatch.
struct Negative {};

struct Options {
    bool json = false;
    bool timings = false;
    int max_extra = 1;
    bool no_una = false;
    long budget_ms = 0;
    int depth = 3;

    std::vector<std::string> files;
    std::string action, actions, query, atom, symbol, output;
    std::string delta, delta1, delta2, ssa_groups;
    bool strict = false, componentwise = false, inline_pre = false, verify = false;
};

OracleConfig config(const Options& o) {
    OracleConfig cfg;
    cfg.max_extra = o.max_extra;
    cfg.una = !o.no_una;
    cfg.budget_ms = o.budget_ms;
    return cfg;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

Signature parse_delta(const std::string& text, const Signature& sig) {
    Signature d;
    for (const auto& s : split(text, ',')) {
        if (auto it = sig.fluents.find(s); it != sig.fluents.end()) d.fluents[s] = it->second;
        else if (auto it = sig.statics.find(s); it != sig.statics.end()) d.statics[s] = it->second;
        else if (auto it = sig.actions.find(s); it != sig.actions.end()) d.actions[s] = it->second;
        else if (sig.constants.count(s)) d.constants.insert(s);
        else throw ModelError("unknown symbol '" + s + "' in signature list");
    }
    return d;
}

std::vector<std::set<std::string>> parse_groups(const std::string& text, const BasicActionTheory& b) {
    std::vector<std::set<std::string>> out;
    for (const auto& g : split(text, ';')) {
        std::set<std::string> group;
        for (const auto& f : split(g, ',')) {
            if (!b.sig.fluents.count(f)) throw ModelError("'" + f + "' is not a fluent");
            group.insert(f);
        }
        out.push_back(group);
    }
    return out;
}

json axioms_json(const Theory& t) {
    json a = json::array();
    for (const auto& f : t.axioms) a.push_back(render(f));
    return a;
}

json signature_json(const Signature& s) {
    return {{"fluents", s.fluents}, {"statics", s.statics}, {"actions", s.actions}, {"constants", s.constants}};
}

json model_json(const FiniteModel& m) {
    json rel = json::object();
    for (const auto& [key, tuples] : m.relations) {
        json ts = json::array();
        for (const auto& t : tuples) {
            json tj = json::array();
            for (auto e : t) tj.push_back(m.element_names[e]);
            ts.push_back(tj);
        }
        rel[key.first + (key.second == Stage::Next ? "@next" : "")] = ts;
    }
    json consts = json::object();
    for (const auto& [c, e] : m.constants) consts[c] = m.element_names[e];
    return {{"domain", m.element_names}, {"constants", consts}, {"relations", rel}};
}

json entailment_json(const EntailmentResult& r) {
    json j = {{"verdict", r.entailed ? "ENTAILED_FINITE" : "COUNTERMODEL"}, {"bound", r.bound}};
    if (r.countermodel) j["countermodel"] = model_json(*r.countermodel);
    return j;
}

std::string entailment_text(const EntailmentResult& r) {
    if (r.entailed) return "entailed over all domains up to size " + std::to_string(r.bound);
    return "not entailed; countermodel: " + (r.countermodel ? r.countermodel->str() : std::string("?"));
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) {
        if (!o.json) out << text;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw ModelError("cannot write " + o.output);
    f << text;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    void parse() {
        auto b = load_bat(o_.files.at(0));
        if (!o_.json) {
            out_ << render(b);
            return;
        }
        json ssas = json::array();
        for (const auto& [f, s] : b.ssas) ssas.push_back(f);
        json poss = json::array();
        for (const auto& [a, p] : b.preconditions) poss.push_back(a);
        report_["signature"] = signature_json(b.sig);
        report_["ssas"] = ssas;
        report_["preconditions"] = poss;
        report_["init"] = axioms_json(b.init);
    }

    void validate() {
        auto b = load_bat(o_.files.at(0));
        auto r = sitcalc::validate(b, o_.strict);
        auto list = [](const std::vector<Violation>& vs) {
            json a = json::array();
            for (const auto& v : vs) a.push_back({{"code", v.code}, {"message", v.message}, {"at", v.span.str()}});
            return a;
        };
        report_["ok"] = r.ok();
        report_["violations"] = list(r.violations);
        report_["warnings"] = list(r.warnings);
        for (const auto& v : r.violations) text("error " + v.code + ": " + v.span.str() + ": " + v.message);
        for (const auto& v : r.warnings) text("warning " + v.code + ": " + v.span.str() + ": " + v.message);
        text(r.ok() ? "valid" : "invalid");
        if (!r.ok()) throw Negative{};
    }

    void progress() {
        auto b = load_bat(o_.files.at(0));
        if (o_.inline_pre) b = inline_preconditions(b);
        auto alpha = parse_action(o_.action, b.sig);
        Theory result;
        json omega = json::array();
        if (o_.componentwise) {
            Signature d1 = parse_delta(o_.delta1, b.sig), d2 = parse_delta(o_.delta2, b.sig);
            auto init = syntactic_decompose(b.init, d2);
            auto groups = o_.ssa_groups.empty() ? ssa_groups(b, d1) : parse_groups(o_.ssa_groups, b);
            auto r = progress_componentwise(b, init, groups, alpha, d1);
            json comps = json::array();
            for (std::size_t j = 0; j < r.decomposition.components.size(); ++j)
                comps.push_back({{"touched", static_cast<bool>(r.touched[j])},
                                 {"axioms", axioms_json(r.decomposition.components[j])}});
            report_["components"] = comps;
            for (const auto& g : r.omega) omega.push_back(render(g));
            result = r.decomposition.united();
        } else {
            auto r = sitcalc::progress(b, alpha);
            for (const auto& g : r.omega) omega.push_back(render(g));
            result = r.theory;
        }
        report_["action"] = render(alpha);
        report_["omega"] = omega;
        report_["theory"] = axioms_json(result);
        write_output(o_, render_theory_file(b.sig, result), out_);
    }

    void forget() {
        auto b = load_bat(o_.files.at(0));
        bool una = !o_.no_una;
        Theory result;
        if (!o_.atom.empty() == !o_.symbol.empty()) throw ModelError("give exactly one of --atom and --symbol");
        if (!o_.atom.empty()) {
            auto g = parse_atom(o_.atom, b.sig);
            result = forget_atom(b.init, g, una);
            report_["forgotten"] = render(g);
            if (o_.verify) {
                auto c = verify_forgetting(b.init, g, result, config(o_));
                report_["verified"] = c.ok;
                if (!c.ok) {
                    report_["failure"] = c.failure;
                    if (c.witness) report_["witness"] = model_json(*c.witness);
                }
                verdict_ok_ = c.ok;
            }
        } else {
            result = forget_ground_symbol(b.init, o_.symbol, una);
            report_["forgotten"] = o_.symbol;
        }
        report_["theory"] = axioms_json(result);
        write_output(o_, render_theory_file(b.sig, result), out_);
        if (o_.verify && !o_.atom.empty()) {
            text(verdict_ok_ ? "forgetting verified" : "forgetting check failed");
            if (!verdict_ok_) throw Negative{};
        }
    }

    void decompose() {
        auto b = load_bat(o_.files.at(0));
        auto delta = parse_delta(o_.delta, b.sig);
        auto d = syntactic_decompose(b.init, delta);
        bool found = d.components.size() >= 2;
        report_["delta"] = split(o_.delta, ',');
        report_["decomposable"] = found;
        json comps = json::array();
        std::set<std::string> ds = delta.symbols();
        auto sigs = d.signature_components();
        for (std::size_t j = 0; found && j < d.components.size(); ++j) {
            std::set<std::string> own;
            for (const auto& s : sigs[j].symbols())
                if (!ds.count(s)) own.insert(s);
            comps.push_back({{"symbols", own}, {"axioms", axioms_json(d.components[j])}});
            std::string line = "component " + std::to_string(j + 1) + " {";
            bool first = true;
            for (const auto& s : own) {
                line += (first ? "" : ", ") + s;
                first = false;
            }
            text(line + "}");
            for (const auto& a : d.components[j].axioms) text("  " + render(a) + ";");
        }
        report_["components"] = comps;
        if (!found) {
            text("NONE: no syntactic decomposition found");
            throw Negative{};
        }
        if (o_.verify) {
            auto v = verify_decomposition(b.init, d, config(o_));
            report_["verified"] = v.ok();
            report_["details"] = v.details;
            text(v.ok() ? "decomposition verified" : "decomposition check failed");
            for (const auto& s : v.details) text("  " + s);
            if (!v.ok()) throw Negative{};
        }
    }

    void check_preservation() {
        auto b = load_bat(o_.files.at(0));
        Signature d1 = parse_delta(o_.delta1, b.sig), d2 = parse_delta(o_.delta2, b.sig);
        auto init = syntactic_decompose(b.init, d2);
        auto groups = o_.ssa_groups.empty() ? ssa_groups(b, d1) : parse_groups(o_.ssa_groups, b);
        AlignmentReport r = o_.action.empty()
                                ? check_local_effect_preservation(b, d1, d2, groups, init)
                                : check_strong_preservation(b, d1, d2, parse_action(o_.action, b.sig), groups, init);
        json conds = json::array();
        for (const auto& c : r.conditions) {
            conds.push_back({{"name", c.name}, {"holds", c.holds}, {"details", c.details}});
            text((c.holds ? "PASS " : "FAIL ") + c.name);
            for (const auto& d : c.details) text("  " + d);
        }
        json fmap = json::object();
        for (const auto& [i, j] : r.f_map) {
            fmap[std::to_string(i + 1)] = j + 1;
            text("f(" + std::to_string(i + 1) + ") = " + std::to_string(j + 1));
        }
        report_["passed"] = r.ok();
        report_["conditions"] = conds;
        report_["f_map"] = fmap;
        if (!r.ok()) throw Negative{};
    }

    void project() {
        auto b = load_bat(o_.files.at(0));
        auto actions = parse_actions(o_.actions, b.sig);
        auto q = parse_formula(o_.query, b.sig);
        auto r = sitcalc::project(b, actions, q, config(o_));
        report_["query"] = render(q);
        report_["result"] = entailment_json(r);
        text(entailment_text(r));
        if (!r.entailed) throw Negative{};
    }

    void executable() {
        auto b = load_bat(o_.files.at(0));
        auto actions = parse_actions(o_.actions, b.sig);
        auto steps = sitcalc::executable(b, actions, config(o_));
        json js = json::array();
        bool all = steps.size() == actions.size();
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto& s = steps[i];
            json j = entailment_json(s.verdict);
            j["action"] = render(s.action);
            j["precondition"] = render(s.precondition);
            js.push_back(j);
            text("step " + std::to_string(i + 1) + " " + render(s.action) + ": " +
                 (s.verdict.entailed ? "possible, " : "") + entailment_text(s.verdict));
            all = all && s.verdict.entailed;
        }
        report_["steps"] = js;
        report_["executable"] = all;
        if (!all) throw Negative{};
    }

    void oracle_entails() {
        auto b = load_bat(o_.files.at(0));
        auto q = parse_formula(o_.query, b.sig);
        auto r = entails(b.init, q, config(o_));
        report_["query"] = render(q);
        report_["result"] = entailment_json(r);
        text(entailment_text(r));
        if (!r.entailed) throw Negative{};
    }

    void oracle_equiv() {
        auto b1 = load_bat(o_.files.at(0)), b2 = load_bat(o_.files.at(1));
        auto r = equivalent(b1.init, b2.init, config(o_));
        report_["equivalent"] = r.equivalent;
        report_["bound"] = r.bound;
        if (r.countermodel) {
            report_["side"] = r.side;
            report_["countermodel"] = model_json(*r.countermodel);
        }
        if (r.equivalent) {
            text("equivalent over all domains up to size " + std::to_string(r.bound));
        } else {
            text("not equivalent; model of theory " + std::to_string(r.side) + " only: " + r.countermodel->str());
            throw Negative{};
        }
    }

    void oracle_sat() {
        auto b = load_bat(o_.files.at(0));
        auto r = satisfiable(b.init, config(o_));
        report_["satisfiable"] = r.sat;
        report_["bound"] = r.bound;
        if (r.model) report_["model"] = model_json(*r.model);
        if (r.sat) {
            text("satisfiable: " + r.model->str());
        } else {
            text("no model with domain size up to " + std::to_string(r.bound));
            throw Negative{};
        }
    }

    void oracle_insep() {
        auto b1 = load_bat(o_.files.at(0)), b2 = load_bat(o_.files.at(1));
        auto delta = parse_delta(o_.delta, b1.sig.unite(b2.sig));
        auto r = check_inseparable(b1.init, b2.init, delta, config(o_), o_.depth);
        report_["verdict"] = to_string(r.kind);
        report_["bound"] = r.bound;
        report_["candidates"] = r.candidates;
        std::string line = to_string(r.kind);
        if (r.witness) {
            report_["witness"] = render(*r.witness);
            report_["entailed_by"] = r.entailed_by;
            line += ": " + render(*r.witness) + " follows from theory " + std::to_string(r.entailed_by) + " only";
        }
        if (r.countermodel) report_["countermodel"] = model_json(*r.countermodel);
        text(line);
        if (r.kind != InseparabilityResult::Kind::InseparableFinite) throw Negative{};
    }

    json& report() { return report_; }

private:
    void text(const std::string& line) {
        if (!o_.json) out_ << line << "\n";
    }

    const Options& o_;
    std::ostream& out_;
    json report_ = json::object();
    bool verdict_ok_ = true;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Progression, forgetting and decomposition for local-effect action theories", "sitcalc"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", o.json, "Machine-readable report");
    app.add_flag("--timings", o.timings, "Include elapsed time in JSON reports");
    app.add_option("--max-extra", o.max_extra, "Anonymous domain elements beyond the named constants")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--no-una", o.no_una, "Do not assume distinct constants denote distinct objects");
    app.add_option("--budget", o.budget_ms, "Oracle time budget in milliseconds (0: none)");

    auto file_arg = [&](CLI::App* c, std::size_t n) {
        c->fallthrough();
        c->add_option("files", o.files, "Input .bat file(s)")->required()->expected(static_cast<int>(n));
    };

    std::string chosen;
    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help, std::size_t files) {
        auto* c = parent->add_subcommand(name, help);
        file_arg(c, files);
        c->callback([&chosen, name] { chosen = name; });
        return c;
    };

    sub(&app, "parse", "Parse a BAT file and print it back", 1);
    sub(&app, "validate", "Check the BAT restrictions", 1)->add_flag("--strict", o.strict);
    auto* prog = sub(&app, "progress", "Progress the initial theory through a ground action", 1);
    prog->add_option("--action", o.action)->required();
    prog->add_flag("--componentwise", o.componentwise);
    prog->add_option("--delta1", o.delta1, "Signature shared by SSA groups");
    prog->add_option("--delta2", o.delta2, "Signature shared by initial components");
    prog->add_option("--ssa-groups", o.ssa_groups, "Fluent groups, e.g. \"On,Clear;Top,Inheap,Under\"");
    prog->add_flag("--inline-preconditions", o.inline_pre);
    prog->add_option("-o,--output", o.output);
    auto* fg = sub(&app, "forget", "Forget a ground atom or a symbol in the initial theory", 1);
    fg->add_option("--atom", o.atom);
    fg->add_option("--symbol", o.symbol);
    fg->add_flag("--verify", o.verify, "Check the result semantically");
    fg->add_option("-o,--output", o.output);
    auto* dec = sub(&app, "decompose", "Syntactic decomposition of the initial theory", 1);
    dec->add_option("--delta", o.delta);
    dec->add_flag("--verify", o.verify, "Check equivalence with the oracle");
    auto* cp = sub(&app, "check-preservation", "Check the component preservation conditions", 1);
    cp->add_option("--delta1", o.delta1);
    cp->add_option("--delta2", o.delta2);
    cp->add_option("--action", o.action, "Also check the conditions for this ground action");
    cp->add_option("--ssa-groups", o.ssa_groups);
    auto* pj = sub(&app, "project", "Does a query hold after a sequence of actions?", 1);
    pj->add_option("--actions", o.actions)->required();
    pj->add_option("--query", o.query)->required();
    sub(&app, "executable", "Is each action possible in turn?", 1)->add_option("--actions", o.actions)->required();

    auto* orc = app.add_subcommand("oracle", "Finite-model checks");
    orc->fallthrough();
    orc->require_subcommand(1);
    sub(orc, "entails", "Initial theory entails a query", 1)->add_option("--query", o.query)->required();
    sub(orc, "equiv", "Initial theories are equivalent", 2);
    sub(orc, "sat", "Initial theory has a model", 1);
    auto* ins = sub(orc, "insep", "Initial theories are Delta-inseparable", 2);
    ins->add_option("--delta", o.delta)->required();
    ins->add_option("--depth", o.depth, "Witness search depth")->check(CLI::Range(0, 6));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto start = std::chrono::steady_clock::now();
    Runner r(o, out);
    int code = 0;
    try {
        if (chosen == "parse") r.parse();
        else if (chosen == "validate") r.validate();
        else if (chosen == "progress") r.progress();
        else if (chosen == "forget") r.forget();
        else if (chosen == "decompose") r.decompose();
        else if (chosen == "check-preservation") r.check_preservation();
        else if (chosen == "project") r.project();
        else if (chosen == "executable") r.executable();
        else if (chosen == "entails") r.oracle_entails();
        else if (chosen == "equiv") r.oracle_equiv();
        else if (chosen == "sat") r.oracle_sat();
        else if (chosen == "insep") r.oracle_insep();
    } catch (const Negative&) {
        code = 1;
    } catch (const BudgetExceeded& e) {
        err << "error: budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (o.json) {
        json& j = r.report();
        json cmd = json::array();
        for (const auto& a : args) cmd.push_back(a);
        j["command"] = cmd;
        j["exit"] = code;
        if (o.timings)
            j["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        out << j.dump(2) << "\n";
    }
    return code;
}

}  // namespace sitcalc::cli
