#include "spanners/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "spanners/oracle.hpp"
#include "spanners/reasoning.hpp"

namespace spanners {

namespace {

using nlohmann::ordered_json;

ordered_json span_json(const Span& s) { return ordered_json::array({s.lo, s.hi}); }

ordered_json tuple_json(const SpanTuple& t) {
    ordered_json j(ordered_json::value_t::object);
    for (const auto& [v, sp] : t) j[v] = span_json(sp);
    return j;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t0)
            .count();
    }
};

struct Opts {
    std::string a, b, c;  // positional inputs
    std::string format;
    std::string doc;
    std::string out_path;
    std::string context_path;
    std::string sig_path, cons_path, map_path;
    std::string kind;
    std::string r1, r2;
    std::string sigma = "ab";
    std::string fresh;
    std::string out_dir = ".";
    Limits lim;
    int bound = 3;
    int count = 50;
    unsigned seed = 1;
    int jobs = 1;
    int n_dfas = 3;
    int max_states = 3;
    bool pretty = false;
    bool certify = false;
    bool skip_gate = false;
};

// defaults can come from a JSON file named by SPLITCHECK_CONFIG; flags
// still win because parsing happens afterwards
void apply_env_config(Opts& o) {
    const char* path = std::getenv("SPLITCHECK_CONFIG");
    if (!path || !*path) return;
    std::ifstream f(path);
    if (!f) throw domain_error(std::string("cannot open config file: ") + path);
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.contains("state_cap")) o.lim.state_cap = j.at("state_cap").get<int>();
    if (j.contains("visit_cap")) o.lim.visit_cap = j.at("visit_cap").get<long long>();
    if (j.contains("result_cap")) o.lim.result_cap = j.at("result_cap").get<int>();
    if (j.contains("witness_cap")) o.lim.witness_cap = j.at("witness_cap").get<int>();
    if (j.contains("bound")) o.bound = j.at("bound").get<int>();
    if (j.contains("seed")) o.seed = j.at("seed").get<unsigned>();
}

std::map<std::string, Vsa> load_mapping(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open mapping file: " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    if (!j.is_object())
        throw domain_error("mapping file must be a JSON object of key to spanner file");
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::map<std::string, Vsa> m;
    for (const auto& [k, v] : j.items()) {
        std::filesystem::path sp(v.get<std::string>());
        if (sp.is_relative()) sp = base / sp;
        m.emplace(k, load_spanner(sp.string(), ""));
    }
    return m;
}

char pick_fresh(const std::string& sigma, const std::string& requested) {
    if (!requested.empty()) {
        if (requested.size() != 1)
            throw domain_error("the marker must be a single letter");
        if (sigma.find(requested[0]) != std::string::npos)
            throw domain_error("the marker letter must be outside the alphabet");
        return requested[0];
    }
    for (char c = 'a'; c <= 'z'; c++)
        if (sigma.find(c) == std::string::npos) return c;
    throw domain_error("no spare letter for the marker symbol");
}

struct Discrepancies {
    ordered_json list = ordered_json::array();
    void add(int pair, const std::string& check, const std::string& detail) {
        ordered_json d;
        d["pair"] = pair;
        d["check"] = check;
        d["detail"] = detail;
        list.push_back(d);
    }
};

// random corpus cross-check of the engine against the reference
// implementations; every verdict must agree with enumeration up to the
// document bound, and every witness must replay
int oracle_check_cmd(const Opts& o, const std::function<void(const ordered_json&)>& emit) {
    Rng rng(o.seed);
    Discrepancies bad;
    int skipped = 0;
    for (int i = 0; i < o.count; i++) {
        std::string sigma = std::string("abc").substr(0, rng.pick(1, 3));
        std::vector<std::string> pool{"y", "z"};
        std::vector<std::string> vars(pool.begin(), pool.begin() + rng.pick(0, 2));
        Vsa p = random_vsa(rng, sigma, vars, 6);
        Vsa s = random_splitter(rng, sigma);
        auto docs = all_docs(sigma, o.bound);
        auto guard = [&](const char* what, auto&& fn) {
            try {
                fn();
            } catch (const resource_error&) {
                skipped++;
            } catch (const error& e) {
                bad.add(i, what, std::string("unexpected error: ") + e.what());
            }
        };

        guard("evaluate", [&] {
            for (const auto& d : docs) {
                if (evaluate(p, d, o.lim) != brute_eval(p, d))
                    return bad.add(i, "evaluate", "document " + d);
                if (evaluate(s, d, o.lim) != brute_eval(s, d))
                    return bad.add(i, "evaluate", "splitter document " + d);
            }
        });

        Verdict dv;
        bool have_dv = false;
        guard("disjoint", [&] {
            dv = splitter_disjoint(s, o.lim);
            have_dv = true;
            auto br = bounded_disjoint(s, o.bound);
            if (dv.answer == Answer::Yes && br.counterexample_found)
                return bad.add(i, "disjoint", "engine yes, reference found " + br.document);
            if (dv.answer == Answer::No) {
                if (!br.counterexample_found && dv.witness &&
                    (int)dv.witness->document.size() <= o.bound)
                    return bad.add(i, "disjoint",
                                   "engine witness missed on " + dv.witness->document);
                if (dv.witness && (int)dv.witness->document.size() <= 8) {
                    const auto& w = *dv.witness;
                    auto rel = brute_eval(s, w.document);
                    Span s1 = w.tuple.begin()->second;
                    Span s2 = *w.split;
                    SpanTuple t1, t2;
                    t1[s.vars[0]] = s1;
                    t2[s.vars[0]] = s2;
                    if (!rel.count(t1) || !rel.count(t2) || s1 == s2 ||
                        !spans_overlap(s1, s2))
                        bad.add(i, "disjoint", "witness does not replay on " + w.document);
                }
            }
        });

        guard("cover", [&] {
            Verdict cv = cover_condition_general(p, s, o.lim);
            auto br = bounded_cover(p, s, o.bound);
            if (cv.answer == Answer::Yes && br.counterexample_found)
                return bad.add(i, "cover", "engine yes, reference found " + br.document);
            if (cv.answer == Answer::No) {
                if (!br.counterexample_found && cv.witness &&
                    (int)cv.witness->document.size() <= o.bound)
                    return bad.add(i, "cover",
                                   "engine witness missed on " + cv.witness->document);
                if (cv.witness && (int)cv.witness->document.size() <= 8) {
                    const auto& w = *cv.witness;
                    if (!brute_eval(p, w.document).count(w.tuple))
                        return bad.add(i, "cover",
                                       "witness tuple not produced on " + w.document);
                    for (const auto& st : brute_eval(s, w.document)) {
                        Span win = st.begin()->second;
                        bool all = true;
                        for (const auto& [v, sp] : w.tuple)
                            if (!span_contains(win, sp)) all = false;
                        if (all)
                            return bad.add(i, "cover",
                                           "witness tuple is covered on " + w.document);
                    }
                }
            }
        });

        guard("split-correct", [&] {
            Vsa can = canonical_split_spanner(p, s, true, o.lim);
            Vsa comp = compose_construct(can, s, o.lim);
            for (const auto& d : docs)
                if (evaluate(comp, d, o.lim) != brute_compose(can, s, d))
                    return bad.add(i, "compose", "document " + d);
            Verdict sc = split_correct(p, can, s, o.lim);
            auto br = bounded_split_correct(p, can, s, o.bound);
            if (sc.answer == Answer::Yes && br.counterexample_found)
                return bad.add(i, "split-correct",
                               "engine yes, reference found " + br.document);
            if (sc.answer == Answer::No) {
                if (!br.counterexample_found && sc.witness &&
                    (int)sc.witness->document.size() <= o.bound)
                    return bad.add(i, "split-correct",
                                   "engine witness missed on " + sc.witness->document);
                if (sc.witness && (int)sc.witness->document.size() <= 8) {
                    const auto& d = sc.witness->document;
                    if (brute_eval(p, d) == brute_compose(can, s, d))
                        bad.add(i, "split-correct", "witness does not replay on " + d);
                }
            }
        });

        guard("self-split", [&] {
            Verdict ss = self_splittable(p, s, o.lim);
            auto br = bounded_split_correct(p, p, s, o.bound);
            if (ss.answer == Answer::Yes && br.counterexample_found)
                return bad.add(i, "self-split",
                               "engine yes, reference found " + br.document);
            if (ss.answer == Answer::No) {
                if (!br.counterexample_found && ss.witness &&
                    (int)ss.witness->document.size() <= o.bound)
                    return bad.add(i, "self-split",
                                   "engine witness missed on " + ss.witness->document);
                if (ss.witness && (int)ss.witness->document.size() <= 8) {
                    const auto& d = ss.witness->document;
                    if (brute_eval(p, d) == brute_compose(p, s, d))
                        bad.add(i, "self-split", "witness does not replay on " + d);
                }
            }
        });

        guard("splittable", [&] {
            if (!have_dv || dv.answer != Answer::Yes) return;
            SplittableResult sr = splittable(p, s, o.lim);
            auto br = bounded_splittability_condition(p, s, o.bound);
            if (sr.verdict.answer == Answer::Yes && br.counterexample_found)
                return bad.add(i, "splittable",
                               "engine yes, reference found " + br.document);
            if (sr.verdict.answer == Answer::Yes && sr.canonical)
                for (const auto& d : docs)
                    if (brute_eval(p, d) != brute_compose(*sr.canonical, s, d))
                        return bad.add(i, "splittable", "canonical witness fails on " + d);
        });
    }
    ordered_json j;
    j["pairs"] = o.count;
    j["seed"] = o.seed;
    j["bound"] = o.bound;
    j["skipped"] = skipped;
    j["discrepancies"] = bad.list;
    j["answer"] = bad.list.empty() ? "yes" : "no";
    emit(j);
    return bad.list.empty() ? 0 : 1;
}

int gen_gadget_cmd(const Opts& o, const std::function<void(const ordered_json&)>& emit) {
    std::filesystem::create_directories(o.out_dir);
    auto put = [&](const std::string& name, const Vsa& a) {
        auto path = std::filesystem::path(o.out_dir) / name;
        std::ofstream f(path);
        if (!f) throw domain_error("cannot write " + path.string());
        f << vsa_to_json(a).dump(2) << "\n";
        return path.string();
    };
    std::string sigma = o.sigma;
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
    if (sigma.empty()) throw domain_error("the alphabet must not be empty");

    ordered_json manifest;
    manifest["kind"] = o.kind;
    ordered_json files;
    bool expect = false;
    if (o.kind == "containment" || o.kind == "split") {
        Rng rng(o.seed);
        std::vector<Nfa> dfas;
        for (int i = 0; i < o.n_dfas; i++)
            dfas.push_back(random_dfa(rng, (int)sigma.size(), o.max_states));
        expect = union_universal(dfas, (int)sigma.size());
        manifest["seed"] = o.seed;
        if (o.kind == "containment") {
            GadgetPair g = gadget_containment(dfas, sigma);
            files["lhs"] = put("lhs.json", g.lhs);
            files["rhs"] = put("rhs.json", g.rhs);
        } else {
            GadgetTriple g = gadget_split(dfas, sigma);
            files["p"] = put("p.json", g.p);
            files["ps"] = put("ps.json", g.ps);
            files["s"] = put("s.json", g.s);
        }
    } else {
        if (o.r1.empty() || o.r2.empty())
            throw domain_error("this kind needs --r1 and --r2");
        Formula r1 = parse_formula(o.r1, sigma);
        Formula r2 = parse_formula(o.r2, sigma);
        expect = containment(compile_to_vsa(r1, sigma), compile_to_vsa(r2, sigma), o.lim)
                     .answer == Answer::Yes;
        if (o.kind == "boolean") {
            GadgetTriple g = gadget_boolean_splittable(r1, r2, sigma);
            files["p"] = put("p.json", g.p);
            files["ps"] = put("ps.json", g.ps);
            files["s"] = put("s.json", g.s);
        } else {
            char fresh = pick_fresh(sigma, o.fresh);
            GadgetTriple g = gadget_selfsplit(r1, r2, sigma, fresh);
            files["p"] = put("p.json", g.p);
            files["s"] = put("s.json", g.s);
            manifest["fresh"] = std::string(1, fresh);
        }
    }
    manifest["files"] = files;
    manifest["expect"] = expect ? "yes" : "no";
    emit(manifest);
    return 0;
}

}  // namespace

Vsa load_spanner(const std::string& path, const std::string& format) {
    std::string fmt = format;
    if (fmt.empty())
        fmt = std::filesystem::path(path).extension() == ".json" ? "json" : "rgx";
    if (fmt == "json") return load_vsa_file(path);
    if (fmt != "rgx") throw domain_error("unknown input format: " + format);
    FormulaFile ff = load_formula_file(path);
    return compile_to_vsa(ff.formula, ff.sigma);
}

nlohmann::ordered_json verdict_json(const Verdict& v, double elapsed_ms) {
    ordered_json j;
    j["answer"] =
        v.answer == Answer::Yes ? "yes" : (v.answer == Answer::No ? "no" : "unknown");
    if (v.witness) {
        const Witness& w = *v.witness;
        ordered_json wj;
        wj["document"] = w.document;
        wj["tuple"] = tuple_json(w.tuple);
        wj["split"] = w.split ? span_json(*w.split) : ordered_json(nullptr);
        wj["side"] = w.side;
        j["witness"] = wj;
    } else {
        j["witness"] = nullptr;
    }
    ordered_json stats;
    stats["product_states"] = v.product_states;
    stats["elapsed_ms"] = elapsed_ms;
    j["stats"] = stats;
    return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    try {
        apply_env_config(o);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"decision procedures for splitting document spanners", "splitcheck"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* c) {
        c->add_option("--format", o.format,
                      "input format, rgx or json; default sniffs by extension")
            ->check(CLI::IsMember({"rgx", "json"}));
        c->add_option("--state-cap", o.lim.state_cap, "cap on constructed states");
        c->add_option("--visit-cap", o.lim.visit_cap, "cap on search node visits");
        c->add_option("--result-cap", o.lim.result_cap, "cap on result set size");
        c->add_option("--witness-cap", o.lim.witness_cap,
                      "cap on witness document length");
        c->add_flag("--pretty", o.pretty, "indent the JSON output");
    };
    auto emit = [&](const ordered_json& j) {
        out << (o.pretty ? j.dump(2) : j.dump()) << "\n";
    };
    auto finish = [&](const Verdict& v, double ms) {
        emit(verdict_json(v, ms));
        return v.answer == Answer::Yes ? 0 : 1;
    };
    auto write_vsa = [&](const Vsa& a) {
        auto j = vsa_to_json(a);
        if (!o.out_path.empty()) {
            std::ofstream f(o.out_path);
            if (!f) throw domain_error("cannot write " + o.out_path);
            f << j.dump(2) << "\n";
        } else {
            out << (o.pretty ? j.dump(2) : j.dump()) << "\n";
        }
        return 0;
    };

    std::map<std::string, std::function<int()>> actions;

    {
        auto* c = app.add_subcommand("eval", "evaluate a spanner on a document");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("--doc", o.doc, "document text")->required();
        common(c);
        actions["eval"] = [&] {
            Vsa a = load_spanner(o.a, o.format);
            ordered_json tuples = ordered_json::array();
            for (const auto& t : evaluate(a, o.doc, o.lim)) tuples.push_back(tuple_json(t));
            ordered_json j;
            j["tuples"] = tuples;
            emit(j);
            return 0;
        };
    }
    {
        auto* c = app.add_subcommand("contains", "is every output of lhs an output of rhs");
        c->add_option("lhs", o.a, "spanner file")->required();
        c->add_option("rhs", o.b, "spanner file")->required();
        common(c);
        actions["contains"] = [&] {
            Vsa a = load_spanner(o.a, o.format);
            Vsa b = load_spanner(o.b, o.format);
            Timer tm;
            return finish(containment(a, b, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand("equiv", "do two spanners agree on every document");
        c->add_option("lhs", o.a, "spanner file")->required();
        c->add_option("rhs", o.b, "spanner file")->required();
        common(c);
        actions["equiv"] = [&] {
            Vsa a = load_spanner(o.a, o.format);
            Vsa b = load_spanner(o.b, o.format);
            Timer tm;
            return finish(equivalence(a, b, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand("functional",
                                     "does every accepting run produce a valid tuple");
        c->add_option("spanner", o.a, "spanner file")->required();
        common(c);
        actions["functional"] = [&] {
            Vsa a = load_spanner(o.a, o.format);
            Timer tm;
            Verdict v;
            v.answer = functionality_check(a) ? Answer::Yes : Answer::No;
            return finish(v, tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "determinize", "equivalent deterministic functional automaton");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("-o,--out", o.out_path, "write the automaton here");
        common(c);
        actions["determinize"] = [&] {
            return write_vsa(normalize(load_spanner(o.a, o.format), o.lim));
        };
    }
    {
        auto* c = app.add_subcommand("disjoint", "are all splits pairwise non-overlapping");
        c->add_option("splitter", o.a, "splitter file")->required();
        common(c);
        actions["disjoint"] = [&] {
            Vsa s = load_spanner(o.a, o.format);
            Timer tm;
            return finish(splitter_disjoint(s, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "cover", "does every output tuple fit inside some split");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "splitter file")->required();
        c->add_flag("--certify-dfvsa", o.certify,
                    "use the polynomial route; inputs must certify");
        common(c);
        actions["cover"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            Timer tm;
            Verdict v = o.certify ? cover_condition_ptime(p, s, o.lim)
                                  : cover_condition_general(p, s, o.lim);
            return finish(v, tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "split-correct", "does the window spanner under the splitter rebuild p");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("window", o.b, "window spanner file")->required();
        c->add_option("splitter", o.c, "splitter file")->required();
        c->add_flag("--certify-dfvsa", o.certify,
                    "use the polynomial route; inputs must certify");
        common(c);
        actions["split-correct"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa ps = load_spanner(o.b, o.format);
            Vsa s = load_spanner(o.c, o.format);
            Timer tm;
            Verdict v = o.certify ? split_correct_ptime(p, ps, s, o.lim)
                                  : split_correct(p, ps, s, o.lim);
            return finish(v, tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand("self-split",
                                     "is the spanner its own window spanner");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "splitter file")->required();
        c->add_flag("--certify-dfvsa", o.certify,
                    "use the polynomial route; inputs must certify");
        common(c);
        actions["self-split"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            Timer tm;
            Verdict v = o.certify ? self_splittable_ptime(p, s, o.lim)
                                  : self_splittable(p, s, o.lim);
            return finish(v, tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "splittable", "does any window spanner work; splitter must be disjoint");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "splitter file")->required();
        common(c);
        actions["splittable"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            Timer tm;
            SplittableResult r = splittable(p, s, o.lim);
            auto j = verdict_json(r.verdict, tm.ms());
            j["canonical"] =
                r.canonical ? vsa_to_json(*r.canonical) : ordered_json(nullptr);
            emit(j);
            return r.verdict.answer == Answer::Yes ? 0 : 1;
        };
    }
    {
        auto* c = app.add_subcommand(
            "canonical", "most permissive window spanner candidate");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "splitter file")->required();
        c->add_flag("--skip-disjoint-gate", o.skip_gate,
                    "build it even for a non-disjoint splitter");
        c->add_option("-o,--out", o.out_path, "write the automaton here");
        common(c);
        actions["canonical"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            return write_vsa(canonical_split_spanner(p, s, o.skip_gate, o.lim));
        };
    }
    {
        auto* c = app.add_subcommand(
            "compose-splitters", "splitter running outer first, then inner per window");
        c->add_option("inner", o.a, "splitter file")->required();
        c->add_option("outer", o.b, "splitter file")->required();
        c->add_option("-o,--out", o.out_path, "write the automaton here");
        common(c);
        actions["compose-splitters"] = [&] {
            Vsa inner = load_spanner(o.a, o.format);
            Vsa outer = load_spanner(o.b, o.format);
            return write_vsa(compose_splitters(inner, outer, o.lim));
        };
    }
    {
        auto* c = app.add_subcommand(
            "commute", "do the two orders of application agree");
        c->add_option("s1", o.a, "splitter file")->required();
        c->add_option("s2", o.b, "splitter file")->required();
        c->add_option("--context", o.context_path,
                      "variable-free spanner restricting the documents");
        common(c);
        actions["commute"] = [&] {
            Vsa s1 = load_spanner(o.a, o.format);
            Vsa s2 = load_spanner(o.b, o.format);
            std::optional<Vsa> ctx;
            if (!o.context_path.empty()) ctx = load_spanner(o.context_path, o.format);
            Timer tm;
            return finish(commute(s1, s2, ctx, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "subsume", "is the splitter unaffected by a pre-pass of the other");
        c->add_option("splitter", o.a, "splitter file")->required();
        c->add_option("prepass", o.b, "splitter file")->required();
        c->add_option("--context", o.context_path,
                      "variable-free spanner restricting the documents");
        common(c);
        actions["subsume"] = [&] {
            Vsa s = load_spanner(o.a, o.format);
            Vsa sp = load_spanner(o.b, o.format);
            std::optional<Vsa> ctx;
            if (!o.context_path.empty()) ctx = load_spanner(o.context_path, o.format);
            Timer tm;
            return finish(subsume(s, sp, ctx, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "transitivity",
            "conclude self-splittability by s2 from s1 when s1 absorbs s2");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("s1", o.b, "splitter file")->required();
        c->add_option("s2", o.c, "splitter file")->required();
        common(c);
        actions["transitivity"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s1 = load_spanner(o.b, o.format);
            Vsa s2 = load_spanner(o.c, o.format);
            Timer tm;
            TransitivityResult r = transitivity_infer(p, s1, s2, o.lim);
            auto j = verdict_json(r.verdict, tm.ms());
            j["inferred"] = r.inferred;
            emit(j);
            return r.verdict.answer == Answer::Yes ? 0 : 1;
        };
    }
    {
        auto* c = app.add_subcommand(
            "filter-split-correct",
            "split-correctness with the splitter restricted to p's support");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("window", o.b, "window spanner file")->required();
        c->add_option("splitter", o.c, "splitter file")->required();
        common(c);
        actions["filter-split-correct"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa ps = load_spanner(o.b, o.format);
            Vsa s = load_spanner(o.c, o.format);
            Timer tm;
            FilterResult r = split_correct_with_filter(p, ps, s, o.lim);
            auto j = verdict_json(r.verdict, tm.ms());
            j["filter"] = r.filter ? vsa_to_json(*r.filter) : ordered_json(nullptr);
            emit(j);
            return r.verdict.answer == Answer::Yes ? 0 : 1;
        };
    }
    {
        auto* c = app.add_subcommand(
            "blackbox",
            "infer pipeline self-splittability from per-symbol constraints");
        c->add_option("pipeline", o.a, "spanner file for the whole pipeline")->required();
        c->add_option("splitter", o.b, "splitter file")->required();
        c->add_option("--sig", o.sig_path, "signature file")->required();
        c->add_option("--constraints", o.cons_path, "constraint file")->required();
        common(c);
        actions["blackbox"] = [&] {
            Signature sig = load_signature(o.sig_path);
            auto cons = load_constraints(o.cons_path);
            Vsa alpha = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            Timer tm;
            return finish(blackbox_infer(sig, cons, alpha, s, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand("annotated-eval",
                                     "evaluate an annotated spanner on a document");
        c->add_option("spanner", o.a, "annotated spanner file")->required();
        c->add_option("--doc", o.doc, "document text")->required();
        common(c);
        actions["annotated-eval"] = [&] {
            Vsa a = load_spanner(o.a, o.format);
            ordered_json tuples = ordered_json::array();
            for (const auto& [k, t] : annotated_evaluate(a, o.doc, o.lim)) {
                ordered_json e;
                e["key"] = k;
                e["tuple"] = tuple_json(t);
                tuples.push_back(e);
            }
            ordered_json j;
            j["tuples"] = tuples;
            emit(j);
            return 0;
        };
    }
    {
        auto* c = app.add_subcommand(
            "highlander", "disjoint and at most one key per document and span");
        c->add_option("splitter", o.a, "annotated splitter file")->required();
        common(c);
        actions["highlander"] = [&] {
            Vsa s = load_spanner(o.a, o.format);
            Timer tm;
            return finish(is_highlander(s, o.lim), tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "annotated-split-correct",
            "does the per-key window spanner assignment rebuild p");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "annotated splitter file")->required();
        c->add_option("--map", o.map_path, "JSON object mapping keys to spanner files")
            ->required();
        c->add_flag("--certify-dfvsa", o.certify,
                    "use the polynomial route; inputs must certify");
        common(c);
        actions["annotated-split-correct"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            auto m = load_mapping(o.map_path);
            Timer tm;
            Verdict v = o.certify ? annotated_split_correct_ptime(p, m, s, o.lim)
                                  : annotated_split_correct(p, m, s, o.lim);
            return finish(v, tm.ms());
        };
    }
    {
        auto* c = app.add_subcommand(
            "annotated-splittable",
            "does any per-key window spanner assignment work");
        c->add_option("spanner", o.a, "spanner file")->required();
        c->add_option("splitter", o.b, "annotated splitter file")->required();
        common(c);
        actions["annotated-splittable"] = [&] {
            Vsa p = load_spanner(o.a, o.format);
            Vsa s = load_spanner(o.b, o.format);
            Timer tm;
            AnnotatedSplittableResult r = annotated_splittable(p, s, o.lim);
            auto j = verdict_json(r.verdict, tm.ms());
            if (r.verdict.answer == Answer::Yes) {
                ordered_json m(ordered_json::value_t::object);
                for (const auto& [k, a] : r.canonical) m[k] = vsa_to_json(a);
                j["canonical"] = m;
            } else {
                j["canonical"] = nullptr;
            }
            emit(j);
            return r.verdict.answer == Answer::Yes ? 0 : 1;
        };
    }
    {
        auto* c = app.add_subcommand(
            "oracle-check",
            "cross-check the engine against reference enumeration on random instances");
        c->add_option("--count", o.count, "number of generated instances");
        c->add_option("--seed", o.seed, "generator seed");
        c->add_option("--bound", o.bound, "document length bound for enumeration");
        c->add_option("--jobs", o.jobs, "worker pool size; reserved, runs on one thread");
        common(c);
        actions["oracle-check"] = [&] { return oracle_check_cmd(o, emit); };
    }
    {
        auto* c = app.add_subcommand(
            "gen-gadget", "emit a hardness instance with its expected verdict");
        c->add_option("kind", o.kind, "containment, split, boolean, or selfsplit")
            ->required()
            ->check(CLI::IsMember({"containment", "split", "boolean", "selfsplit"}));
        c->add_option("--seed", o.seed, "generator seed (containment and split)");
        c->add_option("--n-dfas", o.n_dfas, "number of component automata");
        c->add_option("--max-states", o.max_states, "states per component");
        c->add_option("--sigma", o.sigma, "alphabet of the generated languages");
        c->add_option("--r1", o.r1, "left formula (boolean and selfsplit)");
        c->add_option("--r2", o.r2, "right formula (boolean and selfsplit)");
        c->add_option("--fresh", o.fresh, "marker letter outside the alphabet (selfsplit)");
        c->add_option("-o,--out-dir", o.out_dir, "directory for the generated files");
        common(c);
        actions["gen-gadget"] = [&] { return gen_gadget_cmd(o, emit); };
    }

    std::vector<const char*> argv;
    argv.push_back("splitcheck");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& [name, fn] : actions)
            if (app.get_subcommand(name)->parsed()) return fn();
        err << "error: no subcommand\n";
        return 2;
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace spanners
