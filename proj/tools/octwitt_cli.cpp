// octwitt: command-line front end.
// Exit codes: 0 verified, 1 failed check, 2 invalid input, 3 inconclusive.
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "octwitt/octagon.hpp"

using namespace octwitt;
using json = nlohmann::json;

namespace {

struct Options {
    std::string ring = "GF(3)";
    std::string algebra = "auto";  // auto, base, etale, etale-id, quaternion, tensor
    std::string alpha, beta, gamma;
    std::string eps = "+1";
    int rank_cap = 8;
    uint64_t seed = 0;
    bool json_out = false;
    std::string in;
    std::string form, form2;
    int rank = 1;
    std::string part = "iv";
    int samples = 20;
    long search_cap = 200000;
};

struct Report {
    json result = json::object();
    std::vector<std::string> lines;
    bool failed = false;
};

struct Command {
    std::string name;
    std::function<void(const Options&, Report&)> run;
};

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::Inconclusive:
        case ErrorCode::CapExceeded: return 3;
        case ErrorCode::InternalInconsistency:
        case ErrorCode::Overflow: return 1;
        default: return 2;
    }
}

// Splits at commas outside brackets.
std::vector<std::string> split_entries(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if ((c == ',' || c == ';') && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

int parse_sign(const std::string& e) {
    if (e == "+1" || e == "1") return 1;
    if (e == "-1") return -1;
    fail(ErrorCode::InvalidEpsilon, "eps must be +1 or -1, got '" + e + "'");
}

AlgPtr build_algebra(const Options& o, bool need_quaternion = false) {
    RingPtr R = make_ring(o.ring);
    std::string kind = o.algebra;
    if (kind == "auto") {
        if (!o.beta.empty())
            kind = o.gamma.empty() ? "quaternion" : "tensor";
        else
            kind = o.alpha.empty() ? "base" : "etale";
    }
    auto param = [&](const std::string& v, const char* name) {
        if (v.empty()) fail(ErrorCode::InvalidSpec, std::string("--") + name + " is required for " + kind);
        return R->parse(v);
    };
    if (need_quaternion && kind != "quaternion" && kind != "tensor")
        fail(ErrorCode::InvalidOctagonData, "octagon data needs --alpha and --beta (quaternion) or also --gamma");
    if (kind == "base") return base_algebra(R);
    if (kind == "etale") return make_quadratic_etale(R, param(o.alpha, "alpha"), true);
    if (kind == "etale-id") return make_quadratic_etale(R, param(o.alpha, "alpha"), false);
    AlgPtr Q = make_quaternion(R, param(o.alpha, "alpha"), param(o.beta, "beta"));
    if (kind == "quaternion") return Q;
    if (kind == "tensor") return tensor_product(Q, make_quadratic_etale(R, param(o.gamma, "gamma"), true));
    fail(ErrorCode::InvalidSpec, "unknown algebra kind '" + kind + "'");
}

Vec eps_of(const Algebra& A, const Options& o) {
    return parse_sign(o.eps) > 0 ? A.one() : A.neg(A.one());
}

HermForm parse_diag(const AlgPtr& A, const Vec& eps, const std::string& text) {
    std::vector<Vec> entries;
    for (const auto& s : split_entries(text)) entries.push_back(A->parse(s));
    return make_diagonal(A, eps, entries);
}

json gram_json(const HermForm& f) {
    json g = json::array();
    for (int i = 0; i < f.n; ++i) {
        json row = json::array();
        for (int j = 0; j < f.n; ++j) row.push_back(f.A->str(f.g(i, j)));
        g.push_back(row);
    }
    return g;
}

json form_json(const HermForm& f) {
    json j{{"rank", f.n}, {"gram", gram_json(f)}, {"free", f.is_free()}};
    if (!f.is_free()) {
        json p = json::array();
        for (const auto& x : f.proj) p.push_back(f.A->str(x));
        j["projector"] = p;
    }
    return j;
}

json invariants_json(const HermForm& f) {
    FormInvariants inv = form_invariants(f);
    json parts = json::array();
    for (const auto& p : inv.parts)
        parts.push_back({{"component", p.comp}, {"kind", p.kind}, {"dim", p.m}, {"witt_index", p.index},
                         {"witt_zero", p.witt_zero}, {"class", p.key}});
    return {{"class", inv.key}, {"witt_zero", inv.witt_zero}, {"isotropic", inv.isotropic}, {"parts", parts}};
}

// ---------------------------------------------------------------- form

void form_diag(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    HermForm f = parse_diag(A, eps_of(*A, o), o.form);
    r.result["form"] = form_json(f);
    r.result["invariants"] = invariants_json(f);
    r.lines.push_back(form_str(f));
    FormInvariants inv = form_invariants(f);
    r.lines.push_back("class " + inv.key + (inv.witt_zero ? " (Witt-trivial" : " (Witt-nontrivial") +
                      (inv.isotropic ? ", isotropic)" : ", anisotropic)"));
}

void form_hyp(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    HermForm f = make_hyperbolic(A, eps_of(*A, o), o.rank);
    r.result["form"] = form_json(f);
    r.result["hyperbolic"] = is_hyperbolic(f);
    r.lines.push_back(form_str(f));
    r.failed = !is_hyperbolic(f);
}

void form_witt(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    HermForm f = parse_diag(A, eps_of(*A, o), o.form);
    WittDecomposition w = witt_decompose(f, o.seed);
    r.result["hyperbolic_rank"] = w.hyperbolic_rank;
    r.result["kernel"] = form_json(w.kernel);
    r.lines.push_back("hyperbolic planes " + std::to_string(w.hyperbolic_rank));
    r.lines.push_back("anisotropic kernel " + form_str(w.kernel));
}

void form_disc(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    HermForm f = parse_diag(A, eps_of(*A, o), o.form);
    Discriminant d = discriminant(f);
    r.result["representative"] = A->R->to_string(d.rep);
    r.result["trivial"] = d.trivial;
    r.result["group"] = d.group;
    r.lines.push_back("disc " + A->R->to_string(d.rep) + " (" + d.group + " class " +
                      (d.trivial ? "trivial" : "nontrivial") + ")");
}

void form_isometric(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    const Vec eps = eps_of(*A, o);
    HermForm f = parse_diag(A, eps, o.form), g = parse_diag(A, eps, o.form2);
    const bool iso = is_isometric(f, g);
    r.result["isometric"] = iso;
    r.lines.push_back(iso ? "isometric" : "not isometric");
}

// ---------------------------------------------------------------- witt

json structure_json(const WittTable& t) {
    json s = json::array();
    for (int x : group_structure(t)) s.push_back(x);
    return s;
}

std::string structure_str(const WittTable& t) {
    auto s = group_structure(t);
    if (s.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) out += (i ? " x " : "") + std::string("Z/") + std::to_string(s[i]);
    return out;
}

void witt_table(const Options& o, Report& r) {
    AlgPtr A = build_algebra(o);
    TablePtr t = enumerate_witt_group(A, eps_of(*A, o), o.rank_cap);
    r.result["size"] = t->size();
    r.result["structure"] = structure_json(*t);
    json cls = json::array();
    for (int i = 0; i < t->size(); ++i)
        cls.push_back({{"index", i}, {"key", t->keys[i]}, {"representative", form_json(t->classes[i])},
                       {"provenance", t->provenance[i]}});
    r.result["classes"] = cls;
    r.lines.push_back("order " + std::to_string(t->size()) + ", structure " + structure_str(*t));
    for (int i = 0; i < t->size(); ++i) r.lines.push_back("  [" + std::to_string(i) + "] " + t->provenance[i]);
}

// ---------------------------------------------------------------- octagon

OctagonData octagon_data(const Options& o) {
    AlgPtr A = build_algebra(o, true);
    return make_octagon(A, eps_of(*A, o));
}

json types_json(const std::vector<InvolutionType>& ts) {
    json j = json::array();
    for (auto t : ts) j.push_back(involution_type_name(t));
    return j;
}

void octagon_make(const Options& o, Report& r) {
    OctagonData d = octagon_data(o);
    r.result["lambda"] = d.A->str(d.lambda);
    r.result["mu"] = d.A->str(d.mu);
    r.result["dim_A"] = d.A->dim;
    r.result["dim_B"] = d.B1.alg->dim;
    r.result["T_connected"] = d.T_connected;
    r.result["types"] = {{"sigma", types_json(d.sigma_type[0])},
                         {"tau1", types_json(d.tau1_type[0])},
                         {"tau2", types_json(d.tau2_type[0])}};
    r.lines.push_back("lambda " + d.A->str(d.lambda) + ", mu " + d.A->str(d.mu));
    r.lines.push_back("dim B " + std::to_string(d.B1.alg->dim) + ", T connected " + (d.T_connected ? "yes" : "no"));
    for (int k = 0; k < 8; ++k)
        r.lines.push_back("node " + std::to_string(k) + " " + octagon_node(d, k).name + " -" +
                          oct_map_name(octagon_map(k)) + "->");
}

void octagon_check(const Options& o, Report& r) {
    OctagonData d = octagon_data(o);
    OctagonReport rep = check_octagon_exact(d, o.rank_cap);
    json nodes = json::array();
    for (size_t k = 0; k < rep.nodes.size(); ++k) {
        const auto& n = rep.nodes[k];
        json j{{"node", k}, {"name", n.name}, {"size", n.size}, {"exact", n.exact}, {"image", n.image},
               {"kernel", n.kernel}};
        if (!n.exact) j["counterexample"] = n.counterexample;
        nodes.push_back(j);
        r.lines.push_back("node " + std::to_string(k) + " " + n.name + ": order " + std::to_string(n.size) + ", " +
                          (n.exact ? "exact" : "NOT exact: " + n.counterexample));
    }
    r.result["nodes"] = nodes;
    r.result["exact"] = rep.exact;
    r.failed = !rep.exact;
}

int parse_part(const std::string& p) {
    static const std::map<std::string, int> names = {{"i", 1},   {"ii", 2}, {"iii", 3}, {"iv", 4},
                                                     {"1", 1},   {"2", 2},  {"3", 3},   {"4", 4}};
    auto it = names.find(p);
    if (it == names.end()) fail(ErrorCode::InvalidEntry, "part must be i, ii, iii or iv");
    return it->second;
}

void octagon_finer(const Options& o, Report& r) {
    OctagonData d = octagon_data(o);
    const int part = parse_part(o.part);
    const int k = finer_node(part);
    NodeSpace s = octagon_node(d, k);
    std::vector<HermForm> forms;
    if (!o.form.empty()) {
        forms.push_back(parse_diag(s.alg, s.eps, o.form));
    } else {
        std::vector<HermForm> pool = rank_one_forms(s.alg, s.eps);
        for (const auto& e : idempotent_classes(s.alg)) pool.push_back(hyperbolic_on(s.alg, s.eps, e));
        std::mt19937_64 rng(o.seed);
        for (int it = 0; it < 50 * o.samples && static_cast<int>(forms.size()) < o.samples; ++it) {
            HermForm g = zero_form(s.alg, s.eps);
            const int terms = static_cast<int>(rng() % 4);
            for (int i = 0; i < terms; ++i) g = direct_sum(g, pool[rng() % pool.size()]);
            if (is_hyperbolic(apply_octagon_map(d, octagon_map(k), g))) forms.push_back(g);
        }
    }
    json cases = json::array();
    int agree = 0;
    for (const auto& f : forms) {
        const bool pred = finer_predicate(d, part, f);
        auto pre = preimage_oracle(d, part, f, o.search_cap);
        const bool ok = pred == pre.has_value();
        agree += ok;
        json c{{"form", form_json(f)}, {"predicate", pred}, {"preimage_found", pre.has_value()}, {"agree", ok}};
        if (pre) c["preimage"] = form_json(*pre);
        cases.push_back(c);
        if (!ok) r.lines.push_back("COUNTEREXAMPLE " + form_str(f));
    }
    r.result["node"] = s.name;
    r.result["part"] = part;
    r.result["cases"] = cases;
    r.result["agree"] = agree;
    r.lines.push_back("part " + o.part + " on " + s.name + ": predicate agrees with the oracle on " +
                      std::to_string(agree) + "/" + std::to_string(forms.size()) + " forms");
    r.failed = agree != static_cast<int>(forms.size());
}

// ---------------------------------------------------------------- sequences, jacobson

void sequence_report(const SequenceReport& s, Report& r) {
    json nodes = json::array();
    for (size_t i = 0; i < s.tables.size(); ++i) {
        json j{{"name", s.names[i]}, {"size", s.tables[i]->size()}};
        if (i > 0 && i + 1 < s.tables.size()) j["exact"] = static_cast<bool>(s.exact[i - 1]);
        nodes.push_back(j);
        std::string verdict = "";
        if (i > 0 && i + 1 < s.tables.size()) verdict = s.exact[i - 1] ? ", exact" : ", NOT exact";
        r.lines.push_back(s.names[i] + ": order " + std::to_string(s.tables[i]->size()) + verdict);
    }
    r.result["nodes"] = nodes;
    r.result["left_injective"] = s.left_injective;
    r.result["right_surjective"] = s.right_surjective;
    r.result["exact"] = s.all_exact && s.left_injective && s.right_surjective;
    r.lines.push_back(std::string("left end ") + (s.left_injective ? "injective" : "NOT injective") + ", right end " +
                      (s.right_surjective ? "surjective" : "NOT surjective"));
    r.failed = !r.result["exact"].get<bool>();
}

void sequence_five(const Options& o, Report& r) {
    RingPtr R = make_ring(o.ring);
    if (o.alpha.empty()) fail(ErrorCode::InvalidSpec, "--alpha is required");
    sequence_report(lewis_five(R, R->parse(o.alpha)), r);
}

void sequence_seven(const Options& o, Report& r) {
    RingPtr R = make_ring(o.ring);
    if (o.alpha.empty() || o.beta.empty()) fail(ErrorCode::InvalidSpec, "--alpha and --beta are required");
    sequence_report(lewis_seven(R, R->parse(o.alpha), R->parse(o.beta)), r);
    auto k = trd_kernel(R, R->parse(o.alpha), R->parse(o.beta));
    r.result["trd_kernel_size"] = k.size();
    r.lines.push_back("Trd kernel order " + std::to_string(k.size()));
    r.failed = r.failed || k.size() != 1;
}

void jacobson(const Options& o, Report& r) {
    if (o.alpha.empty()) fail(ErrorCode::InvalidSpec, "--alpha is required");
    Options q = o;
    q.eps = "+1";
    q.algebra = o.beta.empty() ? "etale" : "quaternion";
    AlgPtr A = build_algebra(q);
    HermForm f = parse_diag(A, A->one(), o.form);
    HermForm g = o.form2.empty() ? f : parse_diag(A, A->one(), o.form2);
    JacobsonResult j = jacobson_check(f, g);
    const bool iso = find_isotropic(f, o.seed).status != IsoStatus::Anisotropic;
    r.result["isotropic"] = iso;
    r.result["trace_form"] = form_json(trace_transfer(f));
    r.result["isotropy_equiv"] = j.isotropy_equiv;
    r.result["isometry_equiv"] = j.isometry_equiv;
    r.lines.push_back(std::string("f is ") + (iso ? "isotropic" : "anisotropic") + ", trace form " +
                      form_str(trace_transfer(f)));
    r.lines.push_back(std::string("isotropy ") + (j.isotropy_equiv ? "agrees" : "DIFFERS") + ", isometry " +
                      (j.isometry_equiv ? "agrees" : "DIFFERS"));
    r.failed = !j.isotropy_equiv || !j.isometry_equiv;
}

json options_json(const Options& o) {
    return {{"ring", o.ring},   {"algebra", o.algebra},   {"alpha", o.alpha},       {"beta", o.beta},
            {"gamma", o.gamma}, {"eps", o.eps},           {"rank_cap", o.rank_cap}, {"seed", o.seed},
            {"form", o.form},   {"form2", o.form2},       {"rank", o.rank},         {"part", o.part},
            {"samples", o.samples}, {"search_cap", o.search_cap}};
}

// Fills options that were not given on the command line from a JSON object
// with the keys of options_json (a previous report's "input" also works).
void apply_input_file(const std::string& path, Options& o, const CLI::App& cmd) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidSpec, "cannot read " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidSpec, std::string("bad JSON input: ") + e.what());
    }
    if (j.contains("input")) j = j["input"];
    auto take = [&](const char* key, const char* flag, auto& field) {
        if (!j.contains(key) || cmd.count(flag) > 0) return;
        try {
            j.at(key).get_to(field);
        } catch (const json::exception&) {
            fail(ErrorCode::InvalidSpec, std::string("bad type for '") + key + "'");
        }
    };
    take("ring", "--ring", o.ring);
    take("algebra", "--algebra", o.algebra);
    take("alpha", "--alpha", o.alpha);
    take("beta", "--beta", o.beta);
    take("gamma", "--gamma", o.gamma);
    take("eps", "--eps", o.eps);
    take("rank_cap", "--rank-cap", o.rank_cap);
    take("seed", "--seed", o.seed);
    take("form", "--form", o.form);
    take("form2", "--form2", o.form2);
    take("rank", "--rank", o.rank);
    take("part", "--part", o.part);
    take("samples", "--samples", o.samples);
    take("search_cap", "--search-cap", o.search_cap);
}

void add_common(CLI::App* c, Options& o) {
    c->add_option("--ring", o.ring, "base ring, e.g. Z/9, GF(5), Z/3 x GF(5), R");
    c->add_option("--algebra", o.algebra, "auto, base, etale, etale-id, quaternion, tensor");
    c->add_option("--alpha", o.alpha, "etale or first quaternion parameter");
    c->add_option("--beta", o.beta, "second quaternion parameter");
    c->add_option("--gamma", o.gamma, "etale parameter of the tensor factor");
    c->add_option("--eps", o.eps, "+1 or -1");
    c->add_option("--rank-cap", o.rank_cap, "rank bound for Witt table closure");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--in", o.in, "JSON file with option values");
    c->add_option("--form", o.form, "diagonal entries, comma separated; [c0,c1,..] for algebra coordinates");
    c->add_option("--form2", o.form2, "second form for comparisons");
    c->add_option("--rank", o.rank, "number of hyperbolic planes");
    c->add_option("--part", o.part, "finer exactness part: i, ii, iii, iv");
    c->add_option("--samples", o.samples, "sampled kernel forms when --form is absent");
    c->add_option("--search-cap", o.search_cap, "preimage search bound");
    c->add_flag("--json", o.json_out, "emit a JSON report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witt groups of algebras with involution and the exact octagon"};
    app.require_subcommand(1);
    Options opt;
    std::vector<std::pair<CLI::App*, Command>> leaves;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::function<void(const Options&, Report&)> fn) {
        CLI::App* c = parent->add_subcommand(name, help);
        add_common(c, opt);
        leaves.push_back({c, {parent == &app ? name : parent->get_name() + " " + name, fn}});
    };
    CLI::App* form = app.add_subcommand("form", "single forms")->require_subcommand(1);
    leaf(form, "diag", "invariants of a diagonal form", form_diag);
    leaf(form, "hyp", "hyperbolic form", form_hyp);
    leaf(form, "witt", "Witt decomposition", form_witt);
    leaf(form, "disc", "discriminant", form_disc);
    leaf(form, "isometric", "isometry test between --form and --form2", form_isometric);
    CLI::App* witt = app.add_subcommand("witt", "Witt groups")->require_subcommand(1);
    leaf(witt, "table", "enumerate a finite Witt group", witt_table);
    CLI::App* oct = app.add_subcommand("octagon", "the exact octagon")->require_subcommand(1);
    leaf(oct, "make", "octagon data", octagon_make);
    leaf(oct, "check", "exactness at all 8 nodes", octagon_check);
    leaf(oct, "finer", "finer exactness predicate against the preimage oracle", octagon_finer);
    CLI::App* seq = app.add_subcommand("sequence", "Lewis sequences")->require_subcommand(1);
    leaf(seq, "five", "five-term sequence of a quadratic etale algebra", sequence_five);
    leaf(seq, "seven", "seven-term sequence of a quaternion algebra", sequence_seven);
    leaf(&app, "jacobson", "trace transfer preserves isotropy and isometry", jacobson);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (auto& [cmd, c] : leaves) {
        if (!cmd->parsed()) continue;
        Report rep;
        json out{{"command", c.name}};
        int rc = 0;
        try {
            if (!opt.in.empty()) apply_input_file(opt.in, opt, *cmd);
            c.run(opt, rep);
            out["status"] = rep.failed ? "failed" : "ok";
            out["result"] = rep.result;
            rc = rep.failed ? 1 : 0;
        } catch (const Error& e) {
            rc = exit_code(e.code());
            out["status"] = rc == 3 ? "inconclusive" : "error";
            out["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
            rep.lines.push_back(e.what());
        }
        out["input"] = options_json(opt);
        if (opt.json_out) {
            std::cout << out.dump(2) << "\n";
        } else {
            std::ostream& os = rc >= 2 ? std::cerr : std::cout;
            for (const auto& l : rep.lines) os << l << "\n";
        }
        return rc;
    }
    return 2;
}
