// r2poly: command-line front end for the exact evaluators, chains, mixing
// experiments, linear-width tools and modular reductions.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "r2poly/r2poly.hpp"

namespace {

using namespace r2poly;
using nlohmann::json;

/// Bad flag values; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

BigRational fraction_arg(const std::string& flag, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const InvalidInput& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

json fraction_json(const BigRational& r) { return {{"value", to_fraction_string(r)}, {"decimal", to_double(r)}}; }

struct Common {
    std::string graph_path;
    std::string format = "auto";
    std::size_t threads = 1;
    std::size_t limit = EnumerationOptions{}.limit;
    bool json = false;

    EnumerationOptions enumeration() const { return {limit, threads}; }

    LoadedGraph load() const
    {
        static const std::map<std::string, GraphFormat> formats{
            {"auto", GraphFormat::Auto}, {"edges", GraphFormat::EdgeList}, {"json", GraphFormat::Json}};
        return load_graph(graph_path, formats.at(format));
    }
};

void add_common(CLI::App* cmd, Common& c, bool needs_graph = true)
{
    auto* g = cmd->add_option("--graph", c.graph_path, "Graph file (edge list or JSON)");
    if (needs_graph)
        g->required();
    cmd->add_option("--format", c.format, "Input format")->check(CLI::IsMember({"auto", "edges", "json"}));
    cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--limit", c.limit, "Largest edge count enumerated exhaustively")
        ->check(CLI::Range(std::size_t{1}, std::size_t{62}));
    cmd->add_flag("--json", c.json, "Print a single-line JSON record");
}

void print_value(const Common& c, const BigRational& v, json extra = json::object())
{
    if (c.json) {
        extra.update(fraction_json(v));
        std::cout << extra.dump() << '\n';
    } else {
        std::cout << to_fraction_string(v) << '\n';
    }
}

Vertex vertex_by_label(const Graph& g, const std::string& label)
{
    for (Vertex v = 0; v < g.n(); ++v)
        if (g.label(v) == label)
            return v;
    throw InvalidInput("no vertex labelled '" + label + "'");
}

// --------------------------------------------------------------------------

struct EvalArgs {
    Common c;
    std::string what;
    std::string lambda = "1", mu = "1", q, x, y, root;
};

int run_eval(const EvalArgs& a)
{
    const LoadedGraph lg = a.c.load();
    const auto opt = a.c.enumeration();
    if (a.what == "tutte") {
        if (a.x.empty() || a.y.empty())
            throw UsageError("eval tutte needs --x and --y");
        print_value(a.c, eval_tutte(lg.graph, fraction_arg("--x", a.x), fraction_arg("--y", a.y), opt));
        return 0;
    }
    const BigRational mu = fraction_arg("--mu", a.mu);
    if (a.what == "zrc") {
        const std::string& q = a.q.empty() ? a.lambda : a.q;
        print_value(a.c, eval_z_rc(lg.graph, fraction_arg("--q", q), mu, opt).value);
        return 0;
    }
    const BigRational lambda = fraction_arg("--lambda", a.lambda);
    if (a.what == "r2") {
        print_value(a.c, eval_r2(lg.graph, lambda, mu, opt).value);
    } else if (a.what == "r2p") {
        print_value(a.c, eval_r2_prime(lg.bipartite(), lambda, mu, opt).value);
    } else if (a.what == "pure") {
        print_value(a.c, eval_r2_prime_pure(lg.bipartite(), lambda, mu, opt).value);
    } else {
        if (a.root.empty())
            throw UsageError("eval zpzm needs --root");
        const BipartiteGraph b = lg.bipartite();
        const auto r = eval_zp_zm(b, vertex_by_label(b.graph(), a.root), lambda, mu, opt);
        if (a.c.json)
            std::cout << json{{"pure", fraction_json(r.pure)}, {"mixed", fraction_json(r.mixed)}}.dump() << '\n';
        else
            std::cout << "pure " << to_fraction_string(r.pure) << "\nmixed " << to_fraction_string(r.mixed) << '\n';
    }
    return 0;
}

// --------------------------------------------------------------------------

struct CountArgs {
    Common c;
    std::string what;
    std::string eta;
    bool oracle = false;
};

int run_count(const CountArgs& a)
{
    const LoadedGraph lg = a.c.load();
    const auto opt = a.c.enumeration();
    if (a.what == "bis") {
        const BipartiteGraph b = lg.bipartite();
        print_value(a.c, BigRational(a.oracle ? count_bis_oracle(b) : count_bis(b, opt)));
    } else if (a.what == "pbis") {
        if (a.eta.empty())
            throw UsageError("count pbis needs --eta");
        const BigRational eta = fraction_arg("--eta", a.eta);
        const BipartiteGraph b = lg.bipartite();
        print_value(a.c, a.oracle ? count_pbis_oracle(b, eta) : count_pbis(b, eta, opt));
    } else if (a.what == "matchings") {
        print_value(a.c, BigRational(count_matchings(lg.graph, opt)));
    } else {
        print_value(a.c, BigRational(count_perfect_matchings(lg.graph, opt)));
    }
    return 0;
}

// --------------------------------------------------------------------------

struct ChainArgs {
    Common c;
    std::string family;
    std::string lambda = "1", mu = "1";

    ChainParams params() const
    {
        const ChainFamily f = family == "rws" ? ChainFamily::Rws : ChainFamily::Rc;
        return ChainParams::make(f, fraction_arg("--lambda", lambda), fraction_arg("--mu", mu));
    }
};

void add_chain_params(CLI::App* cmd, ChainArgs& a)
{
    cmd->add_option("--lambda,--q", a.lambda, "lambda (rws) or q (rc), as a fraction");
    cmd->add_option("--mu", a.mu, "Edge weight mu, as a fraction");
}

struct SampleArgs {
    ChainArgs chain;
    std::uint64_t steps = 0, burnin = 0, thin = 1, seed = 1;
    std::string start = "empty";
    bool audit = false;
};

int run_sample(const SampleArgs& a)
{
    const LoadedGraph lg = a.chain.c.load();
    const Graph& g = lg.graph;
    const ChainParams params = a.chain.params();
    EdgeSubset initial(g.m());
    if (a.start == "full") {
        initial = EdgeSubset::full(g.m());
    } else if (a.start == "random") {
        // Stream 1 of the seed; the chain itself uses stream 0.
        Rng rng(a.seed, 1);
        for (EdgeId e = 0; e < g.m(); ++e)
            initial.set(e, rng.coin());
    }
    RunOptions opt;
    opt.steps = a.steps;
    opt.burnin = a.burnin;
    opt.thin = a.thin;
    opt.audit = a.audit;
    const Trace t = run(g, params, initial, opt, a.seed);
    std::string out;
    for (const auto& s : t.samples) {
        out += s.to_hex();
        out += '\n';
    }
    std::cout << out;
    std::cout << json{{"family", family_name(params.family)},
                      {"samples", t.samples.size()},
                      {"proposals", t.proposals},
                      {"accepted", t.accepted},
                      {"acceptance_rate", t.acceptance_rate()},
                      {"final_state", t.final_state.to_hex()},
                      {"final_statistic", t.final_statistic}}
                     .dump()
              << '\n';
    return 0;
}

// --------------------------------------------------------------------------

struct OrderingArgs {
    std::string ordering = "dfs";
    std::string ordering_file;
};

EdgeOrdering resolve_ordering(const Graph& g, const OrderingArgs& o)
{
    if (o.ordering == "natural")
        return natural_ordering(g);
    if (o.ordering == "dfs")
        return dfs_tree_ordering(g);
    if (o.ordering == "optimal")
        return optimal_linear_width(g);
    if (o.ordering_file.empty())
        throw UsageError("--ordering file needs --ordering-file");
    return linear_width_of_ordering(g, parse_ordering(read_text_file(o.ordering_file)));
}

struct MixArgs {
    ChainArgs chain;
    OrderingArgs order;
    std::string eps = "1/4";
    bool exact = false;
    std::size_t empirical = 0;
    std::uint64_t seed = 1;
    std::string csv_path;
};

int run_mix(const MixArgs& a)
{
    const LoadedGraph lg = a.chain.c.load();
    const Graph& g = lg.graph;
    const ChainParams params = a.chain.params();
    const ExactChain chain(g, params);
    const double eps = to_double(fraction_arg("--eps", a.eps));
    const MixingReport rep = mixing_time_exact(chain, eps, 1'000'000, a.chain.c.threads);

    // CSV columns: the fixed starts {empty, E, argmin pi} plus the worst start.
    std::vector<std::size_t> cols{0, chain.states() - 1, chain.argmin_pi(), rep.worst_start};
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<std::vector<double>> curves;
    for (std::size_t s : cols)
        curves.push_back(tv_curve(chain, s, rep.tau));
    std::ostringstream csv;
    csv << "step";
    for (std::size_t s : cols)
        csv << ",tv_from_" << EdgeSubset::from_mask(s, g.m()).to_hex();
    csv << '\n';
    for (std::size_t t = 0; t <= rep.tau; ++t) {
        csv << t;
        for (const auto& c : curves) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",%.12g", c[t]);
            csv << buf;
        }
        csv << '\n';
    }
    if (a.csv_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(a.csv_path);
        if (!(f << csv.str()))
            throw InvalidInput("cannot write " + a.csv_path);
    }

    json summary{{"family", family_name(params.family)},
                 {"eps", a.eps},
                 {"tau", rep.tau},
                 {"worst_start", EdgeSubset::from_mask(rep.worst_start, g.m()).to_hex()},
                 {"all_starts", rep.all_starts}};
    if (g.m() <= kCongestionLimit) {
        const EdgeOrdering sigma = resolve_ordering(g, a.order);
        const CongestionReport cr = congestion(g, sigma, params);
        const double pi_min = chain.pi(chain.argmin_pi());
        const double bound = mixing_bound(cr.rho, pi_min, eps);
        summary["rho"] = to_fraction_string(cr.rho);
        summary["rho_decimal"] = to_double(cr.rho);
        summary["ell"] = cr.ell;
        summary["congestion_bound"] = to_fraction_string(cr.bound);
        summary["congestion_bound_satisfied"] = cr.bound_holds();
        summary["bound"] = bound;
        summary["bound_satisfied"] = static_cast<double>(rep.tau) <= bound;
        summary["ratio"] = static_cast<double>(rep.tau) / bound;
    } else {
        summary["rho"] = nullptr;
        summary["bound"] = nullptr;
        summary["bound_satisfied"] = nullptr;
    }
    if (a.empirical > 0) {
        // Replicas run tau steps from the worst start; TV of the histogram to pi.
        RunOptions opt;
        opt.burnin = rep.tau > 0 ? rep.tau - 1 : 0;
        opt.steps = 1;
        const auto hist = sample_histogram(g, params, EdgeSubset::from_mask(rep.worst_start, g.m()), opt, a.seed,
                                           a.empirical, a.chain.c.threads);
        double tv = 0;
        for (std::size_t s = 0; s < chain.states(); ++s) {
            auto it = hist.find(s);
            const double freq = it == hist.end() ? 0.0 : double(it->second) / double(a.empirical);
            tv += std::abs(freq - chain.pi(s));
        }
        summary["empirical_replicas"] = a.empirical;
        summary["empirical_tv"] = 0.5 * tv;
    }
    std::cout << summary.dump() << '\n';
    return 0;
}

// --------------------------------------------------------------------------

struct LwArgs {
    Common c;
    OrderingArgs order;
    std::string treedec;
};

int run_lw(const LwArgs& a)
{
    const LoadedGraph lg = a.c.load();
    const Graph& g = lg.graph;
    json rec;
    EdgeOrdering o;
    if (!a.treedec.empty()) {
        const TreeDecomposition td = parse_tree_decomposition(g, read_text_file(a.treedec));
        o = treedec_ordering(g, td);
        const std::size_t bound = treedec_width_bound(g, td);
        rec["ordering"] = "treedec";
        rec["treedec_width"] = td.width();
        rec["bound"] = bound;
        rec["bound_satisfied"] = o.width <= bound;
    } else {
        o = resolve_ordering(g, a.order);
        rec["ordering"] = a.order.ordering;
    }
    rec["width"] = o.width;
    rec["perm"] = o.perm;
    rec["profile"] = o.profile;
    if (a.c.json)
        std::cout << rec.dump() << '\n';
    else
        std::cout << o.width << '\n';
    return 0;
}

// --------------------------------------------------------------------------

json cert_json(const ReductionCert& cert)
{
    json qs = json::array();
    for (const auto& q : cert.queries)
        qs.push_back({{"p", q.p},
                      {"k", q.k},
                      {"residue", q.residue},
                      {"query_vertices", q.query_vertices},
                      {"query_edges", q.query_edges},
                      {"oracle", q.oracle}});
    return {{"kind", cert.kind},
            {"queries", qs},
            {"bound", cert.bound.get_str()},
            {"L", cert.L.get_str()},
            {"value", to_fraction_string(cert.value)},
            {"decimal", to_double(cert.value)}};
}

struct ReduceArgs {
    Common c;
    std::string what;
    std::string x, y, eta;
    std::uint64_t prime_cap = ReductionOptions{}.prime_cap;
};

int run_reduce(const ReduceArgs& a)
{
    const LoadedGraph lg = a.c.load();
    ReductionOptions opt;
    opt.prime_cap = a.prime_cap;
    opt.enumeration = {a.c.limit, 1};
    opt.threads = a.c.threads;
    json out;
    if (a.what == "tutte") {
        if (a.x.empty() || a.y.empty())
            throw UsageError("reduce tutte needs --x and --y");
        const BigRational x = fraction_arg("--x", a.x), y = fraction_arg("--y", a.y);
        const TuttePoint pt = tutte_point(x, y);
        out = cert_json(tutte_via_oracle(lg.graph, x, y, opt));
        out["x"] = to_fraction_string(x);
        out["y"] = to_fraction_string(y);
        out["lambda"] = to_fraction_string(pt.lambda);
        out["mu"] = to_fraction_string(pt.mu);
    } else {
        if (a.eta.empty())
            throw UsageError("reduce bis needs --eta");
        const BigRational eta = fraction_arg("--eta", a.eta);
        out = cert_json(bis_via_pbis_oracle(lg.graph, eta, opt));
        out["eta"] = to_fraction_string(eta);
    }
    std::cout << out.dump() << '\n';
    return 0;
}

// --------------------------------------------------------------------------

struct SelftestArgs {
    bool quick = false;
    std::string fault;
};

int run_selftest_cmd(const SelftestArgs& a)
{
    if (a.fault == "flip_entry")
        testing_hooks::corrupt_flip_entry = true;
    else if (!a.fault.empty())
        throw UsageError("unknown fault '" + a.fault + "'");
    bool all = true;
    const auto groups = run_selftest(a.quick);
    for (const auto& g : groups) {
        all = all && g.passed;
        std::cout << json{{"group", g.name}, {"passed", g.passed}, {"detail", g.detail}}.dump() << '\n';
    }
    std::cout << json{{"passed", all}, {"groups", groups.size()}, {"quick", a.quick}}.dump() << '\n';
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact rank-polynomial evaluation, bond-flip chains and modular reductions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "r2poly 1.0.0");

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Exact evaluation: r2p | r2 | zrc | tutte | pure | zpzm");
    eval->add_option("what", ev.what, "Polynomial")
        ->required()
        ->check(CLI::IsMember({"r2p", "r2", "zrc", "tutte", "pure", "zpzm"}));
    add_common(eval, ev.c);
    eval->add_option("--lambda", ev.lambda, "lambda as a fraction");
    eval->add_option("--mu", ev.mu, "mu as a fraction");
    eval->add_option("--q", ev.q, "q for zrc (defaults to --lambda)");
    eval->add_option("--x", ev.x, "Tutte x");
    eval->add_option("--y", ev.y, "Tutte y");
    eval->add_option("--root", ev.root, "Gadget root label for zpzm");

    CountArgs ct;
    auto* count = app.add_subcommand("count", "Exact counts: bis | pbis | matchings | perfect");
    count->add_option("what", ct.what, "Quantity")
        ->required()
        ->check(CLI::IsMember({"bis", "pbis", "matchings", "perfect"}));
    add_common(count, ct.c);
    count->add_option("--eta", ct.eta, "eta for pbis, as a fraction");
    count->add_flag("--oracle", ct.oracle, "Use direct enumeration over vertex labelings");

    SampleArgs sa;
    auto* sample = app.add_subcommand(
        "sample", "Run a single bond flip chain. Prints one hex subset per retained sample, then a JSON summary");
    sample->add_option("family", sa.chain.family, "Chain family")->required()->check(CLI::IsMember({"rws", "rc"}));
    add_common(sample, sa.chain.c);
    add_chain_params(sample, sa.chain);
    sample->add_option("--steps", sa.steps, "Steps after burn-in")->required();
    sample->add_option("--seed", sa.seed, "RNG seed (default 1)");
    sample->add_option("--burnin", sa.burnin, "Steps discarded first");
    sample->add_option("--thin", sa.thin, "Keep every thin-th state")->check(CLI::PositiveNumber);
    sample->add_option("--start", sa.start, "Initial state")->check(CLI::IsMember({"empty", "full", "random"}));
    sample->add_flag("--audit", sa.audit, "Recompute the statistic after every step");

    MixArgs mx;
    auto* mix = app.add_subcommand(
        "mix", "Exact mixing time and congestion.\nCSV columns: step, then tv_from_<hex start> for the empty set, E, "
               "argmin pi and the worst start.\nLast line: JSON summary {tau, rho, ell, bound, bound_satisfied, ...}");
    add_common(mix, mx.chain.c);
    mix->add_option("--family", mx.chain.family, "Chain family")->required()->check(CLI::IsMember({"rws", "rc"}));
    add_chain_params(mix, mx.chain);
    mix->add_option("--eps", mx.eps, "TV threshold in (0, 1), as a fraction (default 1/4)");
    auto* exact_flag = mix->add_flag("--exact", mx.exact, "Exact TV analysis (default)");
    mix->add_option("--empirical", mx.empirical, "Also run N replicas for tau steps and report their TV")
        ->excludes(exact_flag);
    mix->add_option("--seed", mx.seed, "RNG seed for --empirical (default 1)");
    mix->add_option("--ordering", mx.order.ordering, "Canonical path edge order")
        ->check(CLI::IsMember({"dfs", "natural", "optimal", "file"}));
    mix->add_option("--ordering-file", mx.order.ordering_file, "Whitespace-separated edge ids");
    mix->add_option("--csv", mx.csv_path, "Write the CSV here instead of stdout");

    LwArgs lw;
    auto* lwc = app.add_subcommand("lw", "Linear width of an edge ordering");
    add_common(lwc, lw.c);
    lwc->add_option("--ordering", lw.order.ordering, "Ordering")
        ->check(CLI::IsMember({"dfs", "natural", "optimal", "file"}));
    lwc->add_option("--ordering-file", lw.order.ordering_file, "Whitespace-separated edge ids");
    lwc->add_option("--treedec", lw.treedec, "Tree decomposition JSON; uses the bag ordering");

    ReduceArgs rd;
    auto* reduce = app.add_subcommand("reduce", "Modular reductions: tutte | bis. Prints a JSON certificate");
    reduce->add_option("what", rd.what, "Reduction")->required()->check(CLI::IsMember({"tutte", "bis"}));
    add_common(reduce, rd.c);
    reduce->add_option("--x", rd.x, "Tutte x");
    reduce->add_option("--y", rd.y, "Tutte y");
    reduce->add_option("--eta", rd.eta, "eta for bis");
    reduce->add_option("--prime-cap", rd.prime_cap, "Largest prime searched");

    SelftestArgs st;
    auto* selftest = app.add_subcommand("selftest", "Identity checks; one JSON line per group");
    selftest->add_flag("--quick", st.quick, "Sub-second subset");
    selftest->add_option("--inject-fault", st.fault, "Mutation hook")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*eval)
            return run_eval(ev);
        if (*count)
            return run_count(ct);
        if (*sample)
            return run_sample(sa);
        if (*mix)
            return run_mix(mx);
        if (*lwc)
            return run_lw(lw);
        if (*reduce)
            return run_reduce(rd);
        return run_selftest_cmd(st);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const LimitExceeded& e) {
        std::cerr << "limit exceeded: " << e.what() << '\n';
        return 1;
    } catch (const ExcludedPoint& e) {
        std::cerr << "excluded point: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
