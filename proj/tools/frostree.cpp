// frostree: command-line front end for the tree simulation library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frostree/coupling_engine.hpp"
#include "frostree/exact_oracle.hpp"
#include "frostree/montecarlo_stats.hpp"

using namespace frostree;

namespace {

constexpr const char* kGrammar = R"(sequence grammar:
  seq  := term+
  term := atom ['^' positive-int]
  atom := '+' | '-' | '(' seq ')'
  '+' attaches a child to a uniform active vertex, '-' freezes one.
  Whitespace is ignored. Example: "+^3-^2(+-)^4".
)";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string seq, seq2, out, family;
    std::size_t n = 0, m = 1, r = 0;
    bool have_n = false, have_r = false;
    std::uint64_t replicas = 10'000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string format = "json";
    std::string mode;
    std::string construction = "forward";
    std::string which = "reduce";
    double mn = 0, t = 0, slack = 0.01;
    std::string dump_tree;
};

ChoiceSequence parse_or_usage(const std::string& text, const char* flag) {
    try {
        return parse_sequence(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::string law_text(const ExactDistribution& d, const std::string& format) {
    if (format == "json") return to_json(d) + "\n";
    std::ostringstream os;
    write_csv(os, d);
    return os.str();
}

std::string report_text(const SimulationReport& r, const std::string& format) {
    if (format == "json") return to_json(r) + "\n";
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

Construction construction_of(const std::string& c) {
    return c == "reverse" ? Construction::Reverse : Construction::Forward;
}

std::string cmd_simulate(const Options& o) {
    const ChoiceSequence seq = parse_or_usage(o.seq, "--seq");
    if (o.construction == "both") throw UsageError("simulate takes --construction forward or reverse");
    const SimulationReport r = run_mc(seq, o.replicas, o.seed, o.threads, construction_of(o.construction));
    if (const std::string bad = audit(r); !bad.empty()) throw Error("report audit failed: " + bad);
    if (!o.dump_tree.empty()) {
        // replica 0's tree, drawn from the same stream the histogram used
        RngStream rng(o.seed, 0);
        const TreeArena tree = o.construction == "reverse" ? build_reverse(seq, rng) : build_forward(seq, rng);
        std::ofstream dump(o.dump_tree);
        if (!dump) throw Error("cannot open " + o.dump_tree);
        tree.dump(dump);
    }
    return report_text(r, o.format);
}

std::string cmd_exact(const Options& o) {
    const ChoiceSequence seq = parse_or_usage(o.seq, "--seq");
    if (o.mode == "mc") {
        const SimulationReport r = run_mc(seq, o.replicas, o.seed, o.threads, construction_of(o.construction));
        if (o.format == "json") return to_json(r) + "\n";
        std::ostringstream os;
        write_csv(os, r.distribution());
        return os.str();
    }
    if (o.construction == "forward") return law_text(exact_height_distribution_forward(seq), o.format);
    if (o.construction == "reverse") return law_text(exact_height_distribution_reverse(seq), o.format);
    const ExactDistribution fwd = exact_height_distribution_forward(seq);
    const ExactDistribution rev = exact_height_distribution_reverse(seq);
    const bool equal = fwd == rev;
    std::string text = law_text(fwd, o.format);
    if (!equal) text += "reverse: " + law_text(rev, o.format);
    text += equal ? "laws equal: true\n" : "laws equal: false\n";
    if (!equal) {
        std::cout << text;
        throw Error("forward and growth-coalescent laws differ");
    }
    return text;
}

template <class Run>
std::string enumerated_coupling(Run run, const std::string& format) {
    ExactDistribution x, xhat;
    enumerate_paths(run, [&](const auto& s, const mpq_class& w) {
        x.add(s.height_x, w);
        xhat.add(s.height_xhat, w);
    });
    if (format == "json") {
        return "{\"height_x\":" + to_json(x) + ",\"height_xhat\":" + to_json(xhat) + "}\n";
    }
    std::ostringstream os;
    os << "marginal,height,probability\n";
    for (const auto& [h, p] : x.masses()) os << "x," << h << ',' << p.get_str() << '\n';
    for (const auto& [h, p] : xhat.masses()) os << "xhat," << h << ',' << p.get_str() << '\n';
    return os.str();
}

std::string cmd_couple(const Options& o) {
    CouplingRequest req;
    if (o.which == "reduce") {
        req.kind = CouplingKind::Reduce;
        req.seq = parse_or_usage(o.seq, "--seq");
    } else if (o.which == "i") {
        req.kind = CouplingKind::PropI;
    } else if (o.which == "ii") {
        req.kind = CouplingKind::PropII;
    } else {
        req.kind = CouplingKind::PropIII;
    }
    req.m = o.m;
    req.n = o.n;
    if (req.kind != CouplingKind::Reduce && !o.have_n) throw UsageError("--which " + o.which + " needs --n");

    if (o.mode == "enumerate") {
        switch (req.kind) {
            case CouplingKind::Reduce:
                return enumerated_coupling([&](auto& ch) { return couple_reduce(req.seq, ch); }, o.format);
            case CouplingKind::PropI:
                if (req.m == 0) throw DomainError("m must be at least 1");
                return enumerated_coupling([&](auto& ch) { return couple_prop_i(req.m, req.n, ch); }, o.format);
            case CouplingKind::PropII:
                if (req.m == 0) throw DomainError("m must be at least 1");
                return enumerated_coupling([&](auto& ch) { return couple_prop_ii(req.m, req.n, ch); }, o.format);
            case CouplingKind::PropIII:
                return enumerated_coupling([&](auto& ch) { return couple_prop_iii(req.n, ch); }, o.format);
        }
    }

    const auto rows = run_coupling_batch(req, o.replicas, o.seed, o.threads);
    std::ostringstream os;
    if (o.format == "csv") {
        write_csv(os, rows);
        return os.str();
    }
    nlohmann::ordered_json j;
    j["which"] = o.which;
    j["replicas"] = o.replicas;
    j["seed"] = o.seed;
    std::uint64_t violations = 0;
    nlohmann::ordered_json hx = nlohmann::ordered_json::array(), hy = nlohmann::ordered_json::array(),
                           cases = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        hx.push_back(row.height_x);
        hy.push_back(row.height_xhat);
        cases.push_back(row.case_label);
        violations += row.height_xhat > row.height_x;
    }
    j["height_x"] = hx;
    j["height_xhat"] = hy;
    j["case"] = cases;
    j["xhat_above_x"] = violations;
    return j.dump() + "\n";
}

std::vector<ChoiceSequence> read_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open family file " + path);
    std::vector<ChoiceSequence> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        out.push_back(parse_or_usage(line, "--family"));
    }
    return out;
}

std::string cmd_compare(const Options& o) {
    if (!o.family.empty()) {
        if (!o.have_n) throw UsageError("--family needs --n");
        const auto family = read_family(o.family);
        const std::uint32_t h = min_floor_search(o.n, family);
        nlohmann::ordered_json j;
        j["n"] = o.n;
        j["family_size"] = family.size();
        j["min_floor"] = h;
        return j.dump() + "\n";
    }
    const ChoiceSequence a = parse_or_usage(o.seq, "--seq");
    const ChoiceSequence b = parse_or_usage(o.seq2, "--seq2");
    nlohmann::ordered_json j;
    j["seq"] = render(a);
    j["seq2"] = render(b);
    if (o.mode == "mc") {
        const auto ra = run_mc(a, o.replicas, o.seed, o.threads);
        const auto rb = run_mc(b, o.replicas, o.seed ^ 0x9E3779B97F4A7C15ULL, o.threads);
        const auto v = empirical_dominance(ra, rb, o.slack);
        j["mode"] = "mc";
        j["verdict"] = to_string(v.verdict);
        j["equal_within_slack"] = v.equal_within_slack;
        j["excess_12"] = v.excess_12;
        j["excess_21"] = v.excess_21;
    } else {
        const auto da = exact_height_distribution_forward(a);
        const auto db = exact_height_distribution_forward(b);
        j["mode"] = "enumerate";
        j["seq_dominates_seq2"] = stochastic_dominates(da, db);
        j["seq2_dominates_seq"] = stochastic_dominates(db, da);
    }
    return j.dump() + "\n";
}

std::string cmd_reduce(const Options& o) {
    const ChoiceSequence seq = parse_or_usage(o.seq, "--seq");
    nlohmann::ordered_json j;
    j["original"] = render(seq);
    if (o.have_r) {
        j["r"] = o.r;
        j["reduced"] = render(reduce_to_prefix(seq, o.r));
    } else {
        const ReducedSequence red = reduce_once(seq);
        j["reduced"] = render(red.reduced);
        j["removed_at"] = red.removed_at;
    }
    return j.dump() + "\n";
}

std::string cmd_bound(const Options& o) {
    const double b = bennett_bound({o.mn, o.t});
    nlohmann::ordered_json j;
    j["m_n"] = o.mn;
    j["t"] = o.t;
    j["g"] = bennett_g(o.t / o.mn);
    j["bound"] = b;
    return j.dump() + "\n";
}

std::string cmd_theorem(const Options& o) {
    if (!o.have_n) throw UsageError("theorem needs --n");
    const ChoiceSequence seq = parse_or_usage(o.seq, "--seq");
    const SimulationReport r = theorem_report(seq, o.n, o.replicas, o.seed, o.threads);
    if (o.format == "json") {
        auto j = nlohmann::ordered_json::parse(to_json(r));
        j["fraction"] = r.threshold_stats->fraction_at_or_above;
        return j.dump() + "\n";
    }
    std::ostringstream os;
    write_csv(os, r);
    os << "# threshold " << r.threshold_stats->threshold << " fraction " << r.threshold_stats->fraction_at_or_above
       << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform attachment trees with freezing: simulation and exact laws"};
    app.footer(kGrammar);
    app.require_subcommand(1);

    Options o;
    if (const char* env = std::getenv("FROSTREE_SEED")) {
        try {
            o.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "FROSTREE_SEED must be a nonnegative integer\n";
            return 2;
        }
    }

    auto add_seq = [&](CLI::App* sc, bool required) {
        auto* opt = sc->add_option("--seq", o.seq, "choice sequence");
        if (required) opt->required();
    };
    auto add_mc = [&](CLI::App* sc) {
        sc->add_option("--replicas", o.replicas, "number of replicas")->check(CLI::PositiveNumber);
        sc->add_option("--seed", o.seed, "master seed (default: $FROSTREE_SEED or 0)");
        sc->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto add_output = [&](CLI::App* sc) {
        sc->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sc->add_option("--out", o.out, "output file (default: standard output)");
    };
    auto add_n = [&](CLI::App* sc) { sc->add_option("--n", o.n, "edge count")->each([&](const std::string&) { o.have_n = true; }); };

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo height law of a sequence");
    add_seq(simulate, true);
    add_mc(simulate);
    add_output(simulate);
    simulate->add_option("--construction", o.construction, "forward or reverse")
        ->check(CLI::IsMember({"forward", "reverse"}));
    simulate->add_option("--dump-tree", o.dump_tree, "write replica 0's tree to this file");

    auto* exact = app.add_subcommand("exact", "exact height law by enumeration");
    add_seq(exact, true);
    add_mc(exact);
    add_output(exact);
    exact->add_option("--construction", o.construction, "forward, reverse or both")
        ->check(CLI::IsMember({"forward", "reverse", "both"}));
    exact->add_option("--mode", o.mode, "enumerate (default) or mc")->check(CLI::IsMember({"mc", "enumerate"}));

    auto* couple = app.add_subcommand("couple", "coupled samples of two constructions");
    add_seq(couple, false);
    add_mc(couple);
    add_output(couple);
    add_n(couple);
    couple->add_option("--m", o.m, "size of the shared tree");
    couple->add_option("--which", o.which, "reduce, i, ii or iii")->check(CLI::IsMember({"reduce", "i", "ii", "iii"}));
    couple->add_option("--mode", o.mode, "mc (default) or enumerate")->check(CLI::IsMember({"mc", "enumerate"}));

    auto* compare = app.add_subcommand("compare", "stochastic dominance between two sequences");
    add_seq(compare, false);
    compare->add_option("--seq2", o.seq2, "second choice sequence");
    add_mc(compare);
    add_output(compare);
    add_n(compare);
    compare->add_option("--mode", o.mode, "enumerate (default) or mc")->check(CLI::IsMember({"mc", "enumerate"}));
    compare->add_option("--slack", o.slack, "CDF tolerance band for --mode mc");
    compare->add_option("--family", o.family, "newline-delimited sequences for the minimal floor search");

    auto* reduce = app.add_subcommand("reduce", "remove leading (+,-) pairs");
    add_seq(reduce, true);
    add_output(reduce);
    reduce->add_option("--r", o.r, "target leading attach run")->each([&](const std::string&) { o.have_r = true; });

    auto* bound = app.add_subcommand("bound", "Bennett tail bound");
    bound->add_option("--mn", o.mn, "sum of the Bernoulli parameters")->required();
    bound->add_option("--t", o.t, "deviation")->required();
    add_output(bound);

    auto* theorem = app.add_subcommand("theorem", "fraction of replicas above e ln n - 5 ln ln n");
    add_seq(theorem, true);
    add_n(theorem);
    add_mc(theorem);
    add_output(theorem);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << kGrammar;
        return 2;
    }

    try {
        std::string text;
        if (*simulate) text = cmd_simulate(o);
        else if (*exact) text = cmd_exact(o);
        else if (*couple) text = cmd_couple(o);
        else if (*compare) {
            if (o.family.empty() && (o.seq.empty() || o.seq2.empty())) throw UsageError("compare needs --seq and --seq2");
            text = cmd_compare(o);
        } else if (*reduce) text = cmd_reduce(o);
        else if (*bound) text = cmd_bound(o);
        else text = cmd_theorem(o);

        if (o.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(o.out, std::ios::binary);
            if (!f) throw Error("cannot open " + o.out);
            f << text;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n' << kGrammar;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
