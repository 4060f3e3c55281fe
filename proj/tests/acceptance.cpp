// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything holds).
//
// Usage: acceptance [path-to-frostree-cli]

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "frostree/coupling_engine.hpp"
#include "frostree/exact_oracle.hpp"
#include "frostree/montecarlo_stats.hpp"

using namespace frostree;

namespace {

constexpr Step P = Step::Attach;
constexpr Step M = Step::Freeze;

int threads() { return std::max(1, omp_get_max_threads()); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

mpq_class factorial(unsigned n) {
    mpz_class f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return mpq_class(f);
}

std::string fmt(double x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

Outcome law_equivalence() {
    std::size_t count = 0;
    for (std::size_t len = 0; len <= 8; ++len) {
        for (const auto& seq : enumerate_valid(len)) {
            ++count;
            if (exact_height_distribution_forward(seq) != exact_height_distribution_reverse(seq))
                return {false, "laws differ for " + render(seq)};
        }
    }
    return {true, std::to_string(count) + " valid sequences with m <= 8, exact equality"};
}

Outcome dp_correctness() {
    std::size_t count = 0;
    for (std::size_t len = 0; len <= 6; ++len) {
        for (const auto& seq : enumerate_valid(len)) {
            ++count;
            if (exact_height_distribution_forward(seq) != brute_force_forward(seq))
                return {false, "DP differs from vertex-level enumeration for " + render(seq)};
        }
    }
    return {true, std::to_string(count) + " valid sequences with m <= 6"};
}

Outcome small_height_formulas() {
    for (unsigned n = 1; n <= 5; ++n) {
        const mpq_class pow2(mpz_class(1) << (n - 1));
        if (exact_height_distribution_forward(repeat(P, n)).mass(1) != 1 / factorial(n))
            return {false, "P(Height(R_n)=1) != 1/n! at n=" + std::to_string(n)};
        if (exact_height_distribution_forward(repeat(ChoiceSequence{P, M}, n)).mass(1) != 1 / pow2)
            return {false, "P(Height(A_n)=1) != 1/2^(n-1) at n=" + std::to_string(n)};
        ExactDistribution x, xhat;
        enumerate_paths([n](auto& ch) { return couple_prop_iii(n, ch); },
                        [&](const ConfigurationSample& s, const mpq_class& w) {
                            x.add(s.height_x, w);
                            xhat.add(s.height_xhat, w);
                        });
        if (x.mass(1) != mpq_class(1, 3) / factorial(n + 1))
            return {false, "coupled P(height_x=1) != 1/3 * 1/(n+1)! at n=" + std::to_string(n)};
        if (xhat.mass(1) != mpq_class(1, 2) / factorial(n))
            return {false, "coupled P(height_xhat=1) != 1/2 * 1/n! at n=" + std::to_string(n)};
    }
    return {true, "four identities exact for n = 1..5"};
}

Outcome non_dominance() {
    for (std::size_t n = 3; n <= 5; ++n) {
        const auto a = exact_height_distribution_forward(repeat(ChoiceSequence{P, M}, n));
        const auto r = exact_height_distribution_forward(repeat(P, n));
        if (stochastic_dominates(a, r) || stochastic_dominates(r, a))
            return {false, "laws of A_n and R_n are ordered at n=" + std::to_string(n)};
    }
    return {true, "A_n and R_n incomparable for n = 3, 4, 5"};
}

// Random valid sequence of length len that starts with Attach and has a
// Freeze right after its leading run.
ChoiceSequence random_reducible(RngStream& rng, std::size_t len) {
    for (;;) {
        std::vector<Step> steps{P};
        std::int64_t s = 2;
        while (steps.size() < len) {
            // a Freeze may not empty the tree before the last step
            const bool last = steps.size() + 1 == len;
            const bool freeze_ok = s > 1 || last;
            const Step st = freeze_ok && rng.below(2) == 0 ? M : P;
            steps.push_back(st);
            s += to_sign(st);
        }
        ChoiceSequence seq(steps);
        if (seq.leading_attach_run() < seq.size() && is_valid(seq)) return seq;
    }
}

Outcome pathwise_coupling() {
    // exhaustive part
    std::size_t exhaustive = 0;
    for (std::size_t len = 2; len <= 6; ++len) {
        for (const auto& seq : enumerate_valid(len)) {
            if (seq[0] != P || seq.leading_attach_run() == seq.size()) continue;
            ++exhaustive;
            bool ok = true;
            enumerate_paths([&](auto& ch) { return couple_reduce(seq, ch); },
                            [&](const CoupledSample& s, const mpq_class&) { ok = ok && s.height_xhat <= s.height_x; });
            if (!ok) return {false, "exhaustive violation for " + render(seq)};
        }
    }
    // seeded part
    RngStream gen(20240601, 0);
    std::uint64_t violations = 0, runs = 0;
    std::string worst;
    for (int i = 0; i < 20; ++i) {
        const ChoiceSequence seq = random_reducible(gen, 4 + gen.below(37));
        CouplingRequest req;
        req.kind = CouplingKind::Reduce;
        req.seq = seq;
        const auto rows = run_coupling_batch(req, 100'000, 1000 + static_cast<std::uint64_t>(i), threads());
        for (const auto& r : rows) violations += r.height_xhat > r.height_x;
        runs += rows.size();
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(runs) +
                                 " seeded runs over 20 sequences; " + std::to_string(exhaustive) +
                                 " sequences with m <= 6 exhaustive"};
}

Outcome coupling_marginals() {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 2}}) {
        ExactDistribution x, xhat;
        enumerate_paths([m = m, n = n](auto& ch) { return couple_prop_i(m, n, ch); },
                        [&](const CoupledSample& s, const mpq_class& w) {
                            x.add(s.height_x, w);
                            xhat.add(s.height_xhat, w);
                        });
        const ChoiceSequence head = repeat(P, m).concat(repeat(M, m - 1));
        const ChoiceSequence seq_x = head.concat({M, P}).concat(repeat(P, n));
        const ChoiceSequence seq_xhat = head.concat(repeat(P, n));
        if (x != exact_height_distribution_forward(seq_x))
            return {false, "height_x law differs from " + render(seq_x)};
        if (xhat != exact_height_distribution_forward(seq_xhat))
            return {false, "height_xhat law differs from " + render(seq_xhat)};
    }
    return {true, "(m,n) = (2,1), (3,2): both marginals exact"};
}

Outcome case_structure() {
    const std::uint64_t replicas = 30'000;
    std::array<std::uint64_t, 3> counts{};
    std::uint64_t bad_a = 0, bad_b = 0;
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{3, 5}}) {
        const auto samples = map_replicas<CoupledSample>(replicas, 77, threads(),
                                                         [m = m, n = n](RngStream& rng) { return couple_prop_ii(m, n, rng); });
        for (const auto& s : samples) {
            ++counts[static_cast<int>(*s.case_tag)];
            if (*s.case_tag == CaseTag::AFrozenChild && *s.split != 0 && s.height_x != s.height_xhat) ++bad_a;
            if (*s.case_tag == CaseTag::BFrozenParent &&
                std::abs(static_cast<int>(s.height_x) - static_cast<int>(s.height_xhat)) > 1)
                ++bad_b;
        }
    }
    double worst = 0;
    std::string freqs;
    for (int c = 0; c < 3; ++c) {
        const double f = static_cast<double>(counts[c]) / static_cast<double>(replicas);
        worst = std::max(worst, std::abs(f - 1.0 / 3));
        freqs += (c ? "/" : "") + fmt(f);
    }
    // exhaustive check of the pathwise claims on small instances
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 2}, {3, 3}}) {
        enumerate_paths([m = m, n = n](auto& ch) { return couple_prop_ii(m, n, ch); },
                        [&](const CoupledSample& s, const mpq_class&) {
                            if (*s.case_tag == CaseTag::AFrozenChild && *s.split != 0 && s.height_x != s.height_xhat)
                                ++bad_a;
                            if (*s.case_tag == CaseTag::BFrozenParent &&
                                std::abs(static_cast<int>(s.height_x) - static_cast<int>(s.height_xhat)) > 1)
                                ++bad_b;
                        });
    }
    const bool ok = worst <= 0.01 && bad_a == 0 && bad_b == 0;
    return {ok, "case frequencies " + freqs + " (max deviation " + fmt(worst, 3) + "), " + std::to_string(bad_a) +
                    " case-a and " + std::to_string(bad_b) + " case-b violations"};
}

Outcome expectation_identity() {
    for (unsigned n = 1; n <= 4; ++n) {
        ExactDistribution xhat, rrt;
        enumerate_paths([n](auto& ch) { return couple_prop_iii(n, ch); },
                        [&](const ConfigurationSample& s, const mpq_class& w) {
                            xhat.add(s.height_xhat, w);
                            rrt.add(s.height_rrt, w);
                        });
        const ExactDistribution direct = exact_height_distribution_forward(ChoiceSequence{P, M}.concat(repeat(P, n)));
        if (xhat != direct) return {false, "coupled law of (+,-)(+)^n is wrong at n=" + std::to_string(n)};
        if (xhat.mean() != rrt.mean() + mpq_class(1, 2))
            return {false, "E[height_xhat] != E[Height(R_n)] + 1/2 at n=" + std::to_string(n)};
    }
    return {true, "exact for n = 1..4"};
}

Outcome theorem_desk_scale() {
    const std::size_t n = 10'000;
    const std::vector<std::pair<std::string, ChoiceSequence>> family{
        {"(+)^n", repeat(P, n)},
        {"(+,-)^n", repeat(ChoiceSequence{P, M}, n)},
        {"(+)^(n/2)(-)^(n/2-1)(+)^(n/2)", repeat(P, n / 2).concat(repeat(M, n / 2 - 1)).concat(repeat(P, n / 2))},
    };
    bool ok = true;
    std::string detail = "threshold " + fmt(theorem_threshold(n)) + ":";
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double f = check_theorem_main(family[i].second, n, 1000, 500 + i, threads());
        ok = ok && f >= 0.95;
        detail += " " + family[i].first + " " + fmt(f);
    }
    return {ok, detail};
}

Outcome growth_laws() {
    const auto alt = run_mc(repeat(ChoiceSequence{P, M}, 10'000), 1000, 11, threads());
    const double ratio = alt.mean / 10'000.0;
    bool ok = ratio >= 0.45 && ratio <= 0.55;
    std::string detail = "Height(A_n)/n = " + fmt(ratio);
    for (std::size_t n : {1'000u, 10'000u, 100'000u}) {
        const double ln_n = std::log(static_cast<double>(n));
        const double centre = std::numbers::e * ln_n - 1.5 * std::log(ln_n);
        const auto r = run_mc(repeat(P, n), 10'000, 12 + n, threads());
        const double off = r.mean - centre;
        ok = ok && off >= -8 && off <= 8;
        detail += "; R_" + std::to_string(n) + " mean " + fmt(r.mean) + " offset " + fmt(off, 3);
    }
    return {ok, detail};
}

Outcome bennett() {
    const std::size_t trials = 200;
    const double p = 0.05;
    const std::uint64_t draws = 1'000'000;
    const Histogram sums = run_replicas(draws, 31337, threads(), [&](RngStream& rng) {
        std::uint32_t s = 0;
        for (std::size_t i = 0; i < trials; ++i) s += rng.uniform01() < p;
        return s;
    });
    const double m_n = trials * p;
    bool ok = true;
    std::string detail;
    for (double t : {5.0, 10.0}) {
        std::uint64_t above = 0;
        for (const auto& [s, c] : sums)
            if (static_cast<double>(s) > m_n + t) above += c;
        const double tail = static_cast<double>(above) / static_cast<double>(draws);
        const double se = std::sqrt(tail * (1 - tail) / static_cast<double>(draws));
        const double bound = bennett_bound({m_n, t});
        ok = ok && tail <= bound + 3 * se;
        detail += (detail.empty() ? "" : "; ") + std::string("t=") + fmt(t, 3) + " tail " + fmt(tail) + " <= bound " +
                  fmt(bound);
    }
    return {ok, detail};
}

std::string run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    if (status != 0) out += "<exit " + std::to_string(status) + ">";
    return out;
}

Outcome determinism(const std::string& cli) {
    for (const char* text : {"+^100", "(+-)^200", "+^30-^20+^40", "++-+--+-+"}) {
        const auto seq = parse_sequence(text);
        for (auto c : {Construction::Forward, Construction::Reverse}) {
            if (to_json(run_mc(seq, 20'000, 7, 1, c)) != to_json(run_mc(seq, 20'000, 7, 8, c)))
                return {false, std::string("library reports differ for ") + text};
        }
    }
    std::string detail = "library reports identical for 8 configurations";
    if (cli.empty()) return {true, detail + "; CLI not given"};
    const std::string base = "simulate --seq \"+^100\" --replicas 100000 --seed 7 ";
    const std::string a = run_cli(cli, base + "--threads 8");
    const std::string b = run_cli(cli, base + "--threads 8");
    const std::string c = run_cli(cli, base + "--threads 1");
    const std::string d = run_cli(cli, "simulate --seq \"(+-)^50\" --replicas 20000 --seed 3 --threads 1 --format csv");
    const std::string e = run_cli(cli, "simulate --seq \"(+-)^50\" --replicas 20000 --seed 3 --threads 8 --format csv");
    const bool ok = a == b && a == c && d == e && a.find("\"replicas\":100000") != std::string::npos;
    return {ok, detail + (ok ? "; CLI output byte-identical for threads 1 and 8" : "; CLI output differs")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"law equivalence, forward vs growth-coalescent", law_equivalence},
        {"depth-profile DP vs vertex enumeration", dp_correctness},
        {"exact small-height formulas", small_height_formulas},
        {"non-dominance of A_n and R_n", non_dominance},
        {"pathwise coupling after removing (+,-)", pathwise_coupling},
        {"coupling marginals of the (-,+) insertion", coupling_marginals},
        {"case structure of the (+,-) insertion", case_structure},
        {"expectation identity E[xhat] = E[R_n] + 1/2", expectation_identity},
        {"height threshold at n = 10^4", theorem_desk_scale},
        {"growth laws of A_n and R_n", growth_laws},
        {"Bennett bound on Binomial(200, 0.05)", bennett},
        {"determinism across thread counts", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
                  << " (" << fmt(secs, 3) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed;
}
