#include "frostree/montecarlo_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "frostree/forward_builder.hpp"
#include "frostree/reverse_builder.hpp"

namespace frostree {

EmpiricalDistribution SimulationReport::distribution() const {
    std::map<std::uint32_t, double> masses;
    for (const auto& [h, c] : histogram) masses[h] = static_cast<double>(c) / static_cast<double>(replicas);
    return EmpiricalDistribution(std::move(masses));
}

SimulationReport make_report(std::string sequence_text, std::uint64_t master_seed, Histogram histogram) {
    SimulationReport r;
    r.sequence_text = std::move(sequence_text);
    r.master_seed = master_seed;
    r.histogram = std::move(histogram);
    for (const auto& [h, c] : r.histogram) r.replicas += c;
    if (r.replicas == 0) return r;
    const double n = static_cast<double>(r.replicas);
    double sum = 0.0;
    for (const auto& [h, c] : r.histogram) sum += static_cast<double>(h) * static_cast<double>(c);
    r.mean = sum / n;
    double ss = 0.0;
    for (const auto& [h, c] : r.histogram) {
        const double d = static_cast<double>(h) - r.mean;
        ss += d * d * static_cast<double>(c);
    }
    r.variance = r.replicas > 1 ? ss / (n - 1.0) : 0.0;
    r.ci95_halfwidth = 1.96 * std::sqrt(r.variance / n);
    return r;
}

std::string audit(const SimulationReport& r) {
    std::uint64_t total = 0;
    for (const auto& [h, c] : r.histogram) total += c;
    if (total != r.replicas) return "histogram counts sum to " + std::to_string(total) + ", not replicas";
    const SimulationReport ref = make_report(r.sequence_text, r.master_seed, r.histogram);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
    if (!close(ref.mean, r.mean)) return "mean inconsistent with histogram";
    if (!close(ref.variance, r.variance)) return "variance inconsistent with histogram";
    return {};
}

std::string to_json(const SimulationReport& r) {
    nlohmann::ordered_json j;
    j["sequence"] = r.sequence_text;
    j["replicas"] = r.replicas;
    j["seed"] = r.master_seed;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [h, c] : r.histogram) hist[std::to_string(h)] = c;
    j["histogram"] = hist;
    j["mean"] = r.mean;
    j["var"] = r.variance;
    j["ci95"] = r.ci95_halfwidth;
    if (r.threshold_stats) {
        j["threshold"] = {{"threshold", r.threshold_stats->threshold},
                          {"fraction_at_or_above", r.threshold_stats->fraction_at_or_above}};
    } else {
        j["threshold"] = nullptr;
    }
    return j.dump();
}

SimulationReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SimulationReport r;
    r.sequence_text = j.at("sequence").get<std::string>();
    r.replicas = j.at("replicas").get<std::uint64_t>();
    r.master_seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("histogram").items())
        r.histogram[static_cast<std::uint32_t>(std::stoul(key))] = value.get<std::uint64_t>();
    r.mean = j.at("mean").get<double>();
    r.variance = j.at("var").get<double>();
    r.ci95_halfwidth = j.at("ci95").get<double>();
    if (j.contains("threshold") && !j.at("threshold").is_null()) {
        const auto& t = j.at("threshold");
        r.threshold_stats = ThresholdStats{t.at("threshold").get<double>(), t.at("fraction_at_or_above").get<double>()};
    }
    return r;
}

void write_csv(std::ostream& os, const SimulationReport& r) {
    os << "height,count\n";
    for (const auto& [h, c] : r.histogram) os << h << ',' << c << '\n';
}

namespace {

auto height_sampler(const ChoiceSequence& seq, Construction construction) {
    return [&seq, construction](RngStream& rng) -> std::uint32_t {
        thread_local std::vector<std::uint32_t> scratch;
        if (construction == Construction::Forward) return forward_height(seq, rng, scratch);
        return reverse_height(seq, rng, scratch);
    };
}

void check_mc_input(const ChoiceSequence& seq, std::uint64_t replicas) {
    require_valid(seq);
    if (replicas < 1) throw DomainError("replicas must be at least 1");
}

}  // namespace

SimulationReport run_mc(const ChoiceSequence& seq, std::uint64_t replicas, std::uint64_t master_seed, int parallelism,
                        Construction construction) {
    check_mc_input(seq, replicas);
    return make_report(render(seq), master_seed,
                       run_replicas(replicas, master_seed, parallelism, height_sampler(seq, construction)));
}

SimulationReport run_mc_serial(const ChoiceSequence& seq, std::uint64_t replicas, std::uint64_t master_seed,
                               Construction construction) {
    check_mc_input(seq, replicas);
    return make_report(render(seq), master_seed,
                       run_replicas_serial(replicas, master_seed, height_sampler(seq, construction)));
}

double bennett_g(double u) { return (1.0 + u) * std::log1p(u) - u; }

double bennett_bound(const BennettQuery& q) {
    if (!(q.m_n > 0.0)) throw DomainError("Bennett bound needs a positive parameter sum");
    if (!(q.t > 0.0)) throw DomainError("Bennett bound needs t > 0");
    return std::exp(-q.m_n * bennett_g(q.t / q.m_n));
}

double theorem_threshold(std::size_t n) {
    if (n < 16) throw DomainError("height threshold needs n >= 16");
    const double ln_n = std::log(static_cast<double>(n));
    return std::numbers::e * ln_n - 5.0 * std::log(ln_n);
}

SimulationReport theorem_report(const ChoiceSequence& seq, std::size_t n, std::uint64_t replicas,
                                std::uint64_t master_seed, int parallelism) {
    const double threshold = theorem_threshold(n);
    if (!classify(seq, n).in_x_n)
        throw InvalidSequence("sequence " + render(seq) + " is not an n-edge sequence for n = " + std::to_string(n));
    SimulationReport r = run_mc(seq, replicas, master_seed, parallelism);
    std::uint64_t above = 0;
    for (const auto& [h, c] : r.histogram) {
        if (static_cast<double>(h) >= threshold) above += c;
    }
    r.threshold_stats = ThresholdStats{threshold, static_cast<double>(above) / static_cast<double>(r.replicas)};
    return r;
}

double check_theorem_main(const ChoiceSequence& seq, std::size_t n, std::uint64_t replicas, std::uint64_t master_seed,
                          int parallelism) {
    return theorem_report(seq, n, replicas, master_seed, parallelism).threshold_stats->fraction_at_or_above;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Dominates:
            return "dominates";
        case Verdict::Dominated:
            return "dominated";
        case Verdict::Incomparable:
            return "incomparable";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

DominanceVerdict empirical_dominance(const SimulationReport& r1, const SimulationReport& r2, double slack) {
    if (r1.replicas == 0 || r2.replicas == 0) throw DomainError("dominance needs non-empty reports");
    if (slack < 0) throw DomainError("slack must be nonnegative");
    std::vector<std::uint32_t> points;
    for (const auto& [h, c] : r1.histogram) points.push_back(h);
    for (const auto& [h, c] : r2.histogram) points.push_back(h);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    DominanceVerdict out;
    std::uint64_t c1 = 0, c2 = 0;
    for (std::uint32_t h : points) {
        if (auto it = r1.histogram.find(h); it != r1.histogram.end()) c1 += it->second;
        if (auto it = r2.histogram.find(h); it != r2.histogram.end()) c2 += it->second;
        const double f1 = static_cast<double>(c1) / static_cast<double>(r1.replicas);
        const double f2 = static_cast<double>(c2) / static_cast<double>(r2.replicas);
        out.excess_12 = std::max(out.excess_12, f1 - f2);
        out.excess_21 = std::max(out.excess_21, f2 - f1);
    }
    const bool fwd = out.excess_12 <= slack;
    const bool bwd = out.excess_21 <= slack;
    out.equal_within_slack = fwd && bwd;
    if (fwd) {
        out.verdict = Verdict::Dominates;
    } else if (bwd) {
        out.verdict = Verdict::Dominated;
    } else if (out.excess_12 > 2 * slack && out.excess_21 > 2 * slack) {
        out.verdict = Verdict::Incomparable;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> walk_gap_growth(const std::vector<std::size_t>& m_values,
                                                            std::uint64_t replicas, std::uint64_t master_seed,
                                                            int parallelism) {
    if (replicas < 1) throw DomainError("replicas must be at least 1");
    if (!std::is_sorted(m_values.begin(), m_values.end()) ||
        std::adjacent_find(m_values.begin(), m_values.end()) != m_values.end())
        throw DomainError("m values must be strictly increasing");
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t m : m_values) {
        const Histogram gaps = run_replicas(replicas, master_seed ^ mix64(m), parallelism, [m](RngStream& rng) {
            thread_local std::vector<std::uint32_t> depth;
            return sample_depth_gap(m, rng, depth);
        });
        std::uint64_t sum = 0;
        for (const auto& [g, c] : gaps) sum += g * c;
        out.emplace_back(m, static_cast<double>(sum) / static_cast<double>(replicas));
    }
    return out;
}

std::vector<CoupledRow> run_coupling_batch(const CouplingRequest& request, std::uint64_t replicas,
                                           std::uint64_t master_seed, int parallelism) {
    if (replicas < 1) throw DomainError("replicas must be at least 1");
    switch (request.kind) {
        case CouplingKind::Reduce:
            reduce_once(request.seq);  // validates up front
            return map_replicas<CoupledRow>(replicas, master_seed, parallelism, [&](RngStream& rng) {
                const CoupledSample s = couple_reduce(request.seq, rng);
                return CoupledRow{s.height_x, s.height_xhat, ""};
            });
        case CouplingKind::PropI:
            if (request.m == 0) throw DomainError("m must be at least 1");
            return map_replicas<CoupledRow>(replicas, master_seed, parallelism, [&](RngStream& rng) {
                const CoupledSample s = couple_prop_i(request.m, request.n, rng);
                return CoupledRow{s.height_x, s.height_xhat, ""};
            });
        case CouplingKind::PropII:
            if (request.m == 0) throw DomainError("m must be at least 1");
            return map_replicas<CoupledRow>(replicas, master_seed, parallelism, [&](RngStream& rng) {
                const CoupledSample s = couple_prop_ii(request.m, request.n, rng);
                return CoupledRow{s.height_x, s.height_xhat, to_string(*s.case_tag)};
            });
        case CouplingKind::PropIII:
            if (request.n == 0) throw DomainError("n must be at least 1");
            return map_replicas<CoupledRow>(replicas, master_seed, parallelism, [&](RngStream& rng) {
                const ConfigurationSample s = couple_prop_iii(request.n, rng);
                return CoupledRow{s.height_x, s.height_xhat, std::to_string(s.configuration_x)};
            });
    }
    throw DomainError("unknown coupling kind");
}

void write_csv(std::ostream& os, const std::vector<CoupledRow>& rows) {
    os << "replica,height_x,height_xhat,case\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        os << i << ',' << rows[i].height_x << ',' << rows[i].height_xhat << ',' << rows[i].case_label << '\n';
}

}  // namespace frostree
