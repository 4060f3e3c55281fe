#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

#include "frostree/core_model.hpp"
#include "frostree/coupling_engine.hpp"
#include "frostree/exact_oracle.hpp"
#include "frostree/rng.hpp"

namespace frostree {

using Histogram = std::map<std::uint32_t, std::uint64_t>;

struct ThresholdStats {
    double threshold = 0.0;
    double fraction_at_or_above = 0.0;

    friend bool operator==(const ThresholdStats&, const ThresholdStats&) = default;
};

struct SimulationReport {
    std::string sequence_text;
    std::uint64_t replicas = 0;
    std::uint64_t master_seed = 0;
    Histogram histogram;
    double mean = 0.0;
    double variance = 0.0;  // Bessel-corrected
    double ci95_halfwidth = 0.0;
    std::optional<ThresholdStats> threshold_stats;

    EmpiricalDistribution distribution() const;

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Fills mean, variance and the normal-approximation 95% half-width from the
/// histogram, which is the ground truth of a report.
SimulationReport make_report(std::string sequence_text, std::uint64_t master_seed, Histogram histogram);

/// Empty string when histogram and moments agree (counts sum to replicas,
/// mean and variance to 1e-9 relative error), otherwise a description.
std::string audit(const SimulationReport& r);

std::string to_json(const SimulationReport& r);
SimulationReport report_from_json(const std::string& text);
/// "height,count" with a header line.
void write_csv(std::ostream& os, const SimulationReport& r);

enum class Construction { Forward, Reverse };

/// Serial reference replica loop: replica i draws from RngStream(seed, i).
template <class Sampler>
Histogram run_replicas_serial(std::uint64_t replicas, std::uint64_t master_seed, Sampler&& sample) {
    Histogram h;
    for (std::uint64_t i = 0; i < replicas; ++i) {
        RngStream rng(master_seed, i);
        ++h[sample(rng)];
    }
    return h;
}

/// OpenMP replica fan-out. Each thread fills its own count vector; the
/// merge is an integer sum, so the histogram does not depend on the thread
/// count or the schedule.
template <class Sampler>
Histogram run_replicas(std::uint64_t replicas, std::uint64_t master_seed, int threads, Sampler&& sample) {
    if (threads < 1) throw DomainError("parallelism must be at least 1");
    std::vector<std::uint64_t> total;
    std::exception_ptr failure;
    std::mutex merge_lock;
    const auto count = static_cast<std::int64_t>(replicas);
#pragma omp parallel num_threads(threads)
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                RngStream rng(master_seed, static_cast<std::uint64_t>(i));
                const std::uint32_t h = sample(rng);
                if (h >= local.size()) local.resize(h + 1, 0);
                ++local[h];
            } catch (...) {
                std::lock_guard<std::mutex> g(merge_lock);
                if (!failure) failure = std::current_exception();
            }
        }
        std::lock_guard<std::mutex> g(merge_lock);
        if (local.size() > total.size()) total.resize(local.size(), 0);
        for (std::size_t h = 0; h < local.size(); ++h) total[h] += local[h];
    }
    if (failure) std::rethrow_exception(failure);
    Histogram out;
    for (std::size_t h = 0; h < total.size(); ++h) {
        if (total[h] != 0) out[static_cast<std::uint32_t>(h)] = total[h];
    }
    return out;
}

/// Parallel map over replicas; result i comes from RngStream(seed, i).
template <class T, class Sampler>
std::vector<T> map_replicas(std::uint64_t replicas, std::uint64_t master_seed, int threads, Sampler&& sample) {
    if (threads < 1) throw DomainError("parallelism must be at least 1");
    std::vector<T> out(replicas);
    std::exception_ptr failure;
    std::mutex lock;
    const auto count = static_cast<std::int64_t>(replicas);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            RngStream rng(master_seed, static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = sample(rng);
        } catch (...) {
            std::lock_guard<std::mutex> g(lock);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Monte Carlo height law of the final tree. Bit-identical for any
/// parallelism given (seq, replicas, master_seed).
SimulationReport run_mc(const ChoiceSequence& seq, std::uint64_t replicas, std::uint64_t master_seed, int parallelism,
                        Construction construction = Construction::Forward);

/// Single-threaded reference for run_mc; same streams, same report.
SimulationReport run_mc_serial(const ChoiceSequence& seq, std::uint64_t replicas, std::uint64_t master_seed,
                               Construction construction = Construction::Forward);

struct BennettQuery {
    double m_n = 0.0;  // sum of the Bernoulli parameters
    double t = 0.0;
};

/// g(u) = (1+u) ln(1+u) - u.
double bennett_g(double u);

/// exp(-m_n g(t / m_n)): bounds both P(sum > m_n + t) and P(sum < m_n - t)
/// for independent Bernoulli variables with parameter sum m_n.
double bennett_bound(const BennettQuery& q);

/// e ln n - 5 ln ln n (natural logarithms).
double theorem_threshold(std::size_t n);

/// Runs `seq` (an n-edge sequence) and reports the fraction of replicas whose
/// height is at least theorem_threshold(n). Requires n >= 16.
SimulationReport theorem_report(const ChoiceSequence& seq, std::size_t n, std::uint64_t replicas,
                                std::uint64_t master_seed, int parallelism = 1);

double check_theorem_main(const ChoiceSequence& seq, std::size_t n, std::uint64_t replicas, std::uint64_t master_seed,
                          int parallelism = 1);

enum class Verdict { Dominates, Dominated, Incomparable, Inconclusive };

const char* to_string(Verdict v) noexcept;

struct DominanceVerdict {
    Verdict verdict = Verdict::Inconclusive;
    /// Both CDF gaps are within the band: the laws are indistinguishable.
    bool equal_within_slack = false;
    double excess_12 = 0.0;  // max_t F1(t) - F2(t)
    double excess_21 = 0.0;  // max_t F2(t) - F1(t)
};

/// Empirical companion of stochastic_dominates for two reports. A CDF gap
/// of at most `slack` counts as noise, more than 2*slack as a real violation:
///  - F1 - F2 <= slack everywhere:            Dominates (r1 is the larger law)
///  - F2 - F1 <= slack everywhere:            Dominated
///  - both directions exceed 2*slack:         Incomparable
///  - otherwise (a crossing inside the band): Inconclusive
DominanceVerdict empirical_dominance(const SimulationReport& r1, const SimulationReport& r2, double slack);

/// For each m, the mean of |h(U) - h(V)| over `replicas` pairs of uniform
/// distinct vertices of R_m. Replica i for the k-th m uses
/// RngStream(master_seed ^ mix64(m), i).
std::vector<std::pair<std::size_t, double>> walk_gap_growth(const std::vector<std::size_t>& m_values,
                                                            std::uint64_t replicas, std::uint64_t master_seed,
                                                            int parallelism = 1);

enum class CouplingKind { Reduce, PropI, PropII, PropIII };

struct CouplingRequest {
    CouplingKind kind = CouplingKind::Reduce;
    ChoiceSequence seq;  // Reduce
    std::size_t m = 1;   // PropI, PropII
    std::size_t n = 0;   // PropI, PropII, PropIII
};

struct CoupledRow {
    std::uint32_t height_x = 0;
    std::uint32_t height_xhat = 0;
    std::string case_label;  // "a"/"b"/"c", a configuration index, or empty
};

/// Seeded batch of coupled samples, in replica order.
std::vector<CoupledRow> run_coupling_batch(const CouplingRequest& request, std::uint64_t replicas,
                                           std::uint64_t master_seed, int parallelism = 1);

/// "replica,height_x,height_xhat,case".
void write_csv(std::ostream& os, const std::vector<CoupledRow>& rows);

}  // namespace frostree
