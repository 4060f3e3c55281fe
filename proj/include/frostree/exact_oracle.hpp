#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "frostree/core_model.hpp"
#include "frostree/enumerate.hpp"
#include "frostree/errors.hpp"

namespace frostree {

/// Probability law on heights. `Mass` is mpq_class for exact laws and double
/// for empirical ones; the two are separate types and never compared with
/// each other.
template <class Mass>
class HeightDistribution {
public:
    using mass_type = Mass;

    HeightDistribution() = default;
    explicit HeightDistribution(std::map<std::uint32_t, Mass> masses) : masses_(std::move(masses)) { prune(); }

    /// Point mass at `h`.
    static HeightDistribution point(std::uint32_t h) { return HeightDistribution({{h, Mass(1)}}); }

    const std::map<std::uint32_t, Mass>& masses() const noexcept { return masses_; }
    bool empty() const noexcept { return masses_.empty(); }

    Mass mass(std::uint32_t h) const {
        auto it = masses_.find(h);
        return it == masses_.end() ? Mass(0) : it->second;
    }

    void add(std::uint32_t h, const Mass& m) {
        masses_[h] += m;
    }

    /// P(H <= h).
    Mass cdf(std::uint32_t h) const {
        Mass acc(0);
        for (const auto& [k, m] : masses_) {
            if (k > h) break;
            acc += m;
        }
        return acc;
    }

    Mass total() const {
        Mass acc(0);
        for (const auto& [k, m] : masses_) acc += m;
        return acc;
    }

    Mass mean() const {
        Mass acc(0);
        for (const auto& [k, m] : masses_) acc += Mass(k) * m;
        return acc;
    }

    /// Largest height with positive mass.
    std::uint32_t support_max() const { return masses_.empty() ? 0 : masses_.rbegin()->first; }

    std::vector<std::uint32_t> support() const {
        std::vector<std::uint32_t> out;
        for (const auto& [k, m] : masses_) out.push_back(k);
        return out;
    }

    friend bool operator==(const HeightDistribution& a, const HeightDistribution& b) { return a.masses_ == b.masses_; }

private:
    void prune() {
        for (auto it = masses_.begin(); it != masses_.end();) {
            if (it->second == Mass(0)) {
                it = masses_.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::map<std::uint32_t, Mass> masses_;
};

using ExactDistribution = HeightDistribution<mpq_class>;
using EmpiricalDistribution = HeightDistribution<double>;

/// Throws Error unless masses are nonnegative and sum to one (exactly).
void check_normalized(const ExactDistribution& d);
/// Same with a 1e-12 tolerance on the total.
void check_normalized(const EmpiricalDistribution& d);

struct OracleOptions {
    /// Cap on simultaneously stored states.
    std::size_t state_cap = 10'000'000;
    /// Longest sequence accepted by the growth-coalescent enumeration.
    std::size_t reverse_max_length = 8;
};

/// Exact law of the final height under the forward construction, by dynamic
/// programming over (active vertex count per depth, current height). Both
/// step types pick a uniform active vertex and only its depth matters, so
/// this state carries the whole future of the height.
ExactDistribution exact_height_distribution_forward(const ChoiceSequence& seq, const OracleOptions& opt = {});

/// Exact law of the final height under the growth-coalescent construction,
/// enumerating every ordered pair draw with weight 1/(S_i (S_i - 1)).
/// Identical positional states (the height of the tree in each slot) are
/// merged; nothing else about the forest influences the final height.
ExactDistribution exact_height_distribution_reverse(const ChoiceSequence& seq, const OracleOptions& opt = {});

/// Vertex-level brute force: every path of the forward builder, one by one.
ExactDistribution brute_force_forward(const ChoiceSequence& seq, std::uint64_t max_paths = 50'000'000);
/// Every path of the growth-coalescent builder, one by one.
ExactDistribution brute_force_reverse(const ChoiceSequence& seq, std::uint64_t max_paths = 50'000'000);

/// Exact law of a sum of independent Bernoulli variables.
ExactDistribution bernoulli_sum_law(const std::vector<mpq_class>& params);

/// Collects the outcomes of `run(chooser)` over every path into an exact law
/// of `project(result)`.
template <class Run, class Project>
ExactDistribution exact_law_of(Run&& run, Project&& project, std::uint64_t max_paths = 50'000'000) {
    ExactDistribution d;
    enumerate_paths(
        run, [&](auto&& result, const mpq_class& w) { d.add(static_cast<std::uint32_t>(project(result)), w); },
        max_paths);
    return d;
}

/// d1 stochastically dominates d2: CDF of d1 <= CDF of d2 everywhere.
template <class Mass>
bool stochastic_dominates(const HeightDistribution<Mass>& d1, const HeightDistribution<Mass>& d2) {
    Mass c1(0), c2(0);
    auto it1 = d1.masses().begin();
    auto it2 = d2.masses().begin();
    while (it1 != d1.masses().end() || it2 != d2.masses().end()) {
        std::uint32_t h;
        if (it2 == d2.masses().end() || (it1 != d1.masses().end() && it1->first <= it2->first)) {
            h = it1->first;
        } else {
            h = it2->first;
        }
        if (it1 != d1.masses().end() && it1->first == h) c1 += (it1++)->second;
        if (it2 != d2.masses().end() && it2->first == h) c2 += (it2++)->second;
        if (c1 > c2) return false;
    }
    return true;
}

/// Law of max(floor, H) for H ~ d.
template <class Mass>
HeightDistribution<Mass> with_floor(const HeightDistribution<Mass>& d, std::uint32_t floor) {
    std::map<std::uint32_t, Mass> out;
    for (const auto& [h, m] : d.masses()) out[std::max(h, floor)] += m;
    return HeightDistribution<Mass>(std::move(out));
}

/// max(h, H2) with H2 ~ d2 stochastically dominates d1.
template <class Mass>
bool dominance_with_floor(const HeightDistribution<Mass>& d1, const HeightDistribution<Mass>& d2, std::uint32_t h) {
    return stochastic_dominates(with_floor(d2, h), d1);
}

/// Smallest h such that max(h, Height(T(X))) dominates Height(R_n) for every
/// X in `family` (each must have n attach steps and never run out of active
/// vertices before its last step).
std::uint32_t min_floor_search(std::size_t n, const std::vector<ChoiceSequence>& family, const OracleOptions& opt = {});

/// {"support": [...], "mass_num": [...], "mass_den": [...]}. Numerators and
/// denominators that fit in a signed 64-bit integer are JSON numbers, larger
/// ones decimal strings.
std::string to_json(const ExactDistribution& d);
ExactDistribution exact_distribution_from_json(const std::string& text);

/// "height,probability" with a header line.
void write_csv(std::ostream& os, const EmpiricalDistribution& d);
void write_csv(std::ostream& os, const ExactDistribution& d);

}  // namespace frostree
