#include "frostree/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "frostree/forward_builder.hpp"
#include "frostree/reverse_builder.hpp"

namespace frostree {

void check_normalized(const ExactDistribution& d) {
    for (const auto& [h, m] : d.masses()) {
        if (m < 0) throw Error("negative mass at height " + std::to_string(h));
    }
    if (d.total() != 1) throw Error("exact masses sum to " + d.total().get_str() + ", not 1");
}

void check_normalized(const EmpiricalDistribution& d) {
    for (const auto& [h, m] : d.masses()) {
        if (m < 0) throw Error("negative mass at height " + std::to_string(h));
    }
    if (std::abs(d.total() - 1.0) > 1e-12) throw Error("empirical masses do not sum to 1");
}

namespace {

using Key = std::vector<std::uint16_t>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto x : k) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using StateMap = std::unordered_map<Key, mpq_class, KeyHash>;

void guard_states(const StateMap& states, const OracleOptions& opt) {
    if (states.size() > opt.state_cap)
        throw StateSpaceExceeded("reachable states exceed the cap of " + std::to_string(opt.state_cap));
}

void guard_depth(std::size_t v) {
    if (v >= 0xFFFF) throw StateSpaceExceeded("depth or height exceeds the 16-bit state encoding");
}

}  // namespace

ExactDistribution exact_height_distribution_forward(const ChoiceSequence& seq, const OracleOptions& opt) {
    require_valid(seq);
    // key = [height, active count at depth 0, at depth 1, ...] without trailing zeros
    StateMap current;
    current.emplace(Key{0, 1}, mpq_class(1));
    std::int64_t actives = 1;
    for (std::size_t j = 0; j < seq.size(); ++j) {
        if (actives <= 0) throw InvalidSequence("step " + std::to_string(j + 1) + " finds no active vertex");
        const bool attach = seq[j] == Step::Attach;
        StateMap next;
        next.reserve(current.size() * 2);
        Key child;
        for (const auto& [key, p] : current) {
            const mpq_class share = p / mpq_class(static_cast<unsigned long>(actives));
            for (std::size_t d = 0; d + 1 < key.size(); ++d) {
                const std::uint16_t count = key[d + 1];
                if (count == 0) continue;
                child = key;
                if (attach) {
                    guard_depth(d + 2);
                    if (child.size() < d + 3) child.resize(d + 3, 0);
                    ++child[d + 2];
                    child[0] = std::max<std::uint16_t>(child[0], static_cast<std::uint16_t>(d + 1));
                } else {
                    --child[d + 1];
                    while (child.size() > 1 && child.back() == 0) child.pop_back();
                }
                next[child] += share * count;
            }
        }
        current = std::move(next);
        guard_states(current, opt);
        actives += to_sign(seq[j]);
    }
    ExactDistribution out;
    for (const auto& [key, p] : current) out.add(key[0], p);
    return out;
}

ExactDistribution exact_height_distribution_reverse(const ChoiceSequence& seq, const OracleOptions& opt) {
    if (seq.size() > opt.reverse_max_length)
        throw StateSpaceExceeded("growth-coalescent enumeration is limited to length " +
                                 std::to_string(opt.reverse_max_length));
    require_valid(seq);
    const std::int64_t s_final = walk_profile(seq).final_value();
    if (s_final < 0) throw InvalidSequence("final active count is negative");
    if (seq.empty()) return ExactDistribution::point(0);

    // key = height of the tree in each slot, in slot order
    StateMap current;
    current.emplace(Key(static_cast<std::size_t>(s_final), 0), mpq_class(1));
    for (std::size_t i = seq.size(); i >= 1; --i) {
        StateMap next;
        if (seq[i - 1] == Step::Freeze) {
            for (const auto& [key, p] : current) {
                Key k = key;
                k.push_back(0);
                next[k] += p;
            }
        } else {
            for (const auto& [key, p] : current) {
                const std::size_t s = key.size();
                if (s < 2) throw InvalidSequence("attach step " + std::to_string(i) + " finds fewer than two trees");
                const mpq_class share = p / mpq_class(static_cast<unsigned long>(s * (s - 1)));
                for (std::size_t a = 0; a < s; ++a) {
                    for (std::size_t b = 0; b < s; ++b) {
                        if (a == b) continue;
                        Key k = key;
                        guard_depth(static_cast<std::size_t>(k[b]) + 1);
                        k[a] = std::max<std::uint16_t>(k[a], static_cast<std::uint16_t>(k[b] + 1));
                        k.erase(k.begin() + static_cast<std::ptrdiff_t>(b));
                        next[k] += share;
                    }
                }
            }
        }
        current = std::move(next);
        guard_states(current, opt);
    }
    ExactDistribution out;
    for (const auto& [key, p] : current) {
        if (key.size() != 1) throw Error("growth-coalescent enumeration did not end with one tree");
        out.add(key[0], p);
    }
    return out;
}

ExactDistribution brute_force_forward(const ChoiceSequence& seq, std::uint64_t max_paths) {
    require_valid(seq);
    return exact_law_of([&](auto& chooser) { return build_forward(seq, chooser).height(); },
                        [](std::uint32_t h) { return h; }, max_paths);
}

ExactDistribution brute_force_reverse(const ChoiceSequence& seq, std::uint64_t max_paths) {
    require_valid(seq);
    return exact_law_of([&](auto& chooser) { return build_reverse(seq, chooser).height(); },
                        [](std::uint32_t h) { return h; }, max_paths);
}

ExactDistribution bernoulli_sum_law(const std::vector<mpq_class>& params) {
    std::vector<mpq_class> law{mpq_class(1)};
    for (const auto& p : params) {
        if (p < 0 || p > 1) throw DomainError("Bernoulli parameter outside [0, 1]");
        std::vector<mpq_class> next(law.size() + 1, mpq_class(0));
        for (std::size_t k = 0; k < law.size(); ++k) {
            next[k] += law[k] * (1 - p);
            next[k + 1] += law[k] * p;
        }
        law = std::move(next);
    }
    std::map<std::uint32_t, mpq_class> masses;
    for (std::size_t k = 0; k < law.size(); ++k) masses[static_cast<std::uint32_t>(k)] = law[k];
    return ExactDistribution(std::move(masses));
}

std::uint32_t min_floor_search(std::size_t n, const std::vector<ChoiceSequence>& family, const OracleOptions& opt) {
    std::vector<ExactDistribution> laws;
    laws.reserve(family.size());
    for (const auto& seq : family) {
        if (!classify(seq, n).in_x_n)
            throw InvalidSequence("family member " + render(seq) + " is not an n-edge sequence for n = " +
                                  std::to_string(n));
        laws.push_back(exact_height_distribution_forward(seq, opt));
    }
    const ExactDistribution rrt = exact_height_distribution_forward(repeat(Step::Attach, n), opt);
    for (std::uint32_t h = 0;; ++h) {
        const bool all = std::all_of(laws.begin(), laws.end(),
                                     [&](const ExactDistribution& law) { return dominance_with_floor(rrt, law, h); });
        if (all) return h;
    }
}

namespace {

nlohmann::json integer_json(const mpz_class& z) {
    if (z.fits_slong_p()) return nlohmann::json(static_cast<std::int64_t>(z.get_si()));
    return nlohmann::json(z.get_str());
}

mpz_class integer_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
    throw Error("distribution JSON: mass entries must be integers or decimal strings");
}

}  // namespace

std::string to_json(const ExactDistribution& d) {
    nlohmann::json support = nlohmann::json::array();
    nlohmann::json num = nlohmann::json::array();
    nlohmann::json den = nlohmann::json::array();
    for (const auto& [h, m] : d.masses()) {
        support.push_back(h);
        num.push_back(integer_json(m.get_num()));
        den.push_back(integer_json(m.get_den()));
    }
    nlohmann::json j;
    j["support"] = support;
    j["mass_num"] = num;
    j["mass_den"] = den;
    return j.dump();
}

ExactDistribution exact_distribution_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto& support = j.at("support");
    const auto& num = j.at("mass_num");
    const auto& den = j.at("mass_den");
    if (support.size() != num.size() || support.size() != den.size())
        throw Error("distribution JSON: array lengths differ");
    std::map<std::uint32_t, mpq_class> masses;
    for (std::size_t i = 0; i < support.size(); ++i) {
        mpq_class q(integer_from_json(num[i]), integer_from_json(den[i]));
        q.canonicalize();
        masses[support[i].get<std::uint32_t>()] += q;
    }
    return ExactDistribution(std::move(masses));
}

void write_csv(std::ostream& os, const EmpiricalDistribution& d) {
    os << "height,probability\n";
    char buf[64];
    for (const auto& [h, m] : d.masses()) {
        std::snprintf(buf, sizeof buf, "%.17g", m);
        os << h << ',' << buf << '\n';
    }
}

void write_csv(std::ostream& os, const ExactDistribution& d) {
    os << "height,probability\n";
    for (const auto& [h, m] : d.masses()) os << h << ',' << m.get_str() << '\n';
}

}  // namespace frostree
