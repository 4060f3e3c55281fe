#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frostree/core_model.hpp"
#include "frostree/errors.hpp"
#include "frostree/forward_builder.hpp"
#include "frostree/reverse_builder.hpp"

namespace frostree {

/// Which of the three active vertices gets frozen in the (+1,-1) insertion
/// coupling: the new child U', its parent U, or the other survivor V.
enum class CaseTag : std::uint8_t { AFrozenChild, BFrozenParent, CFrozenOther };

const char* to_string(CaseTag c) noexcept;

/// State of the delayed coupling after forests F^j and F^j-hat were built.
struct CouplingTraceRecord {
    std::size_t j = 0;
    int marker = 0;  // M_j
    std::pair<std::size_t, std::size_t> pending{0, 0};  // E_j as (a, b)
    bool frozen_marker_in_front = false;  // F^j starts with the distinguished frozen singleton
};

struct CouplingDiagnostics {
    std::vector<CouplingTraceRecord> trace;  // j = k-1 down to 0
    std::size_t switch_index = 0;            // largest j with M_j = 1
    /// At switch_index the two forests agree except at position max(a, b),
    /// where the full tree is the reduced one grafted onto or under the
    /// distinguished frozen singleton.
    bool switch_structure_ok = false;
    /// From switch_index down to 0 every tree of the full forest is at least
    /// as high as the tree at the same position of the reduced forest.
    bool positionwise_heights_ok = false;
};

struct CoupledSample {
    std::uint32_t height_x = 0;
    std::uint32_t height_xhat = 0;
    std::optional<CaseTag> case_tag;
    std::optional<int> configuration;
    std::optional<std::size_t> split;  // I_n, the edge count of R1
    std::optional<CouplingDiagnostics> diagnostics;
};

struct ReducedSequence {
    ChoiceSequence original;
    ChoiceSequence reduced;
    std::size_t removed_at = 0;  // k: steps k and k+1 (1-based) were removed
};

/// Removes the last Attach of the leading Attach run together with the
/// Freeze that follows it.
ReducedSequence reduce_once(const ChoiceSequence& seq);

/// Applies reduce_once until the sequence starts with at least `r` Attach
/// steps. Reachable exactly when max_{j>=1} S_j >= r + 1.
ChoiceSequence reduce_to_prefix(const ChoiceSequence& seq, std::size_t r);

namespace detail {

inline std::size_t reducible_run(const ChoiceSequence& seq) {
    const std::size_t k = seq.leading_attach_run();
    if (k == 0) throw NotReducible("sequence does not start with an Attach step");
    if (k >= seq.size()) throw NotReducible("sequence has no Freeze step after its leading Attach run");
    return k;
}

}  // namespace detail

/// Delayed pathwise coupling of the growth-coalescent construction run on
/// `seq` and on reduce_once(seq). Both marginals are the growth-coalescent
/// laws; pathwise height_xhat <= height_x.
template <class Chooser>
CoupledSample couple_reduce(const ChoiceSequence& seq, Chooser& chooser, bool diagnose = false) {
    require_valid(seq);
    const std::size_t k = detail::reducible_run(seq);
    const std::size_t m = seq.size();
    const std::int64_t s_final = walk_profile(seq).final_value();

    // Shared suffix: steps m..k+2 of seq are steps m-2..k of the reduced one.
    Forest full;
    for (std::int64_t t = 0; t < s_final; ++t) full.push_back(full.singleton(Status::Active));
    for (std::size_t i = m; i >= k + 2; --i) {
        if (seq[i - 1] == Step::Freeze) {
            full.push_back(full.singleton(Status::Frozen));
        } else {
            const auto [a, b] = detail::distinct_pair(full.size(), chooser);
            full.merge(a, b, static_cast<std::uint32_t>(i));
        }
    }
    Forest reduced = full;  // F^{k+1} == F-hat^{k-1}
    reduced.shift_births(2);

    // Initialisation: frozen marker in the 0-th slot, then one merge over
    // slots 0..S_{k-1} (= k + 1 slots).
    const RootedTreeHandle marker = full.singleton(Status::Frozen);
    full.push_front(marker);

    int flag = 0;
    std::pair<std::size_t, std::size_t> pending{0, 0};
    CouplingDiagnostics diag;

    // One merge on a forest whose 0-th slot holds the marker. Slots a, b are
    // distinct in [0, size). Returns the new M value.
    auto merge_with_marker = [&](std::size_t a, std::size_t b, std::uint32_t step) {
        pending = {a, b};
        if (a > 0 && b > 0) {
            full.merge(a, b, step);
            return 0;
        }
        if (a == 0) {
            full.set(b, full.graft(full[0], full[b], step));
        } else {
            full.set(a, full.graft(full[a], full[0], step));
        }
        full.erase(0);
        return 1;
    };

    auto record = [&](std::size_t j) {
        if (!diagnose) return;
        CouplingTraceRecord r;
        r.j = j;
        r.marker = flag;
        r.pending = pending;
        r.frozen_marker_in_front = full.size() > 0 && full[0].root == marker.root && full[0].height == 0;
        diag.trace.push_back(r);
    };

    bool switch_seen = false;
    auto on_switch = [&](std::size_t j) {
        switch_seen = true;
        diag.switch_index = j;
        if (!diagnose) return;
        // Positions are 1-based in E; slot max(a,b) of F^{j} before erasing
        // the marker is index max(a,b)-1 afterwards.
        const std::size_t pos = std::max(pending.first, pending.second) - 1;
        bool ok = full.size() == reduced.size();
        for (std::size_t p = 0; ok && p < full.size(); ++p) {
            if (p == pos) {
                const std::string got = full.canonical_form(full[p]);
                ok = got == reduced.canonical_form_with_frozen_leaf(reduced[p]) ||
                     got == reduced.canonical_form_under_frozen_root(reduced[p]);
            } else {
                ok = full.canonical_form(full[p]) == reduced.canonical_form(reduced[p]);
            }
        }
        diag.switch_structure_ok = ok;
        diag.positionwise_heights_ok = true;
    };

    auto check_heights = [&]() {
        if (!diagnose || !diag.positionwise_heights_ok) return;
        for (std::size_t p = 0; p < full.size(); ++p) {
            if (full[p].height < reduced[p].height) diag.positionwise_heights_ok = false;
        }
    };

    {
        const auto [a, b] = detail::distinct_pair(k + 1, chooser);
        flag = merge_with_marker(a, b, static_cast<std::uint32_t>(k));
        record(k - 1);
        if (flag == 1) {
            on_switch(k - 1);
            check_heights();
        }
    }

    for (std::size_t j = k - 1; j >= 1; --j) {
        const std::size_t s_j = j + 1;
        if (flag == 1) {
            // (A): identical merge in both forests over positions 1..S_j.
            const auto [a, b] = detail::distinct_pair(s_j, chooser);
            full.merge(a, b, static_cast<std::uint32_t>(j));
            reduced.merge(a, b, static_cast<std::uint32_t>(j));
            record(j - 1);
            check_heights();
        } else {
            // (B): replay the stored pair in the reduced forest, fresh merge
            // over slots 0..S_j-1 in the full one.
            reduced.merge(pending.first - 1, pending.second - 1, static_cast<std::uint32_t>(j));
            const auto [a, b] = detail::distinct_pair(s_j, chooser);
            flag = merge_with_marker(a, b, static_cast<std::uint32_t>(j));
            record(j - 1);
            if (flag == 1) {
                on_switch(j - 1);
                check_heights();
            }
        }
    }

    if (!switch_seen || full.size() != 1 || reduced.size() != 1)
        throw Error("delayed coupling did not terminate in single trees");

    CoupledSample out;
    out.height_x = full[0].height;
    out.height_xhat = reduced[0].height;
    if (diagnose) out.diagnostics = std::move(diag);
    return out;
}

namespace detail {

/// R_m with its last m-1 of m+1 vertices frozen by the forward process
/// (+1)^m (-1)^{m-1}; the two survivors are uniform distinct vertices.
template <class Chooser>
TreeArena two_survivor_rrt(std::size_t m, Chooser& chooser) {
    return build_forward(repeat(Step::Attach, m).concat(repeat(Step::Freeze, m - 1)), chooser);
}

template <class Chooser>
std::uint32_t rrt_height(std::size_t edges, Chooser& chooser) {
    std::vector<std::uint32_t> scratch;
    scratch.reserve(edges + 1);
    return forward_height(repeat(Step::Attach, edges), chooser, scratch);
}

}  // namespace detail

/// Coupling for removing a (-1,+1) pair right after the freezing phase:
///   X     = (+1)^m (-1)^{m-1} (-1,+1) (+1)^n
///   X-hat = (+1)^m (-1)^{m-1} (+1)^n
/// R_m carries two survivors; the next Freeze of X freezes V and keeps U.
/// With I uniform on {0..n} and independent R1 (I edges), R2 (n-I edges):
///   height_x    = max(H(R_m), h(U) + 1 + H(R1), h(U) + H(R2))
///   height_xhat = max(H(R_m), h(U) + H(R1),     h(V) + H(R2))
template <class Chooser>
CoupledSample couple_prop_i(std::size_t m, std::size_t n, Chooser& chooser) {
    if (m == 0) throw DomainError("couple_prop_i needs m >= 1");
    const TreeArena base = detail::two_survivor_rrt(m, chooser);
    const auto actives = base.active_list();
    const std::size_t frozen_slot = chooser.below(2);
    const std::uint32_t hv = base.vertex(actives[frozen_slot]).depth;
    const std::uint32_t hu = base.vertex(actives[1 - frozen_slot]).depth;
    const std::size_t split = chooser.below(n + 1);
    const std::uint32_t h1 = detail::rrt_height(split, chooser);
    const std::uint32_t h2 = detail::rrt_height(n - split, chooser);
    const std::uint32_t hr = base.height();

    CoupledSample out;
    out.split = split;
    out.height_x = std::max({hr, hu + 1 + h1, hu + h2});
    out.height_xhat = std::max({hr, hu + h1, hv + h2});
    return out;
}

/// Coupling for removing a (+1,-1) pair right after the freezing phase:
///   X     = (+1)^m (-1)^{m-1} (+1,-1) (+1)^n
///   X-hat = (+1)^m (-1)^{m-1} (+1)^n
/// The Attach of X hangs U' under U (one of the two survivors, V is the
/// other); the Freeze then hits U', U or V with probability 1/3 each.
template <class Chooser>
CoupledSample couple_prop_ii(std::size_t m, std::size_t n, Chooser& chooser) {
    if (m == 0) throw DomainError("couple_prop_ii needs m >= 1");
    TreeArena tree = detail::two_survivor_rrt(m, chooser);
    const std::uint32_t hr = tree.height();
    const std::size_t u_slot = chooser.below(2);
    const VertexId u = tree.active_list()[u_slot];
    const VertexId v = tree.active_list()[1 - u_slot];
    const VertexId u_child = tree.add_child(u, static_cast<std::uint32_t>(2 * m));
    const VertexId frozen = tree.active_list()[chooser.below(3)];
    const CaseTag tag = frozen == u_child ? CaseTag::AFrozenChild
                        : frozen == u     ? CaseTag::BFrozenParent
                                          : CaseTag::CFrozenOther;

    const std::uint32_t hu = tree.vertex(u).depth;
    const std::uint32_t hv = tree.vertex(v).depth;
    const std::size_t split = chooser.below(n + 1);
    const std::uint32_t h1 = detail::rrt_height(split, chooser);
    const std::uint32_t h2 = detail::rrt_height(n - split, chooser);

    CoupledSample out;
    out.case_tag = tag;
    out.split = split;
    out.height_xhat = std::max({hr, hu + h1, hv + h2});
    switch (tag) {
        case CaseTag::AFrozenChild:  // R1 on U, R2 on V, U' a frozen leaf
            out.height_x = std::max({hr, hu + 1, hu + h1, hv + h2});
            break;
        case CaseTag::BFrozenParent:  // R1 on U', R2 on V
            out.height_x = std::max({hr, hu + 1 + h1, hv + h2});
            break;
        case CaseTag::CFrozenOther:  // R1 on U', R2 on U
            out.height_x = std::max({hr, hu + 1 + h1, hu + h2});
            break;
    }
    return out;
}

struct ConfigurationSample {
    std::uint32_t height_x = 0;
    std::uint32_t height_xhat = 0;
    std::uint32_t height_rrt = 0;
    /// Shape of T(+1,+1,-1): 0 path/root frozen, 1 path/middle frozen,
    /// 2 path/leaf frozen, 3 star/leaf frozen, 4 star/root frozen.
    int configuration_x = 0;
    /// Shape of T(+1,-1,+1): 0 root frozen, 1 first child frozen.
    int configuration_xhat = 0;
};

/// Heights of the two components left after deleting the first edge of the
/// random recursive tree formed by the first `vertices` vertices of `tree`:
/// (component of vertex 0, component of vertex 1).
std::pair<std::uint32_t, std::uint32_t> first_edge_split_heights(const TreeArena& tree, std::size_t vertices);

/// Coupling of
///   X     = (+1,+1,-1) (+1)^n   built from T(+1,+1,-1) and the split of R_{n+1},
///   X-hat = (+1,-1)   (+1)^n   built from T(+1,-1,+1) and the split of R_n,
/// and R_n itself. In each prefix tree the first-born active vertex receives
/// the component of the old root, the other active vertex the other one.
/// R_{n+1} extends R_n by one step so that all three share randomness.
template <class Chooser>
ConfigurationSample couple_prop_iii(std::size_t n, Chooser& chooser) {
    if (n == 0) throw DomainError("couple_prop_iii needs n >= 1");
    const TreeArena prefix_x = build_forward(ChoiceSequence{Step::Attach, Step::Attach, Step::Freeze}, chooser);
    const TreeArena prefix_xhat = build_forward(ChoiceSequence{Step::Attach, Step::Freeze, Step::Attach}, chooser);
    const TreeArena rrt = sample_rrt(n + 1, chooser);

    auto active_depths = [](const TreeArena& t) {
        std::vector<VertexId> act(t.active_list().begin(), t.active_list().end());
        std::sort(act.begin(), act.end());
        return std::pair<std::uint32_t, std::uint32_t>{t.vertex(act[0]).depth, t.vertex(act[1]).depth};
    };

    const auto [h1_big, h2_big] = first_edge_split_heights(rrt, n + 2);
    const auto [h1, h2] = first_edge_split_heights(rrt, n + 1);
    const auto [dx1, dx2] = active_depths(prefix_x);
    const auto [dy1, dy2] = active_depths(prefix_xhat);

    ConfigurationSample out;
    out.height_x = std::max({prefix_x.height(), dx1 + h1_big, dx2 + h2_big});
    out.height_xhat = std::max({prefix_xhat.height(), dy1 + h1, dy2 + h2});
    out.height_rrt = std::max(h1, 1 + h2);

    const bool path = prefix_x.height() == 2;
    VertexId frozen_x = 0;
    for (VertexId v = 0; v < 3; ++v)
        if (prefix_x.vertex(v).status == Status::Frozen) frozen_x = v;
    if (path) {
        // vertices are created in depth order along the path
        out.configuration_x = static_cast<int>(prefix_x.vertex(frozen_x).depth);
    } else {
        out.configuration_x = frozen_x == 0 ? 4 : 3;
    }
    out.configuration_xhat = prefix_xhat.vertex(0).status == Status::Frozen ? 0 : 1;
    return out;
}

/// Exact mixture weights of the five configurations of T(+1,+1,-1).
inline constexpr std::pair<int, int> kConfigurationWeights[5] = {{1, 6}, {1, 6}, {1, 6}, {1, 3}, {1, 6}};

/// Depth gap |h(U) - h(V)| of two uniform distinct vertices of R_m.
template <class Chooser>
std::uint32_t sample_depth_gap(std::size_t m, Chooser& chooser, std::vector<std::uint32_t>& depth) {
    if (m == 0) throw DomainError("depth gap needs m >= 1");
    depth.assign(m + 1, 0);
    for (std::size_t v = 1; v <= m; ++v) depth[v] = depth[chooser.below(v)] + 1;
    const std::size_t a = chooser.below(m + 1);
    std::size_t b = chooser.below(m);
    if (b >= a) ++b;
    return depth[a] > depth[b] ? depth[a] - depth[b] : depth[b] - depth[a];
}

}  // namespace frostree
