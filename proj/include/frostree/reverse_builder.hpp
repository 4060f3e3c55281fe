#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frostree/core_model.hpp"
#include "frostree/errors.hpp"
#include "frostree/tree_arena.hpp"

// Time-reversed growth-coalescent construction: start from S_m singletons
// and read the sequence backwards, inserting a frozen singleton on Freeze
// and grafting one uniform tree onto another on Attach.

namespace frostree {

struct RootedTreeHandle {
    VertexId root = 0;
    std::uint32_t height = 0;

    friend bool operator==(const RootedTreeHandle&, const RootedTreeHandle&) = default;
};

/// Ordered list of rooted trees over one shared vertex store.
///
/// Positions are stored 0-based: index p holds the tree at 1-based position
/// p+1 of the growth-coalescent process. The coupling construction also uses
/// a 0-th slot in front, which is simply index 0 there.
class Forest {
public:
    std::size_t size() const noexcept { return trees_.size(); }
    const RootedTreeHandle& operator[](std::size_t pos) const { return trees_[pos]; }
    const std::vector<RootedTreeHandle>& trees() const noexcept { return trees_; }

    /// New one-vertex tree, not yet placed in the forest.
    RootedTreeHandle singleton(Status status);

    void push_back(RootedTreeHandle t) { trees_.push_back(t); }
    void push_front(RootedTreeHandle t) { trees_.insert(trees_.begin(), t); }
    void set(std::size_t pos, RootedTreeHandle t) { trees_[pos] = t; }
    void erase(std::size_t pos) { trees_.erase(trees_.begin() + static_cast<std::ptrdiff_t>(pos)); }

    /// donor -> target: the donor's root becomes a child of the target's
    /// root. The result is rooted at the target's root. `step` is recorded
    /// as the donor root's birth step.
    RootedTreeHandle graft(RootedTreeHandle target, RootedTreeHandle donor, std::uint32_t step);

    /// One growth-coalescent merge: tree at `donor_pos` is grafted onto the
    /// tree at `target_pos`, the result stays at `target_pos` and the donor's
    /// slot is removed (later trees shift left).
    void merge(std::size_t target_pos, std::size_t donor_pos, std::uint32_t step);

    /// Subtracts `delta` from every nonzero birth step.
    void shift_births(std::uint32_t delta);

    /// Exports the tree rooted at `handle` as an arena in creation order.
    TreeArena export_tree(RootedTreeHandle handle) const;

    /// Canonical shape string (see TreeArena::canonical_form).
    std::string canonical_form(RootedTreeHandle handle) const;
    /// Canonical form of `handle` with a frozen leaf added under its root.
    std::string canonical_form_with_frozen_leaf(RootedTreeHandle handle) const;
    /// Canonical form of a frozen root whose only child is `handle`'s root.
    std::string canonical_form_under_frozen_root(RootedTreeHandle handle) const;

    std::size_t vertex_count() const noexcept { return parent_.size(); }
    Status status(VertexId v) const { return status_[v]; }

private:
    std::vector<std::vector<VertexId>> children_of_roots() const;
    std::string form_of(VertexId v, const std::vector<std::vector<VertexId>>& children) const;

    std::vector<RootedTreeHandle> trees_;
    std::vector<std::int64_t> parent_;
    std::vector<Status> status_;
    std::vector<std::uint32_t> birth_;
};

/// Tree counts of the forests F^m, F^{m-1}, ..., F^0 (entry t is F^{m-t}).
struct ReverseTrace {
    std::vector<std::size_t> tree_counts;
};

namespace detail {

/// Uniform ordered pair of distinct integers in [0, k): first uniform, then
/// uniform over the remaining k-1 values.
template <class Chooser>
std::pair<std::size_t, std::size_t> distinct_pair(std::size_t k, Chooser& chooser) {
    const std::size_t a = chooser.below(k);
    std::size_t b = chooser.below(k - 1);
    if (b >= a) ++b;
    return {a, b};
}

inline void check_reverse_input(const ChoiceSequence& seq) {
    require_valid(seq);
    if (walk_profile(seq).final_value() < 0) throw InvalidSequence("final active count is negative");
}

}  // namespace detail

/// Runs the growth-coalescent construction and returns the final forest
/// (a single tree) for callers that need the shared vertex store.
template <class Chooser>
Forest run_reverse(const ChoiceSequence& seq, Chooser& chooser, ReverseTrace* trace = nullptr) {
    detail::check_reverse_input(seq);
    const std::int64_t s_final = walk_profile(seq).final_value();
    Forest forest;
    for (std::int64_t t = 0; t < s_final; ++t) forest.push_back(forest.singleton(Status::Active));
    if (trace) trace->tree_counts.assign(1, forest.size());
    for (std::size_t i = seq.size(); i >= 1; --i) {
        if (seq[i - 1] == Step::Freeze) {
            forest.push_back(forest.singleton(Status::Frozen));
        } else {
            if (forest.size() < 2) throw InvalidSequence("attach step " + std::to_string(i) + " finds fewer than two trees");
            const auto [a, b] = detail::distinct_pair(forest.size(), chooser);
            forest.merge(a, b, static_cast<std::uint32_t>(i));
        }
        if (trace) trace->tree_counts.push_back(forest.size());
    }
    if (forest.size() != 1) throw InvalidSequence("growth-coalescent run did not end with a single tree");
    return forest;
}

/// Final tree of the growth-coalescent construction. The sequence (-) of
/// length one yields the single frozen root, as the forward construction does.
template <class Chooser>
TreeArena build_reverse(const ChoiceSequence& seq, Chooser& chooser, ReverseTrace* trace = nullptr) {
    if (seq.empty()) return TreeArena();
    Forest forest = run_reverse(seq, chooser, trace);
    return forest.export_tree(forest[0]);
}

/// Height-only growth-coalescent run; same draws as build_reverse.
template <class Chooser>
std::uint32_t reverse_height(const ChoiceSequence& seq, Chooser& chooser, std::vector<std::uint32_t>& heights) {
    detail::check_reverse_input(seq);
    heights.assign(static_cast<std::size_t>(walk_profile(seq).final_value()), 0);
    for (std::size_t i = seq.size(); i >= 1; --i) {
        if (seq[i - 1] == Step::Freeze) {
            heights.push_back(0);
        } else {
            if (heights.size() < 2) throw InvalidSequence("attach step " + std::to_string(i) + " finds fewer than two trees");
            const auto [a, b] = detail::distinct_pair(heights.size(), chooser);
            heights[a] = std::max(heights[a], heights[b] + 1);
            heights.erase(heights.begin() + static_cast<std::ptrdiff_t>(b));
        }
    }
    return heights.empty() ? 0 : heights.front();
}

template <class Chooser>
std::uint32_t reverse_height(const ChoiceSequence& seq, Chooser& chooser) {
    std::vector<std::uint32_t> heights;
    return reverse_height(seq, chooser, heights);
}

}  // namespace frostree
