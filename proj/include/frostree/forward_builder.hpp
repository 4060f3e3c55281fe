#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "frostree/core_model.hpp"
#include "frostree/errors.hpp"
#include "frostree/rng.hpp"
#include "frostree/tree_arena.hpp"

// Forward recursive construction of uniform attachment trees with freezing.
//
// Every builder is a template over a "chooser": any type with
// `std::size_t below(std::size_t k)` returning a uniform index in [0, k).
// RngStream samples; ExhaustiveChooser enumerates every outcome.

namespace frostree {

/// Per-step record of a forward run; entry j describes the tree after j
/// steps (entry 0 is the single root).
struct ForwardTrace {
    std::vector<std::size_t> active_counts;
    std::vector<std::uint32_t> heights;
};

namespace detail {

[[noreturn]] inline void no_active_vertex(std::size_t step) {
    throw InvalidSequence("step " + std::to_string(step) + " finds no active vertex");
}

}  // namespace detail

/// Runs the forward construction: at each step a uniform active vertex is
/// drawn; Attach hangs a new active child under it, Freeze freezes it.
template <class Chooser>
TreeArena build_forward(const ChoiceSequence& seq, Chooser& chooser, ForwardTrace* trace = nullptr) {
    TreeArena tree;
    if (trace) {
        trace->active_counts.assign(1, 1);
        trace->heights.assign(1, 0);
    }
    for (std::size_t j = 0; j < seq.size(); ++j) {
        const std::size_t actives = tree.active_count();
        if (actives == 0) detail::no_active_vertex(j + 1);
        const VertexId v = tree.active_list()[chooser.below(actives)];
        if (seq[j] == Step::Attach) {
            tree.add_child(v, static_cast<std::uint32_t>(j + 1));
        } else {
            tree.freeze(v);
        }
        if (trace) {
            trace->active_counts.push_back(tree.active_count());
            trace->heights.push_back(tree.height());
        }
    }
    return tree;
}

/// Height-only forward run. Consumes exactly the same draws as
/// build_forward, so both return the same height for the same chooser state.
/// Keeps only the depths of active vertices; no per-vertex allocation.
template <class Chooser>
std::uint32_t forward_height(const ChoiceSequence& seq, Chooser& chooser, std::vector<std::uint32_t>& scratch) {
    auto& depths = scratch;
    depths.clear();
    depths.push_back(0);
    std::uint32_t height = 0;
    std::size_t j = 0;
    for (Step s : seq) {
        ++j;
        if (depths.empty()) detail::no_active_vertex(j);
        const std::size_t slot = chooser.below(depths.size());
        if (s == Step::Attach) {
            const std::uint32_t d = depths[slot] + 1;
            depths.push_back(d);
            height = std::max(height, d);
        } else {
            depths[slot] = depths.back();
            depths.pop_back();
        }
    }
    return height;
}

template <class Chooser>
std::uint32_t forward_height(const ChoiceSequence& seq, Chooser& chooser) {
    std::vector<std::uint32_t> scratch;
    scratch.reserve(seq.size() + 1);
    return forward_height(seq, chooser, scratch);
}

/// Random recursive tree with n edges: the forward construction on (+1)^n.
template <class Chooser>
TreeArena sample_rrt(std::size_t n, Chooser& chooser) {
    return build_forward(repeat(Step::Attach, n), chooser);
}

/// Builds R_n, removes its first edge and returns (component of the root,
/// component of the first added vertex), each rooted at its old endpoint.
template <class Chooser>
std::pair<TreeArena, TreeArena> rrt_split(std::size_t n, Chooser& chooser) {
    if (n == 0) throw DomainError("rrt_split needs at least one edge");
    return sample_rrt(n, chooser).split_at(1);
}

/// Draws a uniform active vertex of `tree` and returns its depth.
template <class Chooser>
std::uint32_t uniform_active_depth(const TreeArena& tree, Chooser& chooser) {
    if (tree.active_count() == 0) throw InvalidSequence("tree has no active vertex to sample");
    return tree.vertex(tree.active_list()[chooser.below(tree.active_count())]).depth;
}

/// Bernoulli parameters whose independent sum has the law of the depth of a
/// uniform active vertex of the final tree: one parameter 1/S_i per Attach
/// step i, with S_i the active count right after step i. For (+1)^n this
/// is 1/2, 1/3, ..., 1/(n+1), i.e. the depth of a uniform vertex among all
/// n+1 vertices of R_n (mean 13/12 for n = 3).
std::vector<mpq_class> uniform_active_depth_law(const ChoiceSequence& seq);

}  // namespace frostree
