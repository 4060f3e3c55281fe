#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace frostree {

using VertexId = std::uint32_t;
inline constexpr std::int64_t kNoParent = -1;

enum class Status : std::uint8_t { Active, Frozen };

struct VertexRecord {
    std::int64_t parent = kNoParent;
    std::uint32_t depth = 0;
    Status status = Status::Active;
    /// Step index (1-based) at which the vertex was attached; 0 for the root.
    std::uint32_t birth_step = 0;

    friend bool operator==(const VertexRecord&, const VertexRecord&) = default;
};

/// Rooted, vertex-labelled tree stored as a parent array in creation order.
///
/// Vertex 0 is the root; every other vertex has a parent with a smaller
/// index, so depths are filled in a single forward pass. The list of active
/// vertices is kept with swap-remove on freeze, which makes a uniform active
/// choice a single index draw.
class TreeArena {
public:
    explicit TreeArena(Status root_status = Status::Active);

    std::size_t size() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return vertices_.size() - 1; }
    const VertexRecord& vertex(VertexId v) const { return vertices_[v]; }
    std::span<const VertexRecord> vertices() const noexcept { return vertices_; }

    std::uint32_t height() const noexcept { return height_; }
    std::span<const VertexId> active_list() const noexcept { return active_; }
    std::size_t active_count() const noexcept { return active_.size(); }
    std::size_t frozen_count() const noexcept { return size() - active_.size(); }

    /// Appends an active child of `parent` and returns its id.
    VertexId add_child(VertexId parent, std::uint32_t birth_step);
    /// Flips `v` from Active to Frozen.
    void freeze(VertexId v);

    /// Splits off the subtree rooted at `child` (which must not be the root).
    /// Returns (rest, subtree), each relabelled in creation order and with
    /// depths relative to its own root.
    std::pair<TreeArena, TreeArena> split_at(VertexId child) const;

    /// Builds an arena from parent links in arbitrary labelling. Vertices are
    /// relabelled by increasing birth step, which must be a creation order
    /// (root first, parent born before child).
    static TreeArena from_links(std::span<const std::int64_t> parents, std::span<const Status> status,
                                std::span<const std::uint32_t> birth_steps);

    /// Checks every structural invariant; returns an empty string when the
    /// arena is consistent, otherwise a description of the first violation.
    std::string check_invariants() const;

    /// AHU-style canonical string of the unlabelled-shape-plus-status tree.
    /// Two arenas have equal canonical forms iff they are isomorphic as
    /// rooted trees with active/frozen labels.
    std::string canonical_form() const;

    /// One line per vertex: "index parent depth status birth_step".
    void dump(std::ostream& os) const;
    static TreeArena parse_dump(std::istream& is);

    friend bool operator==(const TreeArena& a, const TreeArena& b) {
        return a.vertices_ == b.vertices_ && a.height_ == b.height_;
    }

private:
    std::vector<VertexRecord> vertices_;
    std::vector<VertexId> active_;
    std::vector<std::uint32_t> slot_;  // position in active_, valid for active vertices
    std::uint32_t height_ = 0;
};

const char* to_string(Status s) noexcept;

}  // namespace frostree
