#include "frostree/tree_arena.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "frostree/errors.hpp"

namespace frostree {

const char* to_string(Status s) noexcept { return s == Status::Active ? "active" : "frozen"; }

TreeArena::TreeArena(Status root_status) {
    vertices_.push_back(VertexRecord{kNoParent, 0, root_status, 0});
    slot_.push_back(0);
    if (root_status == Status::Active) active_.push_back(0);
}

VertexId TreeArena::add_child(VertexId parent, std::uint32_t birth_step) {
    const auto id = static_cast<VertexId>(vertices_.size());
    const std::uint32_t depth = vertices_[parent].depth + 1;
    vertices_.push_back(VertexRecord{static_cast<std::int64_t>(parent), depth, Status::Active, birth_step});
    slot_.push_back(static_cast<std::uint32_t>(active_.size()));
    active_.push_back(id);
    height_ = std::max(height_, depth);
    return id;
}

void TreeArena::freeze(VertexId v) {
    if (vertices_[v].status != Status::Active) throw Error("freezing a vertex that is already frozen");
    vertices_[v].status = Status::Frozen;
    const std::uint32_t slot = slot_[v];
    const VertexId last = active_.back();
    active_[slot] = last;
    slot_[last] = slot;
    active_.pop_back();
}

namespace {

// Assembles an arena from records already in creation order (parents
// indexed in the same order). Depths are recomputed.
TreeArena assemble(const std::vector<VertexRecord>& records) {
    TreeArena arena(records.front().status);
    for (std::size_t v = 1; v < records.size(); ++v) {
        const VertexId id = arena.add_child(static_cast<VertexId>(records[v].parent), records[v].birth_step);
        if (records[v].status == Status::Frozen) arena.freeze(id);
    }
    return arena;
}

}  // namespace

std::pair<TreeArena, TreeArena> TreeArena::split_at(VertexId child) const {
    if (child == 0 || child >= size()) throw Error("split_at needs a non-root vertex of the arena");
    std::vector<char> inside(size(), 0);
    inside[child] = 1;
    for (std::size_t v = child + 1; v < size(); ++v) inside[v] = inside[static_cast<std::size_t>(vertices_[v].parent)];

    std::vector<std::int64_t> relabel(size(), kNoParent);
    std::vector<VertexRecord> rest, sub;
    for (std::size_t v = 0; v < size(); ++v) {
        auto& target = inside[v] ? sub : rest;
        VertexRecord r = vertices_[v];
        relabel[v] = static_cast<std::int64_t>(target.size());
        if (v == child || v == 0) {
            r.parent = kNoParent;
            r.birth_step = 0;
        } else {
            r.parent = relabel[static_cast<std::size_t>(r.parent)];
        }
        target.push_back(r);
    }
    return {assemble(rest), assemble(sub)};
}

TreeArena TreeArena::from_links(std::span<const std::int64_t> parents, std::span<const Status> status,
                                std::span<const std::uint32_t> birth_steps) {
    const std::size_t n = parents.size();
    if (n == 0 || status.size() != n || birth_steps.size() != n) throw Error("from_links: inconsistent input sizes");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return birth_steps[a] < birth_steps[b]; });
    std::vector<std::int64_t> relabel(n, kNoParent);
    for (std::size_t i = 0; i < n; ++i) relabel[order[i]] = static_cast<std::int64_t>(i);

    std::vector<VertexRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t old = order[i];
        VertexRecord r{kNoParent, 0, status[old], birth_steps[old]};
        if (i == 0) {
            if (parents[old] != kNoParent) throw Error("from_links: first vertex in birth order is not a root");
        } else {
            if (parents[old] == kNoParent) throw Error("from_links: more than one root");
            r.parent = relabel[static_cast<std::size_t>(parents[old])];
            if (r.parent >= static_cast<std::int64_t>(i)) throw Error("from_links: parent born after child");
        }
        records.push_back(r);
    }
    return assemble(records);
}

std::string TreeArena::check_invariants() const {
    std::ostringstream err;
    if (vertices_.empty()) return "empty arena";
    if (vertices_[0].parent != kNoParent || vertices_[0].depth != 0) return "vertex 0 is not a depth-0 root";
    std::uint32_t max_depth = 0;
    std::size_t actives = 0;
    for (std::size_t v = 1; v < size(); ++v) {
        const auto& r = vertices_[v];
        if (r.parent < 0 || r.parent >= static_cast<std::int64_t>(v)) {
            err << "vertex " << v << " has parent " << r.parent << " outside [0," << v << ")";
            return err.str();
        }
        if (r.depth != vertices_[static_cast<std::size_t>(r.parent)].depth + 1) {
            err << "vertex " << v << " depth " << r.depth << " != parent depth + 1";
            return err.str();
        }
        max_depth = std::max(max_depth, r.depth);
    }
    if (max_depth != height_) return "cached height differs from max depth";
    for (std::size_t v = 0; v < size(); ++v) actives += vertices_[v].status == Status::Active;
    if (actives != active_.size()) return "active list size differs from number of active vertices";
    for (std::size_t s = 0; s < active_.size(); ++s) {
        if (vertices_[active_[s]].status != Status::Active || slot_[active_[s]] != s)
            return "active list holds a frozen vertex or a stale slot";
    }
    return {};
}

std::string TreeArena::canonical_form() const {
    std::vector<std::vector<std::string>> child_forms(size());
    std::string form;
    for (std::size_t v = size(); v-- > 0;) {
        auto& kids = child_forms[v];
        std::sort(kids.begin(), kids.end());
        form.clear();
        form += '(';
        form += vertices_[v].status == Status::Active ? 'a' : 'f';
        for (const auto& k : kids) form += k;
        form += ')';
        kids.clear();
        kids.shrink_to_fit();
        if (v > 0) child_forms[static_cast<std::size_t>(vertices_[v].parent)].push_back(form);
    }
    return form;
}

void TreeArena::dump(std::ostream& os) const {
    for (std::size_t v = 0; v < size(); ++v) {
        const auto& r = vertices_[v];
        os << v << ' ' << r.parent << ' ' << r.depth << ' ' << to_string(r.status) << ' ' << r.birth_step << '\n';
    }
}

TreeArena TreeArena::parse_dump(std::istream& is) {
    std::vector<VertexRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::size_t index = 0;
        VertexRecord r;
        std::string status;
        if (!(ls >> index >> r.parent >> r.depth >> status >> r.birth_step))
            throw Error("malformed tree dump line: " + line);
        if (index != records.size()) throw Error("tree dump indices must be consecutive from 0");
        if (status == "active") {
            r.status = Status::Active;
        } else if (status == "frozen") {
            r.status = Status::Frozen;
        } else {
            throw Error("unknown vertex status '" + status + "'");
        }
        if (index == 0 ? r.parent != kNoParent : (r.parent < 0 || r.parent >= static_cast<std::int64_t>(index)))
            throw Error("tree dump parent out of creation order at vertex " + std::to_string(index));
        records.push_back(r);
    }
    if (records.empty()) throw Error("empty tree dump");
    TreeArena arena = assemble(records);
    for (std::size_t v = 0; v < records.size(); ++v) {
        if (arena.vertices_[v].depth != records[v].depth)
            throw Error("tree dump depth inconsistent at vertex " + std::to_string(v));
    }
    return arena;
}

}  // namespace frostree
