#include "frostree/reverse_builder.hpp"

#include <algorithm>

namespace frostree {

RootedTreeHandle Forest::singleton(Status status) {
    const auto id = static_cast<VertexId>(parent_.size());
    parent_.push_back(kNoParent);
    status_.push_back(status);
    birth_.push_back(0);
    return RootedTreeHandle{id, 0};
}

RootedTreeHandle Forest::graft(RootedTreeHandle target, RootedTreeHandle donor, std::uint32_t step) {
    if (target.root == donor.root) throw SelfGraft("cannot graft a tree onto itself");
    parent_[donor.root] = target.root;
    birth_[donor.root] = step;
    return RootedTreeHandle{target.root, std::max(target.height, donor.height + 1)};
}

void Forest::merge(std::size_t target_pos, std::size_t donor_pos, std::uint32_t step) {
    trees_[target_pos] = graft(trees_[target_pos], trees_[donor_pos], step);
    erase(donor_pos);
}

void Forest::shift_births(std::uint32_t delta) {
    for (auto& b : birth_) {
        if (b != 0) b -= delta;
    }
}

TreeArena Forest::export_tree(RootedTreeHandle handle) const {
    // Collect the vertices whose root is handle.root.
    std::vector<std::int64_t> parents;
    std::vector<Status> status;
    std::vector<std::uint32_t> births;
    std::vector<std::int64_t> local(parent_.size(), kNoParent);
    for (std::size_t v = 0; v < parent_.size(); ++v) {
        std::size_t r = v;
        while (parent_[r] != kNoParent) r = static_cast<std::size_t>(parent_[r]);
        if (r != handle.root) continue;
        local[v] = static_cast<std::int64_t>(parents.size());
        parents.push_back(parent_[v]);
        status.push_back(status_[v]);
        births.push_back(v == handle.root ? 0 : birth_[v]);
    }
    for (auto& p : parents) {
        if (p != kNoParent) p = local[static_cast<std::size_t>(p)];
    }
    return TreeArena::from_links(parents, status, births);
}

std::vector<std::vector<VertexId>> Forest::children_of_roots() const {
    std::vector<std::vector<VertexId>> children(parent_.size());
    for (std::size_t v = 0; v < parent_.size(); ++v) {
        if (parent_[v] != kNoParent) children[static_cast<std::size_t>(parent_[v])].push_back(static_cast<VertexId>(v));
    }
    return children;
}

std::string Forest::form_of(VertexId v, const std::vector<std::vector<VertexId>>& children) const {
    std::vector<std::string> kids;
    for (VertexId c : children[v]) kids.push_back(form_of(c, children));
    std::sort(kids.begin(), kids.end());
    std::string out = status_[v] == Status::Active ? "(a" : "(f";
    for (const auto& k : kids) out += k;
    return out + ")";
}

std::string Forest::canonical_form(RootedTreeHandle handle) const {
    return form_of(handle.root, children_of_roots());
}

std::string Forest::canonical_form_with_frozen_leaf(RootedTreeHandle handle) const {
    const auto children = children_of_roots();
    std::vector<std::string> kids{"(f)"};
    for (VertexId c : children[handle.root]) kids.push_back(form_of(c, children));
    std::sort(kids.begin(), kids.end());
    std::string out = status_[handle.root] == Status::Active ? "(a" : "(f";
    for (const auto& k : kids) out += k;
    return out + ")";
}

std::string Forest::canonical_form_under_frozen_root(RootedTreeHandle handle) const {
    return "(f" + canonical_form(handle) + ")";
}

}  // namespace frostree
