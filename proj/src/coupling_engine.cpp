#include "frostree/coupling_engine.hpp"

namespace frostree {

const char* to_string(CaseTag c) noexcept {
    switch (c) {
        case CaseTag::AFrozenChild:
            return "a";
        case CaseTag::BFrozenParent:
            return "b";
        case CaseTag::CFrozenOther:
            return "c";
    }
    return "?";
}

ReducedSequence reduce_once(const ChoiceSequence& seq) {
    require_valid(seq);
    const std::size_t k = detail::reducible_run(seq);
    std::vector<Step> steps;
    steps.reserve(seq.size() - 2);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i + 1 == k || i == k) continue;
        steps.push_back(seq[i]);
    }
    return ReducedSequence{seq, ChoiceSequence(std::move(steps)), k};
}

ChoiceSequence reduce_to_prefix(const ChoiceSequence& seq, std::size_t r) {
    ChoiceSequence current = seq;
    while (current.leading_attach_run() < r) {
        try {
            current = reduce_once(current).reduced;
        } catch (const NotReducible&) {
            throw TargetUnreachable("cannot reach a leading run of " + std::to_string(r) + " Attach steps from " +
                                    render(seq) + " (max active count " +
                                    std::to_string(walk_profile(seq).max_after_start()) + ")");
        }
    }
    return current;
}

std::pair<std::uint32_t, std::uint32_t> first_edge_split_heights(const TreeArena& tree, std::size_t vertices) {
    if (vertices < 2 || vertices > tree.size()) throw DomainError("first_edge_split_heights: bad vertex count");
    std::vector<char> inside(vertices, 0);
    inside[1] = 1;
    std::uint32_t h_root = 0;
    std::uint32_t h_child = 0;
    for (std::size_t v = 1; v < vertices; ++v) {
        const auto& rec = tree.vertex(static_cast<VertexId>(v));
        if (v > 1) inside[v] = inside[static_cast<std::size_t>(rec.parent)];
        if (inside[v]) {
            h_child = std::max(h_child, rec.depth - 1);
        } else {
            h_root = std::max(h_root, rec.depth);
        }
    }
    return {h_root, h_child};
}

}  // namespace frostree
