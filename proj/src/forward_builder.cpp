#include "frostree/forward_builder.hpp"

namespace frostree {

std::vector<mpq_class> uniform_active_depth_law(const ChoiceSequence& seq) {
    require_valid(seq);
    const WalkProfile walk = walk_profile(seq);
    if (walk.final_value() <= 0) throw InvalidSequence("final tree of " + render(seq) + " has no active vertex");
    std::vector<mpq_class> params;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == Step::Attach) params.emplace_back(1, static_cast<unsigned long>(walk.s_values[i + 1]));
    }
    return params;
}

}  // namespace frostree
