#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "frostree/errors.hpp"

namespace frostree {

template <class Run, class Sink>
std::uint64_t enumerate_paths(Run&& run, Sink&& sink, std::uint64_t max_paths = 50'000'000);

/// Drop-in replacement for RngStream that walks every outcome of a
/// randomised procedure instead of sampling one.
///
/// Each call to `below(k)` is a branching point. `enumerate_paths` reruns the
/// procedure once per leaf of the branching tree, in odometer order, and
/// reports the exact probability of the leaf (the product of 1/k over the
/// branch points it visited). The procedure must be deterministic given the
/// choices it receives.
class ExhaustiveChooser {
public:
    std::size_t below(std::size_t k) {
        if (cursor_ == path_.size()) path_.push_back({0, k});
        auto& [choice, arity] = path_[cursor_++];
        if (arity != k) throw Error("enumerated procedure is not deterministic in its choices");
        return choice;
    }

    std::size_t depth() const noexcept { return cursor_; }

private:
    template <class Run, class Sink>
    friend std::uint64_t enumerate_paths(Run&& run, Sink&& sink, std::uint64_t max_paths);

    void rewind() noexcept { cursor_ = 0; }

    // Advances to the next leaf; false when the tree is exhausted.
    bool advance() {
        path_.resize(cursor_);
        while (!path_.empty()) {
            auto& [choice, arity] = path_.back();
            if (choice + 1 < arity) {
                ++choice;
                return true;
            }
            path_.pop_back();
        }
        return false;
    }

    mpq_class weight() const {
        mpz_class den = 1;
        for (std::size_t i = 0; i < cursor_; ++i) den *= static_cast<unsigned long>(path_[i].second);
        return mpq_class(mpz_class(1), den);
    }

    std::vector<std::pair<std::size_t, std::size_t>> path_;
    std::size_t cursor_ = 0;
};

/// Runs `run(chooser)` on every path and hands `sink(result, probability)`
/// each outcome. Returns the number of paths. Throws StateSpaceExceeded once
/// more than `max_paths` paths have been visited.
template <class Run, class Sink>
std::uint64_t enumerate_paths(Run&& run, Sink&& sink, std::uint64_t max_paths) {
    ExhaustiveChooser chooser;
    std::uint64_t count = 0;
    do {
        if (++count > max_paths) throw StateSpaceExceeded("exhaustive enumeration exceeded its path cap");
        chooser.rewind();
        auto result = run(chooser);
        sink(std::move(result), chooser.weight());
    } while (chooser.advance());
    return count;
}

}  // namespace frostree
