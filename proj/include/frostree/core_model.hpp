#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "frostree/errors.hpp"

namespace frostree {

enum class Step : std::int8_t { Freeze = -1, Attach = +1 };

constexpr int to_sign(Step s) noexcept { return static_cast<int>(s); }

/// An ordered list of attachment / freezing steps. Attach encodes +1 and
/// Freeze encodes -1.
class ChoiceSequence {
public:
    ChoiceSequence() = default;
    explicit ChoiceSequence(std::vector<Step> steps) : steps_(std::move(steps)) {}
    ChoiceSequence(std::initializer_list<Step> steps) : steps_(steps) {}

    /// Builds from a list of +1/-1 integers; anything else is rejected.
    static ChoiceSequence from_signs(std::initializer_list<int> signs);

    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }
    Step operator[](std::size_t i) const { return steps_[i]; }
    const std::vector<Step>& steps() const noexcept { return steps_; }

    auto begin() const noexcept { return steps_.begin(); }
    auto end() const noexcept { return steps_.end(); }

    std::size_t attach_count() const noexcept;
    std::size_t freeze_count() const noexcept { return size() - attach_count(); }

    /// Number of leading Attach steps.
    std::size_t leading_attach_run() const noexcept;

    ChoiceSequence concat(const ChoiceSequence& tail) const;

    friend bool operator==(const ChoiceSequence&, const ChoiceSequence&) = default;

private:
    std::vector<Step> steps_;
};

/// Repeats `s` `k` times, e.g. repeat(Attach, 3) is (+1)^3.
ChoiceSequence repeat(Step s, std::size_t k);
ChoiceSequence repeat(const ChoiceSequence& block, std::size_t k);

/// Parses the sequence grammar
///
///     seq  := term+
///     term := atom ['^' positive-int]
///     atom := '+' | '-' | '(' seq ')'
///
/// Whitespace is ignored everywhere. '^' binds to the immediately preceding
/// atom or parenthesised group.
ChoiceSequence parse_sequence(std::string_view text);

/// Canonical printer: maximal runs are compressed as "+^k" / "-^k", a run of
/// length one prints bare. The empty sequence prints as "".
std::string render(const ChoiceSequence& seq);

/// First hitting time of zero. Infinite when the walk never reaches zero.
class StoppingTime {
public:
    static StoppingTime infinite() noexcept { return StoppingTime(); }
    static StoppingTime at(std::size_t j) noexcept { return StoppingTime(j); }

    bool is_infinite() const noexcept { return infinite_; }
    /// Only meaningful when finite.
    std::size_t value() const noexcept { return value_; }

    /// tau >= bound, with Infinity above every integer.
    bool at_least(std::size_t bound) const noexcept { return infinite_ || value_ >= bound; }

    friend bool operator==(const StoppingTime&, const StoppingTime&) = default;

private:
    StoppingTime() = default;
    explicit StoppingTime(std::size_t j) : infinite_(false), value_(j) {}

    bool infinite_ = true;
    std::size_t value_ = 0;
};

struct WalkProfile {
    /// S_0..S_m; S_0 = 1 and S_j is the number of active vertices after j steps.
    std::vector<std::int64_t> s_values;
    StoppingTime tau = StoppingTime::infinite();

    std::int64_t final_value() const { return s_values.back(); }
    /// max over j >= 1 of S_j; S_0 when the sequence is empty.
    std::int64_t max_after_start() const;
};

WalkProfile walk_profile(const ChoiceSequence& seq);

struct SequenceClass {
    std::size_t n = 0;       // requested attach count
    bool valid = false;      // S_j > 0 for every 1 <= j <= m-1
    bool in_x_n = false;     // attach count == n and tau >= m
};

SequenceClass classify(const ChoiceSequence& seq, std::size_t n);

/// S_j > 0 for 1 <= j <= m-1.
bool is_valid(const ChoiceSequence& seq);

/// Throws InvalidSequence unless is_valid(seq).
void require_valid(const ChoiceSequence& seq);

/// All members of the n-edge family with length at most `max_length`, in
/// lexicographic order (Attach before Freeze).
std::vector<ChoiceSequence> enumerate_x_n(std::size_t n, std::size_t max_length);

/// All valid sequences of exactly `length` steps.
std::vector<ChoiceSequence> enumerate_valid(std::size_t length);

}  // namespace frostree
