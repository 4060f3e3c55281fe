#include <doctest.h>

#include <algorithm>
#include <random>

#include "frostree/core_model.hpp"
#include "frostree/errors.hpp"

using namespace frostree;

namespace {
constexpr Step P = Step::Attach;
constexpr Step M = Step::Freeze;
}  // namespace

TEST_CASE("parser expands runs and groups") {
    CHECK(parse_sequence("+^3") == ChoiceSequence{P, P, P});
    CHECK(parse_sequence("(+-)^2") == ChoiceSequence{P, M, P, M});
    CHECK(parse_sequence("+^2-^1(-+)+^1") == ChoiceSequence{P, P, M, M, P, P});
    CHECK(parse_sequence(" + ( - + ) ^ 2 ") == ChoiceSequence{P, M, P, M, P});
    CHECK(parse_sequence("((+)^2-)^2") == ChoiceSequence{P, P, M, P, P, M});
    CHECK(parse_sequence("+^10").size() == 10);
}

TEST_CASE("parser errors carry byte offsets") {
    auto offset_of = [](const char* text) -> std::size_t {
        try {
            parse_sequence(text);
        } catch (const ParseError& e) {
            return e.offset();
        }
        FAIL("no parse error for ", text);
        return 0;
    };
    CHECK(offset_of("+x") == 1);
    CHECK(offset_of("(+-") == 3);
    CHECK(offset_of("+)") == 1);
    CHECK(offset_of("+^") == 2);
    CHECK(offset_of("") == 0);
    CHECK_THROWS_AS(parse_sequence("+^0"), ParseError);
    CHECK_THROWS_AS(parse_sequence("()"), ParseError);
}

TEST_CASE("render compresses maximal runs and round-trips") {
    CHECK(render(ChoiceSequence{P, P, M, M, P, P}) == "+^2-^2+^2");
    CHECK(render(ChoiceSequence{P, M, P}) == "+-+");
    CHECK(render(ChoiceSequence{}) == "");

    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Step> steps(gen() % 30 + 1);
        for (auto& s : steps) s = gen() % 2 ? P : M;
        const ChoiceSequence seq(steps);
        CHECK(parse_sequence(render(seq)) == seq);
    }
}

TEST_CASE("from_signs accepts only unit steps") {
    CHECK(ChoiceSequence::from_signs({1, -1, 1}) == ChoiceSequence{P, M, P});
    CHECK_THROWS_AS(ChoiceSequence::from_signs({1, 0}), InvalidSequence);
}

TEST_CASE("walk profile and stopping time") {
    auto w = walk_profile({P, P, M});
    CHECK(w.s_values == std::vector<std::int64_t>{1, 2, 3, 2});
    CHECK(w.tau.is_infinite());

    w = walk_profile({P, M, M});
    CHECK(w.s_values == std::vector<std::int64_t>{1, 2, 1, 0});
    CHECK(w.tau == StoppingTime::at(3));

    w = walk_profile({M});
    CHECK(w.s_values == std::vector<std::int64_t>{1, 0});
    CHECK(w.tau == StoppingTime::at(1));

    // the walk keeps going below zero; tau remembers the first hit
    w = walk_profile({M, M, P});
    CHECK(w.s_values == std::vector<std::int64_t>{1, 0, -1, 0});
    CHECK(w.tau.value() == 1);
}

TEST_CASE("infinite stopping time exceeds every bound") {
    CHECK(StoppingTime::infinite().at_least(1'000'000));
    CHECK_FALSE(StoppingTime::at(3).at_least(4));
    CHECK(StoppingTime::at(3).at_least(3));
}

TEST_CASE("classification") {
    CHECK(classify({P, M, P, M}, 2).in_x_n);
    const auto c = classify({P, M, M}, 1);
    CHECK(c.valid);
    CHECK(c.in_x_n);  // tau = 3 = m
    CHECK_FALSE(classify({P, M, M}, 2).in_x_n);
    CHECK_FALSE(classify({M, P}, 1).valid);
    CHECK_FALSE(classify({M, P}, 1).in_x_n);
    CHECK(classify({M}, 0).valid);
    CHECK(classify({M}, 0).in_x_n);
    CHECK(classify({}, 0).in_x_n);
    CHECK_THROWS_AS(require_valid({P, M, M, P}), InvalidSequence);
}

TEST_CASE("steps change the walk by exactly one and membership implies validity") {
    for (std::size_t len = 0; len <= 12; ++len) {
        for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
            std::vector<Step> steps(len);
            for (std::size_t i = 0; i < len; ++i) steps[i] = (bits >> i) & 1 ? M : P;
            const ChoiceSequence seq(steps);
            const auto w = walk_profile(seq);
            REQUIRE(w.s_values.size() == len + 1);
            for (std::size_t j = 1; j <= len; ++j) CHECK(std::abs(w.s_values[j] - w.s_values[j - 1]) == 1);
            const auto cls = classify(seq, seq.attach_count());
            if (len >= 2 && cls.in_x_n) CHECK(cls.valid);
        }
    }
}

TEST_CASE("enumerators agree with a direct filter") {
    for (std::size_t len = 0; len <= 10; ++len) {
        std::size_t expected = 0;
        for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
            std::vector<Step> steps(len);
            for (std::size_t i = 0; i < len; ++i) steps[i] = (bits >> i) & 1 ? M : P;
            expected += is_valid(ChoiceSequence(steps));
        }
        const auto valid = enumerate_valid(len);
        CHECK(valid.size() == expected);
        for (const auto& s : valid) CHECK(is_valid(s));
    }

    const auto x2 = enumerate_x_n(2, 5);
    for (const auto& s : x2) {
        CHECK(classify(s, 2).in_x_n);
        CHECK(s.size() <= 5);
    }
    CHECK(std::find(x2.begin(), x2.end(), ChoiceSequence{P, P}) != x2.end());
    // walk 1,2,1,2,1,0 reaches zero exactly at the last step
    CHECK(std::find(x2.begin(), x2.end(), ChoiceSequence{P, M, P, M, M}) != x2.end());
    CHECK(std::find(x2.begin(), x2.end(), ChoiceSequence{P, M, M, P}) == x2.end());
    CHECK(std::find(x2.begin(), x2.end(), ChoiceSequence{P, M, P, M}) != x2.end());
}

TEST_CASE("sequence helpers") {
    const ChoiceSequence s{P, P, M, P};
    CHECK(s.attach_count() == 3);
    CHECK(s.freeze_count() == 1);
    CHECK(s.leading_attach_run() == 2);
    CHECK(repeat(ChoiceSequence{P, M}, 3) == parse_sequence("(+-)^3"));
    CHECK(repeat(P, 2).concat(repeat(M, 1)) == ChoiceSequence{P, P, M});
    CHECK(walk_profile(s).max_after_start() == 3);
}
