#include <doctest.h>

#include <sstream>

#include "frostree/exact_oracle.hpp"

using namespace frostree;

namespace {
constexpr Step P = Step::Attach;
constexpr Step M = Step::Freeze;

mpq_class q(long a, long b) { return mpq_class(a, b); }

const ExactDistribution kR3({{1, q(1, 6)}, {2, q(2, 3)}, {3, q(1, 6)}});
const ExactDistribution kA3({{1, q(1, 4)}, {2, q(1, 2)}, {3, q(1, 4)}});
}  // namespace

TEST_CASE("forward DP on the reference sequences") {
    CHECK(exact_height_distribution_forward({P, P}) == ExactDistribution({{1, q(1, 2)}, {2, q(1, 2)}}));
    CHECK(exact_height_distribution_forward(repeat(P, 3)) == kR3);
    CHECK(exact_height_distribution_forward(parse_sequence("(+-)^3")) == kA3);
    CHECK(exact_height_distribution_forward({}) == ExactDistribution::point(0));
    CHECK(exact_height_distribution_forward({P, M, M}) == ExactDistribution::point(1));
    CHECK_THROWS_AS(exact_height_distribution_forward({M, P}), InvalidSequence);
}

TEST_CASE("reverse enumeration on the reference sequences") {
    const ExactDistribution half({{1, q(1, 2)}, {2, q(1, 2)}});
    CHECK(exact_height_distribution_reverse({P, P}) == half);
    CHECK(exact_height_distribution_reverse({P, M, P}) == half);
    CHECK(exact_height_distribution_reverse({P, P, M, P}) == exact_height_distribution_forward({P, P, M, P}));
    CHECK(exact_height_distribution_reverse({M}) == ExactDistribution::point(0));
    CHECK_THROWS_AS(exact_height_distribution_reverse(repeat(P, 9)), StateSpaceExceeded);
    OracleOptions wide;
    wide.reverse_max_length = 10;
    CHECK(exact_height_distribution_reverse(repeat(P, 9), wide) == exact_height_distribution_forward(repeat(P, 9)));
}

TEST_CASE("memoised laws agree with path-by-path enumeration") {
    for (std::size_t len = 0; len <= 5; ++len) {
        for (const auto& seq : enumerate_valid(len)) {
            const auto dp = exact_height_distribution_forward(seq);
            CHECK_MESSAGE(dp == brute_force_forward(seq), render(seq));
            CHECK_MESSAGE(exact_height_distribution_reverse(seq) == brute_force_reverse(seq), render(seq));
            check_normalized(dp);
        }
    }
}

TEST_CASE("small-height probabilities") {
    mpz_class fact = 1;
    mpz_class pow2 = 1;
    for (unsigned n = 1; n <= 6; ++n) {
        fact *= n;
        if (n > 1) pow2 *= 2;
        CHECK(exact_height_distribution_forward(repeat(P, n)).mass(1) == mpq_class(1, fact));
        CHECK(exact_height_distribution_forward(repeat(ChoiceSequence{P, M}, n)).mass(1) == mpq_class(1, pow2));
    }
}

TEST_CASE("state cap") {
    OracleOptions tiny;
    tiny.state_cap = 3;
    CHECK_THROWS_AS(exact_height_distribution_forward(repeat(P, 8), tiny), StateSpaceExceeded);
    CHECK_THROWS_AS(brute_force_forward(repeat(P, 8), 100), StateSpaceExceeded);
}

TEST_CASE("stochastic dominance") {
    const ExactDistribution half({{1, q(1, 2)}, {2, q(1, 2)}});
    CHECK(stochastic_dominates(half, ExactDistribution::point(1)));
    CHECK_FALSE(stochastic_dominates(ExactDistribution::point(1), half));
    CHECK_FALSE(stochastic_dominates(kA3, kR3));
    CHECK_FALSE(stochastic_dominates(kR3, kA3));
    CHECK(stochastic_dominates(kR3, kR3));

    // transitivity on a chain of point masses and mixtures
    const std::vector<ExactDistribution> chain{ExactDistribution::point(1), half, kR3,
                                               ExactDistribution::point(3)};
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = 0; j < chain.size(); ++j)
            for (std::size_t k = 0; k < chain.size(); ++k)
                if (stochastic_dominates(chain[i], chain[j]) && stochastic_dominates(chain[j], chain[k]))
                    CHECK(stochastic_dominates(chain[i], chain[k]));
}

TEST_CASE("A_n and R_n cross for n = 3, 4, 5") {
    for (std::size_t n = 3; n <= 5; ++n) {
        const auto a = exact_height_distribution_forward(repeat(ChoiceSequence{P, M}, n));
        const auto r = exact_height_distribution_forward(repeat(P, n));
        CHECK_FALSE(stochastic_dominates(a, r));
        CHECK_FALSE(stochastic_dominates(r, a));
    }
}

TEST_CASE("dominance with a floor") {
    CHECK(dominance_with_floor(kR3, kA3, 3));
    CHECK(dominance_with_floor(kR3, kA3, 0) == stochastic_dominates(kA3, kR3));
    // max(1, H(A_3)) keeps the law of A_3, which does not dominate R_3; a floor of 2 does
    CHECK_FALSE(dominance_with_floor(kR3, kA3, 1));
    CHECK(dominance_with_floor(kR3, kA3, 2));
}

TEST_CASE("min_floor_search") {
    CHECK(min_floor_search(3, {repeat(P, 3)}) == 0);
    CHECK(min_floor_search(3, {repeat(ChoiceSequence{P, M}, 3)}) == 2);
    CHECK(min_floor_search(4, {repeat(P, 4)}) == 0);
    const auto family = enumerate_x_n(3, 7);
    const std::uint32_t h = min_floor_search(3, family);
    CHECK(h >= 2);
    CHECK(h <= 3);
    CHECK_THROWS_AS(min_floor_search(3, {repeat(P, 2)}), InvalidSequence);
}

TEST_CASE("Bernoulli sum law") {
    CHECK(bernoulli_sum_law({}) == ExactDistribution::point(0));
    CHECK(bernoulli_sum_law({q(1, 2), q(1, 2)}) ==
          ExactDistribution({{0, q(1, 4)}, {1, q(1, 2)}, {2, q(1, 4)}}));
    CHECK_THROWS_AS(bernoulli_sum_law({q(3, 2)}), DomainError);
}

TEST_CASE("JSON and CSV encodings") {
    const ExactDistribution law = exact_height_distribution_forward(repeat(P, 12));
    const std::string text = to_json(law);
    CHECK(exact_distribution_from_json(text) == law);
    CHECK(to_json(kR3) == R"({"mass_den":[6,3,6],"mass_num":[1,2,1],"support":[1,2,3]})");

    // a numerator beyond 64 bits travels as a string
    ExactDistribution big;
    mpz_class den = 1;
    den <<= 80;
    big.add(0, mpq_class(den - 1, den));
    big.add(1, mpq_class(1, den));
    const std::string big_text = to_json(big);
    CHECK(big_text.find('"' + den.get_str() + '"') != std::string::npos);
    CHECK(exact_distribution_from_json(big_text) == big);

    std::ostringstream os;
    write_csv(os, kR3);
    CHECK(os.str() == "height,probability\n1,1/6\n2,2/3\n3,1/6\n");
    std::ostringstream fs;
    write_csv(fs, EmpiricalDistribution({{1, 0.25}, {2, 0.75}}));
    CHECK(fs.str() == "height,probability\n1,0.25\n2,0.75\n");
}

TEST_CASE("normalisation checks") {
    CHECK_THROWS(check_normalized(ExactDistribution({{1, q(1, 2)}})));
    CHECK_NOTHROW(check_normalized(kA3));
    CHECK_THROWS(check_normalized(EmpiricalDistribution({{1, 0.5}})));
    CHECK(kR3.support_max() == 3);
    CHECK(kR3.cdf(2) == q(5, 6));
    CHECK(kR3.mean() == 2);
}
