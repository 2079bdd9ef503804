#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cantor/bayes.hpp"
#include "cantor/joint.hpp"
#include "cantor/measure.hpp"

namespace cantor {

// A finite effectivized test: levels 1..N, each an antichain of words whose
// cylinder union is the level's critical region. A valid test against P has
// nested unions and strict mass bounds P(level n) < 2^{-n}.
struct FiniteTest {
    std::vector<std::vector<Word>> levels;  // levels[i] is level i+1

    long max_level() const { return static_cast<long>(levels.size()); }
    long max_word_length() const;
};

struct TestViolation {
    long level = 0;
    std::string kind;  // "antichain" | "nesting" | "mass"
    std::string detail;
};

struct TestValidationReport {
    bool ok = true;
    std::vector<TestViolation> violations;
    std::vector<Rat> level_masses;  // mass of level n at index n-1
};

// Checks antichain structure, nesting of cylinder unions, and the strict
// mass bound of every level against the measure.
TestValidationReport validate_test(const FiniteTest& test, const Measure& m);

// Number of levels whose union contains the sequence continuation of x.
// Throws PreconditionError when some membership is not decided by x (x a
// proper prefix of a level word without being covered).
long indicator_sum(const FiniteTest& test, const Word& x);

struct TransferResult {
    FiniteTest test;               // levels V_1..V_k_max of depth-d words
    long d = 0;                    // max word length of the source test
    Rat hypothesis_sum;            // sum of conditional level masses of the source
    long bound = 0;                // the hypothesis bound M
    std::vector<Rat> conditional_masses;  // P(V_k | y), index k-1
    bool bounds_ok = true;         // every P(V_k | y) <= 2^{-k}
};

// Test transfer along a conditioning word: verifies the hypothesis
// sum_{n<=N} P(level n | y) <= M exactly, then forms V_k = {depth-d words on
// which the level indicator sum exceeds M 2^k}. The Markov bound gives
// P(V_k | y) <= 2^{-k}, recorded per level.
TransferResult transfer_test(const FiniteTest& test, const Joint& joint,
                             const Word& y, long M, long k_max);

struct CounterexampleLevel {
    std::vector<Word> words;     // depth-d words with r(word) < threshold
    Rat threshold;               // r(a_I) + 1/n
    Rat limit_conditional_mass;  // mass under the 1^inf limit conditional
    Rat mass_bound;              // (1/n + 2^{-depth}) / (1 - alpha)
    bool within_bound = true;
};

// Level n of the critical-region family U_n = {s : r(s) < r(a_I) + 1/n},
// realized at the given depth, with its exact mass under the limit
// conditional (uniform on [alpha, 1) scaled by 1/(1-alpha)).
CounterexampleLevel counterexample_test_level(const CounterexampleSpec& spec,
                                              long n, long depth);

// A test over the product space: levels of pairwise-disjoint product
// cylinders.
struct ProductFiniteTest {
    std::vector<std::vector<std::pair<Word, Word>>> levels;

    long max_level() const { return static_cast<long>(levels.size()); }
};

// Levels 1..max_level with level n = {(x, x) : |x| = n}: the shrinking
// covers of the diagonal. Level n has joint mass exactly 2^{-n} under the
// product of uniforms.
ProductFiniteTest diagonal_test(long max_level);

// Sum of mass2 over the level's pairs; callers ensure disjointness
// (validate_product_test checks it).
Rat product_level_mass(const Joint& joint,
                       const std::vector<std::pair<Word, Word>>& level);

struct ProductTestValidationReport {
    bool ok = true;
    std::vector<TestViolation> violations;  // kinds: "overlap" | "nesting" | "mass"
    std::vector<Rat> level_masses;
};

// Disjointness per level, componentwise-prefix nesting between consecutive
// levels, and the strict mass bound.
ProductTestValidationReport validate_product_test(const ProductFiniteTest& test,
                                                  const Joint& joint);

enum class DeficiencyKind { Finite, PlusInfinity, MinusInfinity };

struct Deficiency {
    DeficiencyKind kind = DeficiencyKind::Finite;
    Rat bits;  // log2 of the mixture/target ratio, on a 10^{-6} grid
};

// Randomness deficiency of x for P relative to a weighted pool of candidate
// measures: log2(sum_i w_i pool_i(x) / P(x)). Exactly zero when the ratio is
// one; infinite kinds mark zero masses on either side.
Deficiency deficiency(const Word& x, const Measure& target,
                      const std::vector<Measure>& pool,
                      const std::vector<Rat>& weights);

}  // namespace cantor
