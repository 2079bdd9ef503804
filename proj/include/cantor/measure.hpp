#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"

#include "cantor/random.hpp"
#include "cantor/rational.hpp"
#include "cantor/word.hpp"

namespace cantor {

using ojson = nlohmann::ordered_json;

// Evaluation contract for a probability measure on Cantor space: the exact
// mass of each cylinder. Implementations must satisfy mass(empty) == 1 and
// mass(x) == mass(x0) + mass(x1); validate_additivity checks this per depth.
class MeasureKernel {
public:
    virtual ~MeasureKernel() = default;

    virtual Rat mass(const Word& x) const = 0;

    // Exchangeable fast path: when the mass of a word depends only on its
    // length and number of ones, returns the mass of one representative
    // length-n word with k ones. Enables O(n) total variation at depth n.
    virtual std::optional<Rat> mass_by_counts(long n, long k) const {
        (void)n;
        (void)k;
        return std::nullopt;
    }

    // Canonical serializable description of the measure.
    virtual ojson descriptor() const = 0;
};

// Value-semantic handle; kernels are immutable and shareable.
class Measure {
public:
    explicit Measure(std::shared_ptr<const MeasureKernel> kernel);

    Rat mass(const Word& x) const;
    std::optional<Rat> mass_by_counts(long n, long k) const;
    bool exchangeable() const;
    ojson descriptor() const;
    const std::shared_ptr<const MeasureKernel>& kernel() const { return kernel_; }

private:
    std::shared_ptr<const MeasureKernel> kernel_;
};

// Model families.
Measure bernoulli(const Rat& theta);
Measure uniform();
// `initial` is the probability that the first bit is 1; transitions[a][b] is
// the probability of bit b after bit a, rows summing to 1.
Measure markov(const Rat& initial, const std::array<std::array<Rat, 2>, 2>& transitions);
Measure point_mass(const EventuallyPeriodic& sequence);
Measure finite_mixture(const std::vector<Rat>& weights,
                       const std::vector<Measure>& components);
// Uniform distribution renormalized to a subinterval of [0, 1); the cylinder
// mass is the overlap length divided by the interval length.
Measure uniform_on(const DyadicInterval& interval);

// Single-cylinder evaluation (bounded by the word-length cap, not the
// enumeration budget, since no sweep is involved).
Rat evaluate(const Measure& m, const Word& x);

struct AdditivityViolation {
    Word x;
    Rat parent;
    Rat left;
    Rat right;
};

struct AdditivityReport {
    long depth = 0;
    long checked = 0;
    bool total_mass_ok = true;   // mass(empty) == 1
    bool nonnegative = true;
    std::vector<AdditivityViolation> violations;

    bool ok() const { return total_mass_ok && nonnegative && violations.empty(); }
};

// Checks mass(x) == mass(x0) + mass(x1) exactly for every |x| < depth, plus
// unit total mass and nonnegativity of every inspected cylinder.
AdditivityReport validate_additivity(const Measure& m, long depth);

// (1/2) sum_{|x|=n} |p(x) - q(x)|. Uses count-of-ones aggregation when both
// measures are exchangeable (cost O(n)); otherwise enumerates the depth-n
// partition under the budget.
Rat total_variation_at_depth(const Measure& p, const Measure& q, long n);

// Draws `length` bits; bit i is 1 with exact conditional probability
// mass(prefix.1)/mass(prefix) given the sampled prefix.
Word sample(const Measure& m, long length, std::uint64_t seed);
Word sample_with(const Measure& m, long length, BitStream& bits);

}  // namespace cantor
