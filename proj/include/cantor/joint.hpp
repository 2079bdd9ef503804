#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cantor/measure.hpp"
#include "cantor/word.hpp"

namespace cantor {

// Evaluation contract for a joint probability measure on the product of two
// Cantor spaces: exact mass of product cylinders. Additivity must hold in
// each coordinate separately.
class JointKernel {
public:
    virtual ~JointKernel() = default;

    virtual Rat mass2(const Word& x, const Word& y) const = 0;

    // Exchangeable x-slices: mass2 for one representative length-n x with k
    // ones at fixed y, when that value does not depend on the arrangement.
    virtual std::optional<Rat> slice_mass_by_counts(const Word& y, long n,
                                                    long k) const {
        (void)y;
        (void)n;
        (void)k;
        return std::nullopt;
    }

    // Exact evaluator for the limit conditional P(. | y-sequence) where the
    // construction admits a closed form; null otherwise.
    virtual std::shared_ptr<const MeasureKernel> limit_conditional_kernel(
        const EventuallyPeriodic& target) const {
        (void)target;
        return nullptr;
    }

    virtual ojson descriptor() const = 0;
};

class Joint {
public:
    explicit Joint(std::shared_ptr<const JointKernel> kernel);

    Rat mass2(const Word& x, const Word& y) const;
    std::optional<Rat> slice_mass_by_counts(const Word& y, long n, long k) const;
    std::shared_ptr<const MeasureKernel> limit_conditional_kernel(
        const EventuallyPeriodic& target) const;
    ojson descriptor() const;
    const std::shared_ptr<const JointKernel>& kernel() const { return kernel_; }

private:
    std::shared_ptr<const JointKernel> kernel_;
};

// Independent coordinates: mass2(x, y) = p(x) q(y).
Joint product_joint(const Measure& x_measure, const Measure& y_measure);

// Uniform prior on the parameter coordinate; mass2(x, y) integrates the
// Bernoulli likelihood theta^{#1(x)} (1-theta)^{#0(x)} over the dyadic
// parameter interval of y. All integrals are exact rationals.
Joint beta_bernoulli_joint();

// Parameters of the inconsistent-prior construction: a strictly increasing
// finite prefix a_1..a_I of dyadic approximants together with their limit
// alpha (supplied exactly for tail computation), r(a_I) < alpha < 1.
struct CounterexampleSpec {
    std::vector<Word> approximants;
    Rat alpha;

    static CounterexampleSpec make(std::vector<Word> approximants, Rat alpha);

    long count() const { return static_cast<long>(approximants.size()); }
    // r(a_i) with r(a_0) = 0; requires 0 <= i <= count().
    Rat r(long i) const;
    // Parameter block B_i = [r(a_{i-1}), r(a_i)), 1 <= i <= count().
    DyadicInterval block(long i) const;
    long max_approximant_length() const;
};

// The two-coordinate measure placing the uniform mass of block B_i on the
// sequence 1^i 0^infinity and the mass of [alpha, 1) on 1^infinity.
// Evaluation that would depend on approximants beyond index I throws
// InsufficientApproximantsError instead of guessing.
Joint counterexample_joint(const CounterexampleSpec& spec);

// P_Y of the all-ones cylinder of depth k: 1 - r(a_{k-1}).
// Computable for k <= I+1; beyond that the value depends on unsupplied
// approximants and InsufficientApproximantsError is thrown.
Rat y_tail_mass(const CounterexampleSpec& spec, long k);
// The limit of y_tail_mass as k grows: 1 - alpha.
Rat y_tail_limit(const CounterexampleSpec& spec);

struct Additivity2Violation {
    Word x;
    Word y;
    char coordinate;  // 'x' or 'y': which split failed
    Rat parent;
    Rat left;
    Rat right;
};

struct Additivity2Report {
    long depth_x = 0;
    long depth_y = 0;
    long checked = 0;
    bool total_mass_ok = true;  // mass2(empty, empty) == 1
    bool nonnegative = true;
    std::vector<Additivity2Violation> violations;

    bool ok() const { return total_mass_ok && nonnegative && violations.empty(); }
};

// Checks both coordinate splits of mass2 exactly for every |x| <= depth_x,
// |y| <= depth_y (children reach one level deeper).
Additivity2Report validate_additivity2(const Joint& joint, long depth_x,
                                       long depth_y);

}  // namespace cantor
