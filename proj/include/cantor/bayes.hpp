#pragma once

#include <optional>
#include <vector>

#include "cantor/joint.hpp"
#include "cantor/measure.hpp"

namespace cantor {

// P(. | y): x-slice of the joint through the parameter cylinder y, normalized
// by mass2(empty, y). Throws NullConditioningError on a zero-mass cylinder.
// conditional(J, empty) is the x-marginal.
Measure conditional(const Joint& joint, const Word& y);
Measure marginal_x(const Joint& joint);

// P(. | x) over parameter words: y-slice normalized by mass2(x, empty).
// posterior(J, empty) is the y-marginal.
Measure posterior(const Joint& joint, const Word& x);
Measure marginal_y(const Joint& joint);

// Exact evaluator for the limit conditional along an eventually periodic
// parameter sequence, where the joint admits a closed form.
std::optional<Measure> limit_conditional(const Joint& joint,
                                         const EventuallyPeriodic& target);

// Entry n (0 <= n <= n_max) is conditional(J, target prefix of length n)
// evaluated at x: the martingale whose limit defines P(x | y-sequence).
std::vector<Rat> martingale_sequence(const Joint& joint, const Word& x,
                                     const EventuallyPeriodic& target,
                                     long n_max);

// P_X(x) - sum_{|y|=n} mass2(x, y); identically zero for a measure that is
// the mixture of its slices. Budget-checked enumeration.
Rat mixture_residual(const Joint& joint, const Word& x, long n);

// Lexicographically least maximizer of the posterior over words of length k.
Word map_estimate(const Joint& joint, const Word& x, long k);

}  // namespace cantor
