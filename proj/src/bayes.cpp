#include "cantor/bayes.hpp"

#include <memory>
#include <utility>

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"

namespace cantor {

namespace {

class ConditionalSliceKernel final : public MeasureKernel {
public:
    ConditionalSliceKernel(Joint joint, Word y, Rat normalizer)
        : joint_(std::move(joint)), y_(std::move(y)), z_(std::move(normalizer)) {}

    Rat mass(const Word& x) const override {
        return joint_.mass2(x, y_) / z_;
    }

    std::optional<Rat> mass_by_counts(long n, long k) const override {
        const auto raw = joint_.slice_mass_by_counts(y_, n, k);
        if (!raw) {
            return std::nullopt;
        }
        return *raw / z_;
    }

    ojson descriptor() const override {
        return ojson{{"type", "conditional"},
                     {"joint", joint_.descriptor()},
                     {"y", y_.str()}};
    }

private:
    Joint joint_;
    Word y_;
    Rat z_;
};

class PosteriorSliceKernel final : public MeasureKernel {
public:
    PosteriorSliceKernel(Joint joint, Word x, Rat normalizer)
        : joint_(std::move(joint)), x_(std::move(x)), z_(std::move(normalizer)) {}

    Rat mass(const Word& y) const override {
        return joint_.mass2(x_, y) / z_;
    }

    ojson descriptor() const override {
        return ojson{{"type", "posterior"},
                     {"joint", joint_.descriptor()},
                     {"x", x_.str()}};
    }

private:
    Joint joint_;
    Word x_;
    Rat z_;
};

}  // namespace

Measure conditional(const Joint& joint, const Word& y) {
    Rat z = joint.mass2(Word(), y);
    if (sgn(z) <= 0) {
        throw NullConditioningError("conditioning on zero-mass cylinder y=\"" +
                                    y.str() + "\"");
    }
    return Measure(std::make_shared<ConditionalSliceKernel>(joint, y, std::move(z)));
}

Measure marginal_x(const Joint& joint) {
    return conditional(joint, Word());
}

Measure posterior(const Joint& joint, const Word& x) {
    Rat z = joint.mass2(x, Word());
    if (sgn(z) <= 0) {
        throw NullConditioningError("posterior at zero-mass cylinder x=\"" +
                                    x.str() + "\"");
    }
    return Measure(std::make_shared<PosteriorSliceKernel>(joint, x, std::move(z)));
}

Measure marginal_y(const Joint& joint) {
    return posterior(joint, Word());
}

std::optional<Measure> limit_conditional(const Joint& joint,
                                         const EventuallyPeriodic& target) {
    auto kernel = joint.limit_conditional_kernel(target);
    if (!kernel) {
        return std::nullopt;
    }
    return Measure(std::move(kernel));
}

std::vector<Rat> martingale_sequence(const Joint& joint, const Word& x,
                                     const EventuallyPeriodic& target,
                                     long n_max) {
    if (n_max < 0) {
        throw PreconditionError("martingale length must be nonnegative");
    }
    require_word_length(n_max, "martingale_sequence");
    std::vector<Rat> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (long n = 0; n <= n_max; ++n) {
        const Word prefix = target.prefix(n);
        const Rat z = joint.mass2(Word(), prefix);
        if (sgn(z) <= 0) {
            throw NullConditioningError(
                "martingale hit a zero-mass parameter cylinder at depth " +
                std::to_string(n));
        }
        out.push_back(joint.mass2(x, prefix) / z);
    }
    return out;
}

Rat mixture_residual(const Joint& joint, const Word& x, long n) {
    require_enumerable(n, "mixture_residual");
    Rat total(0);
    for (const Word& y : partition(n)) {
        total += joint.mass2(x, y);
    }
    return joint.mass2(x, Word()) - total;
}

Word map_estimate(const Joint& joint, const Word& x, long k) {
    require_enumerable(k, "map_estimate");
    if (sgn(joint.mass2(x, Word())) <= 0) {
        throw NullConditioningError(
            "MAP estimate undefined: x-cylinder has zero mass");
    }
    std::optional<Word> best;
    Rat best_mass(0);
    for (const Word& y : partition(k)) {
        const Rat mass = joint.mass2(x, y);
        // Lexicographic enumeration order makes the first strict maximum the
        // lexicographically least argmax.
        if (!best || mass > best_mass) {
            best = y;
            best_mass = mass;
        }
    }
    return *best;
}

}  // namespace cantor
