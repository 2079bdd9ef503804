#include "cantor/measure.hpp"

#include <utility>

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"

namespace cantor {

namespace {

void require_probability(const Rat& r, const char* what) {
    if (sgn(r) < 0 || r > 1) {
        throw PreconditionError(std::string(what) + " must lie in [0, 1], got " +
                                rat_string(r));
    }
}

class BernoulliKernel final : public MeasureKernel {
public:
    explicit BernoulliKernel(Rat theta) : theta_(std::move(theta)) {
        require_probability(theta_, "bernoulli parameter");
    }

    Rat mass(const Word& x) const override {
        return *mass_by_counts(x.length(), x.count_ones());
    }

    std::optional<Rat> mass_by_counts(long n, long k) const override {
        return rat_pow(theta_, static_cast<unsigned long>(k)) *
               rat_pow(1 - theta_, static_cast<unsigned long>(n - k));
    }

    ojson descriptor() const override {
        return ojson{{"type", "bernoulli"}, {"theta", rat_string(theta_)}};
    }

private:
    Rat theta_;
};

class MarkovKernel final : public MeasureKernel {
public:
    MarkovKernel(Rat initial, std::array<std::array<Rat, 2>, 2> t)
        : initial_(std::move(initial)), t_(std::move(t)) {
        require_probability(initial_, "markov initial probability");
        for (int a = 0; a < 2; ++a) {
            require_probability(t_[a][0], "markov transition");
            require_probability(t_[a][1], "markov transition");
            if (t_[a][0] + t_[a][1] != 1) {
                throw PreconditionError("markov transition row must sum to 1");
            }
        }
    }

    Rat mass(const Word& x) const override {
        if (x.empty()) {
            return Rat(1);
        }
        Rat out = x.bit(0) ? initial_ : Rat(1) - initial_;
        for (long i = 1; i < x.length(); ++i) {
            out *= t_[x.bit(i - 1)][x.bit(i)];
        }
        return out;
    }

    ojson descriptor() const override {
        return ojson{{"type", "markov"},
                     {"initial", rat_string(initial_)},
                     {"transitions",
                      ojson::array({ojson::array({rat_string(t_[0][0]), rat_string(t_[0][1])}),
                                    ojson::array({rat_string(t_[1][0]), rat_string(t_[1][1])})})}};
    }

private:
    Rat initial_;
    std::array<std::array<Rat, 2>, 2> t_;
};

class PointMassKernel final : public MeasureKernel {
public:
    explicit PointMassKernel(EventuallyPeriodic seq) : seq_(std::move(seq)) {}

    Rat mass(const Word& x) const override {
        return seq_.has_prefix(x) ? Rat(1) : Rat(0);
    }

    ojson descriptor() const override {
        return ojson{{"type", "pointmass"},
                     {"head", seq_.head.str()},
                     {"repeat", seq_.repeat.str()}};
    }

private:
    EventuallyPeriodic seq_;
};

class MixtureKernel final : public MeasureKernel {
public:
    MixtureKernel(std::vector<Rat> weights, std::vector<Measure> components)
        : weights_(std::move(weights)), components_(std::move(components)) {
        if (weights_.empty() || weights_.size() != components_.size()) {
            throw PreconditionError("mixture needs matching nonempty weights and components");
        }
        Rat total(0);
        for (const Rat& w : weights_) {
            if (sgn(w) <= 0) {
                throw PreconditionError("mixture weights must be positive");
            }
            total += w;
        }
        if (total != 1) {
            throw PreconditionError("mixture weights must sum to 1, got " +
                                    rat_string(total));
        }
    }

    Rat mass(const Word& x) const override {
        Rat out(0);
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            out += weights_[i] * components_[i].mass(x);
        }
        return out;
    }

    std::optional<Rat> mass_by_counts(long n, long k) const override {
        Rat out(0);
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            const auto part = components_[i].mass_by_counts(n, k);
            if (!part) {
                return std::nullopt;
            }
            out += weights_[i] * *part;
        }
        return out;
    }

    ojson descriptor() const override {
        ojson weights = ojson::array();
        ojson comps = ojson::array();
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            weights.push_back(rat_string(weights_[i]));
            comps.push_back(components_[i].descriptor());
        }
        return ojson{{"type", "mixture"}, {"weights", weights}, {"components", comps}};
    }

private:
    std::vector<Rat> weights_;
    std::vector<Measure> components_;
};

class UniformIntervalKernel final : public MeasureKernel {
public:
    explicit UniformIntervalKernel(DyadicInterval interval)
        : interval_(std::move(interval)) {
        if (interval_.empty() || sgn(interval_.lower) < 0 || interval_.upper > 1) {
            throw PreconditionError("uniform_on needs a nonempty subinterval of [0, 1)");
        }
    }

    Rat mass(const Word& x) const override {
        return interval_.intersect(DyadicInterval::of_word(x)).length() /
               interval_.length();
    }

    ojson descriptor() const override {
        return ojson{{"type", "uniform_interval"},
                     {"lower", rat_string(interval_.lower)},
                     {"upper", rat_string(interval_.upper)}};
    }

private:
    DyadicInterval interval_;
};

}  // namespace

Measure::Measure(std::shared_ptr<const MeasureKernel> kernel)
    : kernel_(std::move(kernel)) {
    if (!kernel_) {
        throw PreconditionError("measure without a kernel");
    }
}

Rat Measure::mass(const Word& x) const {
    return kernel_->mass(x);
}

std::optional<Rat> Measure::mass_by_counts(long n, long k) const {
    return kernel_->mass_by_counts(n, k);
}

bool Measure::exchangeable() const {
    return kernel_->mass_by_counts(1, 0).has_value();
}

ojson Measure::descriptor() const {
    return kernel_->descriptor();
}

Measure bernoulli(const Rat& theta) {
    return Measure(std::make_shared<BernoulliKernel>(theta));
}

Measure uniform() {
    return bernoulli(make_rat(1, 2));
}

Measure markov(const Rat& initial, const std::array<std::array<Rat, 2>, 2>& transitions) {
    return Measure(std::make_shared<MarkovKernel>(initial, transitions));
}

Measure point_mass(const EventuallyPeriodic& sequence) {
    return Measure(std::make_shared<PointMassKernel>(sequence));
}

Measure finite_mixture(const std::vector<Rat>& weights,
                       const std::vector<Measure>& components) {
    return Measure(std::make_shared<MixtureKernel>(weights, components));
}

Measure uniform_on(const DyadicInterval& interval) {
    return Measure(std::make_shared<UniformIntervalKernel>(interval));
}

Rat evaluate(const Measure& m, const Word& x) {
    require_word_length(x.length(), "evaluate");
    return m.mass(x);
}

AdditivityReport validate_additivity(const Measure& m, long depth) {
    require_enumerable(depth, "validate_additivity");
    AdditivityReport report;
    report.depth = depth;
    report.total_mass_ok = (m.mass(Word()) == 1);
    for (long d = 0; d < depth; ++d) {
        for (const Word& x : partition(d)) {
            const Rat parent = m.mass(x);
            const Rat left = m.mass(x.extended(0));
            const Rat right = m.mass(x.extended(1));
            ++report.checked;
            if (sgn(parent) < 0 || sgn(left) < 0 || sgn(right) < 0) {
                report.nonnegative = false;
            }
            if (parent != left + right) {
                report.violations.push_back({x, parent, left, right});
            }
        }
    }
    return report;
}

Rat total_variation_at_depth(const Measure& p, const Measure& q, long n) {
    if (n < 0) {
        throw PreconditionError("total variation depth must be nonnegative");
    }
    Rat sum(0);
    if (p.exchangeable() && q.exchangeable()) {
        // Within a count class the masses are constant, so the partition sum
        // collapses to n+1 binomial-weighted terms.
        for (long k = 0; k <= n; ++k) {
            const Rat pk = *p.mass_by_counts(n, k);
            const Rat qk = *q.mass_by_counts(n, k);
            sum += Rat(binomial(static_cast<unsigned long>(n),
                                static_cast<unsigned long>(k))) *
                   abs(pk - qk);
        }
    } else {
        require_enumerable(n, "total_variation_at_depth");
        for (const Word& x : partition(n)) {
            sum += abs(p.mass(x) - q.mass(x));
        }
    }
    return sum / 2;
}

Word sample_with(const Measure& m, long length, BitStream& bits) {
    require_word_length(length, "sample");
    Word prefix;
    Rat prefix_mass = m.mass(prefix);
    if (prefix_mass != 1) {
        throw PreconditionError("sample requires a probability measure (empty-word mass 1)");
    }
    for (long i = 0; i < length; ++i) {
        const Word one = prefix.extended(1);
        const Rat one_mass = m.mass(one);
        const bool b = bits.bernoulli(one_mass / prefix_mass);
        if (b) {
            prefix = one;
            prefix_mass = one_mass;
        } else {
            prefix = prefix.extended(0);
            prefix_mass = prefix_mass - one_mass;
        }
    }
    return prefix;
}

Word sample(const Measure& m, long length, std::uint64_t seed) {
    BitStream bits(seed);
    return sample_with(m, length, bits);
}

}  // namespace cantor
