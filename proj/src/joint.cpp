#include "cantor/joint.hpp"

#include <map>
#include <mutex>
#include <tuple>
#include <utility>

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Exact integral of theta^k (1-theta)^m over [a, b], by expanding the factor
// with the smaller exponent binomially. Cost O(min(k, m)) rational terms.
Rat beta_slice_integral(long k, long m, const Rat& a, const Rat& b) {
    if (m > k) {
        // Substitute u = 1 - theta.
        return beta_slice_integral(m, k, 1 - b, 1 - a);
    }
    // integral = sum_j C(m,j) (-1)^j (b^{k+j+1} - a^{k+j+1}) / (k+j+1)
    Rat out(0);
    for (long j = 0; j <= m; ++j) {
        const unsigned long e = static_cast<unsigned long>(k + j + 1);
        Rat term = Rat(binomial(static_cast<unsigned long>(m),
                                static_cast<unsigned long>(j))) *
                   (rat_pow(b, e) - rat_pow(a, e)) / Rat(k + j + 1);
        if (j % 2 == 0) {
            out += term;
        } else {
            out -= term;
        }
    }
    return out;
}

class ProductJointKernel final : public JointKernel {
public:
    ProductJointKernel(Measure p, Measure q)
        : p_(std::move(p)), q_(std::move(q)) {}

    Rat mass2(const Word& x, const Word& y) const override {
        return p_.mass(x) * q_.mass(y);
    }

    std::optional<Rat> slice_mass_by_counts(const Word& y, long n,
                                            long k) const override {
        const auto part = p_.mass_by_counts(n, k);
        if (!part) {
            return std::nullopt;
        }
        return q_.mass(y) * *part;
    }

    std::shared_ptr<const MeasureKernel> limit_conditional_kernel(
        const EventuallyPeriodic& target) const override {
        (void)target;
        return p_.kernel();
    }

    ojson descriptor() const override {
        return ojson{{"type", "product"},
                     {"x", p_.descriptor()},
                     {"y", q_.descriptor()}};
    }

private:
    Measure p_;
    Measure q_;
};

class BetaBernoulliKernel final : public JointKernel {
public:
    Rat mass2(const Word& x, const Word& y) const override {
        return cached_integral(y, x.count_ones(), x.length() - x.count_ones());
    }

    std::optional<Rat> slice_mass_by_counts(const Word& y, long n,
                                            long k) const override {
        if (n < 0 || k < 0 || k > n) {
            throw PreconditionError("count slice outside 0 <= k <= n");
        }
        // Whole-row computation: all count slices at depth n cost O(n)
        // together, which keeps total variation at depths in the thousands
        // tractable.
        const std::pair<std::string, long> key(y.str(), n);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const auto it = row_cache_.find(key);
            if (it != row_cache_.end()) {
                return it->second[static_cast<size_t>(k)];
            }
        }
        std::vector<Rat> row = integral_row(n, DyadicInterval::of_word(y));
        std::lock_guard<std::mutex> lock(mutex_);
        return row_cache_.emplace(key, std::move(row))
            .first->second[static_cast<size_t>(k)];
    }

    std::shared_ptr<const MeasureKernel> limit_conditional_kernel(
        const EventuallyPeriodic& target) const override {
        // Shrinking parameter cylinders drive the slice to the Bernoulli
        // kernel at the limit parameter value, which is rational for an
        // eventually periodic target.
        return bernoulli(target.value()).kernel();
    }

    ojson descriptor() const override {
        return ojson{{"type", "beta_bernoulli"}};
    }

private:
    Rat cached_integral(const Word& y, long k, long m) const {
        const std::tuple<std::string, long, long> key(y.str(), k, m);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const auto it = cache_.find(key);
            if (it != cache_.end()) {
                return it->second;
            }
        }
        const DyadicInterval iy = DyadicInterval::of_word(y);
        Rat value = beta_slice_integral(k, m, iy.lower, iy.upper);
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, std::move(value)).first->second;
    }

    // R_k(x) = sum_{j>k} C(n+1,j) x^j (1-x)^{n+1-j} for k = 0..n; its
    // endpoint difference divided by (n+1) C(n,k) is the integral of
    // theta^k (1-theta)^{n-k} over [a, b] (regularized incomplete Beta).
    static std::vector<Rat> binomial_tails(long n, const Rat& x) {
        std::vector<Rat> g(static_cast<size_t>(n) + 2, Rat(0));
        if (sgn(x) == 0) {
            g[0] = 1;
        } else if (x == 1) {
            g[static_cast<size_t>(n) + 1] = 1;
        } else {
            g[0] = rat_pow(1 - x, static_cast<unsigned long>(n + 1));
            const Rat odds = x / (1 - x);
            for (long j = 0; j <= n; ++j) {
                g[static_cast<size_t>(j) + 1] =
                    g[static_cast<size_t>(j)] * odds * Rat(n + 1 - j) / Rat(j + 1);
            }
        }
        std::vector<Rat> tails(static_cast<size_t>(n) + 1);
        Rat running(0);
        for (long k = n; k >= 0; --k) {
            running += g[static_cast<size_t>(k) + 1];
            tails[static_cast<size_t>(k)] = running;
        }
        return tails;
    }

    static std::vector<Rat> integral_row(long n, const DyadicInterval& iy) {
        const std::vector<Rat> upper = binomial_tails(n, iy.upper);
        const std::vector<Rat> lower = binomial_tails(n, iy.lower);
        std::vector<Rat> row(static_cast<size_t>(n) + 1);
        Int choose(1);
        for (long k = 0; k <= n; ++k) {
            if (k > 0) {
                choose = choose * (n - k + 1) / k;
            }
            row[static_cast<size_t>(k)] =
                (upper[static_cast<size_t>(k)] - lower[static_cast<size_t>(k)]) /
                (Rat(n + 1) * Rat(choose));
        }
        return row;
    }

    mutable std::mutex mutex_;
    mutable std::map<std::tuple<std::string, long, long>, Rat> cache_;
    mutable std::map<std::pair<std::string, long>, std::vector<Rat>> row_cache_;
};

// Shape of a parameter word: j leading ones followed either by the word's
// end or by zeros only. Words with a one after a zero carry no atom.
struct YShape {
    long leading_ones = 0;
    bool all_ones = false;
    bool ones_then_zeros = false;  // at least one trailing zero, j >= 0
};

YShape classify_y(const Word& y) {
    YShape shape;
    long j = 0;
    while (j < y.length() && y.bit(j) == 1) {
        ++j;
    }
    shape.leading_ones = j;
    if (j == y.length()) {
        shape.all_ones = true;
        return shape;
    }
    for (long i = j; i < y.length(); ++i) {
        if (y.bit(i) == 1) {
            return shape;  // neither flag: no atom inside this cylinder
        }
    }
    shape.ones_then_zeros = true;
    return shape;
}

class CounterexampleKernel final : public JointKernel {
public:
    explicit CounterexampleKernel(CounterexampleSpec spec)
        : spec_(std::move(spec)) {}

    // Atom bookkeeping: Delta(y) selects either the single atom 1^j 0^inf
    // (parameter block B_j) or the union of atoms j and beyond, whose blocks
    // telescope to [r(a_{j-1}), 1). Only those two cases carry mass.
    Rat mass2(const Word& x, const Word& y) const override {
        const YShape shape = classify_y(y);
        const DyadicInterval ix = DyadicInterval::of_word(x);
        const long I = spec_.count();
        if (shape.all_ones) {
            const long j = shape.leading_ones;
            if (j <= I + 1) {
                const Rat lower = (j == 0) ? Rat(0) : spec_.r(j - 1);
                return overlap(DyadicInterval::make(lower, Rat(1)), ix);
            }
            return tail_resolved_mass(ix, /*union_of_tail=*/true);
        }
        if (shape.ones_then_zeros) {
            const long j = shape.leading_ones;
            if (j == 0) {
                return Rat(0);  // atoms all start with 1
            }
            if (j <= I) {
                return overlap(spec_.block(j), ix);
            }
            return tail_resolved_mass(ix, /*union_of_tail=*/false);
        }
        return Rat(0);
    }

    std::shared_ptr<const MeasureKernel> limit_conditional_kernel(
        const EventuallyPeriodic& target) const override {
        if (is_all_ones(target)) {
            return uniform_on(DyadicInterval::make(spec_.alpha, Rat(1))).kernel();
        }
        const long atom = atom_index(target);
        if (atom >= 1) {
            if (atom > spec_.count()) {
                throw InsufficientApproximantsError(
                    "atom index " + std::to_string(atom) +
                    " exceeds the supplied approximants");
            }
            return uniform_on(spec_.block(atom)).kernel();
        }
        return nullptr;
    }

    ojson descriptor() const override {
        ojson approx = ojson::array();
        for (const Word& a : spec_.approximants) {
            approx.push_back(a.str());
        }
        return ojson{{"type", "counterexample"},
                     {"approximants", approx},
                     {"alpha", rat_string(spec_.alpha)}};
    }

    const CounterexampleSpec& spec() const { return spec_; }

private:
    static Rat overlap(const DyadicInterval& region, const DyadicInterval& ix) {
        return region.intersect(ix).length();
    }

    // The x-interval avoids the unresolved parameter gap (r(a_I), alpha)
    // exactly when it lies entirely at or below r(a_I) or at or above alpha;
    // only then is the mass determined by the supplied data.
    Rat tail_resolved_mass(const DyadicInterval& ix, bool union_of_tail) const {
        const Rat r_last = spec_.r(spec_.count());
        if (ix.upper <= r_last) {
            return Rat(0);
        }
        if (ix.lower >= spec_.alpha) {
            return union_of_tail ? ix.length() : Rat(0);
        }
        throw InsufficientApproximantsError(
            "value depends on approximants beyond index " +
            std::to_string(spec_.count()));
    }

    static bool is_all_ones(const EventuallyPeriodic& seq) {
        return seq.head.count_ones() == seq.head.length() &&
               seq.repeat.count_ones() == seq.repeat.length();
    }

    // i for sequences of the form 1^i 0^infinity (i >= 1), otherwise -1.
    static long atom_index(const EventuallyPeriodic& seq) {
        if (seq.repeat.count_ones() != 0) {
            return -1;
        }
        const Word& h = seq.head;
        long i = 0;
        while (i < h.length() && h.bit(i) == 1) {
            ++i;
        }
        for (long t = i; t < h.length(); ++t) {
            if (h.bit(t) == 1) {
                return -1;
            }
        }
        return i >= 1 ? i : -1;
    }

    CounterexampleSpec spec_;
};

}  // namespace

Joint::Joint(std::shared_ptr<const JointKernel> kernel)
    : kernel_(std::move(kernel)) {
    if (!kernel_) {
        throw PreconditionError("joint without a kernel");
    }
}

Rat Joint::mass2(const Word& x, const Word& y) const {
    return kernel_->mass2(x, y);
}

std::optional<Rat> Joint::slice_mass_by_counts(const Word& y, long n,
                                               long k) const {
    return kernel_->slice_mass_by_counts(y, n, k);
}

std::shared_ptr<const MeasureKernel> Joint::limit_conditional_kernel(
    const EventuallyPeriodic& target) const {
    return kernel_->limit_conditional_kernel(target);
}

ojson Joint::descriptor() const {
    return kernel_->descriptor();
}

Joint product_joint(const Measure& x_measure, const Measure& y_measure) {
    return Joint(std::make_shared<ProductJointKernel>(x_measure, y_measure));
}

Joint beta_bernoulli_joint() {
    return Joint(std::make_shared<BetaBernoulliKernel>());
}

CounterexampleSpec CounterexampleSpec::make(std::vector<Word> approximants,
                                            Rat alpha) {
    if (approximants.empty()) {
        throw PreconditionError("counterexample needs at least one approximant");
    }
    Rat prev(0);
    bool first = true;
    for (const Word& a : approximants) {
        if (a.empty()) {
            throw PreconditionError("approximants must be nonempty words");
        }
        const Rat value = dyadic_value(a);
        if (first ? (value <= 0) : (value <= prev)) {
            throw PreconditionError(
                "approximant values must be strictly increasing and positive");
        }
        prev = value;
        first = false;
    }
    if (alpha <= prev || alpha >= 1) {
        throw PreconditionError(
            "alpha must satisfy r(a_I) < alpha < 1, got " + rat_string(alpha));
    }
    CounterexampleSpec spec;
    spec.approximants = std::move(approximants);
    spec.alpha = std::move(alpha);
    return spec;
}

Rat CounterexampleSpec::r(long i) const {
    if (i < 0 || i > count()) {
        throw PreconditionError("approximant index out of range");
    }
    if (i == 0) {
        return Rat(0);
    }
    return dyadic_value(approximants[static_cast<std::size_t>(i - 1)]);
}

DyadicInterval CounterexampleSpec::block(long i) const {
    if (i < 1 || i > count()) {
        throw PreconditionError("parameter block index out of range");
    }
    return DyadicInterval::make(r(i - 1), r(i));
}

long CounterexampleSpec::max_approximant_length() const {
    long out = 0;
    for (const Word& a : approximants) {
        out = std::max(out, a.length());
    }
    return out;
}

Joint counterexample_joint(const CounterexampleSpec& spec) {
    return Joint(std::make_shared<CounterexampleKernel>(spec));
}

Rat y_tail_mass(const CounterexampleSpec& spec, long k) {
    if (k < 0) {
        throw PreconditionError("tail depth must be nonnegative");
    }
    if (k == 0) {
        return Rat(1);
    }
    if (k > spec.count() + 1) {
        throw InsufficientApproximantsError(
            "tail mass at depth " + std::to_string(k) +
            " depends on approximants beyond index " +
            std::to_string(spec.count()));
    }
    return 1 - spec.r(k - 1);
}

Rat y_tail_limit(const CounterexampleSpec& spec) {
    return 1 - spec.alpha;
}

Additivity2Report validate_additivity2(const Joint& joint, long depth_x,
                                       long depth_y) {
    require_enumerable(depth_x + 1, "validate_additivity2");
    require_enumerable(depth_y + 1, "validate_additivity2");
    Additivity2Report report;
    report.depth_x = depth_x;
    report.depth_y = depth_y;
    report.total_mass_ok = (joint.mass2(Word(), Word()) == 1);

    std::vector<Word> xs;
    for (long d = 0; d <= depth_x; ++d) {
        const auto level = partition(d);
        xs.insert(xs.end(), level.begin(), level.end());
    }
    std::vector<Word> ys;
    for (long d = 0; d <= depth_y; ++d) {
        const auto level = partition(d);
        ys.insert(ys.end(), level.begin(), level.end());
    }

    for (const Word& x : xs) {
        for (const Word& y : ys) {
            const Rat parent = joint.mass2(x, y);
            if (sgn(parent) < 0) {
                report.nonnegative = false;
            }
            {
                const Rat left = joint.mass2(x.extended(0), y);
                const Rat right = joint.mass2(x.extended(1), y);
                ++report.checked;
                if (parent != left + right) {
                    report.violations.push_back({x, y, 'x', parent, left, right});
                }
            }
            {
                const Rat left = joint.mass2(x, y.extended(0));
                const Rat right = joint.mass2(x, y.extended(1));
                ++report.checked;
                if (parent != left + right) {
                    report.violations.push_back({x, y, 'y', parent, left, right});
                }
            }
        }
    }
    return report;
}

}  // namespace cantor
