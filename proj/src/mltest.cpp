#include "cantor/mltest.hpp"

#include <algorithm>
#include <string>

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Exact cylinder-cover check: Delta(u) subset of the union over the
// antichain. Splits u until every branch either meets a covering prefix or
// outruns the antichain's depth.
bool covered_by(const Word& u, const std::vector<Word>& antichain, long max_len) {
    for (const Word& w : antichain)
        if (w.is_prefix_of(u)) return true;
    if (u.length() >= max_len) return false;
    bool any_extension = false;
    for (const Word& w : antichain)
        if (u.is_prefix_of(w)) {
            any_extension = true;
            break;
        }
    if (!any_extension) return false;
    return covered_by(u.extended(0), antichain, max_len) &&
           covered_by(u.extended(1), antichain, max_len);
}

long max_length_of(const std::vector<Word>& words) {
    long d = 0;
    for (const Word& w : words) d = std::max(d, w.length());
    return d;
}

Word word_of_value(unsigned long v, long depth) {
    std::string bits(static_cast<size_t>(depth), '0');
    for (long i = depth - 1; i >= 0; --i, v >>= 1)
        if (v & 1) bits[static_cast<size_t>(i)] = '1';
    return Word::parse(bits);
}

}  // namespace

long FiniteTest::max_word_length() const {
    long d = 0;
    for (const auto& level : levels) d = std::max(d, max_length_of(level));
    return d;
}

TestValidationReport validate_test(const FiniteTest& test, const Measure& m) {
    TestValidationReport report;
    std::vector<std::vector<Word>> normalized;
    normalized.reserve(test.levels.size());
    for (size_t i = 0; i < test.levels.size(); ++i) {
        long n = static_cast<long>(i) + 1;
        auto norm = cylinder_union_normalize(test.levels[i]);
        if (norm.size() != test.levels[i].size()) {
            report.ok = false;
            report.violations.push_back(
                {n, "antichain", "level contains duplicate or prefix-nested words"});
        }
        Rat mass = 0;
        for (const Word& w : norm) mass += m.mass(w);
        report.level_masses.push_back(mass);
        if (!(mass < pow2(-n))) {
            report.ok = false;
            report.violations.push_back(
                {n, "mass", "level mass " + rat_string(mass) + " not below " +
                                rat_string(pow2(-n))});
        }
        normalized.push_back(std::move(norm));
    }
    for (size_t i = 1; i < normalized.size(); ++i) {
        long n = static_cast<long>(i) + 1;
        long outer_len = max_length_of(normalized[i - 1]);
        for (const Word& u : normalized[i])
            if (!covered_by(u, normalized[i - 1], outer_len)) {
                report.ok = false;
                report.violations.push_back(
                    {n, "nesting",
                     "word " + u.str() + " escapes the previous level"});
            }
    }
    return report;
}

long indicator_sum(const FiniteTest& test, const Word& x) {
    long count = 0;
    for (size_t i = 0; i < test.levels.size(); ++i) {
        bool member = false;
        for (const Word& u : test.levels[i])
            if (u.is_prefix_of(x)) {
                member = true;
                break;
            }
        if (member) {
            ++count;
            continue;
        }
        for (const Word& u : test.levels[i])
            if (x.is_prefix_of(u) && u.length() > x.length())
                throw PreconditionError(
                    "indicator_sum: membership at level " +
                    std::to_string(i + 1) + " is not decided by " +
                    (x.empty() ? std::string("the empty word") : x.str()));
    }
    return count;
}

TransferResult transfer_test(const FiniteTest& test, const Joint& joint,
                             const Word& y, long M, long k_max) {
    if (M < 1) throw PreconditionError("transfer_test: bound must be >= 1");
    if (k_max < 1) throw PreconditionError("transfer_test: k_max must be >= 1");
    Rat z = joint.mass2(Word(), y);
    if (sgn(z) <= 0)
        throw NullConditioningError(
            "transfer_test: conditioning word has zero mass");

    TransferResult out;
    out.bound = M;
    out.hypothesis_sum = 0;
    for (const auto& level : test.levels) {
        for (const Word& u : cylinder_union_normalize(level))
            out.hypothesis_sum += joint.mass2(u, y);
    }
    out.hypothesis_sum /= z;
    if (out.hypothesis_sum > Rat(M))
        throw HypothesisViolationError(
            "transfer_test: conditional level masses sum to " +
            rat_string(out.hypothesis_sum) + ", above the bound " +
            std::to_string(M));

    out.d = test.max_word_length();
    require_enumerable(out.d, "transfer_test");
    out.test.levels.assign(static_cast<size_t>(k_max), {});
    for (const Word& w : partition(out.d)) {
        long s = indicator_sum(test, w);  // decided: w reaches every level's depth
        for (long k = 1; k <= k_max; ++k) {
            if (Rat(s) > Rat(M) * pow2(k)) {
                out.test.levels[static_cast<size_t>(k - 1)].push_back(w);
            }
        }
    }
    for (long k = 1; k <= k_max; ++k) {
        Rat mass = 0;
        for (const Word& w : out.test.levels[static_cast<size_t>(k - 1)])
            mass += joint.mass2(w, y);
        mass /= z;
        out.conditional_masses.push_back(mass);
        // Sharp form of the Markov bound; the level bound 2^{-k} follows
        // from the verified hypothesis sum <= M.
        if (!(mass <= out.hypothesis_sum / (Rat(M) * pow2(k))))
            out.bounds_ok = false;
    }
    return out;
}

CounterexampleLevel counterexample_test_level(const CounterexampleSpec& spec,
                                              long n, long depth) {
    if (n < 1)
        throw PreconditionError("counterexample_test_level: n must be >= 1");
    if (depth < spec.max_approximant_length())
        throw PreconditionError(
            "counterexample_test_level: depth below approximant resolution");
    require_enumerable(depth, "counterexample_test_level");

    CounterexampleLevel out;
    out.threshold = spec.r(spec.count()) + Rat(1, static_cast<unsigned long>(n));
    // Words s at this depth with r(s) < threshold: values 0..K-1 with
    // K = ceil(threshold 2^depth), capped at 2^depth.
    Rat scaled = out.threshold * pow2(depth);
    Int K;
    mpz_cdiv_q(K.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Int full = Int(1) << static_cast<unsigned long>(depth);
    if (K > full) K = full;
    unsigned long count = K.get_ui();
    out.words.reserve(count);
    for (unsigned long v = 0; v < count; ++v)
        out.words.push_back(word_of_value(v, depth));

    Rat cover_upper = Rat(K) * pow2(-depth);
    Rat overlap = (cover_upper > 1 ? Rat(1) : cover_upper) - spec.alpha;
    if (sgn(overlap) < 0) overlap = 0;
    out.limit_conditional_mass = overlap / (Rat(1) - spec.alpha);
    out.mass_bound = (Rat(1, static_cast<unsigned long>(n)) + pow2(-depth)) /
                     (Rat(1) - spec.alpha);
    out.within_bound = out.limit_conditional_mass <= out.mass_bound;
    return out;
}

ProductFiniteTest diagonal_test(long max_level) {
    if (max_level < 1)
        throw PreconditionError("diagonal_test: need at least one level");
    require_enumerable(max_level, "diagonal_test");
    ProductFiniteTest out;
    out.levels.reserve(static_cast<size_t>(max_level));
    for (long n = 1; n <= max_level; ++n) {
        std::vector<std::pair<Word, Word>> level;
        for (const Word& w : partition(n)) level.emplace_back(w, w);
        out.levels.push_back(std::move(level));
    }
    return out;
}

Rat product_level_mass(const Joint& joint,
                       const std::vector<std::pair<Word, Word>>& level) {
    Rat mass = 0;
    for (const auto& [x, y] : level) mass += joint.mass2(x, y);
    return mass;
}

ProductTestValidationReport validate_product_test(const ProductFiniteTest& test,
                                                  const Joint& joint) {
    ProductTestValidationReport report;
    for (size_t i = 0; i < test.levels.size(); ++i) {
        long n = static_cast<long>(i) + 1;
        const auto& level = test.levels[i];
        // Two product cylinders are disjoint unless both coordinates are
        // prefix-comparable.
        for (size_t a = 0; a < level.size(); ++a)
            for (size_t b = a + 1; b < level.size(); ++b) {
                bool x_comparable = level[a].first.is_prefix_of(level[b].first) ||
                                    level[b].first.is_prefix_of(level[a].first);
                bool y_comparable =
                    level[a].second.is_prefix_of(level[b].second) ||
                    level[b].second.is_prefix_of(level[a].second);
                if (x_comparable && y_comparable) {
                    report.ok = false;
                    report.violations.push_back(
                        {n, "overlap",
                         "pairs (" + level[a].first.str() + "," +
                             level[a].second.str() + ") and (" +
                             level[b].first.str() + "," + level[b].second.str() +
                             ") intersect"});
                }
            }
        Rat mass = product_level_mass(joint, level);
        report.level_masses.push_back(mass);
        if (!(mass < pow2(-n))) {
            report.ok = false;
            report.violations.push_back(
                {n, "mass", "level mass " + rat_string(mass) + " not below " +
                                rat_string(pow2(-n))});
        }
    }
    // Componentwise-prefix containment between consecutive levels; exact for
    // families built from per-level refinements such as the diagonal covers.
    for (size_t i = 1; i < test.levels.size(); ++i) {
        long n = static_cast<long>(i) + 1;
        for (const auto& [x, y] : test.levels[i]) {
            bool inside = false;
            for (const auto& [px, py] : test.levels[i - 1])
                if (px.is_prefix_of(x) && py.is_prefix_of(y)) {
                    inside = true;
                    break;
                }
            if (!inside) {
                report.ok = false;
                report.violations.push_back(
                    {n, "nesting", "pair (" + x.str() + "," + y.str() +
                                       ") escapes the previous level"});
            }
        }
    }
    return report;
}

Deficiency deficiency(const Word& x, const Measure& target,
                      const std::vector<Measure>& pool,
                      const std::vector<Rat>& weights) {
    if (pool.empty())
        throw PreconditionError("deficiency: candidate pool is empty");
    if (pool.size() != weights.size())
        throw PreconditionError("deficiency: pool and weight counts differ");
    Rat weight_sum = 0;
    for (const Rat& w : weights) {
        if (sgn(w) <= 0)
            throw PreconditionError("deficiency: weights must be positive");
        weight_sum += w;
    }
    if (weight_sum != 1)
        throw PreconditionError("deficiency: weights must sum to 1");

    Rat mix = 0;
    for (size_t i = 0; i < pool.size(); ++i)
        mix += weights[i] * pool[i].mass(x);
    Rat t = target.mass(x);
    Deficiency out;
    if (sgn(t) == 0 && sgn(mix) == 0)
        throw PreconditionError(
            "deficiency: target and mixture both vanish on the word");
    if (sgn(t) == 0) {
        out.kind = DeficiencyKind::PlusInfinity;
        return out;
    }
    if (sgn(mix) == 0) {
        out.kind = DeficiencyKind::MinusInfinity;
        return out;
    }
    Rat ratio = mix / t;
    out.kind = DeficiencyKind::Finite;
    out.bits = (ratio == 1) ? Rat(0) : log2_approx(ratio);
    return out;
}

}  // namespace cantor
