#include "cantor/consistency.hpp"

#include "cantor/budget.hpp"
#include "cantor/errors.hpp"
#include "cantor/random.hpp"

namespace cantor {

std::optional<Rat> SingularityMatrix::min_offdiagonal() const {
    std::optional<Rat> best;
    for (size_t i = 0; i < tv.size(); ++i)
        for (size_t j = i + 1; j < tv.size(); ++j)
            if (!best || tv[i][j] < *best) best = tv[i][j];
    return best;
}

SingularityMatrix singularity_matrix(const Joint& joint, long k, long n) {
    if (k < 0 || n < 0)
        throw PreconditionError("singularity_matrix: depths must be nonnegative");
    SingularityMatrix out;
    for (const Word& y : partition(k)) {
        Rat mass = joint.mass2(Word(), y);
        if (sgn(mass) > 0)
            out.cylinders.push_back(y);
        else
            out.excluded_null.push_back(y);
    }
    size_t count = out.cylinders.size();
    out.tv.assign(count, std::vector<Rat>(count, Rat(0)));
    std::vector<Measure> slices;
    slices.reserve(count);
    for (const Word& y : out.cylinders) slices.push_back(conditional(joint, y));
    for (size_t i = 0; i < count; ++i)
        for (size_t j = i + 1; j < count; ++j) {
            Rat tv = total_variation_at_depth(slices[i], slices[j], n);
            out.tv[i][j] = tv;
            out.tv[j][i] = tv;
        }
    return out;
}

long RecoveryTable::matched_count() const {
    long c = 0;
    for (const auto& t : trials)
        if (t.matched) ++c;
    return c;
}

Rat RecoveryTable::rate() const {
    if (trials.empty()) throw PreconditionError("recovery rate of empty table");
    return make_rat(Int(matched_count()), Int(static_cast<long>(trials.size())));
}

RecoveryTable recovery_experiment(const Joint& joint, long k, long n,
                                  long trials, unsigned long long seed) {
    if (k < 1) throw PreconditionError("recovery_experiment: k must be >= 1");
    if (n < 1) throw PreconditionError("recovery_experiment: n must be >= 1");
    if (trials < 1)
        throw PreconditionError("recovery_experiment: need at least one trial");
    Measure prior = marginal_y(joint);
    RecoveryTable table;
    table.trials.reserve(static_cast<size_t>(trials));
    for (long t = 0; t < trials; ++t) {
        BitStream bits(derive_seed(seed, static_cast<unsigned long long>(t)));
        RecoveryTrial trial;
        trial.y = sample_with(prior, k, bits);
        trial.x = sample_with(conditional(joint, trial.y), n, bits);
        trial.estimate = map_estimate(joint, trial.x, k);
        trial.matched = trial.estimate == trial.y;
        table.trials.push_back(std::move(trial));
    }
    return table;
}

std::vector<ConcentrationCurve> concentration_curves(const Joint& joint, long k,
                                                     long n, long samples,
                                                     unsigned long long seed) {
    if (k < 0 || n < 0)
        throw PreconditionError("concentration_curves: depths must be nonnegative");
    if (samples < 0)
        throw PreconditionError("concentration_curves: negative sample count");
    std::vector<Word> cylinders;
    for (const Word& y : partition(k))
        if (sgn(joint.mass2(Word(), y)) > 0) cylinders.push_back(y);
    if (cylinders.empty())
        throw PreconditionError(
            "concentration_curves: no positive parameter cylinder");
    Measure observations = marginal_x(joint);
    std::vector<ConcentrationCurve> curves;
    curves.reserve(static_cast<size_t>(samples));
    // Offset keeps curve streams clear of the recovery trial indices.
    constexpr unsigned long long kCurveStreamBase = 1ULL << 32;
    for (long s = 0; s < samples; ++s) {
        BitStream bits(
            derive_seed(seed, kCurveStreamBase + static_cast<unsigned long long>(s)));
        ConcentrationCurve curve;
        curve.x = sample_with(observations, n, bits);
        curve.sup_posterior.reserve(static_cast<size_t>(n) + 1);
        for (long m = 0; m <= n; ++m) {
            Word prefix = curve.x.prefix(m);
            Rat z = joint.mass2(prefix, Word());
            Rat best = 0;
            for (const Word& y : cylinders) {
                Rat post = joint.mass2(prefix, y) / z;
                if (post > best) best = post;
            }
            curve.sup_posterior.push_back(best);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::string verdict_string(Verdict v) {
    switch (v) {
        case Verdict::ConsistentAtDepth: return "consistent-at-depth";
        case Verdict::InconsistentAtDepth: return "inconsistent-at-depth";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

ConsistencyReport consistency_verdict(const Joint& joint, long k, long n,
                                      const ConsistencyOptions& opts) {
    ConsistencyReport report;
    report.param_depth = k;
    report.sample_depth = n;
    report.options = opts;
    report.matrix = singularity_matrix(joint, k, n);
    report.curves = concentration_curves(joint, k, n, opts.curve_samples, opts.seed);
    report.recovery = recovery_experiment(joint, k, n, opts.trials, opts.seed);

    auto min_tv = report.matrix.min_offdiagonal();
    if (!min_tv) {
        // Fewer than two positive cylinders: singularity has no content.
        report.verdict = Verdict::Indeterminate;
        return report;
    }
    bool tv_leg = *min_tv >= Rat(1) - opts.epsilon;
    bool recovery_leg = report.recovery.rate() >= opts.recovery_threshold;
    if (tv_leg && recovery_leg)
        report.verdict = Verdict::ConsistentAtDepth;
    else if (!tv_leg && !recovery_leg)
        report.verdict = Verdict::InconsistentAtDepth;
    else
        report.verdict = Verdict::Indeterminate;
    return report;
}

}  // namespace cantor
