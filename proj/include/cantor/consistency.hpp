#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cantor/bayes.hpp"
#include "cantor/joint.hpp"
#include "cantor/measure.hpp"

namespace cantor {

// Pairwise total variation at a fixed depth between the conditionals on all
// positive-mass parameter cylinders of a given length. Zero-mass cylinders
// cannot be conditioned on and are listed separately.
struct SingularityMatrix {
    std::vector<Word> cylinders;       // positive-mass words of length k, lex order
    std::vector<Word> excluded_null;   // zero-mass words of length k
    std::vector<std::vector<Rat>> tv;  // symmetric, zero diagonal

    std::optional<Rat> min_offdiagonal() const;  // empty when < 2 cylinders
};

SingularityMatrix singularity_matrix(const Joint& joint, long k, long n);

struct RecoveryTrial {
    Word y;         // drawn from the parameter marginal, length k
    Word x;         // drawn from the conditional given y, length n
    Word estimate;  // argmax posterior cylinder of length k
    bool matched = false;
};

struct RecoveryTable {
    std::vector<RecoveryTrial> trials;

    long matched_count() const;
    Rat rate() const;  // matched / trials
};

// Per trial: draw y (length k) from the parameter marginal, draw x (length
// n) from the conditional given y, then check whether the maximum-posterior
// cylinder recovers y. Trial t uses the stream seeded by derive_seed(seed, t),
// consuming bits for y first, then x, so trials are order-independent.
RecoveryTable recovery_experiment(const Joint& joint, long k, long n,
                                  long trials, unsigned long long seed);

// Sup over positive depth-k parameter cylinders of the posterior mass, per
// prefix of a sampled observation sequence. Concentration toward 1 along the
// prefix is the finite-depth signature of a posterior that pins down the
// parameter.
struct ConcentrationCurve {
    Word x;                          // sampled observation prefix, length n
    std::vector<Rat> sup_posterior;  // index m = prefix length, 0..n
};

std::vector<ConcentrationCurve> concentration_curves(const Joint& joint, long k,
                                                     long n, long samples,
                                                     unsigned long long seed);

enum class Verdict { ConsistentAtDepth, InconsistentAtDepth, Indeterminate };

std::string verdict_string(Verdict v);

struct ConsistencyOptions {
    Rat epsilon = Rat(1, 100);            // TV leg passes at min_offdiag >= 1-epsilon
    Rat recovery_threshold = Rat(9, 10);  // recovery leg passes at rate >= threshold
    long trials = 200;
    unsigned long long seed = 1;
    long curve_samples = 3;
};

struct ConsistencyReport {
    long param_depth = 0;
    long sample_depth = 0;
    ConsistencyOptions options;
    SingularityMatrix matrix;
    std::vector<ConcentrationCurve> curves;
    RecoveryTable recovery;
    Verdict verdict = Verdict::Indeterminate;
};

// Assembles the diagnostics and applies the verdict policy: both legs pass
// -> consistent-at-depth; both fail -> inconsistent-at-depth; mixed evidence
// or fewer than two positive cylinders -> indeterminate. A verdict is a
// statement about the configured depths only.
ConsistencyReport consistency_verdict(const Joint& joint, long k, long n,
                                      const ConsistencyOptions& opts = {});

}  // namespace cantor
