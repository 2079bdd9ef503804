#include "doctest.h"

#include "cantor/consistency.hpp"
#include "cantor/errors.hpp"
#include "cantor/random.hpp"

using namespace cantor;

// Exact pairwise total variation at depth 50 between the two depth-1
// conditionals of the uniform-prior Bernoulli mixture, frozen from an
// independent exact computation (it also matches the closed-form oracle
// computed by direct summation over counts).
static const char* kBetaTv50 = "124936162550609/140737488355328";

static CounterexampleSpec spec_1010(long count, const Rat& alpha) {
    std::vector<Word> a;
    std::string s;
    for (long i = 1; i <= count; ++i) {
        s += "10";
        a.push_back(Word::parse(s));
    }
    return CounterexampleSpec::make(std::move(a), alpha);
}

TEST_CASE("singularity matrix at shallow depth") {
    Joint beta = beta_bernoulli_joint();
    SingularityMatrix m = singularity_matrix(beta, 1, 1);
    REQUIRE(m.cylinders.size() == 2);
    CHECK(m.cylinders[0].str() == "0");
    CHECK(m.cylinders[1].str() == "1");
    CHECK(m.excluded_null.empty());
    // Conditional heads probabilities are 1/4 and 3/4; depth-1 TV is 1/2.
    CHECK(m.tv[0][1] == Rat(1, 2));
    CHECK(m.tv[1][0] == Rat(1, 2));
    CHECK(m.tv[0][0] == 0);
    CHECK(m.tv[1][1] == 0);
    CHECK(*m.min_offdiagonal() == Rat(1, 2));
}

TEST_CASE("singularity matrix symmetry and diagonal") {
    Joint beta = beta_bernoulli_joint();
    SingularityMatrix m = singularity_matrix(beta, 2, 6);
    REQUIRE(m.cylinders.size() == 4);
    for (size_t i = 0; i < m.cylinders.size(); ++i) {
        CHECK(m.tv[i][i] == 0);
        for (size_t j = 0; j < i; ++j) {
            CHECK(m.tv[i][j] == m.tv[j][i]);
            CHECK(m.tv[i][j] > 0);
            CHECK(m.tv[i][j] <= 1);
        }
    }
    // Farther-apart parameter cylinders separate at least as fast.
    CHECK(m.tv[0][3] >= m.tv[0][1]);
}

TEST_CASE("counterexample conditionals separate fully") {
    Joint ce = counterexample_joint(spec_1010(5, Rat(2, 3)));
    SingularityMatrix m = singularity_matrix(ce, 2, 10);
    REQUIRE(m.cylinders.size() == 2);
    CHECK(m.cylinders[0].str() == "10");
    CHECK(m.cylinders[1].str() == "11");
    REQUIRE(m.excluded_null.size() == 2);
    CHECK(m.excluded_null[0].str() == "00");
    CHECK(m.excluded_null[1].str() == "01");
    // Blocks B_1 = [0,1/2) and [1/2,1) are disjoint unions of depth-10
    // cylinders, so the two conditionals have disjoint support.
    CHECK(m.tv[0][1] == 1);
    CHECK(*m.min_offdiagonal() == 1);
}

TEST_CASE("matrix with a single positive cylinder has no off-diagonal") {
    Joint j = product_joint(
        uniform(), point_mass(EventuallyPeriodic::make(Word(), Word::parse("0"))));
    SingularityMatrix m = singularity_matrix(j, 2, 3);
    CHECK(m.cylinders.size() == 1);
    CHECK(m.excluded_null.size() == 3);
    CHECK(!m.min_offdiagonal().has_value());
}

TEST_CASE("frozen depth-50 separation of the beta model") {
    SingularityMatrix m = singularity_matrix(beta_bernoulli_joint(), 1, 50);
    CHECK(*m.min_offdiagonal() == parse_rat(kBetaTv50));
}

TEST_CASE("recovery experiment is deterministic and well formed") {
    Joint beta = beta_bernoulli_joint();
    RecoveryTable a = recovery_experiment(beta, 1, 30, 25, 7);
    RecoveryTable b = recovery_experiment(beta, 1, 30, 25, 7);
    REQUIRE(a.trials.size() == 25);
    CHECK(a.matched_count() == 22);  // frozen seeded regression
    CHECK(a.matched_count() == b.matched_count());
    for (size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].y == b.trials[i].y);
        CHECK(a.trials[i].x == b.trials[i].x);
        CHECK(a.trials[i].estimate == b.trials[i].estimate);
        CHECK(a.trials[i].y.length() == 1);
        CHECK(a.trials[i].x.length() == 30);
        CHECK(a.trials[i].matched == (a.trials[i].estimate == a.trials[i].y));
    }
    CHECK(a.rate() == Rat(a.matched_count(), 25));
}

TEST_CASE("ties make product recovery no better than chance") {
    // Estimates under an independent product tie everywhere and resolve to
    // the lexicographically least word, so only y = 0^k can ever match.
    RecoveryTable t = recovery_experiment(product_joint(uniform(), uniform()),
                                          2, 4, 30, 11);
    for (const RecoveryTrial& trial : t.trials) {
        CHECK(trial.estimate.str() == "00");
    }
}

TEST_CASE("concentration curves are well formed and reach certainty for the counterexample") {
    Joint ce = counterexample_joint(spec_1010(5, Rat(2, 3)));
    std::vector<ConcentrationCurve> curves = concentration_curves(ce, 2, 8, 2, 3);
    REQUIRE(curves.size() == 2);
    for (const ConcentrationCurve& c : curves) {
        CHECK(c.x.length() == 8);
        REQUIRE(c.sup_posterior.size() == 9);
        for (const Rat& v : c.sup_posterior) {
            CHECK(v >= 0);
            CHECK(v <= 1);
        }
        // Depth-8 observations pin the parameter block exactly: the posterior
        // of the true depth-2 cylinder is 1 by the end.
        CHECK(c.sup_posterior.back() == 1);
    }
}

TEST_CASE("verdicts at the frozen configurations") {
    // Independent product: conditionals identical (TV 0), recovery at chance.
    ConsistencyOptions opts;
    opts.trials = 40;
    opts.seed = 5;
    ConsistencyReport prod =
        consistency_verdict(product_joint(uniform(), uniform()), 1, 6, opts);
    CHECK(prod.verdict == Verdict::InconsistentAtDepth);
    CHECK(*prod.matrix.min_offdiagonal() == 0);
    CHECK(prod.recovery.rate() == Rat(21, 40));

    // Counterexample at depth (2, 10): disjoint supports, perfect recovery.
    ConsistencyOptions ce_opts;
    ce_opts.trials = 50;
    ce_opts.seed = 3;
    ConsistencyReport ce = consistency_verdict(
        counterexample_joint(spec_1010(5, Rat(2, 3))), 2, 10, ce_opts);
    CHECK(ce.verdict == Verdict::ConsistentAtDepth);
    CHECK(ce.recovery.rate() == 1);
    CHECK(*ce.matrix.min_offdiagonal() == 1);

    // Beta model at depth (1, 50): recovery passes but the depth-50
    // separation 0.8877... stays below 1 - 1/100, so evidence is mixed.
    ConsistencyOptions beta_opts;
    beta_opts.trials = 40;
    beta_opts.seed = 7;
    ConsistencyReport beta =
        consistency_verdict(beta_bernoulli_joint(), 1, 50, beta_opts);
    CHECK(beta.verdict == Verdict::Indeterminate);
    CHECK(beta.recovery.rate() == Rat(19, 20));  // frozen: 38/40, leg passes
    CHECK(*beta.matrix.min_offdiagonal() == parse_rat(kBetaTv50));

    CHECK(verdict_string(Verdict::ConsistentAtDepth) == "consistent-at-depth");
    CHECK(verdict_string(Verdict::InconsistentAtDepth) == "inconsistent-at-depth");
    CHECK(verdict_string(Verdict::Indeterminate) == "indeterminate");
}

TEST_CASE("single positive cylinder yields indeterminate") {
    Joint j = product_joint(
        uniform(), point_mass(EventuallyPeriodic::make(Word(), Word::parse("0"))));
    ConsistencyOptions opts;
    opts.trials = 5;
    ConsistencyReport r = consistency_verdict(j, 1, 3, opts);
    CHECK(r.verdict == Verdict::Indeterminate);
}

TEST_CASE("bad depths are refused") {
    CHECK_THROWS_AS(singularity_matrix(beta_bernoulli_joint(), -1, 3),
                    PreconditionError);
    CHECK_THROWS_AS(recovery_experiment(beta_bernoulli_joint(), 0, 3, 5, 1),
                    PreconditionError);
    CHECK_THROWS_AS(consistency_verdict(beta_bernoulli_joint(), 1, 0),
                    PreconditionError);
}