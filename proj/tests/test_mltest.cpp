#include "doctest.h"

#include "cantor/errors.hpp"
#include "cantor/mltest.hpp"

using namespace cantor;

static FiniteTest zeros_test(long levels) {
    // Level n = {0^{n+1}}: nested, mass 2^{-(n+1)} < 2^{-n} under uniform.
    FiniteTest t;
    for (long n = 1; n <= levels; ++n) {
        t.levels.push_back({Word::zeros(n + 1)});
    }
    return t;
}

static CounterexampleSpec spec_1010(long count, const Rat& alpha) {
    std::vector<Word> a;
    std::string s;
    for (long i = 1; i <= count; ++i) {
        s += "10";
        a.push_back(Word::parse(s));
    }
    return CounterexampleSpec::make(std::move(a), alpha);
}

TEST_CASE("validating a correct test") {
    FiniteTest t = zeros_test(4);
    TestValidationReport r = validate_test(t, uniform());
    CHECK(r.ok);
    CHECK(r.violations.empty());
    REQUIRE(r.level_masses.size() == 4);
    for (long n = 1; n <= 4; ++n) {
        CHECK(r.level_masses[static_cast<size_t>(n - 1)] == pow2(-(n + 1)));
    }
}

TEST_CASE("multi-word levels validate through their cylinder union") {
    FiniteTest t;
    t.levels.push_back({Word::parse("000"), Word::parse("001")});  // = Delta(00)
    t.levels.push_back({Word::parse("0000"), Word::parse("0001")});
    TestValidationReport r = validate_test(t, uniform());
    CHECK(r.ok);
    CHECK(r.level_masses[0] == Rat(1, 4));
    CHECK(r.level_masses[1] == Rat(1, 8));
}

TEST_CASE("antichain violations are reported") {
    FiniteTest t;
    t.levels.push_back({Word::parse("00"), Word::parse("001")});
    TestValidationReport r = validate_test(t, uniform());
    CHECK(!r.ok);
    REQUIRE(!r.violations.empty());
    CHECK(r.violations[0].kind == "antichain");
    CHECK(r.violations[0].level == 1);
}

TEST_CASE("nesting violations are reported") {
    FiniteTest t;
    t.levels.push_back({Word::parse("00")});
    t.levels.push_back({Word::parse("110")});  // outside Delta(00)
    TestValidationReport r = validate_test(t, uniform());
    CHECK(!r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == "nesting");
    CHECK(r.violations[0].level == 2);
}

TEST_CASE("nesting accepts unions that cover split cylinders") {
    FiniteTest t;
    t.levels.push_back({Word::parse("00"), Word::parse("010")});
    t.levels.push_back({Word::parse("0001"), Word::parse("0100")});
    TestValidationReport r = validate_test(t, uniform());
    CHECK(r.ok);
}

TEST_CASE("mass bounds are strict") {
    // Level n of mass exactly 2^{-n} fails; one level deeper passes.
    FiniteTest boundary;
    boundary.levels.push_back({Word::parse("0")});
    TestValidationReport r = validate_test(boundary, uniform());
    CHECK(!r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == "mass");

    // The bound is against the supplied measure, not the uniform one.
    FiniteTest t = zeros_test(2);
    TestValidationReport biased = validate_test(t, bernoulli(Rat(1, 10)));
    CHECK(!biased.ok);  // P(00) = 81/100 >= 1/2
    CHECK(biased.violations[0].kind == "mass");
}

TEST_CASE("indicator sums count decided memberships") {
    FiniteTest t = zeros_test(5);
    CHECK(indicator_sum(t, Word::zeros(10)) == 5);
    CHECK(indicator_sum(t, Word::parse("1")) == 0);
    CHECK(indicator_sum(t, Word::parse("0001")) == 2);
    CHECK(indicator_sum(t, Word::zeros(6)) == 5);
    // 00 decides levels 1 and 3.. (disjoint) but level 2 ({000}) needs bit 3.
    CHECK_THROWS_AS(indicator_sum(t, Word::zeros(2)), PreconditionError);
    CHECK_THROWS_AS(indicator_sum(t, Word()), PreconditionError);
}

TEST_CASE("transfer across an independent joint") {
    FiniteTest t = zeros_test(6);
    Joint prod = product_joint(uniform(), uniform());
    TransferResult r = transfer_test(t, prod, Word(), 1, 3);
    CHECK(r.d == 7);
    CHECK(r.bound == 1);
    CHECK(r.hypothesis_sum == Rat(63, 128));
    REQUIRE(r.test.levels.size() == 3);
    // V_1: indicator sum > 2 needs at least four leading zeros.
    CHECK(r.test.levels[0].size() == 8);
    for (const Word& w : r.test.levels[0]) {
        CHECK(w.length() == 7);
        CHECK(Word::zeros(4).is_prefix_of(w));
    }
    CHECK(r.conditional_masses[0] == Rat(1, 16));
    // V_2: sum > 4 needs six leading zeros.
    CHECK(r.test.levels[1].size() == 2);
    CHECK(r.conditional_masses[1] == Rat(1, 64));
    // V_3: sum > 8 is impossible with six levels.
    CHECK(r.test.levels[2].empty());
    CHECK(r.conditional_masses[2] == 0);
    CHECK(r.bounds_ok);

    // The transferred family is itself a valid test for the conditional.
    TestValidationReport check = validate_test(r.test, uniform());
    CHECK(check.ok);
}

TEST_CASE("transfer verifies its hypothesis exactly") {
    FiniteTest bloated;
    bloated.levels.push_back({Word::parse("0")});
    bloated.levels.push_back({Word::parse("1")});
    bloated.levels.push_back({Word::parse("00")});
    Joint prod = product_joint(uniform(), uniform());
    CHECK_THROWS_AS(transfer_test(bloated, prod, Word(), 1, 2),
                    HypothesisViolationError);
    CHECK_THROWS_AS(transfer_test(zeros_test(3), prod, Word(), 0, 2),
                    PreconditionError);
    // Conditioning on a null parameter cylinder is refused up front.
    Joint ce = counterexample_joint(spec_1010(4, Rat(2, 3)));
    CHECK_THROWS_AS(transfer_test(zeros_test(3), ce, Word::parse("0"), 1, 2),
                    NullConditioningError);
}

TEST_CASE("transfer along a counterexample conditioning word") {
    // Conditioning on y = 10 (atom 1, block [0,1/2)): the observation law is
    // uniform on [0,1/2), doubling the mass of each low cylinder.
    FiniteTest t = zeros_test(4);
    Joint ce = counterexample_joint(spec_1010(4, Rat(2, 3)));
    TransferResult r = transfer_test(t, ce, Word::parse("10"), 1, 2);
    // Sum of 2 * 2^{-(n+1)} for n = 1..4.
    CHECK(r.hypothesis_sum == Rat(15, 16));
    CHECK(r.bounds_ok);
}

TEST_CASE("counterexample critical-region levels") {
    CounterexampleSpec s = spec_1010(4, Rat(2, 3));
    CounterexampleLevel level = counterexample_test_level(s, 4, 10);
    CHECK(level.threshold == Rat(117, 128));
    CHECK(level.words.size() == 936);
    // Every member value sits strictly below the threshold, in order.
    CHECK(level.words.front().str() == "0000000000");
    CHECK(dyadic_value(level.words.back()) == Rat(935, 1024));
    CHECK(level.limit_conditional_mass == Rat(95, 128));
    CHECK(level.mass_bound == Rat(771, 1024));
    CHECK(level.within_bound);  // 760/1024 <= 771/1024

    // n = 2 puts the threshold above 1: every depth-10 word belongs,
    // including the resolution-limit word itself.
    CounterexampleLevel wide = counterexample_test_level(s, 2, 10);
    CHECK(wide.words.size() == 1024);
    bool found = false;
    for (const Word& w : wide.words) {
        if (w.str() == "1010101010") found = true;
    }
    CHECK(found);
    CHECK(wide.limit_conditional_mass == 1);

    // Deeper levels shrink: the n = 8 region is contained in the n = 4 one.
    CounterexampleLevel tighter = counterexample_test_level(s, 8, 10);
    CHECK(tighter.words.size() < level.words.size());
    CHECK(tighter.threshold < level.threshold);
    CHECK(tighter.within_bound);

    CHECK_THROWS_AS(counterexample_test_level(s, 0, 10), PreconditionError);
    CHECK_THROWS_AS(counterexample_test_level(s, 4, 7), PreconditionError);
}

TEST_CASE("diagonal covers under the product of uniforms") {
    ProductFiniteTest t = diagonal_test(6);
    REQUIRE(t.max_level() == 6);
    Joint prod = product_joint(uniform(), uniform());
    for (long n = 1; n <= 6; ++n) {
        const auto& level = t.levels[static_cast<size_t>(n - 1)];
        CHECK(level.size() == (1L << n));
        CHECK(product_level_mass(prod, level) == pow2(-n));
    }
    ProductTestValidationReport r = validate_product_test(t, prod);
    // The diagonal sits exactly at the mass boundary: every level is flagged
    // for mass and for nothing else.
    CHECK(!r.ok);
    CHECK(r.violations.size() == 6);
    for (const TestViolation& v : r.violations) {
        CHECK(v.kind == "mass");
    }
    REQUIRE(r.level_masses.size() == 6);
    for (long n = 1; n <= 6; ++n) {
        CHECK(r.level_masses[static_cast<size_t>(n - 1)] == pow2(-n));
    }
}

TEST_CASE("product test validation flags overlap and nesting") {
    ProductFiniteTest overlap;
    overlap.levels.push_back(
        {{Word::parse("0"), Word::parse("1")}, {Word::parse("00"), Word::parse("1")}});
    ProductTestValidationReport r =
        validate_product_test(overlap, product_joint(uniform(), uniform()));
    CHECK(!r.ok);
    CHECK(r.violations[0].kind == "overlap");

    ProductFiniteTest drift;
    drift.levels.push_back({{Word::parse("00"), Word::parse("0")}});
    drift.levels.push_back({{Word::parse("11"), Word::parse("00")}});
    ProductTestValidationReport r2 =
        validate_product_test(drift, product_joint(uniform(), uniform()));
    CHECK(!r2.ok);
    bool nesting = false;
    for (const TestViolation& v : r2.violations) {
        if (v.kind == "nesting") nesting = true;
    }
    CHECK(nesting);
}

TEST_CASE("deficiency of a sequence against a candidate pool") {
    // Target in the pool with weight 1: the ratio is identically one.
    Word x = Word::parse("0110");
    Deficiency zero = deficiency(x, uniform(), {uniform()}, {Rat(1)});
    CHECK(zero.kind == DeficiencyKind::Finite);
    CHECK(zero.bits == 0);

    // All-zeros against a zero-favoring candidate: large positive deficiency.
    Deficiency skew = deficiency(Word::zeros(100), uniform(),
                                 {bernoulli(Rat(1, 10))}, {Rat(1)});
    CHECK(skew.kind == DeficiencyKind::Finite);
    CHECK(skew.bits > 50);
    CHECK(skew.bits > 84);
    CHECK(skew.bits < 85);

    // Membership of the target in the pool bounds the deficiency below.
    Word typical = Word::parse(
        "0111101001110111000111111011110101101000101101101101011000111110");
    Deficiency reg = deficiency(typical, bernoulli(Rat(2, 3)),
                                {bernoulli(Rat(2, 3)), uniform()},
                                {Rat(1, 2), Rat(1, 2)});
    CHECK(reg.kind == DeficiencyKind::Finite);
    CHECK(reg.bits == Rat(-774363, 1000000));  // frozen seeded regression
    CHECK(reg.bits >= -1);  // >= log2(weight of the target component)
}

TEST_CASE("deficiency infinities and preconditions") {
    Measure zero_tail = point_mass(EventuallyPeriodic::make(Word(), Word::parse("0")));
    Word x = Word::parse("11");
    CHECK(deficiency(x, zero_tail, {uniform()}, {Rat(1)}).kind ==
          DeficiencyKind::PlusInfinity);
    CHECK(deficiency(x, uniform(), {zero_tail}, {Rat(1)}).kind ==
          DeficiencyKind::MinusInfinity);
    CHECK_THROWS_AS(deficiency(x, zero_tail, {zero_tail}, {Rat(1)}),
                    PreconditionError);
    CHECK_THROWS_AS(deficiency(x, uniform(), {}, {}), PreconditionError);
    CHECK_THROWS_AS(deficiency(x, uniform(), {uniform()}, {Rat(1, 2)}),
                    PreconditionError);
    CHECK_THROWS_AS(deficiency(x, uniform(), {uniform(), uniform()}, {Rat(1)}),
                    PreconditionError);
    CHECK_THROWS_AS(deficiency(x, uniform(), {uniform()}, {Rat(-1)}),
                    PreconditionError);
}