#include "doctest.h"

#include "cantor/bayes.hpp"
#include "cantor/errors.hpp"
#include "cantor/json_io.hpp"

using namespace cantor;

TEST_CASE("model specs round trip") {
    std::vector<const char*> specs = {
        R"({"type":"bernoulli","theta":"1/3"})",
        R"({"type":"uniform"})",
        R"({"type":"markov","initial":"1/2","transitions":[["3/4","1/4"],["1/4","3/4"]]})",
        R"({"type":"pointmass","head":"11","repeat":"0"})",
        R"({"type":"mixture","weights":["1/2","1/2"],"components":[{"type":"uniform"},{"type":"bernoulli","theta":"1/4"}]})",
        R"({"type":"uniform_interval","lower":"1/4","upper":"5/8"})",
    };
    for (const char* text : specs) {
        Measure m = measure_from_json(parse_json_text(text));
        // Descriptor -> measure -> descriptor is a fixed point.
        CHECK(measure_from_json(m.descriptor()).descriptor() == m.descriptor());
    }
    // The uniform model is the fair coin.
    Measure u = measure_from_json(parse_json_text(R"({"type":"uniform"})"));
    CHECK(u.mass(Word::parse("0101")) == Rat(1, 16));
}

TEST_CASE("model spec values reach the kernels") {
    Measure m = measure_from_json(parse_json_text(
        R"({"type":"markov","initial":"1/3","transitions":[["2/3","1/3"],["1/5","4/5"]]})"));
    CHECK(m.mass(Word::parse("11")) == Rat(1, 3) * Rat(4, 5));
    Measure p = measure_from_json(
        parse_json_text(R"({"type":"pointmass","head":"","repeat":"10"})"));
    CHECK(p.mass(Word::parse("1010")) == 1);
    Measure i = measure_from_json(
        parse_json_text(R"({"type":"uniform_interval","lower":"1/4","upper":"5/8"})"));
    CHECK(i.mass(Word::parse("0")) == Rat(2, 3));
}

TEST_CASE("joint specs round trip") {
    std::vector<const char*> specs = {
        R"({"type":"product","x":{"type":"bernoulli","theta":"1/3"},"y":{"type":"uniform"}})",
        R"({"type":"beta_bernoulli"})",
        R"({"type":"counterexample","approximants":["10","1010","101010"],"alpha":"2/3"})",
    };
    for (const char* text : specs) {
        Joint j = joint_from_json(parse_json_text(text));
        CHECK(joint_from_json(j.descriptor()).descriptor() == j.descriptor());
    }
    Joint ce = joint_from_json(parse_json_text(
        R"({"type":"counterexample","approximants":["10","1010"],"alpha":"2/3"})"));
    CHECK(ce.mass2(Word(), Word::parse("10")) == Rat(1, 2));
}

TEST_CASE("test specs round trip with contiguous levels") {
    ojson spec = parse_json_text(R"({"levels":{"1":["00"],"2":["000","0010"]}})");
    FiniteTest t = test_from_json(spec);
    REQUIRE(t.max_level() == 2);
    CHECK(t.levels[0][0].str() == "00");
    CHECK(t.levels[1][1].str() == "0010");
    ojson out = test_to_json(t);
    CHECK(out.at("schema_version") == kSchemaVersion);
    CHECK(test_from_json(out).levels == t.levels);
}

TEST_CASE("malformed inputs raise parse errors") {
    std::vector<const char*> bad = {
        R"({"type":"gaussian"})",                         // unknown model type
        R"({"type":"bernoulli"})",                        // missing field
        R"({"type":"bernoulli","theta":"0.5"})",          // not a p/q rational
        R"({"type":"bernoulli","theta":"3/2"})",          // out of range
        R"({"type":"markov","initial":"1/2","transitions":[["1/2","1/2"]]})",
        R"({"type":"mixture","weights":["1/2"],"components":[{"type":"uniform"},{"type":"uniform"}]})",
        R"({"type":"pointmass","head":"12","repeat":"0"})",
        R"({"type":"uniform_interval","lower":"1/2","upper":"1/4"})",
        R"([1,2,3])",                                     // not an object
    };
    for (const char* text : bad) {
        CHECK_THROWS_AS(measure_from_json(parse_json_text(text)), ParseError);
    }

    CHECK_THROWS_AS(joint_from_json(parse_json_text(R"({"type":"beta"})")),
                    ParseError);
    CHECK_THROWS_AS(
        joint_from_json(parse_json_text(
            R"({"type":"counterexample","approximants":["10","01"],"alpha":"2/3"})")),
        ParseError);  // approximants not increasing
    CHECK_THROWS_AS(
        joint_from_json(parse_json_text(R"({"type":"product","x":{"type":"uniform"}})")),
        ParseError);

    // Level keys must start at 1 and stay contiguous.
    CHECK_THROWS_AS(test_from_json(parse_json_text(R"({"levels":{"2":["00"]}})")),
                    ParseError);
    CHECK_THROWS_AS(
        test_from_json(parse_json_text(R"({"levels":{"1":["0"],"3":["00"]}})")),
        ParseError);
    CHECK_THROWS_AS(test_from_json(parse_json_text(R"({"levels":[["0"]]})")),
                    ParseError);
    CHECK_THROWS_AS(test_from_json(parse_json_text(R"({})")), ParseError);

    CHECK_THROWS_AS(parse_json_text("{not json"), ParseError);
    CHECK_THROWS_AS(load_json_file("/nonexistent/spec.json"), ParseError);
}

TEST_CASE("schema version is enforced when present") {
    CHECK_NOTHROW(measure_from_json(
        parse_json_text(R"({"schema_version":"1","type":"uniform"})")));
    CHECK_THROWS_AS(
        measure_from_json(
            parse_json_text(R"({"schema_version":"2","type":"uniform"})")),
        ParseError);
}

TEST_CASE("rationals serialize with decimal companions") {
    ojson obj;
    put_rat(obj, "value", Rat(2, 3));
    CHECK(obj.at("value") == "2/3");
    CHECK(obj.at("value_decimal") == "0.666666666667");
    put_rat(obj, "zero", Rat(0));
    CHECK(obj.at("zero") == "0/1");
    CHECK(obj.at("zero_decimal") == "0.000000000000");
}

TEST_CASE("report serializers carry their payloads") {
    AdditivityReport add = validate_additivity(uniform(), 3);
    ojson j = to_json(add);
    CHECK(j.at("schema_version") == kSchemaVersion);
    CHECK(j.at("ok") == true);
    CHECK(j.at("checked") == 7);

    Additivity2Report add2 = validate_additivity2(beta_bernoulli_joint(), 2, 2);
    ojson j2 = to_json(add2);
    CHECK(j2.at("ok") == true);

    FiniteTest t;
    t.levels.push_back({Word::parse("00")});
    ojson jt = to_json(validate_test(t, uniform()));
    CHECK(jt.at("ok") == true);
    CHECK(jt.at("level_masses")[0].at("mass") == "1/4");
    CHECK(jt.at("level_masses")[0].at("mass_decimal") == "0.250000000000");

    TransferResult tr = transfer_test(t, product_joint(uniform(), uniform()),
                                      Word(), 1, 2);
    ojson jtr = to_json(tr);
    CHECK(jtr.at("hypothesis_sum") == "1/4");
    CHECK(jtr.at("bounds_ok") == true);

    ojson jd = to_json(deficiency(Word::parse("0"), uniform(), {uniform()}, {Rat(1)}));
    CHECK(jd.at("kind") == "finite");
    CHECK(jd.at("bits") == "0/1");

    ConsistencyOptions opts;
    opts.trials = 4;
    ojson jc = to_json(consistency_verdict(beta_bernoulli_joint(), 1, 3, opts));
    // Frozen: at depth 3 the separation is shallow and 3 of 4 trials recover.
    CHECK(jc.at("verdict") == "inconsistent-at-depth");
    CHECK(jc.at("recovery_table").at("rate") == "3/4");
    CHECK(jc.at("recovery_table").at("trials").size() == 4);
    CHECK(jc.at("singularity_matrix").at("cylinders").size() == 2);
}