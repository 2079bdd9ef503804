#pragma once

#include <string>

#include "cantor/consistency.hpp"
#include "cantor/joint.hpp"
#include "cantor/measure.hpp"
#include "cantor/mltest.hpp"

namespace cantor {

inline constexpr const char* kSchemaVersion = "1";

// Model specs: {"type":"bernoulli","theta":"1/3"} | {"type":"uniform"} |
// {"type":"markov","initial":"1/2","transitions":[["1/2","1/2"],["1/2","1/2"]]}
// | {"type":"pointmass","head":"11","repeat":"0"} |
// {"type":"mixture","weights":["1/2","1/2"],"components":[...]} |
// {"type":"uniform_interval","lower":"0","upper":"1/2"}.
// Rationals are always "p/q" strings. Malformed specs raise ParseError.
Measure measure_from_json(const ojson& spec);

// Joint specs: {"type":"product","x":ModelSpec,"y":ModelSpec} |
// {"type":"beta_bernoulli"} |
// {"type":"counterexample","approximants":["10","1010"],"alpha":"2/3"}.
Joint joint_from_json(const ojson& spec);

// Test specs: {"levels":{"1":["0"],"2":["00"]}} with contiguous level keys.
FiniteTest test_from_json(const ojson& spec);
ojson test_to_json(const FiniteTest& test);

ojson parse_json_text(const std::string& text);
ojson load_json_file(const std::string& path);

// Rational rendered as {"<key>": "p/q", "<key>_decimal": "0.xxxx"}.
void put_rat(ojson& obj, const std::string& key, const Rat& value);

ojson to_json(const AdditivityReport& report);
ojson to_json(const Additivity2Report& report);
ojson to_json(const TestValidationReport& report);
ojson to_json(const TransferResult& result);
ojson to_json(const CounterexampleLevel& level);
ojson to_json(const ProductTestValidationReport& report);
ojson to_json(const ConsistencyReport& report);
ojson to_json(const Deficiency& value);

}  // namespace cantor
