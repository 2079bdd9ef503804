#include "cantor/json_io.hpp"

#include <fstream>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

const ojson& field(const ojson& obj, const std::string& key) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError("missing field \"" + key + "\"");
    return obj.at(key);
}

std::string string_field(const ojson& obj, const std::string& key) {
    const ojson& v = field(obj, key);
    if (!v.is_string())
        throw ParseError("field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

Rat rat_field(const ojson& obj, const std::string& key) {
    return parse_rat(string_field(obj, key));
}

void check_schema_version(const ojson& obj) {
    if (obj.is_object() && obj.contains("schema_version")) {
        const ojson& v = obj.at("schema_version");
        if (!v.is_string() || v.get<std::string>() != kSchemaVersion)
            throw ParseError("unsupported schema_version");
    }
}

}  // namespace

Measure measure_from_json(const ojson& spec) {
    if (!spec.is_object()) throw ParseError("model spec must be a JSON object");
    check_schema_version(spec);
    const std::string type = string_field(spec, "type");
    try {
        if (type == "bernoulli") return bernoulli(rat_field(spec, "theta"));
        if (type == "uniform") return uniform();
        if (type == "markov") {
            const ojson& rows = field(spec, "transitions");
            if (!rows.is_array() || rows.size() != 2 || !rows[0].is_array() ||
                !rows[1].is_array() || rows[0].size() != 2 || rows[1].size() != 2)
                throw ParseError("markov transitions must be a 2x2 array");
            std::array<std::array<Rat, 2>, 2> t;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const ojson& cell = rows[static_cast<size_t>(a)][static_cast<size_t>(b)];
                    if (!cell.is_string())
                        throw ParseError("markov transition entries must be rational strings");
                    t[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                        parse_rat(cell.get<std::string>());
                }
            return markov(rat_field(spec, "initial"), t);
        }
        if (type == "pointmass") {
            return point_mass(EventuallyPeriodic::make(
                Word::parse(string_field(spec, "head")),
                Word::parse(string_field(spec, "repeat"))));
        }
        if (type == "mixture") {
            const ojson& ws = field(spec, "weights");
            const ojson& cs = field(spec, "components");
            if (!ws.is_array() || !cs.is_array())
                throw ParseError("mixture weights and components must be arrays");
            std::vector<Rat> weights;
            for (const ojson& w : ws) {
                if (!w.is_string())
                    throw ParseError("mixture weights must be rational strings");
                weights.push_back(parse_rat(w.get<std::string>()));
            }
            std::vector<Measure> components;
            for (const ojson& c : cs) components.push_back(measure_from_json(c));
            return finite_mixture(weights, components);
        }
        if (type == "uniform_interval") {
            return uniform_on(DyadicInterval::make(rat_field(spec, "lower"),
                                                   rat_field(spec, "upper")));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        // Construction rejected the spec's values: still a bad input file.
        throw ParseError(std::string("invalid model spec: ") + e.what());
    }
    throw ParseError("unknown model type \"" + type + "\"");
}

Joint joint_from_json(const ojson& spec) {
    if (!spec.is_object()) throw ParseError("joint spec must be a JSON object");
    check_schema_version(spec);
    const std::string type = string_field(spec, "type");
    try {
        if (type == "product")
            return product_joint(measure_from_json(field(spec, "x")),
                                 measure_from_json(field(spec, "y")));
        if (type == "beta_bernoulli") return beta_bernoulli_joint();
        if (type == "counterexample") {
            const ojson& approx = field(spec, "approximants");
            if (!approx.is_array())
                throw ParseError("approximants must be an array of words");
            std::vector<Word> words;
            for (const ojson& a : approx) {
                if (!a.is_string())
                    throw ParseError("approximants must be word strings");
                words.push_back(Word::parse(a.get<std::string>()));
            }
            return counterexample_joint(
                CounterexampleSpec::make(std::move(words), rat_field(spec, "alpha")));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("invalid joint spec: ") + e.what());
    }
    throw ParseError("unknown joint type \"" + type + "\"");
}

FiniteTest test_from_json(const ojson& spec) {
    if (!spec.is_object()) throw ParseError("test spec must be a JSON object");
    check_schema_version(spec);
    const ojson& levels = field(spec, "levels");
    if (!levels.is_object())
        throw ParseError("test levels must be an object keyed by level number");
    FiniteTest test;
    test.levels.resize(levels.size());
    std::vector<bool> seen(levels.size(), false);
    for (const auto& [key, words] : levels.items()) {
        long n = 0;
        try {
            size_t used = 0;
            n = std::stol(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError("test level keys must be integers, got \"" + key + "\"");
        }
        if (n < 1 || n > static_cast<long>(levels.size()) ||
            seen[static_cast<size_t>(n - 1)])
            throw ParseError("test level keys must be contiguous from 1");
        seen[static_cast<size_t>(n - 1)] = true;
        if (!words.is_array())
            throw ParseError("test level " + key + " must be an array of words");
        std::vector<Word>& slot = test.levels[static_cast<size_t>(n - 1)];
        for (const ojson& w : words) {
            if (!w.is_string())
                throw ParseError("test level entries must be word strings");
            slot.push_back(Word::parse(w.get<std::string>()));
        }
    }
    return test;
}

ojson test_to_json(const FiniteTest& test) {
    ojson levels = ojson::object();
    for (size_t i = 0; i < test.levels.size(); ++i) {
        ojson words = ojson::array();
        for (const Word& w : test.levels[i]) words.push_back(w.str());
        levels[std::to_string(i + 1)] = std::move(words);
    }
    return ojson{{"schema_version", kSchemaVersion}, {"levels", std::move(levels)}};
}

ojson parse_json_text(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

ojson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str());
}

void put_rat(ojson& obj, const std::string& key, const Rat& value) {
    obj[key] = rat_string(value);
    obj[key + "_decimal"] = decimal_string(value);
}

ojson to_json(const AdditivityReport& report) {
    ojson violations = ojson::array();
    for (const auto& v : report.violations) {
        ojson entry{{"word", v.x.str()}};
        put_rat(entry, "parent", v.parent);
        put_rat(entry, "left", v.left);
        put_rat(entry, "right", v.right);
        violations.push_back(std::move(entry));
    }
    return ojson{{"schema_version", kSchemaVersion},
                 {"depth", report.depth},
                 {"checked", report.checked},
                 {"total_mass_ok", report.total_mass_ok},
                 {"nonnegative", report.nonnegative},
                 {"violations", std::move(violations)},
                 {"ok", report.ok()}};
}

ojson to_json(const Additivity2Report& report) {
    ojson violations = ojson::array();
    for (const auto& v : report.violations) {
        ojson entry{{"x", v.x.str()},
                    {"y", v.y.str()},
                    {"coordinate", std::string(1, v.coordinate)}};
        put_rat(entry, "parent", v.parent);
        put_rat(entry, "left", v.left);
        put_rat(entry, "right", v.right);
        violations.push_back(std::move(entry));
    }
    return ojson{{"schema_version", kSchemaVersion},
                 {"depth_x", report.depth_x},
                 {"depth_y", report.depth_y},
                 {"checked", report.checked},
                 {"total_mass_ok", report.total_mass_ok},
                 {"nonnegative", report.nonnegative},
                 {"violations", std::move(violations)},
                 {"ok", report.ok()}};
}

namespace {

ojson violations_to_json(const std::vector<TestViolation>& violations) {
    ojson out = ojson::array();
    for (const auto& v : violations)
        out.push_back(ojson{{"level", v.level}, {"kind", v.kind}, {"detail", v.detail}});
    return out;
}

ojson masses_to_json(const std::vector<Rat>& masses) {
    ojson out = ojson::array();
    for (size_t i = 0; i < masses.size(); ++i) {
        ojson entry{{"level", i + 1}};
        put_rat(entry, "mass", masses[i]);
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace

ojson to_json(const TestValidationReport& report) {
    return ojson{{"schema_version", kSchemaVersion},
                 {"ok", report.ok},
                 {"level_masses", masses_to_json(report.level_masses)},
                 {"violations", violations_to_json(report.violations)}};
}

ojson to_json(const TransferResult& result) {
    ojson out{{"schema_version", kSchemaVersion},
              {"evaluation_depth", result.d},
              {"bound", result.bound}};
    put_rat(out, "hypothesis_sum", result.hypothesis_sum);
    ojson levels = ojson::array();
    for (size_t k = 0; k < result.test.levels.size(); ++k) {
        ojson words = ojson::array();
        for (const Word& w : result.test.levels[k]) words.push_back(w.str());
        ojson entry{{"k", k + 1}, {"words", std::move(words)}};
        put_rat(entry, "conditional_mass", result.conditional_masses[k]);
        put_rat(entry, "bound", pow2(-static_cast<long>(k) - 1));
        levels.push_back(std::move(entry));
    }
    out["levels"] = std::move(levels);
    out["bounds_ok"] = result.bounds_ok;
    return out;
}

ojson to_json(const CounterexampleLevel& level) {
    ojson words = ojson::array();
    for (const Word& w : level.words) words.push_back(w.str());
    ojson out{{"schema_version", kSchemaVersion},
              {"word_count", level.words.size()}};
    put_rat(out, "threshold", level.threshold);
    put_rat(out, "limit_conditional_mass", level.limit_conditional_mass);
    put_rat(out, "mass_bound", level.mass_bound);
    out["within_bound"] = level.within_bound;
    out["words"] = std::move(words);
    return out;
}

ojson to_json(const ProductTestValidationReport& report) {
    return ojson{{"schema_version", kSchemaVersion},
                 {"ok", report.ok},
                 {"level_masses", masses_to_json(report.level_masses)},
                 {"violations", violations_to_json(report.violations)}};
}

ojson to_json(const ConsistencyReport& report) {
    ojson out{{"schema_version", kSchemaVersion},
              {"param_depth", report.param_depth},
              {"sample_depth", report.sample_depth}};
    ojson options{{"trials", report.options.trials},
                  {"seed", report.options.seed},
                  {"curve_samples", report.options.curve_samples}};
    put_rat(options, "epsilon", report.options.epsilon);
    put_rat(options, "recovery_threshold", report.options.recovery_threshold);
    out["options"] = std::move(options);

    ojson cylinders = ojson::array();
    for (const Word& w : report.matrix.cylinders) cylinders.push_back(w.str());
    ojson excluded = ojson::array();
    for (const Word& w : report.matrix.excluded_null) excluded.push_back(w.str());
    ojson rows = ojson::array();
    for (const auto& row : report.matrix.tv) {
        ojson cells = ojson::array();
        for (const Rat& cell : row) cells.push_back(rat_string(cell));
        rows.push_back(std::move(cells));
    }
    ojson matrix{{"cylinders", std::move(cylinders)},
                 {"excluded_null", std::move(excluded)},
                 {"tv", std::move(rows)}};
    if (auto min_tv = report.matrix.min_offdiagonal())
        put_rat(matrix, "min_offdiagonal", *min_tv);
    out["singularity_matrix"] = std::move(matrix);

    ojson curves = ojson::array();
    for (const auto& curve : report.curves) {
        ojson values = ojson::array();
        for (const Rat& v : curve.sup_posterior) values.push_back(rat_string(v));
        curves.push_back(ojson{{"x", curve.x.str()},
                               {"sup_posterior", std::move(values)}});
    }
    out["concentration_curves"] = std::move(curves);

    ojson trials = ojson::array();
    for (const auto& t : report.recovery.trials)
        trials.push_back(ojson{{"y", t.y.str()},
                               {"x", t.x.str()},
                               {"estimate", t.estimate.str()},
                               {"matched", t.matched}});
    ojson recovery{{"trials", std::move(trials)},
                   {"matched", report.recovery.matched_count()}};
    put_rat(recovery, "rate", report.recovery.rate());
    out["recovery_table"] = std::move(recovery);
    out["verdict"] = verdict_string(report.verdict);
    return out;
}

ojson to_json(const Deficiency& value) {
    ojson out{{"schema_version", kSchemaVersion}};
    switch (value.kind) {
        case DeficiencyKind::Finite:
            out["kind"] = "finite";
            put_rat(out, "bits", value.bits);
            break;
        case DeficiencyKind::PlusInfinity:
            out["kind"] = "plus_infinity";
            break;
        case DeficiencyKind::MinusInfinity:
            out["kind"] = "minus_infinity";
            break;
    }
    return out;
}

}  // namespace cantor
