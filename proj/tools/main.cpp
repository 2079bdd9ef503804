#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cantor/bayes.hpp"
#include "cantor/budget.hpp"
#include "cantor/consistency.hpp"
#include "cantor/errors.hpp"
#include "cantor/joint.hpp"
#include "cantor/json_io.hpp"
#include "cantor/measure.hpp"
#include "cantor/mltest.hpp"
#include "cantor/random.hpp"

namespace {

using namespace cantor;

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    if (!f) throw PreconditionError("cannot write " + out_path);
}

void emit_json(const ojson& doc, const std::string& out_path) {
    emit_text(doc.dump(2) + "\n", out_path);
}

std::string csv_text(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

// Spec arguments accept a builtin name, inline JSON, or a file path.
Measure load_measure_arg(const std::string& arg) {
    if (arg == "uniform") return uniform();
    if (!arg.empty() && arg.front() == '{')
        return measure_from_json(parse_json_text(arg));
    return measure_from_json(load_json_file(arg));
}

Joint load_joint_arg(const std::string& arg) {
    if (arg == "beta_bernoulli") return beta_bernoulli_joint();
    if (arg == "product_uniform") return product_joint(uniform(), uniform());
    if (!arg.empty() && arg.front() == '{')
        return joint_from_json(parse_json_text(arg));
    return joint_from_json(load_json_file(arg));
}

std::vector<Word> parse_word_list(const std::string& csv) {
    std::vector<Word> words;
    std::string token;
    for (char c : csv) {
        if (c == ',') {
            words.push_back(Word::parse(token));
            token.clear();
        } else {
            token += c;
        }
    }
    words.push_back(Word::parse(token));
    return words;
}

ojson word_mass_rows(const Measure& m, long depth) {
    ojson rows = ojson::array();
    for (const Word& w : partition(depth)) {
        ojson row{{"word", w.str()}};
        put_rat(row, "mass", m.mass(w));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<std::string>> word_mass_csv(const Measure& m, long depth) {
    std::vector<std::vector<std::string>> rows{{"word", "mass", "mass_decimal"}};
    for (const Word& w : partition(depth))
        rows.push_back({w.str(), rat_string(m.mass(w)), decimal_string(m.mass(w))});
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-rational Bayesian conditioning on Cantor space"};
    app.require_subcommand(1);
    app.fallthrough();

    int budget = -1;
    app.add_option("--depth-budget", budget,
                   "Override the enumeration depth budget (max 62)");

    std::function<void()> action;
    std::string out_path;
    std::string format = "json";

    // Shared option slots; each subcommand binds the ones it uses.
    std::string spec_arg, joint_arg, a_arg, b_arg, test_path, pool_path;
    std::string x_str, y_str, side = "x", head_str, repeat_str;
    std::string alpha_str, approximants_csv, matrix_csv_path;
    std::string epsilon_str = "1/100", threshold_str = "9/10";
    long depth = 6, verify_depth = 10, n = 6, n_max = 12, length = 8, count = 1;
    long param_depth = 1, sample_depth = 50, trials = 200, curve_samples = 3;
    long bound_m = 1, k_max = 6, k_levels = 0;
    unsigned long long seed = 0;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "Write output to a file instead of stdout");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    // model validate
    CLI::App* model = app.add_subcommand("model", "Measure-level operations");
    model->require_subcommand(1);
    CLI::App* model_validate =
        model->add_subcommand("validate", "Check additivity and normalization");
    model_validate->add_option("--spec", spec_arg, "Model spec (file, inline JSON, or builtin)")
        ->required();
    model_validate->add_option("--depth", depth, "Split-check depth");
    add_out(model_validate);
    model_validate->callback([&] {
        action = [&] {
            Measure m = load_measure_arg(spec_arg);
            ojson doc = to_json(validate_additivity(m, depth));
            doc["model"] = m.descriptor();
            emit_json(doc, out_path);
        };
    });

    // eval
    CLI::App* eval_cmd = app.add_subcommand("eval", "Cylinder mass of a word");
    eval_cmd->add_option("--spec", spec_arg, "Model spec")->required();
    eval_cmd->add_option("--x", x_str, "Binary word (empty for the full space)");
    add_out(eval_cmd);
    eval_cmd->callback([&] {
        action = [&] {
            Measure m = load_measure_arg(spec_arg);
            Word x = Word::parse(x_str);
            ojson doc{{"schema_version", kSchemaVersion}, {"x", x.str()}};
            put_rat(doc, "mass", evaluate(m, x));
            doc["model"] = m.descriptor();
            emit_json(doc, out_path);
        };
    });

    // sample
    CLI::App* sample_cmd = app.add_subcommand("sample", "Draw words from a measure");
    sample_cmd->add_option("--spec", spec_arg, "Model spec")->required();
    sample_cmd->add_option("--length", length, "Word length")->required();
    sample_cmd->add_option("--seed", seed, "Stream seed")->required();
    sample_cmd->add_option("--count", count, "Number of draws");
    add_out(sample_cmd);
    sample_cmd->callback([&] {
        action = [&] {
            Measure m = load_measure_arg(spec_arg);
            if (count < 1) throw PreconditionError("sample: count must be >= 1");
            ojson words = ojson::array();
            for (long i = 0; i < count; ++i)
                words.push_back(
                    sample(m, length, derive_seed(seed, static_cast<unsigned long long>(i)))
                        .str());
            ojson doc{{"schema_version", kSchemaVersion},
                      {"length", length},
                      {"seed", seed},
                      {"count", count},
                      {"words", std::move(words)},
                      {"model", m.descriptor()}};
            emit_json(doc, out_path);
        };
    });

    // marginal / conditional / posterior: mass tables over a full partition
    CLI::App* marginal_cmd = app.add_subcommand("marginal", "Marginal mass table");
    marginal_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    marginal_cmd->add_option("--side", side, "Which coordinate")
        ->check(CLI::IsMember({"x", "y"}));
    marginal_cmd->add_option("--depth", depth, "Table depth");
    add_format(marginal_cmd);
    add_out(marginal_cmd);
    marginal_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            Measure m = (side == "x") ? marginal_x(joint) : marginal_y(joint);
            if (format == "csv") {
                emit_text(csv_text(word_mass_csv(m, depth)), out_path);
                return;
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"side", side},
                      {"depth", depth},
                      {"rows", word_mass_rows(m, depth)},
                      {"joint", joint.descriptor()}};
            emit_json(doc, out_path);
        };
    });

    CLI::App* conditional_cmd =
        app.add_subcommand("conditional", "Conditional mass table given a parameter word");
    conditional_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    conditional_cmd->add_option("--y", y_str, "Conditioning word");
    conditional_cmd->add_option("--depth", depth, "Table depth");
    add_format(conditional_cmd);
    add_out(conditional_cmd);
    conditional_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            Measure m = conditional(joint, Word::parse(y_str));
            if (format == "csv") {
                emit_text(csv_text(word_mass_csv(m, depth)), out_path);
                return;
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"y", y_str},
                      {"depth", depth},
                      {"rows", word_mass_rows(m, depth)},
                      {"joint", joint.descriptor()}};
            emit_json(doc, out_path);
        };
    });

    CLI::App* posterior_cmd =
        app.add_subcommand("posterior", "Posterior mass table given an observation word");
    posterior_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    posterior_cmd->add_option("--x", x_str, "Observed word");
    posterior_cmd->add_option("--depth", depth, "Table depth");
    add_format(posterior_cmd);
    add_out(posterior_cmd);
    posterior_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            Measure m = posterior(joint, Word::parse(x_str));
            if (format == "csv") {
                emit_text(csv_text(word_mass_csv(m, depth)), out_path);
                return;
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"x", x_str},
                      {"depth", depth},
                      {"rows", word_mass_rows(m, depth)},
                      {"joint", joint.descriptor()}};
            emit_json(doc, out_path);
        };
    });

    // martingale
    CLI::App* martingale_cmd =
        app.add_subcommand("martingale", "Conditional value along parameter prefixes");
    martingale_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    martingale_cmd->add_option("--x", x_str, "Evaluation word");
    martingale_cmd->add_option("--target-head", head_str, "Target sequence head");
    martingale_cmd->add_option("--target-repeat", repeat_str, "Target repeating block")
        ->required();
    martingale_cmd->add_option("--n-max", n_max, "Last prefix length");
    add_format(martingale_cmd);
    add_out(martingale_cmd);
    martingale_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            Word x = Word::parse(x_str);
            EventuallyPeriodic target = EventuallyPeriodic::make(
                Word::parse(head_str), Word::parse(repeat_str));
            std::vector<Rat> values = martingale_sequence(joint, x, target, n_max);
            if (format == "csv") {
                std::vector<std::vector<std::string>> rows{{"n", "value", "value_decimal"}};
                for (size_t i = 0; i < values.size(); ++i)
                    rows.push_back({std::to_string(i), rat_string(values[i]),
                                    decimal_string(values[i])});
                emit_text(csv_text(rows), out_path);
                return;
            }
            ojson rows = ojson::array();
            for (size_t i = 0; i < values.size(); ++i) {
                ojson row{{"n", i}};
                put_rat(row, "value", values[i]);
                rows.push_back(std::move(row));
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"x", x.str()},
                      {"target_head", head_str},
                      {"target_repeat", repeat_str},
                      {"rows", std::move(rows)}};
            if (auto limit = limit_conditional(joint, target))
                put_rat(doc, "limit", limit->mass(x));
            doc["joint"] = joint.descriptor();
            emit_json(doc, out_path);
        };
    });

    // mixture-check
    CLI::App* mixture_cmd =
        app.add_subcommand("mixture-check", "Residual of the slice decomposition");
    mixture_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    mixture_cmd->add_option("--x", x_str, "Evaluation word");
    mixture_cmd->add_option("--n", n, "Parameter slice depth");
    add_out(mixture_cmd);
    mixture_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            Word x = Word::parse(x_str);
            ojson doc{{"schema_version", kSchemaVersion}, {"x", x.str()}, {"n", n}};
            put_rat(doc, "residual", mixture_residual(joint, x, n));
            doc["joint"] = joint.descriptor();
            emit_json(doc, out_path);
        };
    });

    // tv-curve
    CLI::App* tv_cmd =
        app.add_subcommand("tv-curve", "Total variation at each depth between two models");
    tv_cmd->add_option("--a", a_arg, "First model spec")->required();
    tv_cmd->add_option("--b", b_arg, "Second model spec")->required();
    tv_cmd->add_option("--n-max", n_max, "Last depth");
    add_format(tv_cmd);
    add_out(tv_cmd);
    tv_cmd->callback([&] {
        action = [&] {
            Measure p = load_measure_arg(a_arg);
            Measure q = load_measure_arg(b_arg);
            if (format == "csv") {
                std::vector<std::vector<std::string>> rows{{"n", "tv", "tv_decimal"}};
                for (long d = 0; d <= n_max; ++d) {
                    Rat tv = total_variation_at_depth(p, q, d);
                    rows.push_back({std::to_string(d), rat_string(tv), decimal_string(tv)});
                }
                emit_text(csv_text(rows), out_path);
                return;
            }
            ojson rows = ojson::array();
            for (long d = 0; d <= n_max; ++d) {
                ojson row{{"n", d}};
                put_rat(row, "tv", total_variation_at_depth(p, q, d));
                rows.push_back(std::move(row));
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"a", p.descriptor()},
                      {"b", q.descriptor()},
                      {"rows", std::move(rows)}};
            emit_json(doc, out_path);
        };
    });

    // consistency-report
    CLI::App* consistency_cmd =
        app.add_subcommand("consistency-report", "Singularity, concentration, and recovery diagnostics");
    consistency_cmd->add_option("--joint", joint_arg, "Joint spec")->required();
    consistency_cmd->add_option("--param-depth", param_depth, "Parameter cylinder depth");
    consistency_cmd->add_option("--sample-depth", sample_depth, "Observation depth");
    consistency_cmd->add_option("--epsilon", epsilon_str, "Singularity slack (rational)");
    consistency_cmd->add_option("--recovery-threshold", threshold_str,
                                "Recovery rate threshold (rational)");
    consistency_cmd->add_option("--trials", trials, "Recovery trials");
    consistency_cmd->add_option("--seed", seed, "Stream seed")->required();
    consistency_cmd->add_option("--curve-samples", curve_samples, "Concentration curves");
    consistency_cmd->add_option("--matrix-csv", matrix_csv_path,
                                "Also write the TV matrix as CSV");
    add_out(consistency_cmd);
    consistency_cmd->callback([&] {
        action = [&] {
            Joint joint = load_joint_arg(joint_arg);
            ConsistencyOptions opts;
            opts.epsilon = parse_rat(epsilon_str);
            opts.recovery_threshold = parse_rat(threshold_str);
            opts.trials = trials;
            opts.seed = seed;
            opts.curve_samples = curve_samples;
            ConsistencyReport report =
                consistency_verdict(joint, param_depth, sample_depth, opts);
            if (!matrix_csv_path.empty()) {
                std::vector<std::vector<std::string>> rows{
                    {"i", "j", "cylinder_i", "cylinder_j", "tv", "tv_decimal"}};
                const auto& mat = report.matrix;
                for (size_t i = 0; i < mat.tv.size(); ++i)
                    for (size_t j = 0; j < mat.tv.size(); ++j)
                        rows.push_back({std::to_string(i), std::to_string(j),
                                        mat.cylinders[i].str(), mat.cylinders[j].str(),
                                        rat_string(mat.tv[i][j]),
                                        decimal_string(mat.tv[i][j])});
                emit_text(csv_text(rows), matrix_csv_path);
            }
            ojson doc = to_json(report);
            doc["joint"] = joint.descriptor();
            emit_json(doc, out_path);
        };
    });

    // counterexample verify
    CLI::App* counterexample_cmd =
        app.add_subcommand("counterexample", "Counterexample-family operations");
    counterexample_cmd->require_subcommand(1);
    CLI::App* verify_cmd = counterexample_cmd->add_subcommand(
        "verify", "Parameter tail-mass table and observation-marginal check");
    verify_cmd->add_option("--alpha", alpha_str, "Atom cutoff (rational)")->required();
    verify_cmd->add_option("--approximants", approximants_csv,
                           "Comma-separated binary words")
        ->required();
    verify_cmd->add_option("--depth", verify_depth, "Observation-marginal check depth");
    add_format(verify_cmd);
    add_out(verify_cmd);
    verify_cmd->callback([&] {
        action = [&] {
            CounterexampleSpec spec = CounterexampleSpec::make(
                parse_word_list(approximants_csv), parse_rat(alpha_str));
            Joint joint = counterexample_joint(spec);
            long k_top = spec.count() + 1;
            if (format == "csv") {
                std::vector<std::vector<std::string>> rows{{"k", "mass", "mass_decimal"}};
                for (long k = 1; k <= k_top; ++k) {
                    Rat mass = y_tail_mass(spec, k);
                    rows.push_back({std::to_string(k), rat_string(mass),
                                    decimal_string(mass)});
                }
                Rat lim = y_tail_limit(spec);
                rows.push_back({"limit", rat_string(lim), decimal_string(lim)});
                emit_text(csv_text(rows), out_path);
                return;
            }
            ojson rows = ojson::array();
            for (long k = 1; k <= k_top; ++k) {
                ojson row{{"k", k}};
                put_rat(row, "mass", y_tail_mass(spec, k));
                rows.push_back(std::move(row));
            }
            bool uniform_ok = true;
            require_enumerable(verify_depth, "counterexample verify");
            for (long d = 0; d <= verify_depth && uniform_ok; ++d)
                for (const Word& w : partition(d))
                    if (joint.mass2(w, Word()) != pow2(-d)) {
                        uniform_ok = false;
                        break;
                    }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"tail_table", std::move(rows)}};
            put_rat(doc, "limit", y_tail_limit(spec));
            doc["x_marginal_depth"] = verify_depth;
            doc["x_marginal_uniform"] = uniform_ok;
            doc["joint"] = joint.descriptor();
            emit_json(doc, out_path);
        };
    });

    // test subcommands
    CLI::App* test_cmd = app.add_subcommand("test", "Finite test operations");
    test_cmd->require_subcommand(1);

    CLI::App* test_validate =
        test_cmd->add_subcommand("validate", "Check a test against a measure");
    test_validate->add_option("--test", test_path, "Test spec file")->required();
    test_validate->add_option("--measure", spec_arg, "Model spec")->required();
    add_out(test_validate);
    test_validate->callback([&] {
        action = [&] {
            FiniteTest test = test_from_json(load_json_file(test_path));
            Measure m = load_measure_arg(spec_arg);
            ojson doc = to_json(validate_test(test, m));
            doc["measure"] = m.descriptor();
            emit_json(doc, out_path);
        };
    });

    CLI::App* test_transfer =
        test_cmd->add_subcommand("transfer", "Transfer a test along a conditioning word");
    test_transfer->add_option("--test", test_path, "Test spec file")->required();
    test_transfer->add_option("--joint", joint_arg, "Joint spec")->required();
    test_transfer->add_option("--y", y_str, "Conditioning word");
    test_transfer->add_option("--M", bound_m, "Hypothesis bound")->required();
    test_transfer->add_option("--k-max", k_max, "Levels of the transferred test");
    add_out(test_transfer);
    test_transfer->callback([&] {
        action = [&] {
            FiniteTest test = test_from_json(load_json_file(test_path));
            Joint joint = load_joint_arg(joint_arg);
            TransferResult result =
                transfer_test(test, joint, Word::parse(y_str), bound_m, k_max);
            ojson doc = to_json(result);
            doc["y"] = y_str;
            doc["joint"] = joint.descriptor();
            emit_json(doc, out_path);
        };
    });

    CLI::App* test_counterexample = test_cmd->add_subcommand(
        "counterexample", "One critical-region level for the counterexample family");
    test_counterexample->add_option("--alpha", alpha_str, "Atom cutoff")->required();
    test_counterexample
        ->add_option("--approximants", approximants_csv, "Comma-separated binary words")
        ->required();
    test_counterexample->add_option("--n", n, "Level index")->required();
    test_counterexample->add_option("--depth", depth, "Realization depth")->required();
    add_out(test_counterexample);
    test_counterexample->callback([&] {
        action = [&] {
            CounterexampleSpec spec = CounterexampleSpec::make(
                parse_word_list(approximants_csv), parse_rat(alpha_str));
            ojson doc = to_json(counterexample_test_level(spec, n, depth));
            doc["n"] = n;
            doc["depth"] = depth;
            emit_json(doc, out_path);
        };
    });

    CLI::App* test_diagonal =
        test_cmd->add_subcommand("diagonal", "Shrinking diagonal covers in the product space");
    test_diagonal->add_option("--n-max", n_max, "Deepest level");
    test_diagonal->add_option("--joint", joint_arg, "Joint spec (default product of uniforms)");
    add_out(test_diagonal);
    test_diagonal->callback([&] {
        action = [&] {
            Joint joint = joint_arg.empty() ? product_joint(uniform(), uniform())
                                            : load_joint_arg(joint_arg);
            ProductFiniteTest diag = diagonal_test(n_max);
            ProductTestValidationReport report = validate_product_test(diag, joint);
            bool nesting_ok = true;
            for (const auto& v : report.violations)
                if (v.kind == "nesting" || v.kind == "overlap") nesting_ok = false;
            ojson rows = ojson::array();
            bool identity_ok = true;
            for (size_t i = 0; i < report.level_masses.size(); ++i) {
                long level = static_cast<long>(i) + 1;
                bool exact = report.level_masses[i] == pow2(-level);
                identity_ok = identity_ok && exact;
                ojson row{{"n", level}};
                put_rat(row, "mass", report.level_masses[i]);
                put_rat(row, "expected", pow2(-level));
                row["exact"] = exact;
                rows.push_back(std::move(row));
            }
            ojson doc{{"schema_version", kSchemaVersion},
                      {"levels", std::move(rows)},
                      {"nesting_ok", nesting_ok},
                      {"mass_identity_ok", identity_ok},
                      {"joint", joint.descriptor()}};
            emit_json(doc, out_path);
        };
    });

    CLI::App* test_deficiency =
        test_cmd->add_subcommand("deficiency", "Mixture-to-target likelihood ratio in bits");
    test_deficiency->add_option("--x", x_str, "Evaluation word")->required();
    test_deficiency->add_option("--target", spec_arg, "Target model spec")->required();
    test_deficiency->add_option("--pool", pool_path, "Mixture model spec for the pool")
        ->required();
    add_out(test_deficiency);
    test_deficiency->callback([&] {
        action = [&] {
            Measure target = load_measure_arg(spec_arg);
            ojson pool_spec = (!pool_path.empty() && pool_path.front() == '{')
                                  ? parse_json_text(pool_path)
                                  : load_json_file(pool_path);
            if (!pool_spec.is_object() || !pool_spec.contains("type") ||
                pool_spec.at("type") != "mixture" ||
                !pool_spec.contains("weights") || !pool_spec.at("weights").is_array() ||
                !pool_spec.contains("components") ||
                !pool_spec.at("components").is_array())
                throw ParseError("pool spec must be a mixture model");
            std::vector<Rat> weights;
            for (const auto& w : pool_spec.at("weights")) {
                if (!w.is_string())
                    throw ParseError("pool weights must be rational strings");
                weights.push_back(parse_rat(w.get<std::string>()));
            }
            std::vector<Measure> pool;
            for (const auto& c : pool_spec.at("components"))
                pool.push_back(measure_from_json(c));
            Word x = Word::parse(x_str);
            ojson doc = to_json(deficiency(x, target, pool, weights));
            doc["x"] = x.str();
            doc["target"] = target.descriptor();
            emit_json(doc, out_path);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const cantor::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cantor::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (budget >= 0) set_depth_budget(budget);
        if (action) action();
    } catch (const cantor::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cantor::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
