#include "syrup/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include <json.hpp>

#include "syrup/calibrate.hpp"
#include "syrup/error.hpp"
#include "syrup/json_io.hpp"
#include "syrup/metrics.hpp"
#include "syrup/parse.hpp"
#include "syrup/prompt.hpp"
#include "syrup/report.hpp"

namespace syrup {

using nlohmann::json;

namespace {

constexpr ConfLevel kSuggestionLevels[] = {ConfLevel::null_conf, ConfLevel::low,
                                           ConfLevel::high};

std::vector<Question> load_questions(const RunConfig& config) {
    if (config.questions.empty()) throw ConfigError("questions path not set");
    auto questions = read_jsonl<Question>(config.questions);
    if (questions.empty()) throw ConfigError("question file is empty");
    for (const auto& q : questions) q.validate();
    return questions;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : std::string{};
}

InferenceRequest request_for_bundle(const RunConfig& config, const PromptBundle& bundle) {
    InferenceRequest req;
    req.model_name = config.model_name;
    req.system_text = bundle.system_text;
    req.user_text = bundle.user_text;
    req.temperature = config.temperature;
    req.top_p = config.top_p;
    req.max_tokens = config.max_tokens;
    req.want_logprobs = config.derivative_kind != DerivativeKind::dnc;
    return req;
}

}  // namespace

void run_forge(const RunConfig& config) {
    config.validate();
    auto questions = load_questions(config);
    auto templates = TemplateLibrary::load(config.templates);
    Rng rng(derive_seed(config.seed, "forge"));

    std::vector<json> manifest;
    manifest.reserve(questions.size() * 7);
    for (const auto& q : questions) {
        std::vector<std::optional<UserSuggestion>> cells;
        cells.emplace_back(std::nullopt);
        for (ConfLevel level : kSuggestionLevels) {
            cells.emplace_back(
                UserSuggestion{q.ground_truth, true, ConfidenceLevel::from_level(level)});
            cells.emplace_back(UserSuggestion{draw_incorrect_suggestion(q, rng), false,
                                              ConfidenceLevel::from_level(level)});
        }
        for (const auto& suggestion : cells) {
            PromptBundle bundle = build_prompt(q, suggestion, config.derivative_kind, templates);
            json entry{{"question_id", q.id},
                       {"task_kind", to_string(q.task_kind)},
                       {"behavior", bundle.behavior},
                       {"elicits_confidence", bundle.elicits_confidence},
                       {"request", request_for_bundle(config, bundle)}};
            if (suggestion) entry["suggestion"] = *suggestion;
            manifest.push_back(std::move(entry));
        }
    }
    write_jsonl_raw(config.prompt_manifest_path(), manifest);
}

void run_infer(const RunConfig& config) {
    config.validate();
    auto questions = load_questions(config);
    std::map<std::string, Question> by_id;
    for (auto& q : questions) by_id.emplace(q.id, std::move(q));

    auto manifest = read_jsonl_raw(config.prompt_manifest_path());
    if (manifest.empty()) throw ConfigError("prompt manifest is empty; run forge first");

    CompletionClient client(config.base_url.empty() ? env_or_empty("SYRUP_BASE_URL")
                                                    : config.base_url,
                            env_or_empty("SYRUP_API_KEY"), config.cache_dir, config.mode,
                            config.retry, config.concurrency);

    struct Slot {
        std::optional<EvalRecord> record;
        std::string drop_reason;
    };
    std::vector<Slot> slots(manifest.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= slots.size() || failed.load()) return;
            try {
                const json& entry = manifest[i];
                auto request = entry.at("request").get<InferenceRequest>();
                auto behavior = entry.at("behavior").get<BehaviorVector>();
                bool elicits = entry.at("elicits_confidence").get<bool>();
                std::string qid = entry.at("question_id").get<std::string>();
                auto qit = by_id.find(qid);
                if (qit == by_id.end())
                    throw ConfigError("manifest references unknown question " + qid);
                const Question& question = qit->second;

                InferenceResponse response = client.complete(request);

                ParsedAnswer parsed;
                try {
                    parsed = parse_answer(response.raw_text, question.task_kind, elicits);
                } catch (const ParseFailure&) {
                    slots[i].drop_reason = "parse_failure";
                    continue;
                }

                ModelAnswer answer;
                answer.raw_text = response.raw_text;
                answer.parsed_answer = parsed.answer;
                answer.dnc = parsed.dnc;
                answer.token_logprobs = response.token_logprobs;
                answer.accuracy = answers_match(parsed.answer, question.ground_truth) ? 1 : 0;
                answer.validate();

                double derivative = 0.0;
                if (config.derivative_kind == DerivativeKind::dnc) {
                    if (!answer.dnc) {
                        slots[i].drop_reason = "missing_dnc";
                        continue;
                    }
                    derivative =
                        dnc_to_derivative(*answer.dnc, answer.parsed_answer, question.task_kind);
                } else {
                    if (!answer.token_logprobs || answer.token_logprobs->empty()) {
                        slots[i].drop_reason = "missing_logprobs";
                        continue;
                    }
                    try {
                        derivative =
                            config.itp_span == ItpSpan::answer_only
                                ? compute_itp_over_span(*answer.token_logprobs,
                                                        parsed.span_begin, parsed.span_end)
                                : compute_itp(*answer.token_logprobs);
                    } catch (const EmptySequence&) {
                        slots[i].drop_reason = "missing_logprobs";
                        continue;
                    }
                }

                EvalRecord record;
                record.question_id = qid;
                record.behavior = behavior;
                if (entry.contains("suggestion"))
                    record.suggestion = entry.at("suggestion").get<UserSuggestion>();
                record.derivative_kind = config.derivative_kind;
                record.derivative = derivative;
                record.accuracy = answer.accuracy;
                record.model_name = config.model_name;
                slots[i].record = validate_record(record, question);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::size_t n_threads = std::min<std::size_t>(
        static_cast<std::size_t>(config.concurrency), slots.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::max<std::size_t>(1, n_threads); ++t)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<EvalRecord> records;
    std::map<std::string, std::size_t> drops;
    for (const auto& slot : slots) {
        if (slot.record)
            records.push_back(*slot.record);
        else
            ++drops[slot.drop_reason];
    }
    write_jsonl(config.records_path(), records);

    std::size_t n_dropped = slots.size() - records.size();
    json summary{{"n_prompts", slots.size()},
                 {"n_records", records.size()},
                 {"n_dropped", n_dropped},
                 {"drops_by_reason", drops},
                 {"model_name", config.model_name},
                 {"derivative_kind", to_string(config.derivative_kind)}};
    write_json_file(config.manifests_dir() / "infer.json", summary);
}

namespace {

struct GroupedRecords {
    std::vector<EvalRecord> base;
    std::map<ConfLevel, std::vector<PairedSample>> pairs;
    std::size_t incomplete = 0;
};

GroupedRecords group_records(const std::vector<EvalRecord>& records) {
    GroupedRecords grouped;
    std::map<std::pair<std::string, ConfLevel>,
             std::pair<std::optional<EvalRecord>, std::optional<EvalRecord>>>
        cells;
    for (const auto& r : records) {
        if (!r.suggestion) {
            grouped.base.push_back(r);
            continue;
        }
        auto& cell = cells[{r.question_id, r.suggestion->confidence.level}];
        (r.suggestion->is_correct ? cell.first : cell.second) = r;
    }
    for (auto& [key, cell] : cells) {
        if (cell.first && cell.second) {
            PairedSample pair;
            pair.question_id = key.first;
            pair.correct_variant = std::move(*cell.first);
            pair.incorrect_variant = std::move(*cell.second);
            grouped.pairs[key.second].push_back(std::move(pair));
        } else {
            ++grouped.incomplete;
        }
    }
    return grouped;
}

// Relative level weights: the heaviest level keeps all pairs, lighter levels
// are subsampled proportionally, zero-weight levels are excluded.
void apply_mix(std::map<ConfLevel, std::vector<PairedSample>>& pairs,
               const std::map<ConfLevel, double>& mix, Rng& rng) {
    double w_max = 0.0;
    for (const auto& [level, w] : mix) w_max = std::max(w_max, w);
    if (w_max <= 0.0) throw ConfigError("confidence_mix has no positive weight");
    for (auto it = pairs.begin(); it != pairs.end();) {
        auto mit = mix.find(it->first);
        double w = mit == mix.end() ? 0.0 : mit->second;
        if (w <= 0.0) {
            it = pairs.erase(it);
            continue;
        }
        double frac = w / w_max;
        if (frac < 1.0) {
            auto& v = it->second;
            auto keep = static_cast<std::size_t>(
                std::llround(frac * static_cast<double>(v.size())));
            keep = std::max<std::size_t>(keep, 1);
            std::vector<std::size_t> idx(v.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            rng.shuffle(idx);
            idx.resize(keep);
            std::sort(idx.begin(), idx.end());
            std::vector<PairedSample> kept;
            kept.reserve(keep);
            for (std::size_t i : idx) kept.push_back(std::move(v[i]));
            v = std::move(kept);
        }
        ++it;
    }
}

json population_manifest(const RunConfig& config, const std::vector<EvalRecord>& population,
                         std::size_t incomplete) {
    std::size_t n_base = 0, n_suggested = 0, n_correct = 0;
    for (const auto& r : population) {
        if (!r.suggestion) {
            ++n_base;
            continue;
        }
        ++n_suggested;
        if (r.suggestion->is_correct) ++n_correct;
    }
    json manifest{{"seed", config.seed},
                  {"calibrated", config.population.calibrated},
                  {"correctness_pct", config.population.correctness_pct},
                  {"n_base", n_base},
                  {"n_suggested", n_suggested},
                  {"incomplete_pairs_skipped", incomplete}};
    manifest["achieved_correctness_pct"] =
        n_suggested ? 100.0 * static_cast<double>(n_correct) / static_cast<double>(n_suggested)
                    : 0.0;
    try {
        manifest["user_brier_score"] = user_brier_score(population);
    } catch (const EmptyPopulation&) {
        manifest["user_brier_score"] = nullptr;
    }
    return manifest;
}

std::vector<EvalRecord> shape_population(GroupedRecords&& grouped, const RunConfig& config,
                                         Rng& rng) {
    apply_mix(grouped.pairs, config.population.confidence_mix, rng);
    std::vector<EvalRecord> population = std::move(grouped.base);
    if (config.population.calibrated) {
        auto suggested = build_calibrated_population(grouped.pairs, rng);
        population.insert(population.end(), suggested.begin(), suggested.end());
    } else {
        for (const auto& [level, pairs] : grouped.pairs) {
            if (pairs.empty()) continue;
            auto kept = downsample_correctness(pairs, config.population.correctness_pct, rng);
            population.insert(population.end(), kept.begin(), kept.end());
        }
    }
    return population;
}

}  // namespace

void run_sample(const RunConfig& config) {
    config.validate();
    auto records = read_jsonl<EvalRecord>(config.records_path());
    if (records.empty()) throw EmptyPopulation("no records; run infer first");
    GroupedRecords grouped = group_records(records);
    std::size_t incomplete = grouped.incomplete;

    Rng rng(derive_seed(config.seed, "sample"));
    auto population = shape_population(std::move(grouped), config, rng);
    write_jsonl(config.population_path(), population);
    write_json_file(config.manifests_dir() / "population.json",
                    population_manifest(config, population, incomplete));
}

namespace {

std::vector<DesignRow> design_rows(const std::vector<EvalRecord>& records) {
    std::vector<DesignRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back({r.derivative, r.behavior, r.accuracy});
    return rows;
}

// calibrators and bias comparisons are only meaningful over one derivative
void require_single_derivative_kind(const std::vector<EvalRecord>& records) {
    for (const auto& r : records)
        if (r.derivative_kind != records.front().derivative_kind)
            throw ConfigError("records mix derivative kinds; run one kind per pipeline");
}

json fit_report_json(const FitReport& report) {
    json j = report.params;
    j["fit"] = json{{"log_likelihood", report.log_likelihood},
                    {"n_iterations", report.n_iterations},
                    {"converged", report.converged}};
    return j;
}

}  // namespace

void run_fit(const RunConfig& config) {
    config.validate();
    auto population = read_jsonl<EvalRecord>(config.population_path());
    if (population.empty()) throw EmptyPopulation("no population; run sample first");
    require_single_derivative_kind(population);
    auto rows = design_rows(population);

    FitReport platt = fit_platt(rows, config.ridge_lambda);
    FitReport syrup_fit = fit_syrup(rows, config.ridge_lambda);
    write_json_file(config.reports_dir() / "params_platt.json", fit_report_json(platt));
    write_json_file(config.reports_dir() / "params_syrup.json", fit_report_json(syrup_fit));
}

namespace {

struct SplitOutcome {
    std::optional<double> acc_bias_pct;
    std::optional<double> bs_bias_platt;
    std::optional<double> bs_bias_syrup;
    std::optional<double> bss_platt;
    std::optional<double> bss_syrup;
};

struct Aggregated {
    std::optional<double> mean;
    std::optional<double> std_dev;
    int n = 0;
};

Aggregated aggregate_cells(const std::vector<std::optional<double>>& cells) {
    std::vector<double> values;
    for (const auto& c : cells)
        if (c) values.push_back(*c);
    if (values.empty()) return {};
    auto [m, s] = aggregate_splits(values);
    return {m, s, static_cast<int>(values.size())};
}

SplitOutcome evaluate_split(const SplitPartition& split, double ridge_lambda) {
    SplitOutcome outcome;
    auto train_rows = design_rows(split.train);

    std::vector<EvalRecord> test_base, test_suggested;
    for (const auto& r : split.test)
        (r.behavior.category == 0 ? test_base : test_suggested).push_back(r);
    if (!test_base.empty() && !test_suggested.empty())
        outcome.acc_bias_pct = acc_bias(test_base, test_suggested).bias;

    auto eval_method = [&](bool interactions, std::optional<double>& bias_out,
                           std::optional<double>& bss_out) {
        try {
            FitReport fit = interactions ? fit_syrup(train_rows, ridge_lambda)
                                         : fit_platt(train_rows, ridge_lambda);
            auto scored = score_records(split.test, fit.params);
            try {
                bss_out = 100.0 * brier_skill_score(scored);
            } catch (const ZeroVariance&) {
            }
            if (!test_base.empty() && !test_suggested.empty()) {
                auto scored_base = score_records(test_base, fit.params);
                auto scored_suggested = score_records(test_suggested, fit.params);
                bias_out = bs_bias(scored_base, scored_suggested).bias;
            }
        } catch (const DegenerateLabels&) {
            // cell stays n/a
        }
    };
    eval_method(false, outcome.bs_bias_platt, outcome.bss_platt);
    eval_method(true, outcome.bs_bias_syrup, outcome.bss_syrup);
    return outcome;
}

}  // namespace

void run_eval(const RunConfig& config) {
    config.validate();
    auto population = read_jsonl<EvalRecord>(config.population_path());
    if (population.empty()) throw EmptyPopulation("no population; run sample first");
    require_single_derivative_kind(population);

    std::string model = population.front().model_name;
    auto splits = split_by_question(population, config.train_frac, config.n_splits,
                                    derive_seed(config.seed, "eval"));

    std::vector<std::optional<double>> acc_cells, bsb_platt, bsb_syrup, bss_platt, bss_syrup;
    for (const auto& split : splits) {
        SplitOutcome outcome = evaluate_split(split, config.ridge_lambda);
        acc_cells.push_back(outcome.acc_bias_pct);
        bsb_platt.push_back(outcome.bs_bias_platt);
        bsb_syrup.push_back(outcome.bs_bias_syrup);
        bss_platt.push_back(outcome.bss_platt);
        bss_syrup.push_back(outcome.bss_syrup);
    }

    std::string condition =
        config.population.calibrated
            ? "calibrated"
            : "correctness=" + format_cell(config.population.correctness_pct);

    std::vector<ReportRow> rows;
    auto add_row = [&](const std::string& metric, const std::string& method,
                       const std::vector<std::optional<double>>& cells) {
        Aggregated agg = aggregate_cells(cells);
        rows.push_back({model, config.dataset_tag, condition, metric, method, agg.mean,
                        agg.std_dev, agg.n});
    };
    add_row("acc_bias", "-", acc_cells);
    add_row("bs_bias", "platt", bsb_platt);
    add_row("bs_bias", "syrup", bsb_syrup);
    add_row("bss", "platt", bss_platt);
    add_row("bss", "syrup", bss_syrup);

    write_report_csv(config.reports_dir() / "bias.csv", rows);
    write_report_markdown(config.reports_dir() / "bias.md", rows);
}

void run_synth(const RunConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, "synth"));
    auto questions = make_synth_questions(config.n_questions, rng);
    auto population = generate_population(questions, config.sycophant, config.population, rng);
    write_jsonl(config.population_path(), population);
    write_json_file(config.manifests_dir() / "population.json",
                    population_manifest(config, population, 0));
}

void run_report(const RunConfig& config) {
    config.validate();
    auto rows = read_report_csv(config.reports_dir() / "bias.csv");
    write_report_markdown(config.reports_dir() / "bias.md", rows);
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const AuthError&) {
        return 3;
    } catch (const ProviderError&) {
        return 2;
    } catch (const CacheMiss&) {
        return 2;
    } catch (const DegenerateLabels&) {
        return 4;
    } catch (const ZeroVariance&) {
        return 4;
    } catch (const EmptyPopulation&) {
        return 4;
    } catch (const MissingConfidenceGroup&) {
        return 4;
    } catch (const TooFewQuestions&) {
        return 4;
    } catch (const std::exception&) {
        return 1;
    }
}

}  // namespace syrup
