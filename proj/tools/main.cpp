#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "syrup/commands.hpp"
#include "syrup/error.hpp"

namespace {

// Collects flag overrides as strings so they flow through the same key
// schema as the config file. Flags win over file values.
struct CliOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    bool replay_only = false;
};

void add_override_option(CLI::App* cmd, CliOptions& opts, const std::string& flag,
                         const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, help);
}

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "flat key = value config file");
    add_override_option(cmd, opts, "--seed", "seed", "run seed; all stage randomness derives from it");
    add_override_option(cmd, opts, "--output-dir", "output_dir", "output root (records/, reports/, manifests/)");
    add_override_option(cmd, opts, "--cache-dir", "cache_dir", "response cache directory");
    add_override_option(cmd, opts, "--questions", "questions", "question JSONL file");
    add_override_option(cmd, opts, "--templates", "templates", "prompt template directory");
    add_override_option(cmd, opts, "--model", "model_name", "model name sent to the provider");
    add_override_option(cmd, opts, "--base-url", "base_url", "OpenAI-compatible endpoint base URL");
    add_override_option(cmd, opts, "--derivative", "derivative_kind", "dnc | itp | itp_d");
    add_override_option(cmd, opts, "--itp-span", "itp_span", "full | answer-only");
    add_override_option(cmd, opts, "--concurrency", "concurrency", "max in-flight requests");
    add_override_option(cmd, opts, "--n-splits", "n_splits", "number of train/test splits");
    add_override_option(cmd, opts, "--train-frac", "train_frac", "train fraction of question ids");
    add_override_option(cmd, opts, "--ridge-lambda", "ridge_lambda", "ridge penalty for fitting");
    add_override_option(cmd, opts, "--correctness", "correctness_pct", "target suggestion correctness %");
    add_override_option(cmd, opts, "--calibrated", "calibrated", "true for calibrated users");
    add_override_option(cmd, opts, "--n-questions", "n_questions", "synthetic question count");
    add_override_option(cmd, opts, "--dataset", "dataset_tag", "dataset label for report rows");
    cmd->add_flag("--replay-only", opts.replay_only, "serve strictly from the cache");
}

syrup::RunConfig build_config(const CliOptions& opts) {
    std::map<std::string, std::string> kv;
    if (!opts.config_path.empty()) kv = syrup::parse_config_file(opts.config_path);
    for (const auto& [key, value] : opts.overrides) kv[key] = value;
    if (opts.replay_only) kv["mode"] = "replay_only";
    return syrup::RunConfig::from_map(kv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sycophancy-aware uncertainty estimation pipeline"};
    app.require_subcommand(1);

    CliOptions opts;
    std::function<void(const syrup::RunConfig&)> action;

    struct Sub {
        const char* name;
        const char* help;
        void (*fn)(const syrup::RunConfig&);
    };
    const Sub subs[] = {
        {"forge", "render the question x behavior prompt grid", syrup::run_forge},
        {"infer", "complete prompts, parse answers, emit eval records", syrup::run_infer},
        {"sample", "shape records into a suggestion population", syrup::run_sample},
        {"fit", "fit Platt and SyRoUP calibrators on the population", syrup::run_fit},
        {"eval", "per-split fits, bias and BSS report tables", syrup::run_eval},
        {"synth", "generate a synthetic sycophant population", syrup::run_synth},
        {"report", "re-render the Markdown report from the CSV", syrup::run_report},
    };
    for (const auto& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common_options(cmd, opts);
        cmd->callback([&action, fn = sub.fn] { action = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are config errors
    }

    try {
        action(build_config(opts));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return syrup::exit_code_for_current_exception();
    }
    return 0;
}
