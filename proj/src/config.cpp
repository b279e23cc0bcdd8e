#include "syrup/config.hpp"

#include <fstream>

#include "syrup/error.hpp"

namespace syrup {

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return {};
    std::size_t hi = s.find_last_not_of(" \t\r\n");
    return s.substr(lo, hi - lo + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: " + v);
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        std::int64_t i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": not a boolean: " + v);
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected `key = value`");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& kv) {
    RunConfig cfg;
    double mix_null = 1.0 / 3, mix_low = 1.0 / 3, mix_high = 1.0 / 3;
    for (const auto& [key, value] : kv) {
        if (key == "base_url") cfg.base_url = value;
        else if (key == "model_name") cfg.model_name = value;
        else if (key == "derivative_kind") cfg.derivative_kind = derivative_kind_from_string(value);
        else if (key == "temperature") cfg.temperature = to_double(key, value);
        else if (key == "top_p") cfg.top_p = to_double(key, value);
        else if (key == "max_tokens") cfg.max_tokens = static_cast<int>(to_int(key, value));
        else if (key == "concurrency") cfg.concurrency = static_cast<int>(to_int(key, value));
        else if (key == "mode") {
            if (value == "live") cfg.mode = GatewayMode::live;
            else if (value == "cache_first") cfg.mode = GatewayMode::cache_first;
            else if (value == "replay_only" || value == "replay-only")
                cfg.mode = GatewayMode::replay_only;
            else throw ConfigError("mode: expected live|cache_first|replay_only, got " + value);
        }
        else if (key == "itp_span") {
            if (value == "full") cfg.itp_span = ItpSpan::full;
            else if (value == "answer-only" || value == "answer_only")
                cfg.itp_span = ItpSpan::answer_only;
            else throw ConfigError("itp_span: expected full|answer-only, got " + value);
        }
        else if (key == "retry_max_attempts")
            cfg.retry.max_attempts = static_cast<int>(to_int(key, value));
        else if (key == "retry_base_delay_ms")
            cfg.retry.base_delay_ms = static_cast<int>(to_int(key, value));
        else if (key == "questions") cfg.questions = value;
        else if (key == "templates") cfg.templates = value;
        else if (key == "cache_dir") cfg.cache_dir = value;
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "dataset_tag") cfg.dataset_tag = value;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
        else if (key == "train_frac") cfg.train_frac = to_double(key, value);
        else if (key == "n_splits") cfg.n_splits = static_cast<int>(to_int(key, value));
        else if (key == "ridge_lambda") cfg.ridge_lambda = to_double(key, value);
        else if (key == "correctness_pct") cfg.population.correctness_pct = to_double(key, value);
        else if (key == "calibrated") cfg.population.calibrated = to_bool(key, value);
        else if (key == "mix_null_conf") mix_null = to_double(key, value);
        else if (key == "mix_low") mix_low = to_double(key, value);
        else if (key == "mix_high") mix_high = to_double(key, value);
        else if (key == "n_questions")
            cfg.n_questions = static_cast<std::size_t>(to_int(key, value));
        else if (key == "p_base") cfg.sycophant.p_base = to_double(key, value);
        else if (key == "p_follow_null_conf")
            cfg.sycophant.p_follow[ConfLevel::null_conf] = to_double(key, value);
        else if (key == "p_follow_low")
            cfg.sycophant.p_follow[ConfLevel::low] = to_double(key, value);
        else if (key == "p_follow_high")
            cfg.sycophant.p_follow[ConfLevel::high] = to_double(key, value);
        else if (key == "deriv_mean_correct")
            cfg.sycophant.derivative_model.mean_correct = to_double(key, value);
        else if (key == "deriv_mean_incorrect")
            cfg.sycophant.derivative_model.mean_incorrect = to_double(key, value);
        else if (key == "deriv_stddev")
            cfg.sycophant.derivative_model.stddev = to_double(key, value);
        else throw ConfigError("unknown config key: " + key);
    }
    cfg.population.confidence_mix = {{ConfLevel::null_conf, mix_null},
                                     {ConfLevel::low, mix_low},
                                     {ConfLevel::high, mix_high}};
    cfg.population.seed = cfg.seed;
    cfg.sycophant.seed = cfg.seed;
    return cfg;
}

void RunConfig::validate() const {
    if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (max_tokens <= 0) throw ConfigError("max_tokens must be > 0");
    if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw ConfigError("train_frac must be strictly between 0 and 1");
    if (n_splits < 1) throw ConfigError("n_splits must be >= 1");
    if (ridge_lambda < 0.0) throw ConfigError("ridge_lambda must be >= 0");
    population.validate();
    sycophant.validate();
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw ConfigError("output_dir not creatable: " + output_dir.string());
}

}  // namespace syrup
