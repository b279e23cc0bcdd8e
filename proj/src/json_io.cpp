#include "syrup/json_io.hpp"

#include <fstream>

#include "syrup/error.hpp"

namespace syrup {

using nlohmann::json;

void to_json(json& j, const Question& q) {
    j = json{{"id", q.id},
             {"task_kind", to_string(q.task_kind)},
             {"domain_tag", q.domain_tag},
             {"body", q.body},
             {"ground_truth", q.ground_truth}};
    if (q.choices) j["choices"] = *q.choices;
}

void from_json(const json& j, Question& q) {
    q.id = j.at("id").get<std::string>();
    q.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
    q.domain_tag = j.value("domain_tag", std::string{});
    q.body = j.at("body").get<std::string>();
    q.ground_truth = j.at("ground_truth").get<std::string>();
    if (j.contains("choices") && !j.at("choices").is_null())
        q.choices = j.at("choices").get<std::vector<std::string>>();
    else
        q.choices.reset();
}

void to_json(json& j, const ConfidenceLevel& c) {
    j = json{{"level", to_string(c.level)}};
    if (c.percent) j["percent"] = *c.percent;
}

void from_json(const json& j, ConfidenceLevel& c) {
    c.level = conf_level_from_string(j.at("level").get<std::string>());
    if (j.contains("percent") && !j.at("percent").is_null())
        c.percent = j.at("percent").get<int>();
    else
        c.percent.reset();
}

void to_json(json& j, const UserSuggestion& s) {
    j = json{{"suggested_answer", s.suggested_answer},
             {"is_correct", s.is_correct},
             {"confidence", s.confidence}};
}

void from_json(const json& j, UserSuggestion& s) {
    s.suggested_answer = j.at("suggested_answer").get<std::string>();
    s.is_correct = j.at("is_correct").get<bool>();
    s.confidence = j.at("confidence").get<ConfidenceLevel>();
}

void to_json(json& j, const BehaviorVector& b) {
    j = json{{"category", b.category}, {"onehot", b.onehot}};
}

void from_json(const json& j, BehaviorVector& b) {
    b.category = j.at("category").get<int>();
    auto hot = j.at("onehot").get<std::vector<int>>();
    if (hot.size() != 4) throw InvariantViolation("onehot", "must have length 4");
    std::copy(hot.begin(), hot.end(), b.onehot.begin());
}

void to_json(json& j, const TokenLogprob& t) {
    j = json{{"token", t.token}, {"logprob", t.logprob}};
}

void from_json(const json& j, TokenLogprob& t) {
    t.token = j.at("token").get<std::string>();
    t.logprob = j.at("logprob").get<double>();
}

void to_json(json& j, const ModelAnswer& a) {
    j = json{{"raw_text", a.raw_text},
             {"parsed_answer", a.parsed_answer},
             {"accuracy", a.accuracy}};
    if (a.dnc) j["dnc"] = *a.dnc;
    if (a.token_logprobs) j["token_logprobs"] = *a.token_logprobs;
}

void from_json(const json& j, ModelAnswer& a) {
    a.raw_text = j.at("raw_text").get<std::string>();
    a.parsed_answer = j.at("parsed_answer").get<std::string>();
    a.accuracy = j.at("accuracy").get<int>();
    if (j.contains("dnc") && !j.at("dnc").is_null())
        a.dnc = j.at("dnc").get<int>();
    else
        a.dnc.reset();
    if (j.contains("token_logprobs") && !j.at("token_logprobs").is_null())
        a.token_logprobs = j.at("token_logprobs").get<std::vector<TokenLogprob>>();
    else
        a.token_logprobs.reset();
}

void to_json(json& j, const EvalRecord& r) {
    j = json{{"question_id", r.question_id},
             {"behavior", r.behavior},
             {"derivative_kind", to_string(r.derivative_kind)},
             {"derivative", r.derivative},
             {"accuracy", r.accuracy},
             {"model_name", r.model_name}};
    if (r.suggestion) j["suggestion"] = *r.suggestion;
    if (r.split_tag) j["split_tag"] = to_string(*r.split_tag);
}

void from_json(const json& j, EvalRecord& r) {
    r.question_id = j.at("question_id").get<std::string>();
    r.behavior = j.at("behavior").get<BehaviorVector>();
    r.derivative_kind = derivative_kind_from_string(j.at("derivative_kind").get<std::string>());
    r.derivative = j.at("derivative").get<double>();
    r.accuracy = j.at("accuracy").get<int>();
    r.model_name = j.at("model_name").get<std::string>();
    if (j.contains("suggestion") && !j.at("suggestion").is_null())
        r.suggestion = j.at("suggestion").get<UserSuggestion>();
    else
        r.suggestion.reset();
    if (j.contains("split_tag") && !j.at("split_tag").is_null())
        r.split_tag = split_tag_from_string(j.at("split_tag").get<std::string>());
    else
        r.split_tag.reset();
}

namespace {
const char* category_name(int i) {
    switch (i) {
        case 0: return "no_suggestion";
        case 1: return "null_confidence";
        case 2: return "low_confidence";
        default: return "high_confidence";
    }
}
}  // namespace

void to_json(json& j, const CalibratorParams& p) {
    json g1, g2;
    for (int i = 0; i < 4; ++i) {
        g1[category_name(i)] = p.gamma1[static_cast<std::size_t>(i)];
        g2[category_name(i)] = p.gamma2[static_cast<std::size_t>(i)];
    }
    j = json{{"kind", to_string(p.kind)},
             {"alpha", p.alpha},
             {"beta", p.beta},
             {"gamma1", g1},
             {"gamma2", g2},
             {"ridge_lambda", p.ridge_lambda}};
}

void from_json(const json& j, CalibratorParams& p) {
    p.kind = calibrator_kind_from_string(j.at("kind").get<std::string>());
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    for (int i = 0; i < 4; ++i) {
        p.gamma1[static_cast<std::size_t>(i)] = j.at("gamma1").at(category_name(i)).get<double>();
        p.gamma2[static_cast<std::size_t>(i)] = j.at("gamma2").at(category_name(i)).get<double>();
    }
    p.ridge_lambda = j.at("ridge_lambda").get<double>();
}

std::vector<json> read_jsonl_raw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_jsonl_raw(const std::filesystem::path& path, const std::vector<json>& items) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& j : items) out << j.dump() << '\n';
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
    std::vector<T> out;
    for (const auto& j : read_jsonl_raw(path)) out.push_back(j.get<T>());
    return out;
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items) {
    std::vector<json> raw;
    raw.reserve(items.size());
    for (const auto& item : items) raw.emplace_back(item);
    write_jsonl_raw(path, raw);
}

template std::vector<Question> read_jsonl<Question>(const std::filesystem::path&);
template std::vector<EvalRecord> read_jsonl<EvalRecord>(const std::filesystem::path&);
template void write_jsonl<Question>(const std::filesystem::path&, const std::vector<Question>&);
template void write_jsonl<EvalRecord>(const std::filesystem::path&,
                                      const std::vector<EvalRecord>&);

}  // namespace syrup
