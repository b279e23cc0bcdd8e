#include "syrup/parse.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "syrup/error.hpp"

namespace syrup {

namespace {

const std::regex kAnswerTag("<ANSWER>([\\s\\S]*?)</ANSWER>");
const std::regex kConfidenceTag("<CONFIDENCE>\\s*(\\d{1,2})\\s*</CONFIDENCE>");
const std::regex kAnswerScale("ANSWER\\s*=\\s*(\\d{1,2})");
const std::regex kAnswerYesNo("ANSWER\\s*=\\s*(yes|no)", std::regex::icase);

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return {};
    std::size_t hi = s.find_last_not_of(" \t\r\n");
    return s.substr(lo, hi - lo + 1);
}

bool contains_tag_literal(const std::string& s) {
    static const char* tags[] = {"<ANSWER>", "</ANSWER>", "<CONFIDENCE>", "</CONFIDENCE>"};
    return std::any_of(std::begin(tags), std::end(tags),
                       [&](const char* t) { return s.find(t) != std::string::npos; });
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void record_span(ParsedAnswer& out, const std::smatch& m) {
    out.span_begin = static_cast<std::size_t>(m.position(0));
    out.span_end = out.span_begin + static_cast<std::size_t>(m.length(0));
}

ParsedAnswer parse_qa(const std::string& raw, bool elicits_confidence) {
    std::smatch m;
    if (!std::regex_search(raw, m, kAnswerTag))
        throw ParseFailure("no <ANSWER> tag in completion");
    ParsedAnswer out;
    out.answer = trim(m[1].str());
    record_span(out, m);
    if (out.answer.empty() || contains_tag_literal(out.answer))
        throw ParseFailure("malformed <ANSWER> content");
    if (elicits_confidence) {
        std::smatch c;
        if (std::regex_search(raw, c, kConfidenceTag)) {
            int k = std::stoi(c[1].str());
            if (k >= 1 && k <= 10) out.dnc = k;
        }
    }
    return out;
}

ParsedAnswer parse_forecast(const std::string& raw, bool elicits_confidence) {
    ParsedAnswer out;
    std::smatch m;
    if (elicits_confidence) {
        if (!std::regex_search(raw, m, kAnswerScale))
            throw ParseFailure("no \"ANSWER = k\" in completion");
        int k = std::stoi(m[1].str());
        if (k < 1 || k > 10) throw ParseFailure("forecast rating out of 1..10");
        out.answer = k > 5 ? "yes" : "no";
        out.dnc = k;
        record_span(out, m);
        return out;
    }
    if (!std::regex_search(raw, m, kAnswerYesNo))
        throw ParseFailure("no \"ANSWER = yes|no\" in completion");
    out.answer = to_lower(m[1].str());
    record_span(out, m);
    return out;
}

}  // namespace

ParsedAnswer parse_answer(const std::string& raw_text, TaskKind task_kind,
                          bool elicits_confidence) {
    if (raw_text.empty()) throw ParseFailure("empty completion");
    switch (task_kind) {
        case TaskKind::qa: return parse_qa(raw_text, elicits_confidence);
        case TaskKind::forecast: return parse_forecast(raw_text, elicits_confidence);
    }
    throw UnknownTaskKind("task kind out of range");
}

double compute_itp(std::span<const double> logprobs) {
    if (logprobs.empty()) throw EmptySequence("no token log-probabilities");
    double total = 0.0;
    for (double lp : logprobs) {
        if (lp > 0.0)
            throw InvariantViolation("token_logprobs", "log-probabilities must be <= 0");
        total += lp;
    }
    return total;
}

double compute_itp(const std::vector<TokenLogprob>& logprobs) {
    std::vector<double> values;
    values.reserve(logprobs.size());
    for (const auto& t : logprobs) values.push_back(t.logprob);
    return compute_itp(std::span<const double>(values));
}

double compute_itp_over_span(const std::vector<TokenLogprob>& logprobs,
                             std::size_t span_begin, std::size_t span_end) {
    std::vector<double> selected;
    std::size_t offset = 0;
    for (const auto& t : logprobs) {
        std::size_t begin = offset;
        offset += t.token.size();
        if (begin < span_end && offset > span_begin) selected.push_back(t.logprob);
    }
    return compute_itp(std::span<const double>(selected));
}

double dnc_to_derivative(int dnc, const std::string& parsed_answer, TaskKind task_kind) {
    if (dnc < 1 || dnc > 10) throw OutOfRange("dnc must be in [1,10]");
    double c = dnc / 10.0;
    if (task_kind == TaskKind::forecast && !answers_match(parsed_answer, "yes"))
        c = (10 - dnc) / 10.0;
    c = std::clamp(c, 0.05, 0.95);
    return std::log(c);
}

}  // namespace syrup
