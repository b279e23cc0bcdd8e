#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "syrup/types.hpp"

namespace syrup {

// nlohmann ADL hooks. Field names are the wire format: snake_case, optional
// fields omitted when absent.
void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);
void to_json(nlohmann::json& j, const ConfidenceLevel& c);
void from_json(const nlohmann::json& j, ConfidenceLevel& c);
void to_json(nlohmann::json& j, const UserSuggestion& s);
void from_json(const nlohmann::json& j, UserSuggestion& s);
void to_json(nlohmann::json& j, const BehaviorVector& b);
void from_json(const nlohmann::json& j, BehaviorVector& b);
void to_json(nlohmann::json& j, const TokenLogprob& t);
void from_json(const nlohmann::json& j, TokenLogprob& t);
void to_json(nlohmann::json& j, const ModelAnswer& a);
void from_json(const nlohmann::json& j, ModelAnswer& a);
void to_json(nlohmann::json& j, const EvalRecord& r);
void from_json(const nlohmann::json& j, EvalRecord& r);
void to_json(nlohmann::json& j, const CalibratorParams& p);
void from_json(const nlohmann::json& j, CalibratorParams& p);

/// One JSON document per line, UTF-8, '\n' terminated.
template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path);

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items);

std::vector<nlohmann::json> read_jsonl_raw(const std::filesystem::path& path);
void write_jsonl_raw(const std::filesystem::path& path, const std::vector<nlohmann::json>& items);

extern template std::vector<Question> read_jsonl<Question>(const std::filesystem::path&);
extern template std::vector<EvalRecord> read_jsonl<EvalRecord>(const std::filesystem::path&);
extern template void write_jsonl<Question>(const std::filesystem::path&,
                                           const std::vector<Question>&);
extern template void write_jsonl<EvalRecord>(const std::filesystem::path&,
                                             const std::vector<EvalRecord>&);

}  // namespace syrup
