#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plainscore/corpus.hpp"
#include "plainscore/discriminator.hpp"
#include "plainscore/metrics.hpp"
#include "plainscore/mlm.hpp"
#include "plainscore/objectives.hpp"
#include "plainscore/penalty.hpp"
#include "plainscore/roc.hpp"
#include "plainscore/text.hpp"

namespace plainscore::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

Json parse_json(std::string_view text, std::string_view origin);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& value);

/// Blank lines are skipped; parse errors name the file and line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::string to_jsonl(std::span<const Json> values);
void write_jsonl(const std::filesystem::path& path, std::span<const Json> values);

/// Typed field access; throws kParse naming the missing or mistyped key.
const Json& field(const Json& obj, std::string_view key);
std::string string_field(const Json& obj, std::string_view key);
double number_field(const Json& obj, std::string_view key);

RawReview review_from_json(const Json& j);

Json to_json(const DocumentPair& pair);
DocumentPair pair_from_json(const Json& j);
Json to_json(const Rejection& rejection);

/// Lines with "abstract" and "pls" expand to two documents; lines with "text"
/// give one document whose role defaults to `default_role`.
std::vector<Document> documents_from_jsonl(std::span<const Json> lines, DocumentRole default_role = DocumentRole::kPls);

Json to_json(const ScoredDocument& scored);

Json text_stats_json(const TextStats& stats);

Json to_json(const DiscriminatorModel& model);
DiscriminatorModel model_from_json(const Json& j);

Json to_json(const PenaltySet& penalties);
PenaltySet penalty_from_json(const Json& j);

/// {"vocab_size", "rows", "targets"?}
StepDistributions distributions_from_json(const Json& j);

EvalRecord eval_record_from_json(const Json& j);

/// "fpr,tpr" header then one line per point.
std::string roc_csv(const RocCurve& curve);

/// Shortest round-trip decimal form, as written in JSON files.
std::string format_double(double x);

}  // namespace plainscore::io
