#include "plainscore/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "plainscore/error.hpp"

namespace plainscore::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIO, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::kIO, "read failed for " + path.string());
  }
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::kIO, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIO, "cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw Error(ErrorKind::kIO, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kIO, "cannot rename onto " + path.string());
  }
}

Json parse_json(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string(origin) + ": " + e.what());
  }
}

Json read_json(const fs::path& path) { return parse_json(read_file(path), path.string()); }

void write_json(const fs::path& path, const Json& value) { write_file_atomic(path, value.dump(2) + "\n"); }

std::vector<Json> read_jsonl(const fs::path& path) {
  const std::string content = read_file(path);
  std::vector<Json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) {
      end = content.size();
    }
    ++line_no;
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    out.push_back(parse_json(line, path.string() + ":" + std::to_string(line_no)));
  }
  return out;
}

std::string to_jsonl(std::span<const Json> values) {
  std::string out;
  for (const auto& v : values) {
    out += v.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const fs::path& path, std::span<const Json> values) { write_file_atomic(path, to_jsonl(values)); }

const Json& field(const Json& obj, std::string_view key) {
  if (!obj.is_object()) {
    throw Error(ErrorKind::kParse, "expected a JSON object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::kParse, "missing key \"" + std::string(key) + "\"");
  }
  return *it;
}

std::string string_field(const Json& obj, std::string_view key) {
  const Json& v = field(obj, key);
  if (!v.is_string()) {
    throw Error(ErrorKind::kParse, "key \"" + std::string(key) + "\" must be a string");
  }
  return v.get<std::string>();
}

double number_field(const Json& obj, std::string_view key) {
  const Json& v = field(obj, key);
  if (!v.is_number()) {
    throw Error(ErrorKind::kParse, "key \"" + std::string(key) + "\" must be a number");
  }
  return v.get<double>();
}

namespace {

std::vector<Section> sections_from_json(const Json& arr, std::string_view what) {
  if (!arr.is_array()) {
    throw Error(ErrorKind::kParse, std::string(what) + " must be an array of sections");
  }
  std::vector<Section> out;
  for (const auto& s : arr) {
    Section sec;
    if (s.contains("heading") && !s.at("heading").is_null()) {
      sec.heading = string_field(s, "heading");
    }
    sec.body = string_field(s, "text");
    out.push_back(std::move(sec));
  }
  return out;
}

std::size_t count_field(const Json& obj, std::string_view key) {
  const Json& v = field(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::kParse, "key \"" + std::string(key) + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

RawReview review_from_json(const Json& j) {
  RawReview r;
  r.id = string_field(j, "id");
  r.abstract_sections = sections_from_json(field(j, "abstract"), "abstract");
  const std::string kind = string_field(j, "pls_kind");
  const Json& pls = field(j, "pls");
  if (kind == "sectioned") {
    r.pls_kind = PlsKind::kSectioned;
    r.pls_sections = sections_from_json(pls, "pls");
  } else if (kind == "longform") {
    r.pls_kind = PlsKind::kLongform;
    if (pls.is_string()) {
      r.pls_paragraphs.push_back(pls.get<std::string>());
    } else if (pls.is_array()) {
      for (const auto& p : pls) {
        if (!p.is_string()) {
          throw Error(ErrorKind::kParse, "longform pls entries must be strings");
        }
        r.pls_paragraphs.push_back(p.get<std::string>());
      }
    } else {
      throw Error(ErrorKind::kParse, "longform pls must be a string or an array of strings");
    }
  } else {
    throw Error(ErrorKind::kParse, "pls_kind must be \"sectioned\" or \"longform\", got \"" + kind + "\"");
  }
  return r;
}

Json to_json(const DocumentPair& p) {
  Json j;
  j["id"] = p.id;
  j["abstract"] = p.abstract_text;
  j["pls"] = p.pls_text;
  j["abstract_tokens"] = p.abstract_token_count;
  j["pls_tokens"] = p.pls_token_count;
  j["flagged"] = p.flagged;
  return j;
}

DocumentPair pair_from_json(const Json& j) {
  DocumentPair p;
  p.id = string_field(j, "id");
  p.abstract_text = string_field(j, "abstract");
  p.pls_text = string_field(j, "pls");
  if (j.contains("abstract_tokens")) {
    p.abstract_token_count = count_field(j, "abstract_tokens");
  }
  if (j.contains("pls_tokens")) {
    p.pls_token_count = count_field(j, "pls_tokens");
  }
  if (j.contains("flagged")) {
    p.flagged = field(j, "flagged").get<bool>();
  }
  return p;
}

Json to_json(const Rejection& r) {
  Json j;
  j["id"] = r.id;
  j["reason"] = std::string(to_string(r.reason));
  j["abstract_tokens"] = r.abstract_token_count;
  j["pls_tokens"] = r.pls_token_count;
  return j;
}

std::vector<Document> documents_from_jsonl(std::span<const Json> lines, DocumentRole default_role) {
  std::vector<Document> docs;
  for (const auto& j : lines) {
    const std::string id = string_field(j, "id");
    if (j.contains("text")) {
      const DocumentRole role = j.contains("role") ? parse_role(string_field(j, "role")) : default_role;
      docs.push_back({id, role, string_field(j, "text")});
    } else {
      docs.push_back({id, DocumentRole::kAbstract, string_field(j, "abstract")});
      docs.push_back({id, DocumentRole::kPls, string_field(j, "pls")});
    }
  }
  return docs;
}

Json to_json(const ScoredDocument& s) {
  Json j;
  j["id"] = s.doc_id;
  j["role"] = std::string(to_string(s.role));
  j["mean_prob"] = s.score.mean_prob;
  j["n_probs"] = s.score.n_probs;
  return j;
}

Json text_stats_json(const TextStats& st) {
  Json j;
  j["n_sentences"] = st.n_sentences;
  j["n_words"] = st.n_words;
  j["n_syllables"] = st.n_syllables;
  j["n_chars"] = st.n_chars;
  return j;
}

Json to_json(const DiscriminatorModel& m) {
  Json j;
  j["vocab"] = m.vocab_id;
  j["bias"] = m.bias;
  Json weights = Json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    if (m.weights[i] != 0.0) {
      weights.push_back(Json::array({i, m.weights[i]}));
    }
  }
  j["weights"] = std::move(weights);
  Json meta;
  meta["dim"] = m.dim();
  meta["seed"] = m.meta.seed;
  meta["lambda"] = m.meta.lambda;
  meta["iterations"] = m.meta.iterations;
  meta["converged"] = m.meta.converged;
  meta["final_loss"] = m.meta.final_loss;
  meta["grad_inf_norm"] = m.meta.grad_inf_norm;
  meta["source"] = m.meta.source;
  meta["parents"] = m.meta.parents;
  meta["hash"] = m.hash();
  j["meta"] = std::move(meta);
  return j;
}

DiscriminatorModel model_from_json(const Json& j) {
  DiscriminatorModel m;
  m.vocab_id = string_field(j, "vocab");
  m.bias = number_field(j, "bias");
  const Json& meta = field(j, "meta");
  const std::size_t dim = count_field(meta, "dim");
  m.weights.assign(dim, 0.0);
  const Json& weights = field(j, "weights");
  if (!weights.is_array()) {
    throw Error(ErrorKind::kParse, "weights must be an array of [id, weight] pairs");
  }
  for (const auto& e : weights) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
      throw Error(ErrorKind::kParse, "weights must be an array of [id, weight] pairs");
    }
    const auto id = e[0].get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= dim) {
      throw Error(ErrorKind::kParse, "weight id " + std::to_string(id) + " outside model dimension");
    }
    m.weights[static_cast<std::size_t>(id)] = e[1].get<double>();
  }
  if (meta.contains("seed")) m.meta.seed = meta.at("seed").get<std::uint64_t>();
  if (meta.contains("lambda")) m.meta.lambda = number_field(meta, "lambda");
  if (meta.contains("iterations")) m.meta.iterations = count_field(meta, "iterations");
  if (meta.contains("converged")) m.meta.converged = meta.at("converged").get<bool>();
  if (meta.contains("final_loss")) m.meta.final_loss = number_field(meta, "final_loss");
  if (meta.contains("grad_inf_norm")) m.meta.grad_inf_norm = number_field(meta, "grad_inf_norm");
  if (meta.contains("source")) m.meta.source = string_field(meta, "source");
  if (meta.contains("parents")) m.meta.parents = meta.at("parents").get<std::vector<std::string>>();
  return m;
}

Json to_json(const PenaltySet& p) {
  Json j;
  j["temperature"] = p.temperature;
  j["source"] = p.source;
  Json entries = Json::array();
  for (const auto& e : p.entries) {
    entries.push_back(Json::array({e.id, e.weight}));
  }
  j["entries"] = std::move(entries);
  j["vocab"] = p.vocab_id;
  j["model_hash"] = p.model_hash;
  return j;
}

PenaltySet penalty_from_json(const Json& j) {
  PenaltySet p;
  p.temperature = number_field(j, "temperature");
  if (j.contains("source")) p.source = string_field(j, "source");
  if (j.contains("vocab")) p.vocab_id = string_field(j, "vocab");
  if (j.contains("model_hash")) p.model_hash = string_field(j, "model_hash");
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) {
    throw Error(ErrorKind::kParse, "entries must be an array of [id, weight] pairs");
  }
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
      throw Error(ErrorKind::kParse, "entries must be an array of [id, weight] pairs");
    }
    const auto id = e[0].get<long long>();
    if (id < 0) {
      throw Error(ErrorKind::kParse, "negative penalty token id");
    }
    p.entries.push_back({static_cast<TokenId>(id), e[1].get<double>()});
  }
  return p;
}

StepDistributions distributions_from_json(const Json& j) {
  const std::size_t vocab_size = count_field(j, "vocab_size");
  const Json& rows = field(j, "rows");
  if (!rows.is_array()) {
    throw Error(ErrorKind::kParse, "rows must be an array of arrays");
  }
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != vocab_size) {
      throw Error(ErrorKind::kParse, "every row must hold vocab_size numbers");
    }
    for (const auto& x : row) {
      if (!x.is_number()) {
        throw Error(ErrorKind::kParse, "row entries must be numbers");
      }
      flat.push_back(x.get<double>());
    }
  }
  std::optional<std::vector<TokenId>> targets;
  if (j.contains("targets") && !j.at("targets").is_null()) {
    targets = j.at("targets").get<std::vector<TokenId>>();
  }
  return StepDistributions(vocab_size, std::move(flat), std::move(targets));
}

EvalRecord eval_record_from_json(const Json& j) {
  EvalRecord r;
  r.doc_id = string_field(j, "id");
  r.source = string_field(j, "source");
  r.reference = string_field(j, "reference");
  r.candidate = string_field(j, "candidate");
  return r;
}

std::string format_double(double x) { return Json(x).dump(); }

std::string roc_csv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : curve.points) {
    out += format_double(p.fpr);
    out += ',';
    out += format_double(p.tpr);
    out += '\n';
  }
  return out;
}

}  // namespace plainscore::io
