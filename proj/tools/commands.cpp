#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>

#include "plainscore/corpus.hpp"
#include "plainscore/discriminator.hpp"
#include "plainscore/error.hpp"
#include "plainscore/io.hpp"
#include "plainscore/metrics.hpp"
#include "plainscore/mlm.hpp"
#include "plainscore/mlm_http.hpp"
#include "plainscore/numeric.hpp"
#include "plainscore/objectives.hpp"
#include "plainscore/penalty.hpp"
#include "plainscore/roc.hpp"
#include "plainscore/stats.hpp"
#include "plainscore/text.hpp"

namespace plainscore::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr double kSignificance = 0.01;

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void write_manifest(const RunConfig& config, const std::string& command, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  Json j;
  j["command"] = command;
  j["config"] = config.to_json();
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  io::write_json(config.out_dir / (command + ".manifest.json"), j);
}

Json mean_sd(const std::vector<double>& xs) {
  Json j;
  j["n"] = xs.size();
  if (xs.empty()) {
    j["mean"] = nullptr;
    j["sd"] = nullptr;
    return j;
  }
  const double mean = pairwise_mean(xs);
  std::vector<double> sq;
  sq.reserve(xs.size());
  for (double x : xs) sq.push_back((x - mean) * (x - mean));
  j["mean"] = mean;
  j["sd"] = xs.size() > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(xs.size() - 1)) : 0.0;
  return j;
}

Json optional_number(std::optional<double> x) { return x ? Json(*x) : Json(nullptr); }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json t_test_json(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2) return nullptr;
  const auto r = paired_t_test(a, b);
  Json j;
  j["n"] = r.n;
  j["mean_diff"] = r.mean_diff;
  j["t"] = finite_or_null(r.t);
  j["p_value"] = r.p_value;
  j["significant"] = r.p_value < kSignificance;
  return j;
}

std::vector<Json> jsonl(const std::string& path) { return io::read_jsonl(path); }

int label_of(const Json& line) {
  if (line.contains("label")) {
    const auto& l = line.at("label");
    if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1)) {
      throw Error(ErrorKind::kParse, "label must be 0 or 1");
    }
    return l.get<int>();
  }
  return parse_role(io::string_field(line, "role")) == DocumentRole::kAbstract ? 0 : 1;
}

LabeledExample example_of(std::string_view text, int y, const TokenVocab& vocab) {
  return {bow_vector(text, vocab).vector, y};
}

Json split_metrics(const DiscriminatorModel& model, const std::vector<LabeledExample>& examples) {
  Json j;
  j["n"] = examples.size();
  if (examples.empty()) {
    j["accuracy"] = nullptr;
    j["auc"] = nullptr;
    return j;
  }
  j["accuracy"] = accuracy(model, examples);
  std::vector<ScoredLabel> scored;
  for (const auto& e : examples) scored.push_back({predict_proba(model, e.x), e.y});
  try {
    j["auc"] = roc_auc(scored).auc;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kSingleClassData) throw;
    j["auc"] = nullptr;
  }
  return j;
}

Json token_list(const std::vector<TokenWeight>& tokens, const TokenVocab& vocab) {
  Json out = Json::array();
  for (const auto& t : tokens) {
    Json j;
    j["token"] = vocab.token(t.id);
    j["id"] = t.id;
    j["weight"] = t.weight;
    out.push_back(std::move(j));
  }
  return out;
}

Json document_json(const DocumentMetrics& m) {
  Json j;
  j["id"] = m.doc_id;
  j["rouge1"] = m.rouge1;
  j["rouge2"] = m.rouge2;
  j["rougeL"] = m.rougeL;
  j["bleu"] = m.bleu;
  j["bleu_smoothed"] = m.bleu_smoothed;
  j["sari"] = m.sari;
  Json overlap, ref_overlap;
  for (std::size_t n = 0; n < 4; ++n) {
    overlap[std::to_string(n + 1)] = optional_number(m.overlap[n]);
    ref_overlap[std::to_string(n + 1)] = optional_number(m.reference_overlap[n]);
  }
  j["overlap"] = std::move(overlap);
  j["reference_overlap"] = std::move(ref_overlap);
  auto lengths = [](const LengthStats& s) { return Json{{"n_tokens", s.n_tokens}, {"n_sentences", s.n_sentences}}; };
  j["lengths"] = {{"source", lengths(m.source_length)},
                  {"reference", lengths(m.reference_length)},
                  {"candidate", lengths(m.candidate_length)}};
  auto grades = [](const Readability& r) { return Json{{"fk", optional_number(r.fk)}, {"ari", optional_number(r.ari)}}; };
  j["readability"] = {{"source", grades(m.source_readability)},
                      {"reference", grades(m.reference_readability)},
                      {"candidate", grades(m.candidate_readability)}};
  return j;
}

using MetricGetter = std::optional<double> (*)(const DocumentMetrics&);

const std::vector<std::pair<std::string, MetricGetter>>& system_metrics() {
  static const std::vector<std::pair<std::string, MetricGetter>> metrics = {
      {"rouge1", [](const DocumentMetrics& m) -> std::optional<double> { return m.rouge1; }},
      {"rouge2", [](const DocumentMetrics& m) -> std::optional<double> { return m.rouge2; }},
      {"rougeL", [](const DocumentMetrics& m) -> std::optional<double> { return m.rougeL; }},
      {"bleu", [](const DocumentMetrics& m) -> std::optional<double> { return m.bleu; }},
      {"sari", [](const DocumentMetrics& m) -> std::optional<double> { return m.sari; }},
      {"overlap_1", [](const DocumentMetrics& m) { return m.overlap[0]; }},
      {"overlap_2", [](const DocumentMetrics& m) { return m.overlap[1]; }},
      {"overlap_3", [](const DocumentMetrics& m) { return m.overlap[2]; }},
      {"overlap_4", [](const DocumentMetrics& m) { return m.overlap[3]; }},
      {"candidate_tokens",
       [](const DocumentMetrics& m) -> std::optional<double> { return static_cast<double>(m.candidate_length.n_tokens); }},
      {"candidate_sentences",
       [](const DocumentMetrics& m) -> std::optional<double> {
         return static_cast<double>(m.candidate_length.n_sentences);
       }},
      {"candidate_fk", [](const DocumentMetrics& m) { return m.candidate_readability.fk; }},
      {"candidate_ari", [](const DocumentMetrics& m) { return m.candidate_readability.ari; }},
  };
  return metrics;
}

// Candidate vs reference on the measures both sides have.
const std::vector<std::tuple<std::string, MetricGetter, MetricGetter>>& candidate_vs_reference() {
  static const std::vector<std::tuple<std::string, MetricGetter, MetricGetter>> pairs = {
      {"fk", [](const DocumentMetrics& m) { return m.candidate_readability.fk; },
       [](const DocumentMetrics& m) { return m.reference_readability.fk; }},
      {"ari", [](const DocumentMetrics& m) { return m.candidate_readability.ari; },
       [](const DocumentMetrics& m) { return m.reference_readability.ari; }},
      {"n_tokens",
       [](const DocumentMetrics& m) -> std::optional<double> { return static_cast<double>(m.candidate_length.n_tokens); },
       [](const DocumentMetrics& m) -> std::optional<double> { return static_cast<double>(m.reference_length.n_tokens); }},
      {"overlap_1", [](const DocumentMetrics& m) { return m.overlap[0]; },
       [](const DocumentMetrics& m) { return m.reference_overlap[0]; }},
      {"overlap_2", [](const DocumentMetrics& m) { return m.overlap[1]; },
       [](const DocumentMetrics& m) { return m.reference_overlap[1]; }},
      {"overlap_3", [](const DocumentMetrics& m) { return m.overlap[2]; },
       [](const DocumentMetrics& m) { return m.reference_overlap[2]; }},
      {"overlap_4", [](const DocumentMetrics& m) { return m.overlap[3]; },
       [](const DocumentMetrics& m) { return m.reference_overlap[3]; }},
  };
  return pairs;
}

std::vector<DocumentMetrics> evaluate_file(const std::string& path) {
  std::vector<EvalRecord> records;
  for (const auto& line : jsonl(path)) records.push_back(io::eval_record_from_json(line));
  return evaluate_records(records);
}

bool lower_means_positive(const std::string& field, const std::string& direction) {
  if (direction == "higher") return false;
  if (direction == "lower") return true;
  if (direction != "auto") throw Error(ErrorKind::kInvalidArgument, "direction must be auto, higher or lower");
  return field == "fk" || field == "ari";
}

}  // namespace

void build_corpus(const RunConfig& config, const BuildCorpusArgs& args) {
  std::vector<RawReview> reviews;
  for (const auto& line : jsonl(args.input)) reviews.push_back(io::review_from_json(line));

  std::optional<TokenVocab> vocab;
  if (args.vocab) vocab = TokenVocab::load(*args.vocab);
  const TokenCounter counter = vocab ? TokenCounter(*vocab) : TokenCounter();
  FilterConfig filter{config.cap, config.ratio_low, config.ratio_high};
  filter.validate();

  const auto outcomes = run_pipeline(reviews, counter, filter);
  std::vector<Json> pairs, rejects;
  std::vector<std::string> pair_ids;
  std::map<std::string, std::size_t> reasons;
  for (const auto& o : outcomes) {
    if (const auto* p = std::get_if<DocumentPair>(&o)) {
      pairs.push_back(io::to_json(*p));
      pair_ids.push_back(p->id);
    } else {
      const auto& r = std::get<Rejection>(o);
      rejects.push_back(io::to_json(r));
      ++reasons[std::string(to_string(r.reason))];
    }
  }

  const auto split = split_dataset(pair_ids.size(), config.seed);
  Json split_json;
  split_json["seed"] = config.seed;
  for (const auto& [name, idx] : {std::pair{"train", &split.train}, {"valid", &split.valid}, {"test", &split.test}}) {
    Json ids = Json::array();
    for (std::size_t i : *idx) ids.push_back(pair_ids[i]);
    split_json[name] = std::move(ids);
  }

  io::write_jsonl(config.out_dir / "pairs.jsonl", pairs);
  io::write_jsonl(config.out_dir / "rejects.jsonl", rejects);
  io::write_json(config.out_dir / "split.json", split_json);
  std::vector<std::string> inputs{args.input};
  if (args.vocab) inputs.push_back(*args.vocab);
  write_manifest(config, "build-corpus", inputs, {"pairs.jsonl", "rejects.jsonl", "split.json"});

  std::cout << "accepted " << pairs.size() << ", rejected " << rejects.size();
  for (const auto& [reason, n] : reasons) std::cout << " (" << reason << ": " << n << ")";
  std::cout << "\nsplit train/valid/test " << split.train.size() << "/" << split.valid.size() << "/"
            << split.test.size() << "\n";
}

void readability(const RunConfig& config, const ReadabilityArgs& args) {
  const auto docs = io::documents_from_jsonl(jsonl(args.input));
  struct Row {
    TextStats stats;
    std::optional<double> fk, ari;
  };
  const auto rows = indexed_map(docs.size(), Execution::kParallel, [&](std::size_t i) {
    Row r{compute_stats(docs[i].text), {}, {}};
    try {
      r.fk = flesch_kincaid(r.stats);
      r.ari = ari(r.stats);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerateText) throw;
    }
    return r;
  });

  std::vector<Json> lines;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_role;
  std::map<std::string, std::size_t> degenerate;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string role(to_string(docs[i].role));
    Json j;
    j["id"] = docs[i].id;
    j["role"] = role;
    j["fk"] = optional_number(rows[i].fk);
    j["ari"] = optional_number(rows[i].ari);
    j["stats"] = io::text_stats_json(rows[i].stats);
    lines.push_back(std::move(j));
    auto& bucket = by_role[role];
    if (rows[i].fk) {
      bucket.first.push_back(*rows[i].fk);
      bucket.second.push_back(*rows[i].ari);
    } else {
      ++degenerate[role];
    }
  }

  Json summary;
  summary["config"] = config.to_json();
  Json roles;
  for (const auto& [role, grades] : by_role) {
    roles[role] = {{"fk", mean_sd(grades.first)}, {"ari", mean_sd(grades.second)}, {"n_degenerate", degenerate[role]}};
    std::cout << role << ": n=" << grades.first.size() << " FK=" << fixed(pairwise_mean(grades.first), 2)
              << " ARI=" << fixed(pairwise_mean(grades.second), 2) << "\n";
  }
  summary["roles"] = std::move(roles);

  io::write_jsonl(config.out_dir / "readability.jsonl", lines);
  io::write_json(config.out_dir / "readability.json", summary);
  write_manifest(config, "readability", {args.input}, {"readability.jsonl", "readability.json"});
}

void mlm_score(const RunConfig& config, const MlmScoreArgs& args) {
  const auto docs = io::documents_from_jsonl(jsonl(args.input));
  std::unique_ptr<MaskedLMScorer> scorer;
  if (args.backend == "http") {
    if (config.scorer_url.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "no scorer URL: pass --scorer-url or set PLAINSCORE_SCORER_URL");
    }
    scorer = std::make_unique<HttpScorer>(config.scorer_url);
  } else if (args.backend == "unigram") {
    std::vector<std::string> texts;
    for (const auto& d : docs) texts.push_back(d.text);
    scorer = std::make_unique<UnigramScorer>(texts);
  } else {
    throw Error(ErrorKind::kInvalidArgument, "backend must be http or unigram");
  }

  MaskingConfig masking{config.rounds, config.mask_frac};
  masking.validate();
  const auto scored = score_documents(docs, *scorer, config.seed, masking);

  std::vector<Json> lines;
  std::map<std::string, std::vector<double>> by_role;
  std::map<std::string, double> abstract_by_id, pls_by_id;
  for (const auto& s : scored) {
    lines.push_back(io::to_json(s));
    by_role[std::string(to_string(s.role))].push_back(s.score.mean_prob);
    if (s.role == DocumentRole::kAbstract) abstract_by_id[s.doc_id] = s.score.mean_prob;
    if (s.role == DocumentRole::kPls) pls_by_id[s.doc_id] = s.score.mean_prob;
  }
  std::vector<double> paired_abs, paired_pls;
  for (const auto& [id, a] : abstract_by_id) {
    if (auto it = pls_by_id.find(id); it != pls_by_id.end()) {
      paired_abs.push_back(a);
      paired_pls.push_back(it->second);
    }
  }

  Json summary;
  summary["config"] = config.to_json();
  summary["scorer"] = {{"backend", args.backend},
                       {"model_name", scorer->info().model_name},
                       {"vocab_size", scorer->info().vocab_size}};
  Json roles;
  for (const auto& [role, xs] : by_role) roles[role] = mean_sd(xs);
  summary["roles"] = std::move(roles);
  summary["abstract_minus_pls"] = t_test_json(paired_abs, paired_pls);

  constexpr std::size_t kBins = 20;
  const std::vector<std::string> role_names{"abstract", "pls", "generated"};
  std::map<std::string, std::vector<std::size_t>> hist;
  for (const auto& r : role_names) hist[r].assign(kBins, 0);
  for (const auto& s : scored) {
    const auto bin = std::min(kBins - 1, static_cast<std::size_t>(s.score.mean_prob * kBins));
    ++hist[std::string(to_string(s.role))][bin];
  }
  std::string csv = "bin_low,bin_high,abstract,pls,generated\n";
  for (std::size_t b = 0; b < kBins; ++b) {
    csv += io::format_double(static_cast<double>(b) / kBins) + "," + io::format_double(static_cast<double>(b + 1) / kBins);
    for (const auto& r : role_names) csv += "," + std::to_string(hist[r][b]);
    csv += "\n";
  }

  io::write_jsonl(config.out_dir / "scores.jsonl", lines);
  io::write_json(config.out_dir / "scores_summary.json", summary);
  io::write_file_atomic(config.out_dir / "score_hist.csv", csv);
  write_manifest(config, "mlm-score", {args.input}, {"scores.jsonl", "scores_summary.json", "score_hist.csv"});

  for (const auto& [role, xs] : by_role) {
    std::cout << role << ": n=" << xs.size() << " mean_prob=" << fixed(pairwise_mean(xs), 4) << "\n";
  }
}

void train_discriminator_cmd(const RunConfig& config, const TrainArgs& args) {
  std::vector<DocumentPair> pairs;
  for (const auto& line : jsonl(args.input)) pairs.push_back(io::pair_from_json(line));

  TokenVocab vocab;
  if (args.vocab) {
    vocab = TokenVocab::load(*args.vocab);
  } else {
    std::vector<std::vector<std::string>> tokenized;
    for (const auto& p : pairs) {
      tokenized.push_back(tokenize_features(p.abstract_text));
      tokenized.push_back(tokenize_features(p.pls_text));
    }
    vocab = TokenVocab::build(tokenized, args.min_count);
  }

  auto examples_for = [&](const std::vector<std::size_t>& idx) {
    std::vector<LabeledExample> out;
    for (std::size_t i : idx) {
      out.push_back(example_of(pairs[i].abstract_text, 0, vocab));
      out.push_back(example_of(pairs[i].pls_text, 1, vocab));
    }
    return out;
  };
  std::vector<std::size_t> all(pairs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto split = split_dataset(pairs.size(), config.seed);
  const auto train = examples_for(split.train);
  const auto valid = examples_for(split.valid);
  const auto test = examples_for(split.test);

  const TrainConfig tc{config.lambda, config.max_iter, 1e-6, config.seed};
  auto model = train_discriminator(train, vocab.size(), tc, vocab.fingerprint());
  model.meta.source = "cochrane";
  const auto cv = cross_validate(examples_for(all), vocab.size(), tc, config.folds);
  const auto top = top_tokens(model, std::min(args.top_k, vocab.size()));

  Json report;
  report["config"] = config.to_json();
  report["n_pairs"] = pairs.size();
  report["vocab_size"] = vocab.size();
  report["vocab"] = vocab.fingerprint();
  report["training"] = {{"iterations", model.meta.iterations},
                        {"converged", model.meta.converged},
                        {"final_loss", model.meta.final_loss},
                        {"grad_inf_norm", model.meta.grad_inf_norm}};
  report["splits"] = {{"train", split_metrics(model, train)},
                      {"valid", split_metrics(model, valid)},
                      {"test", split_metrics(model, test)}};
  report["cross_validation"] = {{"folds", config.folds},
                                {"fold_accuracy", cv.fold_accuracy},
                                {"mean_accuracy", cv.mean_accuracy}};

  Json top_json;
  top_json["negative"] = token_list(top.negative, vocab);
  top_json["positive"] = token_list(top.positive, vocab);

  std::vector<std::string> outputs{"vocab.txt", "model_cochrane.json", "top_tokens.json", "discriminator.json"};
  fs::create_directories(config.out_dir);
  vocab.save(config.out_dir / "vocab.txt");
  io::write_json(config.out_dir / "model_cochrane.json", io::to_json(model));
  io::write_json(config.out_dir / "top_tokens.json", top_json);

  if (!valid.empty()) {
    std::vector<ScoredLabel> scored;
    for (const auto& e : valid) scored.push_back({predict_proba(model, e.x), e.y});
    io::write_file_atomic(config.out_dir / "roc_valid.csv", io::roc_csv(roc_auc(scored)));
    outputs.push_back("roc_valid.csv");
  }

  std::vector<std::string> inputs{args.input};
  if (args.newsela) {
    std::vector<LevelDocument> levels;
    for (const auto& line : jsonl(*args.newsela)) {
      const double level = io::number_field(line, "level");
      levels.push_back({io::string_field(line, "text"), static_cast<int>(level)});
    }
    auto newsela = newsela_level_model(levels, vocab, tc);
    newsela.meta.source = "newsela";
    io::write_json(config.out_dir / "model_newsela.json", io::to_json(newsela));
    report["newsela"] = {{"n_documents", levels.size()}, {"iterations", newsela.meta.iterations},
                         {"converged", newsela.meta.converged}};
    outputs.push_back("model_newsela.json");
    inputs.push_back(*args.newsela);
  }
  io::write_json(config.out_dir / "discriminator.json", report);
  write_manifest(config, "train-discriminator", inputs, outputs);

  std::cout << "pairs " << pairs.size() << ", vocab " << vocab.size() << ", " << config.folds
            << "-fold accuracy " << fixed(cv.mean_accuracy, 4) << "\n";
  for (const auto& name : {"train", "valid", "test"}) {
    const auto& s = report["splits"][name];
    std::cout << name << ": n=" << s["n"].get<std::size_t>();
    if (!s["auc"].is_null()) std::cout << " accuracy=" << fixed(s["accuracy"].get<double>(), 4)
                                       << " AUC=" << fixed(s["auc"].get<double>(), 4);
    std::cout << "\n";
  }
}

void roc(const RunConfig& config, const RocArgs& args) {
  Json curves = Json::array();
  std::vector<std::string> outputs;
  for (const auto& input : args.inputs) {
    const auto lines = jsonl(input);
    const std::string stem = fs::path(input).stem().string();
    for (const auto& field : args.fields) {
      std::vector<ScoredLabel> scored;
      for (const auto& line : lines) {
        if (!line.contains(field) || line.at(field).is_null()) continue;
        scored.push_back({io::number_field(line, field), label_of(line)});
      }
      if (scored.empty()) continue;
      const bool lower = lower_means_positive(field, args.direction);
      const auto curve = roc_auc(scored, !lower);
      const std::string csv_name = "roc_" + stem + "_" + field + ".csv";
      io::write_file_atomic(config.out_dir / csv_name, io::roc_csv(curve));
      outputs.push_back(csv_name);
      curves.push_back({{"input", input},
                        {"field", field},
                        {"higher_means_positive", !lower},
                        {"auc", curve.auc},
                        {"n_pos", curve.n_pos},
                        {"n_neg", curve.n_neg},
                        {"csv", csv_name}});
      std::cout << stem << " " << field << " AUC=" << fixed(curve.auc, 4) << " (pos " << curve.n_pos << ", neg "
                << curve.n_neg << ")\n";
    }
  }
  if (curves.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no input line carries any of the requested score fields");
  }
  Json summary;
  summary["config"] = config.to_json();
  summary["curves"] = std::move(curves);
  io::write_json(config.out_dir / "roc.json", summary);
  outputs.push_back("roc.json");
  write_manifest(config, "roc", args.inputs, outputs);
}

void ul_weights(const RunConfig& config, const UlWeightsArgs& args) {
  if (args.models.empty() || args.models.size() > 2) {
    throw Error(ErrorKind::kInvalidArgument, "ul-weights takes one model, or two to combine");
  }
  auto model = io::model_from_json(io::read_json(args.models[0]));
  if (args.models.size() == 2) {
    model = combine_models(model, io::model_from_json(io::read_json(args.models[1])));
    model.meta.source = "both";
  }
  if (args.source) model.meta.source = *args.source;
  const auto penalties = build_penalty_set(model, config.temperature);

  auto j = io::to_json(penalties);
  j["config"] = config.to_json();
  io::write_json(config.out_dir / "penalty.json", j);
  write_manifest(config, "ul-weights", args.models, {"penalty.json"});
  std::cout << penalties.entries.size() << " penalised tokens, source " << penalties.source << ", T="
            << io::format_double(penalties.temperature) << ", top id " << penalties.entries.front().id << " w'="
            << fixed(penalties.entries.front().weight, 4) << "\n";
}

void ul_check(const RunConfig& config, const UlCheckArgs& args) {
  const auto dists = io::distributions_from_json(io::read_json(args.distributions));
  const auto penalties = io::penalty_from_json(io::read_json(args.penalties));
  const auto reduction = args.mean_per_step ? Reduction::kMeanPerStep : Reduction::kSum;

  std::cout << "UL=" << fixed(ul_loss(dists, penalties, reduction), 4)
            << " UL_ungated=" << fixed(ul_loss_ungated(dists, penalties, reduction), 4);
  if (dists.targets()) {
    const auto c = combined_loss(dists, penalties, config.alpha, reduction);
    std::cout << " NLL=" << fixed(c.nll, 4) << " alpha=" << io::format_double(config.alpha)
              << " total=" << fixed(c.total, 3);
  }
  std::cout << "\nnucleus top_p=" << io::format_double(config.top_p) << " support:";
  for (std::size_t t = 0; t < dists.steps(); ++t) {
    const auto kept = nucleus_filter(dists.row(t), config.top_p);
    std::cout << " " << std::count_if(kept.begin(), kept.end(), [](double p) { return p > 0.0; });
  }
  std::cout << "\n";
}

void evaluate(const RunConfig& config, const EvaluateArgs& args) {
  const auto metrics = evaluate_file(args.input);
  if (metrics.empty()) throw Error(ErrorKind::kInvalidArgument, "no records in " + args.input);

  Json docs = Json::array();
  for (const auto& m : metrics) docs.push_back(document_json(m));

  Json means;
  for (const auto& [name, get] : system_metrics()) {
    std::vector<double> xs;
    for (const auto& m : metrics) {
      if (auto v = get(m)) xs.push_back(*v);
    }
    means[name] = mean_sd(xs);
  }

  Json vs_reference;
  for (const auto& [name, cand, ref] : candidate_vs_reference()) {
    std::vector<double> a, b;
    for (const auto& m : metrics) {
      const auto x = cand(m), y = ref(m);
      if (x && y) {
        a.push_back(*x);
        b.push_back(*y);
      }
    }
    vs_reference[name] = t_test_json(a, b);
  }

  Json report;
  report["config"] = config.to_json();
  report["metadata"] = {{"tokens", "lowercased word tokens"},
                        {"rouge", "F1, beta 1; ROUGE-L over whole-text LCS"},
                        {"bleu", "orders 1-4 with at least one candidate n-gram; zero-match orders (m+1)/(c+1)"},
                        {"sari", "deletion scored by precision; empty operation sets score 1; single reference"},
                        {"overlap", "distinct candidate n-grams found in the source"},
                        {"significance", "two-sided paired t-test, alpha 0.01"}};
  report["documents"] = std::move(docs);
  report["corpus_mean"] = std::move(means);
  report["candidate_minus_reference"] = std::move(vs_reference);

  std::vector<std::string> inputs{args.input};
  if (args.compare) {
    const auto other = evaluate_file(*args.compare);
    std::map<std::string, const DocumentMetrics*> by_id;
    for (const auto& m : other) by_id[m.doc_id] = &m;
    Json vs_other;
    for (const auto& [name, get] : system_metrics()) {
      std::vector<double> a, b;
      for (const auto& m : metrics) {
        auto it = by_id.find(m.doc_id);
        if (it == by_id.end()) continue;
        const auto x = get(m), y = get(*it->second);
        if (x && y) {
          a.push_back(*x);
          b.push_back(*y);
        }
      }
      vs_other[name] = t_test_json(a, b);
    }
    report["input_minus_compare"] = std::move(vs_other);
    inputs.push_back(*args.compare);
  }

  std::string csv = "id,rouge1,rouge2,rougeL,bleu,sari,overlap_1,overlap_2,overlap_3,overlap_4,n_tokens\n";
  for (const auto& m : metrics) {
    csv += m.doc_id;
    for (double x : {m.rouge1, m.rouge2, m.rougeL, m.bleu, m.sari}) csv += "," + io::format_double(x);
    for (const auto& o : m.overlap) csv += "," + (o ? io::format_double(*o) : std::string());
    csv += "," + std::to_string(m.candidate_length.n_tokens) + "\n";
  }

  io::write_json(config.out_dir / "report.json", report);
  io::write_file_atomic(config.out_dir / "metrics.csv", csv);
  write_manifest(config, "evaluate", inputs, {"report.json", "metrics.csv"});

  const auto& cm = report["corpus_mean"];
  std::cout << "documents " << metrics.size();
  for (const auto& name : {"rouge1", "rouge2", "rougeL", "bleu", "sari"}) {
    std::cout << " " << name << "=" << fixed(cm[name]["mean"].get<double>(), 4);
  }
  std::cout << "\n";
}

}  // namespace plainscore::cli
