#include "plainscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "plainscore/error.hpp"
#include "plainscore/text.hpp"

namespace plainscore {

namespace {

using Counts = std::map<std::string, std::size_t>;

std::string ngram_key(const Tokens& toks, std::size_t i, std::size_t n) {
  std::string key = toks[i];
  for (std::size_t k = 1; k < n; ++k) {
    key += '\x1f';
    key += toks[i + k];
  }
  return key;
}

Counts ngram_counts(const Tokens& toks, std::size_t n) {
  Counts c;
  if (toks.size() >= n) {
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      ++c[ngram_key(toks, i, n)];
    }
  }
  return c;
}

std::size_t total(const Counts& c) {
  std::size_t s = 0;
  for (const auto& [k, v] : c) {
    s += v;
  }
  return s;
}

std::size_t clipped_matches(const Counts& cand, const Counts& ref) {
  std::size_t m = 0;
  for (const auto& [k, v] : cand) {
    if (auto it = ref.find(k); it != ref.end()) {
      m += std::min(v, it->second);
    }
  }
  return m;
}

double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Tokens tokens_of(std::string_view text, const char* what) {
  auto toks = tokenize_lower(text);
  if (toks.empty()) {
    throw Error(ErrorKind::kEmptyText, std::string(what) + " has no word tokens");
  }
  return toks;
}

// Multiset helpers for SARI.
Counts scaled(const Counts& c, std::size_t k) {
  Counts out;
  for (const auto& [g, v] : c) {
    out[g] = v * k;
  }
  return out;
}

Counts intersect(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [g, v] : a) {
    if (auto it = b.find(g); it != b.end()) {
      out[g] = std::min(v, it->second);
    }
  }
  return out;
}

Counts subtract(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [g, v] : a) {
    const auto it = b.find(g);
    const std::size_t o = it == b.end() ? 0 : it->second;
    if (v > o) {
      out[g] = v - o;
    }
  }
  return out;
}

double get(const Counts& c, const std::string& g) {
  auto it = c.find(g);
  return it == c.end() ? 0.0 : static_cast<double>(it->second);
}

struct SariParts {
  double keep = 0.0, del = 0.0, add = 0.0;
};

SariParts sari_order(const Tokens& source, const Tokens& candidate, std::span<const Tokens> refs, std::size_t n) {
  const std::size_t num_refs = refs.size();
  const Counts s = ngram_counts(source, n);
  const Counts c = ngram_counts(candidate, n);
  Counts r;
  for (const auto& ref : refs) {
    for (const auto& [g, v] : ngram_counts(ref, n)) {
      r[g] += v;
    }
  }
  const Counts s_rep = scaled(s, num_refs);
  const Counts c_rep = scaled(c, num_refs);

  SariParts out;
  // Keep
  const Counts keep = intersect(s_rep, c_rep);
  const Counts keep_good = intersect(keep, r);
  const Counts keep_all = intersect(s_rep, r);
  double keep_p = 1.0;
  double keep_r = 1.0;
  if (!keep.empty()) {
    double acc = 0.0;
    for (const auto& [g, v] : keep) {
      acc += get(keep_good, g) / static_cast<double>(v);
    }
    keep_p = acc / static_cast<double>(keep.size());
  }
  if (!keep_all.empty()) {
    double acc = 0.0;
    for (const auto& [g, v] : keep_all) {
      acc += get(keep_good, g) / static_cast<double>(v);
    }
    keep_r = acc / static_cast<double>(keep_all.size());
  }
  out.keep = f1(keep_p, keep_r);

  // Delete (precision only)
  const Counts del = subtract(s_rep, c_rep);
  const Counts del_good = subtract(del, r);
  double del_p = 1.0;
  if (!del.empty()) {
    double acc = 0.0;
    for (const auto& [g, v] : del) {
      acc += get(del_good, g) / static_cast<double>(v);
    }
    del_p = acc / static_cast<double>(del.size());
  }
  out.del = del_p;

  // Add (sets)
  std::size_t added = 0;
  std::size_t added_good = 0;
  for (const auto& [g, v] : c) {
    if (!s.count(g)) {
      ++added;
      added_good += r.count(g) ? 1 : 0;
    }
  }
  std::size_t addable = 0;
  for (const auto& [g, v] : r) {
    addable += s.count(g) ? 0 : 1;
  }
  const double add_p = added == 0 ? 1.0 : static_cast<double>(added_good) / static_cast<double>(added);
  const double add_r = addable == 0 ? 1.0 : static_cast<double>(added_good) / static_cast<double>(addable);
  out.add = f1(add_p, add_r);
  return out;
}

Readability readability_of(std::string_view text) {
  Readability r;
  const auto st = compute_stats(text);
  if (st.n_sentences > 0 && st.n_words > 0) {
    r.fk = flesch_kincaid(st);
    r.ari = ari(st);
  }
  return r;
}

std::array<std::optional<double>, 4> overlaps(const Tokens& candidate, const Tokens& source) {
  std::array<std::optional<double>, 4> out;
  for (std::size_t n = 1; n <= 4; ++n) {
    if (candidate.size() >= n) {
      out[n - 1] = ngram_overlap(candidate, source, n);
    }
  }
  return out;
}

}  // namespace

double rouge_f1(const Tokens& cand, const Tokens& ref, RougeVariant variant) {
  if (cand.empty() || ref.empty()) {
    throw Error(ErrorKind::kEmptyText, "ROUGE needs non-empty texts");
  }
  if (variant == RougeVariant::kRougeL) {
    const double l = static_cast<double>(lcs_length(cand, ref));
    return f1(l / static_cast<double>(cand.size()), l / static_cast<double>(ref.size()));
  }
  const std::size_t n = variant == RougeVariant::kRouge1 ? 1 : 2;
  const Counts c = ngram_counts(cand, n);
  const Counts r = ngram_counts(ref, n);
  if (c.empty() && r.empty()) {
    return cand == ref ? 1.0 : 0.0;
  }
  if (c.empty() || r.empty()) {
    return 0.0;
  }
  const double m = static_cast<double>(clipped_matches(c, r));
  return f1(m / static_cast<double>(total(c)), m / static_cast<double>(total(r)));
}

double rouge_f1(std::string_view candidate, std::string_view reference, RougeVariant variant) {
  return rouge_f1(tokens_of(candidate, "candidate"), tokens_of(reference, "reference"), variant);
}

BleuResult bleu(const Tokens& cand, const Tokens& ref, std::size_t max_n) {
  if (cand.empty() || ref.empty()) {
    throw Error(ErrorKind::kEmptyText, "BLEU needs non-empty texts");
  }
  if (max_n == 0 || max_n > 4) {
    throw Error(ErrorKind::kInvalidArgument, "BLEU order must lie in [1, 4]");
  }
  BleuResult res;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const Counts c = ngram_counts(cand, n);
    if (c.empty()) {
      continue;
    }
    const double count = static_cast<double>(total(c));
    const double matched = static_cast<double>(clipped_matches(c, ngram_counts(ref, n)));
    double p = matched / count;
    if (matched == 0.0) {
      p = 1.0 / (count + 1.0);
      res.smoothed = true;
    }
    res.precisions[n - 1] = p;
    log_sum += std::log(p);
    ++res.orders_used;
  }
  const double c_len = static_cast<double>(cand.size());
  const double r_len = static_cast<double>(ref.size());
  res.brevity_penalty = c_len < r_len ? std::exp(1.0 - r_len / c_len) : 1.0;
  res.score = res.brevity_penalty * std::exp(log_sum / static_cast<double>(res.orders_used));
  return res;
}

BleuResult bleu(std::string_view candidate, std::string_view reference, std::size_t max_n) {
  return bleu(tokens_of(candidate, "candidate"), tokens_of(reference, "reference"), max_n);
}

double sari(const Tokens& source, const Tokens& candidate, std::span<const Tokens> references) {
  if (references.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "SARI needs at least one reference");
  }
  if (source.empty() || candidate.empty()) {
    throw Error(ErrorKind::kEmptyText, "SARI needs non-empty source and candidate");
  }
  double keep = 0.0, del = 0.0, add = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto parts = sari_order(source, candidate, references, n);
    keep += parts.keep;
    del += parts.del;
    add += parts.add;
  }
  return (keep / 4.0 + del / 4.0 + add / 4.0) / 3.0;
}

double sari(std::string_view source, std::string_view candidate, std::span<const std::string> references) {
  std::vector<Tokens> refs;
  for (const auto& r : references) {
    refs.push_back(tokens_of(r, "reference"));
  }
  return sari(tokens_of(source, "source"), tokens_of(candidate, "candidate"), refs);
}

double ngram_overlap(const Tokens& cand, const Tokens& source, std::size_t n) {
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument, "n-gram order must be positive");
  }
  if (cand.size() < n) {
    throw Error(ErrorKind::kTooShort, "candidate has " + std::to_string(cand.size()) + " tokens, fewer than n=" +
                                          std::to_string(n));
  }
  const Counts c = ngram_counts(cand, n);
  const Counts s = ngram_counts(source, n);
  std::size_t shared = 0;
  for (const auto& [g, v] : c) {
    shared += s.count(g);
  }
  return static_cast<double>(shared) / static_cast<double>(c.size());
}

double ngram_overlap(std::string_view candidate, std::string_view source, std::size_t n) {
  return ngram_overlap(tokenize_lower(candidate), tokenize_lower(source), n);
}

LengthStats length_stats(std::string_view text) {
  return {tokenize_words(text).size(), split_sentence_spans(text).size()};
}

DocumentMetrics evaluate_record(const EvalRecord& rec) {
  const Tokens src = tokens_of(rec.source, "source");
  const Tokens ref = tokens_of(rec.reference, "reference");
  const Tokens cand = tokens_of(rec.candidate, "candidate");
  DocumentMetrics m;
  m.doc_id = rec.doc_id;
  m.rouge1 = rouge_f1(cand, ref, RougeVariant::kRouge1);
  m.rouge2 = rouge_f1(cand, ref, RougeVariant::kRouge2);
  m.rougeL = rouge_f1(cand, ref, RougeVariant::kRougeL);
  const auto b = bleu(cand, ref);
  m.bleu = b.score;
  m.bleu_smoothed = b.smoothed;
  const std::vector<Tokens> refs{ref};
  m.sari = sari(src, cand, refs);
  m.overlap = overlaps(cand, src);
  m.reference_overlap = overlaps(ref, src);
  m.source_length = length_stats(rec.source);
  m.reference_length = length_stats(rec.reference);
  m.candidate_length = length_stats(rec.candidate);
  m.source_readability = readability_of(rec.source);
  m.reference_readability = readability_of(rec.reference);
  m.candidate_readability = readability_of(rec.candidate);
  return m;
}

std::vector<DocumentMetrics> evaluate_records(std::span<const EvalRecord> records, Execution exec) {
  return indexed_map(records.size(), exec, [&](std::size_t i) { return evaluate_record(records[i]); });
}

}  // namespace plainscore
