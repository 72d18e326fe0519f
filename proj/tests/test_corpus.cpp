#include <doctest.h>

#include <algorithm>
#include <map>

#include "plainscore/corpus.hpp"
#include "plainscore/error.hpp"
#include "plainscore/io.hpp"

using namespace plainscore;

namespace {

std::vector<RawReview> fixture_reviews() {
  std::vector<RawReview> out;
  for (const auto& j : io::read_jsonl(PLAINSCORE_TEST_DATA "/reviews.jsonl")) out.push_back(io::review_from_json(j));
  return out;
}

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += i == 0 ? "w" : " w";
  return s;
}

RawReview sectioned(std::vector<std::string> abstract_headings, std::vector<std::string> pls_headings) {
  RawReview r;
  r.id = "x";
  for (const auto& h : abstract_headings) r.abstract_sections.push_back({h, "Body of " + h + "."});
  for (const auto& h : pls_headings) r.pls_sections.push_back({h, "Body of " + h + "."});
  return r;
}

RawReview longform(std::vector<std::string> paragraphs) {
  RawReview r;
  r.id = "x";
  r.abstract_sections.push_back({"Main results", "Some text."});
  r.pls_kind = PlsKind::kLongform;
  r.pls_paragraphs = std::move(paragraphs);
  return r;
}

struct Expected {
  bool accepted;
  std::string reason;
  std::size_t abstract_tokens, pls_tokens;
  bool flagged;
};

}  // namespace

TEST_CASE("abstract extraction") {
  auto r = sectioned({"Background", "Objectives", "Main results", "Authors' conclusions"}, {"x"});
  auto e = extract_abstract(r);
  CHECK(e.text == "Body of Main results.\n\nBody of Authors' conclusions.");
  CHECK_FALSE(e.flagged);
  CHECK(e.first_kept == 2);

  r = sectioned({"Main Results"}, {"x"});
  CHECK(extract_abstract(r).text == "Body of Main Results.");

  r = sectioned({"Background", "Results Summary"}, {"x"});
  e = extract_abstract(r);
  CHECK(e.flagged);
  CHECK(e.text == "Body of Background.\n\nBody of Results Summary.");

  r = sectioned({}, {"x"});
  try {
    extract_abstract(r);
    FAIL("expected EmptyAbstract");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::kEmptyAbstract);
  }
}

TEST_CASE("sectioned summary extraction") {
  auto r = sectioned({"Main results"}, {"Review question", "Study characteristics", "Key results"});
  auto e = extract_pls_sectioned(r);
  CHECK(e.text == "Body of Study characteristics.\n\nBody of Key results.");
  CHECK_FALSE(e.flagged);

  r = sectioned({"Main results"}, {"What evidence did we find?"});
  CHECK(extract_pls_sectioned(r).text == "Body of What evidence did we find?.");

  r = sectioned({"Main results"}, {"Background", "Conclusions"});
  e = extract_pls_sectioned(r);
  CHECK(e.flagged);
  CHECK(e.text == "Body of Background.\n\nBody of Conclusions.");

  r = sectioned({"Main results"}, {"Aim", "What does this  TELL   us"});
  CHECK(extract_pls_sectioned(r).first_kept == 1);

  r = sectioned({"Main results"}, {});
  try {
    extract_pls(r);
    FAIL("expected EmptySummary");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::kEmptySummary);
  }
}

TEST_CASE("long-form summary extraction") {
  auto e = extract_pls_longform(longform({"Background only here.", "We found seven studies of adults. More.", "P3."}));
  CHECK(e.text == "We found seven studies of adults. More.\n\nP3.");
  CHECK(e.first_kept == 1);

  e = extract_pls_longform(longform({"Nothing relevant at all."}));
  CHECK(e.text == "Nothing relevant at all.");
  CHECK_FALSE(e.flagged);

  e = extract_pls_longform(longform({"One. Two. A trial was run.", "Nothing here."}));
  CHECK(e.flagged);
  CHECK(e.text == "One. Two. A trial was run.\n\nNothing here.");

  e = extract_pls_longform(longform({"Studying trialled things.", "Then a TRIAL came."}));
  CHECK(e.first_kept == 1);

  e = extract_pls_longform(longform({"First block.\n\nThe studies were small.\n  \nLast."}));
  CHECK(e.text == "The studies were small.\n\nLast.");

  CHECK(longform_paragraphs(std::vector<std::string>{"a\n\nb", "  ", "c\nd"}) == std::vector<std::string>{"a", "b", "c\nd"});
  CHECK_THROWS_AS(extract_pls_longform(longform({"  ", ""})), Error);
}

TEST_CASE("extraction is idempotent") {
  for (const auto& r : fixture_reviews()) {
    if (r.abstract_sections.empty()) continue;
    const auto a = extract_abstract(r);
    RawReview again = r;
    again.abstract_sections.erase(again.abstract_sections.begin(),
                                  again.abstract_sections.begin() + static_cast<long>(a.first_kept));
    CHECK(extract_abstract(again).text == a.text);

    const auto p = extract_pls(r);
    RawReview again_pls = r;
    if (r.pls_kind == PlsKind::kSectioned) {
      again_pls.pls_sections.erase(again_pls.pls_sections.begin(),
                                   again_pls.pls_sections.begin() + static_cast<long>(p.first_kept));
    } else {
      again_pls.pls_paragraphs = {p.text};
    }
    CHECK(extract_pls(again_pls).text == p.text);
  }
}

TEST_CASE("length filter") {
  const TokenCounter counter;
  auto accepted = filter_pair("a", words(400), words(100), false, counter);
  REQUIRE(std::holds_alternative<DocumentPair>(accepted));
  CHECK(std::get<DocumentPair>(accepted).pls_token_count == 100);

  auto low = filter_pair("b", words(400), words(50), false, counter);
  REQUIRE(std::holds_alternative<Rejection>(low));
  CHECK(std::get<Rejection>(low).reason == RejectReason::kRatioLow);

  auto long_one = filter_pair("c", words(1100), words(500), false, counter);
  REQUIRE(std::holds_alternative<Rejection>(long_one));
  CHECK(std::get<Rejection>(long_one).reason == RejectReason::kTooLong);

  auto high = filter_pair("d", words(100), words(131), false, counter);
  CHECK(std::get<Rejection>(high).reason == RejectReason::kRatioHigh);
  CHECK(std::holds_alternative<DocumentPair>(filter_pair("e", words(100), words(130), false, counter)));
  CHECK(std::holds_alternative<DocumentPair>(filter_pair("f", words(100), words(20), false, counter)));
  CHECK(std::holds_alternative<DocumentPair>(filter_pair("g", words(1024), words(1024), false, counter)));

  FilterConfig tight;
  tight.cap = 50;
  CHECK(std::get<Rejection>(filter_pair("h", words(40), words(51), false, counter, tight)).reason ==
        RejectReason::kTooLong);

  CHECK(to_string(RejectReason::kTooLong) == "too_long");
  CHECK(to_string(RejectReason::kRatioLow) == "ratio_low");
  CHECK(to_string(RejectReason::kRatioHigh) == "ratio_high");

  FilterConfig bad;
  bad.ratio_low = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("subword token counter") {
  const TokenVocab vocab({"[UNK]", "the", "cat", "##s"});
  const TokenCounter counter(vocab);
  CHECK(counter("the cats") == 3);
  CHECK(TokenCounter{}("the cats") == 2);
}

TEST_CASE("fixture corpus outcomes") {
  const auto reviews = fixture_reviews();
  REQUIRE(reviews.size() == 20);
  const std::map<std::string, Expected> expected = {
      {"r01", {true, "", 300, 140, false}},  {"r02", {true, "", 120, 90, false}},
      {"r03", {true, "", 200, 70, true}},    {"r04", {true, "", 300, 110, true}},
      {"r05", {true, "", 200, 80, false}},   {"r06", {true, "", 300, 90, false}},
      {"r07", {true, "", 300, 100, false}},  {"r08", {true, "", 300, 70, false}},
      {"r09", {true, "", 300, 117, false}},  {"r10", {true, "", 300, 390, false}},
      {"r11", {true, "", 300, 113, true}},   {"r12", {true, "", 300, 91, false}},
      {"r13", {true, "", 300, 65, false}},   {"r14", {true, "", 300, 75, false}},
      {"r15", {false, "ratio_low", 400, 50, false}},   {"r16", {false, "ratio_high", 100, 140, false}},
      {"r17", {false, "too_long", 1025, 300, false}},  {"r18", {true, "", 1024, 300, false}},
      {"r19", {true, "", 100, 20, false}},   {"r20", {false, "empty_abstract", 0, 0, false}},
  };
  const TokenCounter counter;
  const FilterConfig config;
  const auto outcomes = run_pipeline(reviews, counter, config, Execution::kSerial);
  std::map<std::string, int> reasons;
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    const auto& exp = expected.at(reviews[i].id);
    CAPTURE(reviews[i].id);
    if (exp.accepted) {
      REQUIRE(std::holds_alternative<DocumentPair>(outcomes[i]));
      const auto& p = std::get<DocumentPair>(outcomes[i]);
      CHECK(p.abstract_token_count == exp.abstract_tokens);
      CHECK(p.pls_token_count == exp.pls_tokens);
      CHECK(p.flagged == exp.flagged);
      CHECK(p.abstract_token_count == counter(p.abstract_text));
      CHECK(p.pls_token_count == counter(p.pls_text));
      CHECK(p.abstract_token_count <= config.cap);
      CHECK(p.pls_token_count <= config.cap);
      const double ratio = double(p.pls_token_count) / double(p.abstract_token_count);
      CHECK(ratio >= 0.2);
      CHECK(ratio <= 1.3);
    } else {
      REQUIRE(std::holds_alternative<Rejection>(outcomes[i]));
      const auto& r = std::get<Rejection>(outcomes[i]);
      CHECK(to_string(r.reason) == exp.reason);
      CHECK(r.abstract_token_count == exp.abstract_tokens);
      CHECK(r.pls_token_count == exp.pls_tokens);
      ++reasons[exp.reason];
    }
  }
  CHECK(reasons.size() == 4);
  CHECK(run_pipeline(reviews, counter, config, Execution::kParallel) == outcomes);
}

TEST_CASE("fixture corpus matches golden files byte for byte") {
  const auto reviews = fixture_reviews();
  std::vector<io::Json> pairs, rejects;
  for (const auto& o : run_pipeline(reviews, TokenCounter{}, FilterConfig{})) {
    if (auto* p = std::get_if<DocumentPair>(&o)) pairs.push_back(io::to_json(*p));
    else rejects.push_back(io::to_json(std::get<Rejection>(o)));
  }
  CHECK(io::to_jsonl(pairs) == io::read_file(PLAINSCORE_TEST_DATA "/golden/pairs.jsonl"));
  CHECK(io::to_jsonl(rejects) == io::read_file(PLAINSCORE_TEST_DATA "/golden/rejects.jsonl"));
}

TEST_CASE("dataset split") {
  const auto s = split_dataset(4459, 17);
  CHECK(s.train.size() == 3568);
  CHECK(s.valid.size() == 411);
  CHECK(s.test.size() == 480);

  const auto ten = split_dataset(10, 3, SplitFractions{0.8, 0.1, 0.1});
  CHECK(ten.train.size() == 8);
  CHECK(ten.valid.size() == 1);
  CHECK(ten.test.size() == 1);

  const auto again = split_dataset(4459, 17);
  CHECK(again.train == s.train);
  CHECK(again.valid == s.valid);
  CHECK(again.test == s.test);
  CHECK(split_dataset(4459, 18).test != s.test);

  std::vector<int> seen(4459, 0);
  for (const auto* part : {&s.train, &s.valid, &s.test}) {
    for (auto i : *part) ++seen[i];
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  CHECK_THROWS_AS(split_dataset(0, 1), Error);
  CHECK_THROWS_AS(split_dataset(10, 1, SplitFractions{0.5, 0.1, 0.1}), Error);
}
