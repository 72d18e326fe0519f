#include "plainscore/mlm_http.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

#include <json.hpp>

#include "plainscore/error.hpp"

namespace plainscore {

namespace {

using nlohmann::json;

[[noreturn]] void unavailable(const std::string& what) { throw Error(ErrorKind::kScorerUnavailable, what); }

json parse_reply(const std::string& body, const std::string& endpoint) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    unavailable(endpoint + " returned malformed JSON: " + e.what());
  }
}

std::size_t split_point(std::string_view s) {
  const std::size_t mid = s.size() / 2;
  const std::size_t right = s.find(' ', mid);
  const std::size_t left = s.rfind(' ', mid);
  std::size_t best = 0;
  if (left != std::string_view::npos && left > 0) {
    best = left;
  }
  if (right != std::string_view::npos && right + 1 < s.size() && (best == 0 || right - mid < mid - best)) {
    best = right;
  }
  return best;
}

constexpr int kInfoAttempts = 20;
constexpr auto kInfoRetryDelay = std::chrono::milliseconds(250);

}  // namespace

HttpScorer::HttpScorer(std::string base_url, int timeout_seconds)
    : scheme_host_port_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
  while (!scheme_host_port_.empty() && scheme_host_port_.back() == '/') {
    scheme_host_port_.pop_back();
  }
  httplib::Client cli(scheme_host_port_);
  cli.set_connection_timeout(timeout_seconds_);
  cli.set_read_timeout(timeout_seconds_);
  auto res = cli.Get("/info");
  // 503 means the model is still loading.
  for (int attempt = 1; res && res->status == 503 && attempt < kInfoAttempts; ++attempt) {
    std::this_thread::sleep_for(kInfoRetryDelay);
    res = cli.Get("/info");
  }
  if (!res) {
    unavailable("GET " + scheme_host_port_ + "/info failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    unavailable("GET /info returned HTTP " + std::to_string(res->status));
  }
  const auto j = parse_reply(res->body, "/info");
  try {
    info_.model_name = j.value("model_name", std::string("unknown"));
    info_.vocab_size = j.at("vocab_size").get<std::size_t>();
    info_.max_sequence_length = j.at("max_sequence_length").get<std::size_t>();
    info_.mask_token_id = j.at("mask_token_id").get<TokenId>();
  } catch (const json::exception& e) {
    unavailable(std::string("/info reply is missing fields: ") + e.what());
  }
  if (info_.max_sequence_length <= 2) {
    unavailable("/info reports max_sequence_length <= 2");
  }
}

std::size_t HttpScorer::max_tokens() const { return info_.max_sequence_length - 2; }

std::string HttpScorer::post(const std::string& path, const std::string& body, int* status) const {
  httplib::Client cli(scheme_host_port_);
  cli.set_connection_timeout(timeout_seconds_);
  cli.set_read_timeout(timeout_seconds_);
  auto res = cli.Post(path, body, "application/json");
  if (!res) {
    unavailable("POST " + scheme_host_port_ + path + " failed: " + httplib::to_string(res.error()));
  }
  *status = res->status;
  return res->body;
}

std::vector<TokenId> HttpScorer::tokenize(std::string_view sentence) const {
  int status = 0;
  const auto body = post("/tokenize", json{{"text", sentence}}.dump(), &status);
  if (status == 413) {
    // Too long for one request: tokenize the halves either side of the
    // space nearest the middle and concatenate.
    const auto mid = split_point(sentence);
    if (mid == 0) {
      unavailable("/tokenize rejected an unsplittable text as too long");
    }
    auto head = tokenize(sentence.substr(0, mid));
    auto tail = tokenize(sentence.substr(mid));
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  }
  if (status == 400) {
    return {};  // empty after normalisation; nothing to score
  }
  if (status != 200) {
    unavailable("/tokenize returned HTTP " + std::to_string(status));
  }
  try {
    return parse_reply(body, "/tokenize").at("ids").get<std::vector<TokenId>>();
  } catch (const json::exception& e) {
    unavailable(std::string("/tokenize reply has no ids: ") + e.what());
  }
}

std::vector<double> HttpScorer::fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const {
  json req;
  req["ids"] = std::vector<TokenId>(ids.begin(), ids.end());
  req["masked_positions"] = std::vector<std::size_t>(masked_positions.begin(), masked_positions.end());
  int status = 0;
  const auto body = post("/fill", req.dump(), &status);
  if (status != 200) {
    unavailable("/fill returned HTTP " + std::to_string(status));
  }
  try {
    return parse_reply(body, "/fill").at("probs").get<std::vector<double>>();
  } catch (const json::exception& e) {
    unavailable(std::string("/fill reply has no probs: ") + e.what());
  }
}

}  // namespace plainscore
