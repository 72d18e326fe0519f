#include "run_config.hpp"

#include <cstdlib>
#include <set>

#include "plainscore/error.hpp"

namespace plainscore::cli {

namespace {

const std::set<std::string> kKeys = {"seed",        "cap",   "ratio_low", "ratio_high", "rounds",
                                     "mask_frac",   "temperature", "alpha", "top_p",  "scorer_url",
                                     "lambda",      "max_iter",    "folds", "out_dir"};

std::size_t count_of(const io::Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::kInvalidArgument, "config key \"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void apply_file(RunConfig& c, const io::Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kInvalidArgument, "config file must hold a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) {
      throw Error(ErrorKind::kInvalidArgument, "unknown config key \"" + key + "\"");
    }
  }
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(count_of(j, "seed"));
  if (j.contains("cap")) c.cap = count_of(j, "cap");
  if (j.contains("ratio_low")) c.ratio_low = io::number_field(j, "ratio_low");
  if (j.contains("ratio_high")) c.ratio_high = io::number_field(j, "ratio_high");
  if (j.contains("rounds")) c.rounds = count_of(j, "rounds");
  if (j.contains("mask_frac")) c.mask_frac = io::number_field(j, "mask_frac");
  if (j.contains("temperature")) c.temperature = io::number_field(j, "temperature");
  if (j.contains("alpha")) c.alpha = io::number_field(j, "alpha");
  if (j.contains("top_p")) c.top_p = io::number_field(j, "top_p");
  if (j.contains("scorer_url")) c.scorer_url = io::string_field(j, "scorer_url");
  if (j.contains("lambda")) c.lambda = io::number_field(j, "lambda");
  if (j.contains("max_iter")) c.max_iter = count_of(j, "max_iter");
  if (j.contains("folds")) c.folds = count_of(j, "folds");
  if (j.contains("out_dir")) c.out_dir = io::string_field(j, "out_dir");
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (cap == 0) fail("cap must be positive");
  if (!(ratio_low > 0.0 && ratio_low < ratio_high)) fail("ratio bounds must satisfy 0 < ratio_low < ratio_high");
  if (rounds == 0) fail("rounds must be positive");
  if (!(mask_frac > 0.0 && mask_frac <= 1.0)) fail("mask_frac must lie in (0, 1]");
  if (!(temperature > 0.0)) fail("temperature must be positive");
  if (!(alpha >= 0.0)) fail("alpha must be non-negative");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail("top_p must lie in (0, 1]");
  if (!(lambda >= 0.0)) fail("lambda must be non-negative");
  if (folds < 2) fail("folds must be at least 2");
}

io::Json RunConfig::to_json() const {
  io::Json j;
  j["seed"] = seed;
  j["cap"] = cap;
  j["ratio_low"] = ratio_low;
  j["ratio_high"] = ratio_high;
  j["rounds"] = rounds;
  j["mask_frac"] = mask_frac;
  j["temperature"] = temperature;
  j["alpha"] = alpha;
  j["top_p"] = top_p;
  j["scorer_url"] = scorer_url;
  j["lambda"] = lambda;
  j["max_iter"] = max_iter;
  j["folds"] = folds;
  j["out_dir"] = out_dir.string();
  return j;
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig c;
  if (o.config_path) {
    apply_file(c, io::read_json(*o.config_path));
  }
  if (o.seed) c.seed = *o.seed;
  if (o.cap) c.cap = *o.cap;
  if (o.temperature) c.temperature = *o.temperature;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.top_p) c.top_p = *o.top_p;
  if (o.scorer_url) c.scorer_url = *o.scorer_url;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (c.scorer_url.empty()) {
    if (const char* env = std::getenv("PLAINSCORE_SCORER_URL")) c.scorer_url = env;
  }
  c.validate();
  return c;
}

}  // namespace plainscore::cli
