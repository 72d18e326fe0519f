#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "plainscore/io.hpp"

namespace plainscore::cli {

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t cap = 1024;
  double ratio_low = 0.2;
  double ratio_high = 1.3;
  std::size_t rounds = 10;
  double mask_frac = 0.15;
  double temperature = 2.0;
  double alpha = 100.0;
  double top_p = 0.9;
  std::string scorer_url;
  double lambda = 1e-4;
  std::size_t max_iter = 5000;
  std::size_t folds = 5;
  std::filesystem::path out_dir = "out";

  void validate() const;
  io::Json to_json() const;
};

/// Command-line values; unset fields leave the config file value in place.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<double> temperature;
  std::optional<double> alpha;
  std::optional<double> top_p;
  std::optional<std::string> scorer_url;
  std::optional<std::string> out_dir;
};

/// Defaults, then the config file, then flags. PLAINSCORE_SCORER_URL fills the
/// scorer URL only when neither the file nor a flag set it.
RunConfig resolve_config(const Overrides& overrides);

}  // namespace plainscore::cli
