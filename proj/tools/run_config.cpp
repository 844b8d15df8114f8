#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "cosparse/error.hpp"

namespace cosparse::cli {
namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    require(used == value.size(), Errc::BadConfig, "bad number for " + key);
    return parsed;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    raise(Errc::BadConfig, "bad number for key '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  int parsed = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), parsed);
  require(result.ec == std::errc{} && result.ptr == value.data() + value.size(),
          Errc::BadConfig, "bad integer for key '" + key + "': " + value);
  return parsed;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t parsed = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), parsed);
  require(result.ec == std::errc{} && result.ptr == value.data() + value.size(),
          Errc::BadConfig, "bad seed for key '" + key + "': " + value);
  return parsed;
}

using Setter = std::function<void(BenchConfig&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto d = [](double BenchConfig::* field) {
      return [field](BenchConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_double(k, v);
      };
    };
    auto i = [](int BenchConfig::* field) {
      return [field](BenchConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_int(k, v);
      };
    };
    (void)d;
    t["bench.seeds"] = i(&BenchConfig::num_seeds);
    t["bench.base_seed"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.base_seed = parse_u64(k, v);
    };
    t["sample.factor"] = i(&BenchConfig::factor);
    t["sample.noise_sigma"] = d(&BenchConfig::noise_sigma);
    t["sem_noise.flip_rate"] = d(&BenchConfig::flip_rate);
    t["sem_noise.softness"] = d(&BenchConfig::softness);

    t["scene.width"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.width = parse_int(k, v);
    };
    t["scene.height"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.height = parse_int(k, v);
    };
    t["scene.regions"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.num_regions = parse_int(k, v);
    };
    t["scene.classes"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.num_classes = parse_int(k, v);
      c.learn.num_classes = c.scene.num_classes;
    };
    t["scene.shadow_bands"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.shadow_bands = parse_int(k, v);
    };
    t["scene.depth_min"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.depth_min = parse_double(k, v);
    };
    t["scene.depth_max"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.depth_max = parse_double(k, v);
    };
    t["scene.seed"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.scene.seed = parse_u64(k, v);
    };

    t["weights.intensity"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.weights.nu_intensity = parse_double(k, v);
    };
    t["weights.depth"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.weights.nu_depth = parse_double(k, v);
    };
    t["weights.semantics"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.weights.nu_semantics = parse_double(k, v);
    };

    t["learn.eta"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.eta = parse_double(k, v);
    };
    t["learn.kappa_intensity"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.kappa_intensity = parse_double(k, v);
    };
    t["learn.kappa_depth"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.kappa_depth = parse_double(k, v);
    };
    t["learn.kappa_semantics"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.kappa_semantics = parse_double(k, v);
    };
    t["learn.mu_intensity"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.mu_intensity = parse_double(k, v);
    };
    t["learn.mu_depth"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.mu_depth = parse_double(k, v);
    };
    t["learn.mu_semantics"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.mu_semantics = parse_double(k, v);
    };
    t["learn.rows"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.operator_rows = parse_int(k, v);
    };
    t["learn.patch_side"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.patch_side = parse_int(k, v);
    };
    t["learn.lr_outer_iters"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.lr_outer_iters = parse_int(k, v);
    };
    t["learn.seed"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.seed = parse_u64(k, v);
    };
    t["learn.train_patches"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.train_patches = parse_int(k, v);
    };
    t["learn.cg.max_iters"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.cg.max_iters = parse_int(k, v);
    };
    t["learn.cg.grad_tol"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.cg.grad_tol = parse_double(k, v);
    };
    t["learn.cg.armijo_c"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.cg.armijo_c = parse_double(k, v);
    };
    t["learn.cg.backtrack_factor"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.cg.backtrack_factor = parse_double(k, v);
    };
    t["learn.cg.initial_step"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.cg.initial_step = parse_double(k, v);
    };
    t["depth_cg.max_iters"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.depth_cg.max_iters = parse_int(k, v);
    };
    t["depth_cg.grad_tol"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.learn.depth_cg.grad_tol = parse_double(k, v);
    };

    t["anneal.eta_start"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.schedule.eta_start = parse_double(k, v);
    };
    t["anneal.eta_end"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.schedule.eta_end = parse_double(k, v);
    };
    t["anneal.restarts"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.schedule.restarts = parse_int(k, v);
    };
    t["anneal.rho"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.schedule.rho = parse_double(k, v);
    };
    t["sr.round_iters"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.sr_cg.max_iters = parse_int(k, v);
    };
    t["sr.grad_tol"] = [](BenchConfig& c, const std::string& k, const std::string& v) {
      c.sr_cg.grad_tol = parse_double(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

void Settings::apply_override(const std::string& key_equals_value) {
  const auto pos = key_equals_value.find('=');
  require(pos != std::string::npos, Errc::BadConfig,
          "expected key=value, got: " + key_equals_value);
  const std::string key = trim(key_equals_value.substr(0, pos));
  const std::string value = trim(key_equals_value.substr(pos + 1));
  const auto& table = key_table();
  const auto entry = table.find(key);
  require(entry != table.end(), Errc::BadConfig, "unknown config key: " + key);
  entry->second(bench, key, value);
}

void Settings::apply_overrides(const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) apply_override(item);
}

void Settings::apply_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::IoFailure, "cannot open config: " + path);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(line);
    } catch (const Error& e) {
      raise(Errc::BadConfig, std::string(e.what()) + " (" + path + ":" +
                                 std::to_string(line_number) + ")");
    }
  }
}

std::string Settings::known_keys_help() {
  std::string help;
  for (const auto& [key, setter] : key_table()) {
    help += key;
    help += '\n';
  }
  return help;
}

}  // namespace cosparse::cli
