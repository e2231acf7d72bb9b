#include "oas/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "oas/errors.hpp"

namespace oas {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

}  // namespace

void apply_spec_key(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    spec.scenario = scenario_from_string(value);
  } else if (key == "engine") {
    spec.engine = engine_from_string(value);
  } else if (key == "delta") {
    spec.delta = parse_number<double>(key, value);
  } else if (key == "sigma_t2") {
    spec.sigma_t2 = parse_number<double>(key, value);
  } else if (key == "sigma2") {
    spec.sigma2 = parse_number<double>(key, value);
  } else if (key == "n") {
    spec.n = parse_number<std::size_t>(key, value);
  } else if (key == "m_list") {
    spec.m_list.clear();
    for (const auto& item : split_list(value)) spec.m_list.push_back(parse_number<std::size_t>(key, item));
  } else if (key == "rho_list") {
    spec.rho_list.clear();
    for (const auto& item : split_list(value)) spec.rho_list.push_back(parse_number<double>(key, item));
  } else if (key == "d_th_db") {
    spec.d_th_db = parse_number<double>(key, value);
  } else if (key == "adaptation") {
    if (value == "topk") {
      spec.adaptation = AdaptationChoice::TopK;
    } else if (value == "threshold") {
      spec.adaptation = AdaptationChoice::Threshold;
    } else if (value == "default") {
      spec.adaptation = AdaptationChoice::EngineDefault;
    } else {
      throw ConfigError("key 'adaptation': expected topk, threshold or default");
    }
  } else if (key == "trials") {
    spec.trials = parse_number<std::size_t>(key, value);
  } else if (key == "master_seed") {
    spec.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "baselines") {
    spec.baselines = {};
    for (const auto& item : split_list(value)) {
      if (item == "lasso") {
        spec.baselines.lasso = true;
      } else if (item == "mmse_bound") {
        spec.baselines.mmse_bound = true;
      } else if (item == "nonadaptive") {
        spec.baselines.nonadaptive = true;
      } else if (item != "none") {
        throw ConfigError("key 'baselines': unknown baseline '" + item + "'");
      }
    }
  } else if (key == "distortion") {
    if (value == "derivative") {
      spec.distortion_mode = DistortionMode::PaperDerivative;
    } else if (value == "variance") {
      spec.distortion_mode = DistortionMode::ExactVariance;
    } else {
      throw ConfigError("key 'distortion': expected derivative or variance");
    }
  } else if (key == "mf_interference") {
    if (value == "second_moment") {
      spec.interference = InterferenceVariance::SignalSecondMoment;
    } else if (value == "slab_variance") {
      spec.interference = InterferenceVariance::SlabVariance;
    } else {
      throw ConfigError("key 'mf_interference': expected second_moment or slab_variance");
    }
  } else if (key == "record_timing") {
    spec.record_timing = parse_bool(key, value);
  } else if (key == "workers") {
    spec.workers = parse_number<std::size_t>(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ExperimentSpec parse_spec_text(const std::string& text) {
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (e.key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    }
    if (!seen.insert(e.key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + e.key + "' repeated");
    }
    entries.push_back(std::move(e));
  }

  Scenario scenario = Scenario::Custom;
  for (const auto& e : entries) {
    if (e.key == "scenario") {
      try {
        scenario = scenario_from_string(e.value);
      } catch (const ConfigError& err) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
      }
    }
  }
  ExperimentSpec spec = ExperimentSpec::defaults(scenario);
  for (const auto& e : entries) {
    try {
      apply_spec_key(spec, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  return spec;
}

ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open spec file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec_text(buf.str());
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

}  // namespace oas
