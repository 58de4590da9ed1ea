#include "config.hpp"

#include <fstream>
#include <sstream>

#include <toml++/toml.hpp>

#include "schedsim/error.hpp"
#include "schedsim/rng.hpp"

namespace schedsim::cli {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::json from_toml(const std::string& text, const std::string& path) {
  try {
    const auto table = toml::parse(text, path);
    std::ostringstream json;
    json << toml::json_formatter{table};
    return nlohmann::json::parse(json.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << path << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
}

}  // namespace

nlohmann::json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (ends_with(path, ".toml")) return from_toml(text, path);
  try {
    auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw ConfigError(path + ": top level must be a table/object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    if (ends_with(path, ".json")) throw ConfigError(path + ": " + e.what());
  }
  return from_toml(text, path);
}

const nlohmann::json* ConfigView::find(const std::string& key) const {
  const nlohmann::json* node = &doc_;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object()) return nullptr;
    auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

std::optional<int> ConfigView::integer(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v->get<int>();
}

std::optional<std::uint64_t> ConfigView::unsigned_integer(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0)
    throw ConfigError("config key '" + key + "' must be a nonnegative integer");
  return v->get<std::uint64_t>();
}

std::optional<double> ConfigView::number(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (!v->is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v->get<double>();
}

std::optional<std::string> ConfigView::string(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (v->is_number_integer()) return std::to_string(v->get<std::int64_t>());
  if (!v->is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v->get<std::string>();
}

std::optional<std::vector<int>> ConfigView::integer_list(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (v->is_number_integer()) return std::vector<int>{v->get<int>()};
  if (v->is_string()) return parse_int_list(v->get<std::string>());
  if (!v->is_array() || v->empty()) throw ConfigError("config key '" + key + "' must be an integer or a nonempty list");
  std::vector<int> out;
  for (const auto& e : *v) {
    if (!e.is_number_integer()) throw ConfigError("config key '" + key + "' must list integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::optional<std::vector<std::string>> ConfigView::string_list(const std::string& key) const {
  const auto* v = find(key);
  if (!v) return std::nullopt;
  if (v->is_string()) return split_list(v->get<std::string>());
  if (!v->is_array() || v->empty()) throw ConfigError("config key '" + key + "' must be a nonempty list of strings");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) throw ConfigError("config key '" + key + "' must list strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

DelayDistribution parse_distribution(const nlohmann::json& table, const std::string& where) {
  if (!table.is_object()) throw ConfigError(where + " must be a table");
  auto num = [&](const char* key) {
    auto it = table.find(key);
    if (it == table.end() || !it->is_number()) throw ConfigError(where + "." + key + " must be a number");
    return it->get<double>();
  };
  auto list = [&](const char* key) {
    auto it = table.find(key);
    if (it == table.end() || !it->is_array()) throw ConfigError(where + "." + key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& e : *it) {
      if (!e.is_number()) throw ConfigError(where + "." + key + " must be a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  };
  auto kind_it = table.find("kind");
  if (kind_it == table.end() || !kind_it->is_string()) throw ConfigError(where + ".kind must be a string");
  const auto kind = kind_it->get<std::string>();
  try {
    if (kind == "truncated_gaussian") {
      const double a = num("a");
      const double b = table.contains("b") ? num("b") : a;
      return TruncatedGaussian(num("mu"), num("sigma"), a, b);
    }
    if (kind == "discrete") return Discrete(list("values"), list("probs"));
    if (kind == "constant") return Constant{num("value")};
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".kind '" + kind + "' is not one of truncated_gaussian, discrete, constant");
}

DelayModel delay_model_from_config(const ConfigView& config, int n) {
  if (!config.has("delay")) {
    Rng rng(1);
    return scenario_preset(Scenario::One, n, rng);
  }
  if (auto preset = config.string("delay.preset")) {
    Rng rng(config.unsigned_integer("delay.preset_seed").value_or(1));
    try {
      return scenario_preset(*preset, n, rng);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("delay.preset: ") + e.what());
    }
  }
  if (const auto* workers = config.find("delay.workers")) {
    if (!workers->is_array() || static_cast<int>(workers->size()) != n)
      throw ConfigError("delay.workers must list exactly n = " + std::to_string(n) + " entries");
    std::vector<DelayDistribution> comp, comm;
    for (std::size_t i = 0; i < workers->size(); ++i) {
      const auto where = "delay.workers[" + std::to_string(i) + "]";
      const auto& w = (*workers)[i];
      if (!w.is_object() || !w.contains("comp") || !w.contains("comm"))
        throw ConfigError(where + " needs comp and comm tables");
      comp.push_back(parse_distribution(w["comp"], where + ".comp"));
      comm.push_back(parse_distribution(w["comm"], where + ".comm"));
    }
    return {std::move(comp), std::move(comm)};
  }
  const auto* comp = config.find("delay.comp");
  const auto* comm = config.find("delay.comm");
  if (!comp || !comm) throw ConfigError("delay block needs preset, workers, or comp and comm tables");
  return DelayModel::broadcast(n, parse_distribution(*comp, "delay.comp"), parse_distribution(*comm, "delay.comm"));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    try {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const int lo = std::stoi(item.substr(0, colon));
        const int hi = std::stoi(item.substr(colon + 1));
        if (hi < lo) throw std::invalid_argument(item);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("'" + item + "' is not an integer or lo:hi range");
    }
  }
  return out;
}

}  // namespace schedsim::cli
