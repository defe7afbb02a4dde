#include "xtree/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "xtree/error.hpp"

namespace xtree {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw Error(Errc::ParseError,
                "line " + std::to_string(line) + ": column '" + column + "' has invalid value '" + cell + "'");
  }
  return value;
}

std::size_t column_index(const CsvTable& t, const std::string& name, const std::filesystem::path& path) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) {
    throw Error(Errc::SchemaMismatch, path.string() + ": missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - t.header.begin());
}

json node_to_json(const Tree& tree, std::size_t i) {
  const TreeNode& n = tree.nodes()[i];
  json j;
  if (n.rule) {
    j["rule"] = {{"dim", n.rule->dim}, {"threshold", n.rule->threshold}};
  } else {
    j["rule"] = nullptr;
  }
  j["params"] = {{"mu", n.params.mu}, {"sigma", n.params.sigma}, {"xi", n.params.xi}};
  if (n.rule) {
    j["children"] = json::array({node_to_json(tree, n.left), node_to_json(tree, n.right)});
  } else {
    j["children"] = nullptr;
  }
  j["size"] = n.size;
  j["log_score"] = n.log_score_total;
  return j;
}

// Pre-order flattening keeps every child after its parent.
std::size_t node_from_json(const json& j, std::vector<TreeNode>& nodes, int depth) {
  if (depth > 4096) throw Error(Errc::CorruptModel, "tree nesting too deep");
  if (!j.is_object()) throw Error(Errc::CorruptModel, "tree node is not an object");
  const std::size_t index = nodes.size();
  nodes.emplace_back();
  {
    TreeNode& n = nodes.back();
    const json& p = j.at("params");
    n.params = {p.at("mu").get<double>(), p.at("sigma").get<double>(), p.at("xi").get<double>()};
    n.size = j.value("size", std::size_t{0});
    n.log_score_total = j.value("log_score", 0.0);
  }
  const json& rule = j.at("rule");
  const json& children = j.at("children");
  if (rule.is_null() != children.is_null()) {
    throw Error(Errc::CorruptModel, "rule and children must be present together");
  }
  if (rule.is_null()) return index;
  if (!children.is_array() || children.size() != 2) {
    throw Error(Errc::CorruptModel, "an internal node needs exactly two children");
  }
  const SplitRule r{rule.at("dim").get<std::size_t>(), rule.at("threshold").get<double>()};
  const std::size_t left = node_from_json(children[0], nodes, depth + 1);
  const std::size_t right = node_from_json(children[1], nodes, depth + 1);
  nodes[index].rule = r;
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.header.size()) + " cells, got " +
                                        std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw Error(Errc::SchemaMismatch, path.string() + ": missing header row");
  return table;
}

TimeSeries load_observations_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t ts = column_index(t, "timestamp", path);
  const std::size_t val = column_index(t, "value", path);
  TimeSeries series;
  series.timestamps.reserve(t.rows.size());
  series.values.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    try {
      series.timestamps.push_back(parse_instant(t.rows[i][ts]));
    } catch (const Error& e) {
      throw Error(Errc::ParseError, "line " + std::to_string(t.line_numbers[i]) + ": " + e.what());
    }
    series.values.push_back(parse_number(t.rows[i][val], t.line_numbers[i], "value"));
  }
  series.validate();
  return series;
}

Dataset load_training_csv(const std::filesystem::path& path, const TrainingSchema& schema) {
  const CsvTable t = read_csv(path);
  const std::size_t key = column_index(t, schema.key_column, path);
  const std::size_t target = column_index(t, schema.target_column, path);
  std::vector<std::size_t> cols;
  std::vector<std::string> names;
  if (schema.covariates.empty()) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (c == key || c == target) continue;
      cols.push_back(c);
      names.push_back(t.header[c]);
    }
  } else {
    for (const auto& name : schema.covariates) {
      cols.push_back(column_index(t, name, path));
      names.push_back(name);
    }
  }
  if (cols.empty()) throw Error(Errc::SchemaMismatch, path.string() + ": no covariate columns");

  Dataset data;
  data.column_names = std::move(names);
  data.covariates.reserve(t.rows.size() * cols.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    for (std::size_t c : cols) data.covariates.push_back(parse_number(row[c], t.line_numbers[i], t.header[c]));
    data.targets.push_back(parse_number(row[target], t.line_numbers[i], t.header[target]));
    data.row_keys.push_back(row[key]);
  }
  data.validate();
  return data;
}

Dataset load_covariates_csv(const std::filesystem::path& path, const std::vector<std::string>& columns) {
  const CsvTable t = read_csv(path);
  if (t.header.empty()) throw Error(Errc::SchemaMismatch, path.string() + ": empty header");
  std::vector<std::size_t> cols;
  for (const auto& name : columns) {
    const auto it = std::find(t.header.begin() + 1, t.header.end(), name);
    if (it == t.header.end()) {
      throw Error(Errc::DimensionMismatch, path.string() + ": model covariate '" + name + "' not in file");
    }
    cols.push_back(static_cast<std::size_t>(it - t.header.begin()));
  }
  Dataset data;
  data.column_names = columns;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t c : cols) {
      data.covariates.push_back(parse_number(t.rows[i][c], t.line_numbers[i], t.header[c]));
    }
    data.row_keys.push_back(t.rows[i][0]);
  }
  // No targets: rows() counts keys instead.
  data.targets.assign(data.row_keys.size(), 0.0);
  return data;
}

json to_json(const EnsembleConfig& c) {
  return {{"k_members", c.k_members},
          {"resample_ratio", c.resample_ratio},
          {"seed", c.seed},
          {"min_partition_size", c.tree.min_partition_size},
          {"t_crit", c.tree.t_crit},
          {"max_grow_iterations", c.tree.max_grow_iterations},
          {"eps_xi", c.tree.eps.eps_xi}};
}

EnsembleConfig ensemble_config_from_json(const json& j) {
  EnsembleConfig c;
  c.k_members = j.at("k_members").get<std::size_t>();
  c.resample_ratio = j.at("resample_ratio").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.tree.min_partition_size = j.at("min_partition_size").get<std::size_t>();
  c.tree.t_crit = j.at("t_crit").get<double>();
  c.tree.max_grow_iterations = j.at("max_grow_iterations").get<std::size_t>();
  c.tree.eps.eps_xi = j.value("eps_xi", GumbelThreshold{}.eps_xi);
  return c;
}

json to_json(const EnsembleModel& model) {
  json members = json::array();
  for (const Tree& t : model.members) members.push_back(node_to_json(t, 0));
  return {{"version", kModelFormatVersion},
          {"config", to_json(model.config)},
          {"schema", model.schema},
          {"members", std::move(members)}};
}

EnsembleModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("version")) throw Error(Errc::CorruptModel, "missing version field");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kModelFormatVersion) {
    throw Error(Errc::VersionMismatch, "unsupported model version " + j["version"].dump());
  }
  try {
    EnsembleModel model;
    model.config = ensemble_config_from_json(j.at("config"));
    model.schema = j.at("schema").get<std::vector<std::string>>();
    const json& members = j.at("members");
    if (!members.is_array() || members.empty()) throw Error(Errc::CorruptModel, "no members");
    for (const json& m : members) {
      std::vector<TreeNode> nodes;
      node_from_json(m, nodes, 0);
      model.members.emplace_back(std::move(nodes), model.schema.size());
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptModel, e.what());
  }
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  out << to_json(model).dump(1) << '\n';
  if (!out) throw Error(Errc::FileNotFound, "write failed for " + path.string());
}

EnsembleModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptModel, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

std::vector<double> residuals(const EnsembleModel& model, const Dataset& data) {
  if (data.cols() != model.schema.size()) {
    throw Error(Errc::DimensionMismatch, "dataset columns do not match the model schema");
  }
  std::vector<double> out;
  out.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    out.push_back(mean(model.predict(data.row(r))) - data.targets[r]);
  }
  return out;
}

}  // namespace xtree
