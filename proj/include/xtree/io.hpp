#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "xtree/dataset.hpp"
#include "xtree/ensemble.hpp"

namespace xtree {

inline constexpr int kModelFormatVersion = 1;

/// Header plus raw cells of a comma-separated file without quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Throws Errc::FileNotFound, Errc::SchemaMismatch (empty file) and
/// Errc::ParseError (ragged rows).
CsvTable read_csv(const std::filesystem::path& path);

/// Column roles of a training file: `key,<covariates...>,target`.
struct TrainingSchema {
  std::string key_column = "block_start";
  std::string target_column = "peak";
  // Empty: every column other than key and target, in file order.
  std::vector<std::string> covariates;
};

/// Observations file with header `timestamp,value`.
TimeSeries load_observations_csv(const std::filesystem::path& path);

/// Training file. Throws Errc::SchemaMismatch when a declared column is
/// missing and Errc::ParseError(line) for unparsable or non-finite cells.
Dataset load_training_csv(const std::filesystem::path& path, const TrainingSchema& schema = {});

/// Covariate file for inference: first column is the row key, the named
/// `columns` are selected by name (extra columns are ignored). Throws
/// Errc::DimensionMismatch when a model column is missing.
Dataset load_covariates_csv(const std::filesystem::path& path, const std::vector<std::string>& columns);

nlohmann::json to_json(const EnsembleConfig& config);
EnsembleConfig ensemble_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EnsembleModel& model);
/// Throws Errc::VersionMismatch and Errc::CorruptModel.
EnsembleModel model_from_json(const nlohmann::json& j);

void save_model(const EnsembleModel& model, const std::filesystem::path& path);
EnsembleModel load_model(const std::filesystem::path& path);

/// Expected value of the predicted GEV minus the observed target, per row;
/// +infinity where the predicted shape is >= 1.
std::vector<double> residuals(const EnsembleModel& model, const Dataset& data);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

}  // namespace xtree
