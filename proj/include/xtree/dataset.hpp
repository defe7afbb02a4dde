#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xtree {

using Instant = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM[:SS][Z|+HH:MM|-HH:MM]" (a space may replace 'T').
/// A missing zone designator means UTC. Throws Errc::ParseError.
Instant parse_instant(std::string_view text);

/// ISO-8601 UTC, e.g. "2024-01-17T05:00:00Z".
std::string format_instant(Instant t);

/// Parses a fixed UTC offset such as "+05:30", "-05:00" or "Z".
std::chrono::minutes parse_utc_offset(std::string_view text);

/// Local calendar ordinals of an instant under a fixed UTC offset.
struct CalendarFields {
  int hour = 0;          // 0-23
  int day_of_week = 0;   // 0 = Sunday
  int day_of_month = 1;  // 1-31
  int month = 1;         // 1-12
  int day_of_year = 1;   // 1-366
};

CalendarFields calendar_fields(Instant t, std::chrono::minutes utc_offset);

/// Start of the local calendar day containing t, expressed in UTC.
Instant local_day_start(Instant t, std::chrono::minutes utc_offset);

/// Covariate matrix (row-major, N x M) paired with block-extremum targets.
struct Dataset {
  std::vector<std::string> column_names;
  std::vector<double> covariates;
  std::vector<double> targets;
  // Optional row labels (first CSV column); empty or one per row.
  std::vector<std::string> row_keys;

  std::size_t rows() const noexcept { return targets.size(); }
  std::size_t cols() const noexcept { return column_names.size(); }
  double x(std::size_t row, std::size_t col) const noexcept { return covariates[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {covariates.data() + r * cols(), cols()};
  }

  /// Throws Errc::DimensionMismatch on shape errors and Errc::ParseError on
  /// non-finite values.
  void validate() const;
};

/// Copy of `rows` of `data`, in the given order (duplicates allowed).
Dataset subset(const Dataset& data, std::span<const std::size_t> rows);

struct TimeSeries {
  std::vector<Instant> timestamps;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  /// Strictly increasing timestamps, finite values, matching lengths.
  void validate() const;
};

enum class ExtremumMode { Max, Min };

struct BlockSpec {
  std::chrono::seconds block_length{std::chrono::hours(24)};
  // Block boundaries sit at origin + k * block_length (UTC).
  std::chrono::seconds origin{0};
  ExtremumMode mode = ExtremumMode::Max;
  // Blocks with fewer observations are dropped.
  std::size_t min_count = 12;
};

struct DroppedBlock {
  Instant block_start;
  std::size_t count = 0;
};

struct BlockExtrema {
  std::vector<Instant> block_starts;
  std::vector<double> values;
  std::vector<DroppedBlock> dropped;
};

/// Extrema of non-overlapping aligned blocks. Throws Errc::EmptySeries.
BlockExtrema extract_block_extrema(const TimeSeries& series, const BlockSpec& spec);

}  // namespace xtree
