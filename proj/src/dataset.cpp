#include "xtree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "xtree/error.hpp"

namespace xtree {
namespace {

using namespace std::chrono;

[[noreturn]] void bad_instant(std::string_view text) {
  throw Error(Errc::ParseError, "invalid timestamp '" + std::string(text) + "'");
}

// Reads exactly `width` digits at text[pos].
int read_digits(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) bad_instant(text);
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + width, value);
  if (ec != std::errc{} || ptr != first + width) bad_instant(text);
  return value;
}

bool parse_offset(std::string_view text, minutes& out) {
  if (text == "Z" || text == "z") {
    out = minutes{0};
    return true;
  }
  if (text.size() != 6 || (text[0] != '+' && text[0] != '-') || text[3] != ':') return false;
  int h = 0, m = 0;
  auto r1 = std::from_chars(text.data() + 1, text.data() + 3, h);
  auto r2 = std::from_chars(text.data() + 4, text.data() + 6, m);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != text.data() + 3 ||
      r2.ptr != text.data() + 6 || h > 23 || m > 59) {
    return false;
  }
  out = minutes{h * 60 + m};
  if (text[0] == '-') out = -out;
  return true;
}

}  // namespace

Instant parse_instant(std::string_view text) {
  // YYYY-MM-DDTHH:MM
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':') {
    bad_instant(text);
  }
  const int y = read_digits(text, 0, 4);
  const int mo = read_digits(text, 5, 2);
  const int d = read_digits(text, 8, 2);
  const int hh = read_digits(text, 11, 2);
  const int mi = read_digits(text, 14, 2);
  std::size_t pos = 16;
  int ss = 0;
  if (pos < text.size() && text[pos] == ':') {
    ss = read_digits(text, pos + 1, 2);
    pos += 3;
  }
  minutes offset{0};
  if (pos < text.size() && !parse_offset(text.substr(pos), offset)) bad_instant(text);

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) bad_instant(text);
  const sys_seconds local = sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss};
  return local - offset;
}

std::string format_instant(Instant t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

minutes parse_utc_offset(std::string_view text) {
  minutes out{0};
  if (!parse_offset(text, out)) {
    throw Error(Errc::ParseError, "invalid UTC offset '" + std::string(text) + "'");
  }
  return out;
}

CalendarFields calendar_fields(Instant t, minutes utc_offset) {
  const sys_seconds local = t + utc_offset;
  const auto day_point = floor<days>(local);
  const year_month_day ymd{day_point};
  const auto jan1 = sys_days{ymd.year() / January / 1};
  CalendarFields f;
  f.hour = static_cast<int>(floor<hours>(local - day_point).count());
  f.day_of_week = static_cast<int>(weekday{day_point}.c_encoding());
  f.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
  f.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  f.day_of_year = static_cast<int>((day_point - jan1).count()) + 1;
  return f;
}

Instant local_day_start(Instant t, minutes utc_offset) {
  const auto local_day = floor<days>(t + utc_offset);
  return sys_seconds{local_day} - utc_offset;
}

void Dataset::validate() const {
  if (covariates.size() != rows() * cols()) {
    throw Error(Errc::DimensionMismatch, "covariate matrix size does not match rows x columns");
  }
  if (!row_keys.empty() && row_keys.size() != rows()) {
    throw Error(Errc::DimensionMismatch, "row key count does not match row count");
  }
  for (double v : covariates) {
    if (!std::isfinite(v)) throw Error(Errc::ParseError, "non-finite covariate");
  }
  for (double v : targets) {
    if (!std::isfinite(v)) throw Error(Errc::ParseError, "non-finite target");
  }
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows) {
  Dataset out;
  out.column_names = data.column_names;
  out.covariates.reserve(rows.size() * data.cols());
  out.targets.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    out.covariates.insert(out.covariates.end(), x.begin(), x.end());
    out.targets.push_back(data.targets[r]);
    if (!data.row_keys.empty()) out.row_keys.push_back(data.row_keys[r]);
  }
  return out;
}

void TimeSeries::validate() const {
  if (timestamps.size() != values.size()) {
    throw Error(Errc::DimensionMismatch, "timestamp and value counts differ");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(Errc::ParseError, "non-finite value at " + format_instant(timestamps[i]));
    }
    if (i > 0 && !(timestamps[i - 1] < timestamps[i])) {
      throw Error(Errc::ParseError, "timestamps not strictly increasing at " + format_instant(timestamps[i]));
    }
  }
}

BlockExtrema extract_block_extrema(const TimeSeries& series, const BlockSpec& spec) {
  if (series.size() == 0) throw Error(Errc::EmptySeries, "no observations");
  if (spec.block_length <= seconds{0}) throw Error(Errc::InvalidConfig, "block length must be positive");
  series.validate();

  const auto len = spec.block_length.count();
  auto block_of = [&](Instant t) {
    const auto rel = (t.time_since_epoch() - spec.origin).count();
    // floor division for instants before the origin
    return rel >= 0 ? rel / len : -((-rel + len - 1) / len);
  };

  BlockExtrema out;
  std::size_t i = 0;
  while (i < series.size()) {
    const auto block = block_of(series.timestamps[i]);
    double extremum = series.values[i];
    std::size_t count = 0;
    while (i < series.size() && block_of(series.timestamps[i]) == block) {
      const double v = series.values[i];
      extremum = spec.mode == ExtremumMode::Max ? std::max(extremum, v) : std::min(extremum, v);
      ++count;
      ++i;
    }
    const Instant start{seconds{block * len} + spec.origin};
    if (count < spec.min_count) {
      out.dropped.push_back({start, count});
      continue;
    }
    out.block_starts.push_back(start);
    out.values.push_back(extremum);
  }
  return out;
}

}  // namespace xtree
