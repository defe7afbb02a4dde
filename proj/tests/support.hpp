#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "xtree/io.hpp"

namespace test {

inline std::string fixture_path(const std::string& name) { return std::string(XTREE_FIXTURES) + "/" + name; }

inline xtree::CsvTable fixture(const std::string& name) { return xtree::read_csv(fixture_path(name)); }

inline double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace test
