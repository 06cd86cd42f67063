#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "affwalk/combinatorics.hpp"

namespace affwalk {

/// Shortest round-trip decimal form of x (locale independent).
std::string format_double(double x);

/// CSV table whose rows all end in the provenance columns seed, config_hash.
class CsvTable {
public:
  CsvTable(std::vector<std::string> columns, std::uint64_t seed, std::string config_hash);

  CsvTable& row(std::vector<std::string> cells);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::string seed_;
  std::string hash_;
};

/// Plain-text juxtaposition of the two decay regimes: the stretched
/// exponential normalization of the subgroup return probabilities against the
/// t^{3/2}-normalized continuous diagonal. kernel_series holds
/// (t, t^{3/2} p_aff(t, e, e) / sqrt(pi / 2)).
std::string contrast_report(const DecayFit& decay,
                            const std::vector<std::pair<double, double>>& kernel_series);

}  // namespace affwalk
