#include "affwalk/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace affwalk {

std::string format_double(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns, std::uint64_t seed, std::string config_hash)
    : columns_(std::move(columns)), seed_(std::to_string(seed)), hash_(std::move(config_hash)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("CsvTable::row: cell count does not match header");
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (const auto& c : columns_) {
    out << c << ',';
  }
  out << "seed,config_hash\n";
  for (const auto& r : rows_) {
    for (const auto& c : r) {
      out << c << ',';
    }
    out << seed_ << ',' << hash_ << '\n';
  }
  return out.str();
}

namespace {

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string contrast_report(const DecayFit& decay,
                            const std::vector<std::pair<double, double>>& kernel_series) {
  if (decay.n.empty()) {
    throw std::invalid_argument("contrast_report: empty decay series");
  }
  if (kernel_series.empty()) {
    throw std::invalid_argument("contrast_report: empty kernel series");
  }
  std::ostringstream out;
  out << "Return-probability decay: subgroup walk vs continuous diagonal\n\n";
  out << "Subgroup walk, r_n = -ln pi_2n / (n^(1/3) ln^(2/3) n)\n";
  out << pad("2n", 8) << pad("-ln pi_2n", 14) << pad("r_n", 12) << '\n';
  for (std::size_t i = 0; i < decay.n.size(); ++i) {
    out << pad(fixed(2.0 * decay.n[i], 0), 8) << pad(fixed(decay.neg_log_pi[i], 6), 14)
        << pad(fixed(decay.normalized[i], 6), 12) << '\n';
  }
  out << "band [" << fixed(decay.band_min, 6) << ", " << fixed(decay.band_max, 6)
      << "], max/min " << fixed(decay.band_ratio, 4) << ", fitted c " << fixed(decay.c, 6)
      << ", tail log-log slope " << fixed(decay.tail_slope, 4) << "\n\n";
  out << "Continuous diagonal, t^(3/2) p_aff(t,e,e) / sqrt(pi/2)\n";
  out << pad("t", 10) << pad("ratio", 12) << '\n';
  double lo = kernel_series.front().second;
  double hi = lo;
  for (const auto& [t, r] : kernel_series) {
    out << pad(fixed(t, 2), 10) << pad(fixed(r, 6), 12) << '\n';
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out << "band [" << fixed(lo, 6) << ", " << fixed(hi, 6) << "], max/min " << fixed(hi / lo, 4)
      << "\n\n";
  out << "Stretched-exponential normalization of the subgroup series: band ratio "
      << fixed(decay.band_ratio, 4) << "\n";
  out << "Polynomial t^(-3/2) normalization of the continuous diagonal: band ratio "
      << fixed(hi / lo, 4) << "\n";
  return out.str();
}

}  // namespace affwalk
