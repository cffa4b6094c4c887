#pragma once

// CSV / JSON encoding of equilibrium records.
//
// Numbers are written as the shortest decimal with at most 12 significant
// digits, so output is identical across platforms and re-reading a file
// reproduces every numeric field bit-for-bit.

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "openness/core_model.hpp"
#include "openness/errors.hpp"

namespace openness {

inline constexpr std::string_view kCsvHeader =
    "alpha0,eps,c_omega,theta,penalty,rule,delta_star,omega_star,alpha1_star,"
    "u_g,u_d,region";

inline std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 12);
  if (res.ec != std::errc{}) throw IoError("cannot format number");
  std::string out(buf, res.ptr);
  if (out == "-0") out = "0";
  return out;
}

inline double parse_number(std::string_view text) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

/// Value as it will read back after a text round trip.
inline double quantize(double value) { return parse_number(format_number(value)); }

/// One output line: the inputs of a solve and its equilibrium.
struct ResultRow {
  double alpha0 = 0.0;
  double eps = 0.0;
  double c_omega = 0.0;
  double theta = 0.0;
  double penalty = 0.0;
  BargainingRule rule = BargainingRule::kNash;
  std::optional<double> delta_star;
  std::optional<double> omega_star;
  std::optional<double> alpha1_star;
  std::optional<double> u_g;
  std::optional<double> u_d;
  Region region = Region::kInvalid;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline ResultRow make_row(const GameParams& params, const Regulation& reg,
                          const Equilibrium& eq) {
  ResultRow row{.alpha0 = params.alpha0,
                .eps = params.eps,
                .c_omega = params.c_omega,
                .theta = reg.theta,
                .penalty = reg.penalty,
                .rule = eq.rule,
                .region = eq.region.value_or(Region::kInvalid)};
  if (row.region == Region::kInvalid) return row;
  row.delta_star = eq.profile.delta;
  row.omega_star = eq.profile.omega;
  row.alpha1_star = eq.profile.alpha1;
  row.u_g = eq.u_g;
  row.u_d = eq.u_d;
  return row;
}

namespace detail {

inline std::string field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

inline std::optional<double> parse_field(std::string_view text) {
  if (text.empty()) return std::nullopt;
  return parse_number(text);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline nlohmann::json json_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return quantize(*v);
}

}  // namespace detail

inline void write_csv_row(std::ostream& os, const ResultRow& row) {
  os << format_number(row.alpha0) << ',' << format_number(row.eps) << ','
     << format_number(row.c_omega) << ',' << format_number(row.theta) << ','
     << format_number(row.penalty) << ',' << to_string(row.rule) << ','
     << detail::field(row.delta_star) << ',' << detail::field(row.omega_star)
     << ',' << detail::field(row.alpha1_star) << ',' << detail::field(row.u_g)
     << ',' << detail::field(row.u_d) << ',' << to_string(row.region);
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) {
    write_csv_row(os, row);
    os << '\n';
  }
}

inline ResultRow parse_csv_row(std::string_view line) {
  const auto f = detail::split(line, ',');
  if (f.size() != 12) {
    throw ValidationError("expected 12 CSV fields, got " +
                          std::to_string(f.size()));
  }
  ResultRow row;
  row.alpha0 = parse_number(f[0]);
  row.eps = parse_number(f[1]);
  row.c_omega = parse_number(f[2]);
  row.theta = parse_number(f[3]);
  row.penalty = parse_number(f[4]);
  row.rule = parse_rule(f[5]);
  row.delta_star = detail::parse_field(f[6]);
  row.omega_star = detail::parse_field(f[7]);
  row.alpha1_star = detail::parse_field(f[8]);
  row.u_g = detail::parse_field(f[9]);
  row.u_d = detail::parse_field(f[10]);
  row.region = parse_region(f[11]);
  return row;
}

inline std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw ValidationError("missing or unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line));
  }
  return rows;
}

inline nlohmann::ordered_json to_json(const ResultRow& row) {
  nlohmann::ordered_json j;
  j["alpha0"] = quantize(row.alpha0);
  j["eps"] = quantize(row.eps);
  j["c_omega"] = quantize(row.c_omega);
  j["theta"] = quantize(row.theta);
  j["penalty"] = quantize(row.penalty);
  j["rule"] = std::string(to_string(row.rule));
  j["delta_star"] = detail::json_number(row.delta_star);
  j["omega_star"] = detail::json_number(row.omega_star);
  j["alpha1_star"] = detail::json_number(row.alpha1_star);
  j["u_g"] = detail::json_number(row.u_g);
  j["u_d"] = detail::json_number(row.u_d);
  j["region"] = std::string(to_string(row.region));
  return j;
}

}  // namespace openness
