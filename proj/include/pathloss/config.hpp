#pragma once

// Channel config files: flat `key = value` lines, `#` starts a comment.
//
//   name         = my_cell
//   alpha_hat    = 31.5     # intercept at 1 m  (or alpha_eff: intercept at r0)
//   beta         = 35
//   r0_m         = 35
//   sigma_psi_db = 10

#include <array>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pathloss/channel.hpp"
#include "pathloss/error.hpp"

namespace pathloss {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_config_number(std::string_view text, std::string_view key, int line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw config_error("line " + std::to_string(line) + ": value of '" + std::string(key) +
                       "' is not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline ChannelModel parse_channel_config(std::istream& in) {
  static constexpr std::array<std::string_view, 6> known = {
      "name", "alpha_hat", "alpha_eff", "beta", "r0_m", "sigma_psi_db"};
  std::map<std::string, std::pair<std::string, int>, std::less<>> values;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw config_error("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw config_error("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    if (values.count(key)) {
      throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    values.emplace(std::string(key), std::pair{std::string(value), line_no});
  }

  const bool has_hat = values.count("alpha_hat") > 0;
  const bool has_eff = values.count("alpha_eff") > 0;
  if (has_hat && has_eff) throw config_error("conflicting keys 'alpha_hat' and 'alpha_eff': give exactly one");
  if (!has_hat && !has_eff) throw config_error("missing key 'alpha_hat' (or 'alpha_eff')");
  for (std::string_view key : {"name", "beta", "r0_m", "sigma_psi_db"}) {
    if (!values.count(key)) throw config_error("missing key '" + std::string(key) + "'");
  }

  auto number = [&](std::string_view key) {
    const auto& [text, line] = values.find(key)->second;
    return detail::parse_config_number(text, key, line);
  };
  const std::string name = values.find("name")->second.first;
  if (name.empty()) throw config_error("key 'name' is empty");
  const double beta = number("beta");
  const double r0 = number("r0_m");
  const double sigma_psi = number("sigma_psi_db");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw config_error("key 'beta' must be > 0");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw config_error("key 'r0_m' must be > 0");
  if (!(sigma_psi >= 0.0) || !std::isfinite(sigma_psi)) throw config_error("key 'sigma_psi_db' must be >= 0");

  if (has_hat) {
    const double alpha_hat = number("alpha_hat");
    if (!std::isfinite(alpha_hat)) throw config_error("key 'alpha_hat' must be finite");
    return ChannelModel::from_alpha_hat(name, alpha_hat, beta, r0, sigma_psi);
  }
  const double alpha_eff = number("alpha_eff");
  if (!std::isfinite(alpha_eff)) throw config_error("key 'alpha_eff' must be finite");
  ChannelModel m{.name = name, .alpha_eff = alpha_eff, .beta = beta, .r0 = r0, .sigma_psi = sigma_psi,
                 .cell_radius_range = {}, .sigma_psi_assumed = false};
  m.validate();
  return m;
}

inline ChannelModel load_channel_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open channel config '" + path + "'");
  return parse_channel_config(in);
}

}  // namespace pathloss
