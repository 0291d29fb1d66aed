#ifndef SPHWHITTLE_IO_HPP
#define SPHWHITTLE_IO_HPP

// File formats: spectrum CSV (`l,c_hat`), per-replication CSV
// (`rep,alpha_hat,normalized,status`) and JSON for configs and results.
// Doubles are written as the shortest decimal that round-trips.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "sphwhittle/error.hpp"
#include "sphwhittle/montecarlo.hpp"
#include "sphwhittle/sampling.hpp"
#include "sphwhittle/spectrum.hpp"
#include "sphwhittle/whittle.hpp"

namespace sphwhittle::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    detail::fail(errc::io_error, "cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

// ---------------------------------------------------------------- spectrum CSV

inline void write_spectrum_csv(std::ostream& os, const EmpiricalSpectrum& spec) {
  os << "l,c_hat\n";
  for (std::size_t l = 1; l <= spec.l_max(); ++l) os << l << ',' << format_double(spec[l]) << '\n';
}

/// Reads `l,c_hat` rows for l = 1..L in order. A spectrum containing any
/// value <= 0 can only be a noise-debiased one and is flagged as such.
inline EmpiricalSpectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) detail::fail(errc::io_error, "empty spectrum file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "l,c_hat") detail::fail(errc::io_error, "expected header 'l,c_hat'");
  std::vector<double> values;
  bool any_non_positive = false;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) detail::fail(errc::io_error, "malformed row: " + line);
    const double l = parse_double(std::string_view(line).substr(0, comma));
    const double c = parse_double(std::string_view(line).substr(comma + 1));
    if (l != static_cast<double>(values.size() + 1)) {
      detail::fail(errc::io_error, "multipoles must run 1, 2, ... without gaps");
    }
    any_non_positive = any_non_positive || !(c > 0.0);
    values.push_back(c);
  }
  if (values.empty()) detail::fail(errc::io_error, "spectrum file has no rows");
  return EmpiricalSpectrum(std::move(values), any_non_positive);
}

// ---------------------------------------------------------------- config JSON

/// Command-line level settings that sit next to an ExperimentConfig.
enum class Sampler { chi2, alm, exact };

struct RunConfig {
  ExperimentConfig experiment;
  Sampler sampler = Sampler::chi2;
};

namespace detail_json {

inline const json& need(const json& j, const char* key) {
  if (!j.contains(key)) detail::fail(errc::invalid_argument, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline double num(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) detail::fail(errc::invalid_argument, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> num_list(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_array()) detail::fail(errc::invalid_argument, std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) detail::fail(errc::invalid_argument, std::string("'") + key + "' entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::size_t count(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    detail::fail(errc::invalid_argument, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace detail_json

inline SpectrumModel model_from_json(const json& j, std::size_t L) {
  using namespace detail_json;
  const std::string type = need(j, "type").get<std::string>();
  if (type == "power_law") return SpectrumModel::power_law(num(j, "g0"), num(j, "alpha0"));
  if (type == "kappa") return SpectrumModel::kappa_perturbed(num(j, "g0"), num(j, "alpha0"), num(j, "kappa"));
  if (type == "rational") {
    std::size_t l_max = std::max<std::size_t>(L, 1);
    if (j.contains("l_max")) l_max = std::max(l_max, count(j, "l_max"));
    return SpectrumModel::rational(num_list(j, "p"), num_list(j, "q"), num(j, "alpha0"), l_max);
  }
  if (type == "table") return SpectrumModel::tabulated(num_list(j, "values"));
  detail::fail(errc::invalid_argument, "unknown model type '" + type + "'");
}

inline json to_json(const SpectrumModel& m) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ExactPowerLaw>) {
          return {{"type", "power_law"}, {"g0", v.g0}, {"alpha0", v.alpha0}};
        } else if constexpr (std::is_same_v<T, KappaPerturbed>) {
          return {{"type", "kappa"}, {"g0", v.g0}, {"alpha0", v.alpha0}, {"kappa", v.kappa}};
        } else if constexpr (std::is_same_v<T, Rational>) {
          return {{"type", "rational"}, {"p", v.p}, {"q", v.q}, {"alpha0", v.alpha0}, {"l_max", v.l_max}};
        } else {
          return {{"type", "table"}, {"values", v.values}};
        }
      },
      m.variant());
}

inline RunConfig config_from_json(const json& j) {
  using namespace detail_json;
  if (!j.is_object()) detail::fail(errc::invalid_argument, "config must be a JSON object");
  const std::size_t L = count(j, "L");

  std::optional<NoiseModel> noise;
  if (j.contains("noise") && !j.at("noise").is_null()) {
    noise.emplace(num(j.at("noise"), "g_n"), num(j.at("noise"), "gamma"));
  }

  ExperimentConfig cfg{model_from_json(need(j, "model"), L), noise, L};

  if (j.contains("band")) {
    const json& b = j.at("band");
    const std::string type = need(b, "type").get<std::string>();
    if (type == "full") {
      cfg.band = band_rule::Full{};
    } else if (type == "narrow" && b.contains("L1")) {
      cfg.band = band_rule::NarrowExplicit{count(b, "L1")};
    } else if (type == "narrow" && b.contains("c_g")) {
      cfg.band = band_rule::NarrowRule{num(b, "c_g")};
    } else {
      detail::fail(errc::invalid_argument, "band must be full or narrow with L1 or c_g");
    }
  }
  if (j.contains("box")) {
    const json& b = j.at("box");
    if (b.contains("alpha_min")) cfg.box.alpha_min = num(b, "alpha_min");
    if (b.contains("alpha_max")) cfg.box.alpha_max = num(b, "alpha_max");
    if (b.contains("tol")) cfg.box.tol = num(b, "tol");
    if (b.contains("max_evaluations")) cfg.box.max_evaluations = static_cast<int>(count(b, "max_evaluations"));
  }
  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    const std::string type = need(s, "type").get<std::string>();
    if (type == "fullband") {
      cfg.scheme.kind = SchemeKind::fullband;
      cfg.scheme.corrected = s.value("corrected", false);
    } else if (type == "narrowband") {
      cfg.scheme.kind = SchemeKind::narrowband;
    } else if (type == "noise") {
      cfg.scheme.kind = SchemeKind::noise;
      cfg.scheme.plugin = s.value("plugin", false);
    } else if (type == "rate") {
      cfg.scheme.kind = SchemeKind::rate;
    } else {
      detail::fail(errc::invalid_argument, "unknown scheme '" + type + "'");
    }
  }
  if (j.contains("replications")) cfg.replications = count(j, "replications");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      detail::fail(errc::invalid_argument, "'seed' must be an unsigned 64-bit integer");
    }
    cfg.master_seed = s.get<std::uint64_t>();
  }

  RunConfig rc{std::move(cfg)};
  if (j.contains("sampler")) {
    const std::string s = j.at("sampler").get<std::string>();
    if (s == "chi2") rc.sampler = Sampler::chi2;
    else if (s == "alm") rc.sampler = Sampler::alm;
    else if (s == "exact") rc.sampler = Sampler::exact;
    else detail::fail(errc::invalid_argument, "sampler must be chi2, alm or exact");
  }
  return rc;
}

inline RunConfig parse_config(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    detail::fail(errc::invalid_argument, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    detail::fail(errc::invalid_argument, std::string("config has the wrong shape: ") + e.what());
  }
}

/// Fully resolved config, defaults expanded; parses back to the same config.
inline json to_json(const RunConfig& rc) {
  const ExperimentConfig& c = rc.experiment;
  json j;
  j["model"] = to_json(c.model);
  j["noise"] = c.noise ? json{{"g_n", c.noise->g_n()}, {"gamma", c.noise->gamma()}} : json(nullptr);
  j["L"] = c.L;
  j["band"] = std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, band_rule::Full>) return {{"type", "full"}};
        else if constexpr (std::is_same_v<T, band_rule::NarrowExplicit>) return {{"type", "narrow"}, {"L1", r.l1}};
        else return {{"type", "narrow"}, {"c_g", r.c_g}};
      },
      c.band);
  j["box"] = {{"alpha_min", c.box.alpha_min},
              {"alpha_max", c.box.alpha_max},
              {"tol", c.box.tol},
              {"max_evaluations", c.box.max_evaluations}};
  switch (c.scheme.kind) {
    case SchemeKind::fullband: j["scheme"] = {{"type", "fullband"}, {"corrected", c.scheme.corrected}}; break;
    case SchemeKind::narrowband: j["scheme"] = {{"type", "narrowband"}}; break;
    case SchemeKind::noise: j["scheme"] = {{"type", "noise"}, {"plugin", c.scheme.plugin}}; break;
    case SchemeKind::rate: j["scheme"] = {{"type", "rate"}}; break;
  }
  j["replications"] = c.replications;
  j["seed"] = c.master_seed;
  j["sampler"] = rc.sampler == Sampler::chi2 ? "chi2" : (rc.sampler == Sampler::alm ? "alm" : "exact");
  return j;
}

// ---------------------------------------------------------------- results

inline json to_json(const EstimateResult& r) {
  return {{"alpha_hat", r.alpha_hat},
          {"g_hat", r.g_hat},
          {"objective", r.objective},
          {"band", {r.band.l_lo(), r.band.l_hi()}},
          {"converged", r.converged},
          {"boundary_hit", r.boundary_hit},
          {"evaluations", r.evaluations}};
}

inline json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const MonteCarloReport& r, const RunConfig& rc) {
  json freqs = json::array();
  for (const auto& q : r.quantile_freqs) {
    freqs.push_back({{"cutpoint", q.cutpoint},
                     {"percent", q.percent},
                     {"percent_below", q.percent_below},
                     {"percent_above", q.percent_above}});
  }
  json norm = json::array();
  json raw = json::array();
  for (const auto& rep : r.replications) {
    norm.push_back(rep.status == ReplicationStatus::ok ? nullable(rep.normalized) : json(nullptr));
    raw.push_back(nullable(rep.alpha_hat));
  }
  json j;
  j["config"] = to_json(rc);
  j["replications"] = r.replications.size();
  j["interior"] = r.raw_alpha_hats.size();
  j["boundary_hits"] = r.boundary_hits;
  j["failures"] = r.failures;
  j["factor"] = nullable(r.factor);
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["bias"] = r.bias;
  j["raw_variance"] = r.raw_variance;
  j["mse"] = r.mse;
  j["quantile_freqs"] = std::move(freqs);
  j["sw_w"] = nullable(r.sw_w);
  j["sw_p"] = nullable(r.sw_p);
  j["sw_n"] = r.sw_n;
  j["normalized_errors"] = std::move(norm);
  j["raw_alpha_hats"] = std::move(raw);
  return j;
}

inline void write_samples_csv(std::ostream& os, const std::vector<Replication>& reps) {
  os << "rep,alpha_hat,normalized,status\n";
  for (const auto& r : reps) {
    os << r.index << ',';
    if (std::isfinite(r.alpha_hat)) os << format_double(r.alpha_hat);
    os << ',';
    if (std::isfinite(r.normalized)) os << format_double(r.normalized);
    os << ',' << to_string(r.status) << '\n';
  }
}

}  // namespace sphwhittle::io

#endif  // SPHWHITTLE_IO_HPP
