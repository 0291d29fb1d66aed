// Batch front-end: simulate spectra, estimate (alpha, G), run Monte Carlo
// experiments and tabulate the convergence of the weighted log sums.
//
// Exit status: 0 success, 1 configuration or input error, 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sphwhittle/asymptotics.hpp"
#include "sphwhittle/io.hpp"
#include "sphwhittle/montecarlo.hpp"
#include "sphwhittle/sampling.hpp"

namespace fs = std::filesystem;
using namespace sphwhittle;
using io::json;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::string input;
  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();
};

bool is_config_error(errc c) {
  switch (c) {
    case errc::invalid_argument:
    case errc::io_error:
    case errc::unsupported:
    case errc::out_of_range:
      return true;
    default:
      return false;
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) detail::fail(errc::io_error, "cannot read " + path);
  return is;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) detail::fail(errc::io_error, "cannot write " + path.string());
  return os;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) detail::fail(errc::io_error, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

io::RunConfig load_config(const Options& opt) {
  if (opt.config.empty()) detail::fail(errc::invalid_argument, "--config is required");
  auto is = open_in(opt.config);
  io::RunConfig rc = io::parse_config(is);
  if (opt.seed) rc.experiment.master_seed = *opt.seed;
  return rc;
}

int run_simulate(const Options& opt) {
  const io::RunConfig rc = load_config(opt);
  const ExperimentConfig& c = rc.experiment;
  const SeedSpec seed{c.master_seed, 0};
  std::optional<EmpiricalSpectrum> spec;
  switch (rc.sampler) {
    case io::Sampler::exact:
      spec.emplace(exact_spectrum(c.model, c.L));
      break;
    case io::Sampler::alm:
      detail::require(!c.noise, errc::invalid_argument, "the alm sampler does not add noise");
      spec.emplace(empirical_from_alm(sample_alm(c.model, c.L, seed)));
      break;
    case io::Sampler::chi2:
      spec.emplace(c.noise ? sample_observed_debiased(c.model, *c.noise, c.L, seed)
                           : sample_empirical(c.model, c.L, seed));
      break;
  }
  const fs::path out = prepare_out(opt.out);
  auto os = open_out(out / "spectrum.csv");
  io::write_spectrum_csv(os, *spec);
  return 0;
}

int run_estimate(const Options& opt) {
  const io::RunConfig rc = load_config(opt);
  if (opt.input.empty()) detail::fail(errc::invalid_argument, "--input is required for estimate");
  auto is = open_in(opt.input);
  const EmpiricalSpectrum spec = io::read_spectrum_csv(is);
  detail::require(spec.l_max() >= rc.experiment.L, errc::invalid_argument,
                  "spectrum file is shorter than the configured L");
  const Band band = resolve_band(rc.experiment.band, rc.experiment.L);
  const EstimateResult est = estimate(spec, band, rc.experiment.box);

  json j = io::to_json(est);
  j["config"] = io::to_json(rc);
  const fs::path out = prepare_out(opt.out);
  auto os = open_out(out / "estimate.json");
  os << j.dump(2) << '\n';
  std::cout << io::to_json(est).dump() << '\n';
  return 0;
}

int run_mc(const Options& opt) {
  const io::RunConfig rc = load_config(opt);
  const auto reps = run_replications(rc.experiment, opt.threads);
  const fs::path out = prepare_out(opt.out);
  {
    auto os = open_out(out / "samples.csv");
    io::write_samples_csv(os, reps);
  }
  const MonteCarloReport report = summarize_replications(rc.experiment, reps);
  auto os = open_out(out / "report.json");
  os << io::to_json(report, rc).dump(2) << '\n';
  std::cout << "mean " << report.mean << " variance " << report.variance << " bias " << report.bias
            << " mse " << report.mse << " sw_p " << report.sw_p << " boundary_hits "
            << report.boundary_hits << '\n';
  return 0;
}

std::vector<double> list_or_default(const json& j, const char* key, std::vector<double> def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

int run_oracle(const Options& opt) {
  json j = json::object();
  if (!opt.config.empty()) {
    auto is = open_in(opt.config);
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      detail::fail(errc::invalid_argument, std::string("config is not valid JSON: ") + e.what());
    }
  }
  std::vector<double> Ls, full_s, narrow_s, xs;
  try {
    Ls = list_or_default(j, "L", {1e3, 1e4, 1e5});
    full_s = list_or_default(j, "s", {-1.0, 0.0, 1.0, 2.0});
    narrow_s = list_or_default(j, "narrow_s", {0.0, 0.5, 1.0});
    xs = list_or_default(j, "x", {-1.9, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0});
  } catch (const json::exception& e) {
    detail::fail(errc::invalid_argument, std::string("oracle config has the wrong shape: ") + e.what());
  }

  const fs::path out = prepare_out(opt.out);
  auto os = open_out(out / "oracle.csv");
  os << "L,s,g,z_over_limit,target\n";
  for (double Ld : Ls) {
    detail::require(Ld >= 2 && Ld == std::floor(Ld), errc::invalid_argument, "L must be an integer >= 2");
    const auto L = static_cast<std::size_t>(Ld);
    for (double s : full_s) {
      const double target = z_fullband_limit(s);
      const double ratio = z_fullband(L, s) / pow_l(Ld, 4.0 + 2.0 * s) / target;
      os << L << ',' << io::format_double(s) << ",," << io::format_double(ratio) << ','
         << io::format_double(target) << '\n';
    }
    const double g = 1.0 / std::log(Ld);
    for (double s : narrow_s) {
      const double target = k_factor(s);
      const double ratio = z_narrowband(L, g, s) / (pow_l(Ld, 4.0 + 2.0 * s) * std::pow(g, 4)) / target;
      os << L << ',' << io::format_double(s) << ',' << io::format_double(g) << ','
         << io::format_double(ratio) << ',' << io::format_double(target) << '\n';
    }
  }
  auto ks = open_out(out / "k_factor.csv");
  ks << "s,k\n";
  for (double s : narrow_s) ks << io::format_double(s) << ',' << io::format_double(k_factor(s)) << '\n';
  auto us = open_out(out / "u_limit.csv");
  us << "x,u_limit\n";
  for (double x : xs) us << io::format_double(x) << ',' << io::format_double(u_limit(x)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical Whittle estimation of angular power spectrum parameters"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "override the configured master seed");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "write a sampled spectrum as l,c_hat CSV");
  auto* est = app.add_subcommand("estimate", "estimate (alpha, G) from a spectrum CSV");
  auto* mc = app.add_subcommand("mc", "run a Monte Carlo experiment");
  auto* oracle = app.add_subcommand("oracle", "write convergence tables of the weighted log sums");
  for (auto* sub : {simulate, est, mc, oracle}) add_common(sub);
  est->add_option("--input", opt.input, "spectrum CSV with header l,c_hat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(opt);
    if (est->parsed()) return run_estimate(opt);
    if (mc->parsed()) return run_mc(opt);
    if (oracle->parsed()) return run_oracle(opt);
  } catch (const error& e) {
    std::cerr << "sphwhittle: " << e.what() << '\n';
    return is_config_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "sphwhittle: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
