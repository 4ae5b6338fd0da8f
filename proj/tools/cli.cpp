#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "pnrthresh/config_file.hpp"
#include "pnrthresh/errors.hpp"
#include "pnrthresh/grid.hpp"
#include "pnrthresh/photon_stats.hpp"
#include "pnrthresh/rangefinder.hpp"
#include "pnrthresh/snr.hpp"

namespace pnrthresh::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct GlobalOptions {
  std::string output;
  std::string format;  // empty: subcommand default
  std::optional<std::uint64_t> seed;
};

// UTC, or SOURCE_DATE_EPOCH when set so manifests can be reproduced too.
std::string timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = std::strtoll(epoch, nullptr, 10);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_manifest(const std::string& subcommand, json parameters,
                   const std::vector<std::string>& args, std::optional<std::uint64_t> seed) {
  json m;
  m["tool"] = "pnrthresh";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["parameters"] = std::move(parameters);
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["timestamp"] = timestamp();
  m["argv"] = args;
  return m;
}

// Writes to `path` through a temporary sibling so a failed run never leaves a
// partial file behind; an empty path means `fallback`.
void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    fallback.flush();
    if (!fallback) throw std::runtime_error("failed writing to standard output");
    return;
  }
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

class Csv {
public:
  explicit Csv(std::initializer_list<std::string> header) { row_strings(header); }
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((text_ << (first ? "" : ",") << cell(cells), first = false), ...);
    text_ << '\n';
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }

private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(const std::string& v) { return v; }
  template <std::integral I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  std::ostringstream text_;
};

// Emits `csv` or `document` according to the chosen format and writes the
// manifest alongside file outputs.
void emit(const GlobalOptions& g, const std::string& default_format, const Csv& csv,
          json document, const json& manifest, std::ostream& out) {
  const std::string format = g.format.empty() ? default_format : g.format;
  if (format == "csv") {
    write_text(g.output, csv.str(), out);
    if (!g.output.empty() && g.output != "-") {
      write_text(manifest_path(g.output), manifest.dump(2) + "\n", out);
    }
  } else {
    json doc;
    doc["manifest"] = manifest;
    for (auto& [k, v] : document.items()) doc[k] = v;
    write_text(g.output, doc.dump(2) + "\n", out);
  }
}

json report_json(const SnrReport& r) {
  json j;
  j["n_p_mean"] = r.params.n_p_mean();
  j["n_th_mean"] = r.params.n_th_mean();
  j["x"] = r.params.x();
  j["classical"] = r.classical;
  json quantum = json::object();
  json ratio = json::object();
  for (const auto& [n, v] : r.quantum) quantum[std::to_string(n)] = v;
  for (const auto& [n, v] : r.ratio) ratio[std::to_string(n)] = v;
  j["quantum"] = quantum;
  j["ratio"] = ratio;
  return j;
}

Grid make_grid(double lo, double hi, std::size_t points, const std::string& scale) {
  return Grid::spaced(lo, hi, points, scale == "log" ? Grid::Scale::Log : Grid::Scale::Linear);
}

std::string sibling_path(const std::string& output, const std::string& suffix) {
  fs::path p(output);
  const std::string stem = p.stem().string();
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (stem + suffix + ext)).string();
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-number threshold detection analysis and rangefinder simulation",
               "pnrthresh"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--output,-o", g.output, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "structured"}));
  app.add_option("--seed", g.seed, "RNG seed (overrides the config file)");

  // Each subcommand installs the action run after a successful parse.
  std::function<void()> action;

  // pmf
  std::string kind_name;
  double pmf_np = 0.0, pmf_nth = 0.0, pmf_tol = kTruncationTolerance;
  std::optional<std::uint32_t> pmf_nmax;
  auto* pmf_cmd = app.add_subcommand("pmf", "Photon-number probability table");
  pmf_cmd->add_option("--kind", kind_name, "thermal | poisson | mixed")->required();
  pmf_cmd->add_option("--n-p", pmf_np, "Coherent signal mean photon number");
  pmf_cmd->add_option("--n-th", pmf_nth, "Thermal noise mean photon number");
  pmf_cmd->add_option("--n-max", pmf_nmax, "Fixed truncation (default: from --tolerance)");
  pmf_cmd->add_option("--tolerance", pmf_tol, "Residual mass allowed beyond the table");
  pmf_cmd->callback([&] {
    action = [&] {
      const auto kind = parse_source_kind(kind_name);
      const SourceParams params(pmf_np, pmf_nth);
      PhotonPmf table;
      if (pmf_nmax) {
        table.kind = kind;
        table.params = params;
        for (std::uint32_t n = 0; n <= *pmf_nmax; ++n) table.probs.push_back(pmf(kind, n, params));
        const std::uint32_t next = *pmf_nmax + 1;
        table.residual = kind == SourceKind::Thermal   ? thermal_tail(next, pmf_nth)
                         : kind == SourceKind::Poisson ? poisson_tail(next, pmf_np)
                                                       : mixed_tail(next, params);
      } else {
        table = build_pmf(kind, params, pmf_tol);
      }
      Csv csv{"n", "probability"};
      for (std::size_t n = 0; n < table.probs.size(); ++n) csv.row(n, table.probs[n]);
      json parameters{{"kind", kind_name},     {"n_p_mean", pmf_np},
                      {"n_th_mean", pmf_nth},  {"n_max", table.n_max()},
                      {"tolerance", pmf_tol},  {"fixed_n_max", pmf_nmax.has_value()}};
      auto manifest = make_manifest("pmf", parameters, args, g.seed);
      manifest["residual"] = table.residual;
      json doc{{"kind", kind_name}, {"residual", table.residual}, {"probabilities", table.probs}};
      emit(g, "csv", csv, doc, manifest, out);
    };
  });

  // snr
  double snr_np = 0.0, snr_nth = 0.0;
  std::vector<std::uint32_t> snr_thresholds;
  auto* snr_cmd = app.add_subcommand("snr", "Classical and threshold SNR and their ratio");
  snr_cmd->add_option("--n-p", snr_np)->required();
  snr_cmd->add_option("--n-th", snr_nth)->required();
  snr_cmd->add_option("--thresholds", snr_thresholds)->delimiter(',')->required();
  snr_cmd->callback([&] {
    action = [&] {
      const auto report = make_snr_report(SourceParams(snr_np, snr_nth), snr_thresholds);
      Csv csv{"threshold_n", "classical_snr", "quantum_snr", "ratio"};
      for (const auto& [n, q] : report.quantum) csv.row(n, report.classical, q, report.ratio.at(n));
      json parameters{{"n_p_mean", snr_np}, {"n_th_mean", snr_nth}, {"thresholds", snr_thresholds}};
      emit(g, "structured", csv, json{{"report", report_json(report)}},
           make_manifest("snr", parameters, args, g.seed), out);
    };
  });

  // sweep
  double sweep_nth = 1.0, np_min = 0.01, np_max = 100.0;
  std::size_t np_points = 200;
  std::string np_scale = "log";
  std::vector<std::uint32_t> sweep_thresholds{2, 3, 4, 5};
  auto* sweep_cmd = app.add_subcommand("sweep", "SNR ratio versus signal mean (curve family)");
  sweep_cmd->add_option("--n-th", sweep_nth);
  sweep_cmd->add_option("--thresholds", sweep_thresholds)->delimiter(',');
  sweep_cmd->add_option("--np-min", np_min);
  sweep_cmd->add_option("--np-max", np_max);
  sweep_cmd->add_option("--np-points", np_points);
  sweep_cmd->add_option("--np-scale", np_scale)->check(CLI::IsMember({"log", "linear"}));
  sweep_cmd->callback([&] {
    action = [&] {
      const auto grid = make_grid(np_min, np_max, np_points, np_scale);
      const auto rows = sweep_ratio(sweep_nth, sweep_thresholds, grid);
      Csv csv{"n_p_mean", "threshold_n", "ratio"};
      json doc_rows = json::array();
      for (const auto& r : rows) {
        csv.row(r.n_p_mean, r.threshold_n, r.ratio);
        doc_rows.push_back({r.n_p_mean, r.threshold_n, r.ratio});
      }
      json parameters{{"n_th_mean", sweep_nth}, {"thresholds", sweep_thresholds},
                      {"np_min", np_min},       {"np_max", np_max},
                      {"np_points", np_points}, {"np_scale", np_scale}};
      emit(g, "csv", csv, json{{"columns", {"n_p_mean", "threshold_n", "ratio"}}, {"rows", doc_rows}},
           make_manifest("sweep", parameters, args, g.seed), out);
    };
  });

  // optimum
  double opt_nth = 1.0;
  std::uint32_t opt_nmin = 2, opt_nmax = 8;
  auto* opt_cmd = app.add_subcommand("optimum", "Signal mean maximizing the SNR ratio per threshold");
  opt_cmd->add_option("--n-th", opt_nth);
  opt_cmd->add_option("--n-min", opt_nmin, "Smallest threshold");
  opt_cmd->add_option("--n-max", opt_nmax, "Largest threshold");
  opt_cmd->callback([&] {
    action = [&] {
      if (opt_nmin < 1 || opt_nmax < opt_nmin) {
        throw DomainError("threshold range must satisfy 1 <= n-min <= n-max");
      }
      Csv csv{"threshold_n", "n_th_mean", "best_n_p_mean", "best_ratio"};
      json doc_rows = json::array();
      for (std::uint32_t n = opt_nmin; n <= opt_nmax; ++n) {
        const auto p = find_optimum(opt_nth, n);
        csv.row(p.threshold_n, p.n_th_mean, p.best_n_p_mean, p.best_ratio);
        doc_rows.push_back({p.threshold_n, p.n_th_mean, p.best_n_p_mean, p.best_ratio});
      }
      json parameters{{"n_th_mean", opt_nth}, {"n_min", opt_nmin}, {"n_max", opt_nmax}};
      emit(g, "csv", csv,
           json{{"columns", {"threshold_n", "n_th_mean", "best_n_p_mean", "best_ratio"}},
                {"rows", doc_rows}},
           make_manifest("optimum", parameters, args, g.seed), out);
    };
  });

  // boundary
  std::vector<std::uint32_t> bnd_thresholds{2, 3, 4, 5};
  double nth_min = 0.5, nth_max = 10.0;
  std::size_t nth_points = 96;
  std::string nth_scale = "linear";
  auto* bnd_cmd = app.add_subcommand("boundary", "Locus where threshold and intensity SNR agree");
  bnd_cmd->add_option("--thresholds", bnd_thresholds)->delimiter(',');
  bnd_cmd->add_option("--nth-min", nth_min);
  bnd_cmd->add_option("--nth-max", nth_max);
  bnd_cmd->add_option("--nth-points", nth_points);
  bnd_cmd->add_option("--nth-scale", nth_scale)->check(CLI::IsMember({"log", "linear"}));
  bnd_cmd->callback([&] {
    action = [&] {
      const auto grid = make_grid(nth_min, nth_max, nth_points, nth_scale);
      Csv csv{"threshold_n", "n_th_mean", "n_p_mean", "ratio", "crossings"};
      json doc_curves = json::array();
      json missing = json::object();
      for (auto n : bnd_thresholds) {
        const auto curve = find_boundary(n, grid);
        json pts = json::array();
        for (const auto& p : curve.points) {
          csv.row(n, p.n_th_mean, p.n_p_mean, p.ratio, p.crossings);
          pts.push_back({p.n_th_mean, p.n_p_mean, p.ratio, p.crossings});
        }
        if (!curve.no_boundary.empty()) {
          missing[std::to_string(n)] = curve.no_boundary;
          err << "boundary N=" << n << ": no crossing for " << curve.no_boundary.size()
              << " n_th value(s)\n";
        }
        json c{{"threshold_n", n}, {"points", pts}, {"no_boundary", curve.no_boundary}};
        if (curve.points.size() >= 3) {
          c["area"] = boundary_area(curve);
          c["knee_n_th"] = boundary_knee(curve);
        }
        doc_curves.push_back(c);
      }
      json parameters{{"thresholds", bnd_thresholds}, {"nth_min", nth_min},
                      {"nth_max", nth_max},          {"nth_points", nth_points},
                      {"nth_scale", nth_scale}};
      auto manifest = make_manifest("boundary", parameters, args, g.seed);
      manifest["no_boundary"] = missing;
      emit(g, "csv", csv, json{{"curves", doc_curves}}, manifest, out);
    };
  });

  // simulate
  std::string config_path;
  std::optional<std::uint64_t> reps_override;
  unsigned threads = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo multi-target rangefinder");
  sim_cmd->add_option("config,--config", config_path, "Simulation config file")->required();
  sim_cmd->add_option("--repetitions", reps_override, "Override the config's repetitions");
  sim_cmd->add_option("--threads", threads, "Worker threads (output is thread-count independent)");
  sim_cmd->callback([&] {
    action = [&] {
      if (g.output.empty() || g.output == "-") {
        throw std::runtime_error("simulate requires --output <path>");
      }
      SimConfig config = load_sim_config(config_path);
      if (g.seed) config.seed = *g.seed;
      if (reps_override) config.repetitions = *reps_override;
      config.validate();

      const auto result = run_simulation(config, threads);
      const auto expected = expected_result(config);

      std::vector<std::string> header{"bin", "intensity_norm"};
      for (const auto& [n, _] : result.threshold_norm) {
        header.push_back("threshold_" + std::to_string(n) + "_norm");
      }
      Csv bins(header);
      for (std::uint32_t b = 0; b < config.num_bins; ++b) {
        std::vector<std::string> cells{std::to_string(b), format_real(result.intensity_norm[b])};
        for (const auto& [n, v] : result.threshold_norm) cells.push_back(format_real(v[b]));
        bins.row_strings(cells);
      }

      Csv ratios{"bin", "signal_mean", "threshold_n", "intensity_norm", "threshold_norm",
                 "ratio", "ratio_se", "expected_ratio"};
      json ratio_rows = json::array();
      for (const auto& t : config.targets) {
        for (const auto& [n, _] : result.threshold_norm) {
          const auto est = estimate_ratio(result, t.bin, n);
          const double want = expected.threshold.at(n)[t.bin] / expected.intensity[t.bin];
          ratios.row(t.bin, t.signal_mean, n, est.intensity_norm, est.threshold_norm, est.ratio,
                     est.ratio_se, want);
          ratio_rows.push_back({{"bin", t.bin},
                                {"signal_mean", t.signal_mean},
                                {"threshold_n", n},
                                {"intensity_norm", est.intensity_norm},
                                {"threshold_norm", est.threshold_norm},
                                {"ratio", est.ratio},
                                {"ratio_se", est.ratio_se},
                                {"expected_ratio", want}});
        }
      }

      json parameters{{"config_file", config_path},
                      {"config", format_sim_config(config)},
                      {"num_bins", config.num_bins},
                      {"noise_mean", config.noise_mean},
                      {"repetitions", config.repetitions},
                      {"threads", threads}};
      json target_list = json::array();
      for (const auto& t : config.targets) target_list.push_back({t.bin, t.signal_mean});
      parameters["targets"] = target_list;
      parameters["thresholds"] = config.thresholds;
      parameters["noise_bins"] = result.noise_bins;
      const auto manifest = make_manifest("simulate", parameters, args, config.seed);

      const std::string format = g.format.empty() ? "csv" : g.format;
      if (format == "csv") {
        const auto ratio_path = sibling_path(g.output, "_ratios");
        write_text(g.output, bins.str(), out);
        write_text(ratio_path, ratios.str(), out);
        auto m = manifest;
        m["outputs"] = {g.output, ratio_path};
        write_text(manifest_path(g.output), m.dump(2) + "\n", out);
      } else {
        json doc;
        doc["manifest"] = manifest;
        doc["noise_bins"] = result.noise_bins;
        doc["intensity_raw"] = result.intensity_raw;
        doc["intensity_norm"] = result.intensity_norm;
        json traw = json::object(), tnorm = json::object();
        for (const auto& [n, v] : result.threshold_raw) traw[std::to_string(n)] = v;
        for (const auto& [n, v] : result.threshold_norm) tnorm[std::to_string(n)] = v;
        doc["threshold_raw"] = traw;
        doc["threshold_norm"] = tnorm;
        doc["ratios"] = ratio_rows;
        write_text(g.output, doc.dump(2) + "\n", out);
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (action) action();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pnrthresh::cli
