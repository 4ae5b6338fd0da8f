// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pnrthresh/config_file.hpp"
#include "pnrthresh/grid.hpp"
#include "pnrthresh/photon_stats.hpp"
#include "pnrthresh/rangefinder.hpp"
#include "pnrthresh/sampler.hpp"
#include "pnrthresh/snr.hpp"

using namespace pnrthresh;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const std::vector<double> kSignalGrid{0.0, 0.5, 1.0, 3.0, 10.0};
const std::vector<double> kNoiseGrid{0.2, 1.0, 5.0};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// The bundled four-target run is shared by two criteria.
struct BundledRun {
  SimResult result;
  double seconds = 0.0;
};

const BundledRun& bundled_run() {
  static const BundledRun run = [] {
    const auto config = load_sim_config(PNRTHRESH_DATA_DIR "/paper_fig4.cfg");
    const auto t0 = std::chrono::steady_clock::now();
    BundledRun r{run_simulation(config, 1), 0.0};
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

void strong_target(Outcome& o) {
  const auto& run = bundled_run();
  o.require(run.result.config.repetitions == 10000, "bundled config has 10000 repetitions");
  const auto est = estimate_ratio(run.result, 40, 5);
  o.detail << "bin 40 N=5 ratio " << est.ratio << " (se " << est.ratio_se << "), serial run "
           << run.seconds << " s";
  o.require(est.ratio >= 2.66 && est.ratio <= 3.06, "ratio in [2.66, 3.06]");
  o.require(run.seconds < 10.0, "runtime < 10 s");
}

void weak_target(Outcome& o) {
  const auto& run = bundled_run();
  const double r2 = estimate_ratio(run.result, 10, 2).ratio;
  const double r5 = estimate_ratio(run.result, 10, 5).ratio;
  const double a2 = snr_ratio(SourceParams(0.5, 1.0), 2);
  const double a5 = snr_ratio(SourceParams(0.5, 1.0), 5);
  o.detail << "bin 10 N=2 " << r2 << ", N=5 " << r5 << "; closed form " << a2 << ", " << a5;
  o.require(r2 >= 0.97 && r2 <= 1.11, "N=2 in [0.97, 1.11]");
  o.require(r5 >= 1.05 && r5 <= 1.29, "N=5 in [1.05, 1.29]");
  o.require(std::fabs(a2 - 1.05) <= 0.02, "closed form N=2 within 0.02 of 1.05");
  o.require(std::fabs(a5 - 1.10) <= 0.02, "closed form N=5 within 0.02 of 1.10");
}

void closed_form_vs_oracle(Outcome& o) {
  // Time the library only; the long-double oracle is far slower by design.
  std::vector<double> fast;
  const auto t0 = std::chrono::steady_clock::now();
  for (double np : kSignalGrid)
    for (double nth : kNoiseGrid)
      for (std::uint32_t n = 1; n <= 10; ++n) fast.push_back(quantum_snr(SourceParams(np, nth), n));
  const double secs = seconds_since(t0);

  double worst = 0.0;
  std::size_t i = 0;
  for (double np : kSignalGrid)
    for (double nth : kNoiseGrid)
      for (std::uint32_t n = 1; n <= 10; ++n) {
        const double ref = static_cast<double>(oracle::quantum_snr(np, nth, n));
        worst = std::max(worst, std::fabs(fast[i++] - ref) / ref);
      }
  o.detail << fast.size() << " points, worst relative error " << worst << ", " << secs << " s";
  o.require(worst <= 1e-9, "relative error <= 1e-9");
  o.require(secs < 1.0, "runtime < 1 s");
}

void monotonicity(Outcome& o) {
  double worst_gap = 0.0, worst_deriv = 0.0;
  bool gap_positive = true, deriv_positive = true;
  const double h = 1e-5;
  for (double np : kSignalGrid)
    for (double nth : kNoiseGrid)
      for (std::uint32_t n = 1; n <= 10; ++n) {
        const SourceParams p(np, nth);
        if (np > 0.0) {
          const double gap = threshold_gap(p, n);
          gap_positive = gap_positive && gap > 0.0;
          const double hi = quantum_snr(p, n + 1);
          const double direct = hi - quantum_snr(p, n);
          worst_gap = std::max(worst_gap, std::fabs(gap - direct) / std::max(1.0, hi));
        }
        auto f = [&](double v) { return quantum_snr(SourceParams(v, nth), n); };
        const double d = quantum_snr_derivative(p, n);
        deriv_positive = deriv_positive && d > 0.0;
        const double fd = np == 0.0 ? (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h)
                                    : (f(np + h) - f(np - h)) / (2.0 * h);
        worst_deriv = std::max(worst_deriv, std::fabs(d - fd) / std::fabs(d));
      }
  o.detail << "gap error " << worst_gap << " (scaled by max(1, SNR)), derivative rel error "
           << worst_deriv;
  o.require(gap_positive, "threshold_gap > 0 for n_p > 0");
  o.require(worst_gap <= 1e-8, "gap matches the direct difference within 1e-8");
  o.require(deriv_positive, "derivative > 0");
  o.require(worst_deriv <= 1e-4, "derivative matches differences to 1e-4");
}

void distributions(Outcome& o) {
  const std::vector<double> grid{0.0, 0.5, 1.0, 3.0, 10.0};
  double worst_conv = 0.0;
  for (double np : grid)
    for (double nth : grid) {
      const SourceParams p(np, nth);
      for (std::uint32_t n = 0; n <= 60; ++n) {
        const double ref = static_cast<double>(oracle::mixed(n, np, nth));
        worst_conv = std::max(worst_conv, std::fabs(mixed_pmf(n, p) - ref));
      }
    }

  double worst_norm = 0.0;
  for (double np : grid)
    for (double nth : grid) {
      const SourceParams p(np, nth);
      for (auto kind : {SourceKind::Thermal, SourceKind::Poisson, SourceKind::Mixed}) {
        const auto table = build_pmf(kind, p);
        double s = table.residual;
        for (double v : table.probs) s += v;
        worst_norm = std::max(worst_norm, std::fabs(s - 1.0));
      }
    }

  double worst_tail = 0.0;
  for (double nth : {0.2, 0.5, 1.0, 3.0, 10.0})
    for (std::uint32_t n = 1; n <= 10; ++n) {
      const double ref = static_cast<double>(oracle::thermal_tail(n, nth));
      worst_tail = std::max(worst_tail, std::fabs(thermal_tail(n, nth) - ref));
    }
  o.detail << "convolution " << worst_conv << ", normalization " << worst_norm
           << ", thermal tail " << worst_tail;
  o.require(worst_conv <= 1e-10, "mixed PMF equals convolution within 1e-10");
  o.require(worst_norm <= 1e-10, "tables plus residual sum to 1");
  o.require(worst_tail <= 1e-12, "thermal tail equals x^N within 1e-12");
}

void sampler(Outcome& o) {
  const SourceParams p(3.0, 1.0);
  const CountSampleStream stream{20240101, 0, SourceKind::Mixed, p};
  constexpr std::uint64_t kDraws = 1'000'000;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> first(kDraws), second(kDraws);
  for (std::uint64_t i = 0; i < kDraws; ++i) first[i] = sample_count(stream, i);
  for (std::uint64_t i = 0; i < kDraws; ++i) second[i] = sample_count(stream, i);
  const double secs = seconds_since(t0);

  std::vector<double> freq;
  for (auto c : first) {
    if (c >= freq.size()) freq.resize(c + 1, 0.0);
    freq[c] += 1.0 / kDraws;
  }
  double tv = 0.0, ref_seen = 0.0;
  for (std::uint32_t n = 0; n < freq.size(); ++n) {
    const double r = mixed_pmf(n, p);
    tv += std::fabs(freq[n] - r);
    ref_seen += r;
  }
  tv = 0.5 * (tv + (1.0 - ref_seen));
  o.detail << "TV " << tv << ", two runs of 1e6 draws in " << secs << " s";
  o.require(tv < 5e-3, "TV < 5e-3");
  o.require(first == second, "bit-identical reruns");
  o.require(secs < 5.0, "runtime < 5 s");
}

void boundary_structure(Outcome& o) {
  const auto grid = Grid::linear(0.5, 10.0, 96);
  double previous_area = 0.0;
  double worst_ratio = 0.0;
  for (std::uint32_t n = 2; n <= 5; ++n) {
    const auto curve = find_boundary(n, grid);
    for (const auto& pt : curve.points) worst_ratio = std::max(worst_ratio, std::fabs(pt.ratio - 1.0));
    const double area = boundary_area(curve);
    const double knee = boundary_knee(curve);
    o.detail << "N=" << n << " area " << area << " knee " << knee << "; ";
    o.require(curve.no_boundary.empty(), "boundary found at every n_th for N=" + std::to_string(n));
    o.require(area > previous_area, "area grows at N=" + std::to_string(n));
    o.require(knee >= n / 2.0 && knee <= 2.0 * n, "knee within factor 2 at N=" + std::to_string(n));
    previous_area = area;
  }
  o.detail << "max |ratio-1| " << worst_ratio << "; optimum n_p:";
  o.require(worst_ratio <= 1e-5, "|ratio-1| <= 1e-5");
  for (std::uint32_t n = 2; n <= 8; ++n) {
    const auto best = find_optimum(1.0, n);
    o.detail << " " << best.best_n_p_mean;
    o.require(best.best_n_p_mean >= n / 2.0 && best.best_n_p_mean <= 2.0 * n,
              "optimum within factor 2 at N=" + std::to_string(n));
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"strong-target-ratio", strong_target},
      {"weak-target-ratios", weak_target},
      {"closed-form-vs-oracle", closed_form_vs_oracle},
      {"monotonicity-suite", monotonicity},
      {"distribution-suite", distributions},
      {"sampler-fidelity", sampler},
      {"boundary-optimum-structure", boundary_structure},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %-26s %.3fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                o.detail.str().c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
