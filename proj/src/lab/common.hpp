#pragma once

#include "grushin/lab.hpp"
#include "grushin/besov.hpp"
#include "grushin/operator.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace grushin::lab {

// Shared plumbing for the experiment runners.
struct Context {
  const Config& config;
  ExperimentReport report;
  std::uint64_t seed = 1;

  Context(const Config& c, std::string id);

  void row(const std::string& group, const std::string& check, const std::string& parameters, double measured,
           double target, Comparison comparison, double tolerance, const std::string& tag);
  DataTable& table(const std::string& name, std::vector<std::string> header);
  void warn(const std::string& w) { report.warnings.push_back(w); }
};

std::set<std::string> common_keys();
std::set<std::string> with_keys(std::set<std::string> base, std::initializer_list<const char*> extra);

/// grid.* keys; `points` > 0 replaces grid.points on every axis.
GridSpec grid_from(const Config& config, int points = 0);
QuadratureSpec quadrature_from(const Config& config);

/// Deterministic stream; uniform draws built from raw 64-bit output so the
/// sequence does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double a = 0.0, double b = 1.0) {
    return a + (b - a) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct BumpParams {
  double cx = 0.0, cy = 0.0, sx = 0.3, sy = 0.3, amp = 1.0;
};

/// exp(-(x-cx)^2/(2 sx^2) - (y-cy)^2/(2 sy^2)) on the first x- and y-axis
/// (remaining axes centered at 0 with width sx / sy).
Eigen::VectorXd sample_bump(const Grid& grid, const BumpParams& b);
std::vector<BumpParams> bump_family(std::uint64_t seed, int count, double center_range, double w_lo, double w_hi);

/// Grid scaled by delta_lambda: half-widths times lambda (x) and lambda^{alpha+1} (y).
GridSpec dilated_spec(const GridSpec& spec, double lambda);

std::string kv(std::initializer_list<std::pair<const char*, double>> items);

ExperimentReport run_semigroup_checks(const Config& config);
ExperimentReport run_kernel_bounds(const Config& config);
ExperimentReport run_metric_volumes(const Config& config);
ExperimentReport run_besov_equivalence(const Config& config);
ExperimentReport run_besov_limits(const Config& config);
ExperimentReport run_perimeter_coarea(const Config& config);
ExperimentReport run_isoperimetric_scan(const Config& config);
ExperimentReport run_sobolev_hls(const Config& config);

}  // namespace grushin::lab
