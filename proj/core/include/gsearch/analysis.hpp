#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gsearch/lattice.hpp"
#include "gsearch/resolvent.hpp"

namespace gsearch {

enum class ScalingModel {
  InvSqrtN,      ///< c / sqrt(N)
  InvSqrtNLogN,  ///< c / sqrt(N ln N)
  LogLinear,     ///< c ln N + b
  SqrtNLogN,     ///< c sqrt(N ln N)
  SqrtN,         ///< c sqrt(N)
};

std::string_view model_name(ScalingModel model) noexcept;
/// Regressor f(N) of the model (ln N for LogLinear).
double model_regressor(ScalingModel model, double sites);

struct ScalingFit {
  ScalingModel model = ScalingModel::InvSqrtN;
  double c = 0.0;
  double b = 0.0;  ///< intercept, LogLinear only
  double rss = 0.0;
  double r_squared = 0.0;  ///< clamped to [0, 1]
  int points = 0;

  double predict(double sites) const;
};

/// Least squares on raw values via normal equations, fixed summation order. Needs >= 4 points.
ScalingFit fit_scaling(ScalingModel model, std::span<const double> sites, std::span<const double> values);

/// Everything measured for one m x m torus with a single marked site.
struct SizeRecord {
  int m = 0;
  int n = 0;
  int sites = 0;
  double e_plus = 0.0;  ///< eigensolver
  double e_minus = 0.0;
  double gap = 0.0;
  double resolvent_e_plus = 0.0;
  double i2 = 0.0;
  double i4 = 0.0;
  double dF_ratio = 0.0;           ///< F'(E_+) / (-2 I_2)
  double reduced_energy = 0.0;     ///< 2 sqrt(3/N)
  double log_corrected_energy = 0.0;  ///< sqrt(4 sqrt3 / (N I_2))
  bool has_search = false;
  double t_peak = 0.0;
  double p_peak = 0.0;
  double t_gap = 0.0;      ///< pi / (2 E_+)
  double t_reduced = 0.0;  ///< (pi/4) sqrt(N/3)
  double amplitude = 0.0;  ///< |<l|psi(t_peak)>|
  double predicted_amplitude = 0.0;  ///< 1 / (3^(1/4) I_2^(1/2))
};

/// One record per size (m = n = size), sizes processed in parallel, output in input order.
/// Without `with_search` only the spectral and resolvent columns are filled.
std::vector<SizeRecord> analyze_sizes(std::span<const int> sizes, const SiteId& marked,
                                      bool with_search = true);

/// Sizes from, from+step, ..., to (inclusive); every entry must be a multiple of 3 and >= 3.
std::vector<int> size_range(int from, int to, int step);

struct GapStudy {
  std::vector<SizeRecord> records;
  ScalingFit inv_sqrt;      ///< c1 / sqrt(N)
  ScalingFit inv_sqrt_log;  ///< c2 / sqrt(N ln N)
  ScalingModel verdict = ScalingModel::InvSqrtNLogN;
  double c2_without_smallest = 0.0;
  bool monotone_decreasing = false;
};

struct TimeStudy {
  std::vector<SizeRecord> records;
  ScalingFit sqrt_log;  ///< c sqrt(N ln N)
  ScalingFit sqrt;      ///< c sqrt(N)
  ScalingModel verdict = ScalingModel::SqrtNLogN;
  double p_peak_log_drift = 0.0;  ///< (max - min) / min of P_peak ln N
};

struct AmplitudeStudy {
  std::vector<SizeRecord> records;
  std::vector<double> ratio;  ///< measured / predicted
};

struct MomentStudy {
  std::vector<SizeRecord> records;
  ScalingFit i2_log;  ///< I_2 = c ln N + b
  MomentLimitReport limit;
};

GapStudy gap_scaling_study(std::span<const int> sizes, const SiteId& marked);
GapStudy gap_scaling_study(std::vector<SizeRecord> records);
TimeStudy search_time_study(std::span<const int> sizes, const SiteId& marked);
TimeStudy search_time_study(std::vector<SizeRecord> records);
AmplitudeStudy amplitude_envelope_study(std::span<const int> sizes, const SiteId& marked);
AmplitudeStudy amplitude_envelope_study(std::vector<SizeRecord> records);
MomentStudy moment_study(std::span<const int> sizes);

}  // namespace gsearch
