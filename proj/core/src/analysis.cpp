#include "gsearch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "gsearch/dynamics.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/parallel.hpp"
#include "gsearch/search.hpp"
#include "gsearch/spectral.hpp"

namespace gsearch {

namespace {

void require_records(const std::vector<SizeRecord>& records, bool need_search) {
  if (records.size() < 4) throw InvalidArgument("scaling studies need at least 4 sizes");
  if (need_search) {
    for (const auto& r : records) {
      if (!r.has_search) throw InvalidArgument("record for m = " + std::to_string(r.m) + " has no search run");
    }
  }
}

template <class Field>
std::vector<double> column(const std::vector<SizeRecord>& records, Field field) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(static_cast<double>(r.*field));
  return out;
}

}  // namespace

std::string_view model_name(ScalingModel model) noexcept {
  switch (model) {
    case ScalingModel::InvSqrtN: return "c/sqrt(N)";
    case ScalingModel::InvSqrtNLogN: return "c/sqrt(N ln N)";
    case ScalingModel::LogLinear: return "c ln N + b";
    case ScalingModel::SqrtNLogN: return "c sqrt(N ln N)";
    case ScalingModel::SqrtN: return "c sqrt(N)";
  }
  return "unknown";
}

double model_regressor(ScalingModel model, double sites) {
  if (!(sites > 1.0)) throw InvalidArgument("scaling regressor needs N > 1");
  const double ln = std::log(sites);
  switch (model) {
    case ScalingModel::InvSqrtN: return 1.0 / std::sqrt(sites);
    case ScalingModel::InvSqrtNLogN: return 1.0 / std::sqrt(sites * ln);
    case ScalingModel::LogLinear: return ln;
    case ScalingModel::SqrtNLogN: return std::sqrt(sites * ln);
    case ScalingModel::SqrtN: return std::sqrt(sites);
  }
  return 0.0;
}

double ScalingFit::predict(double sites) const { return c * model_regressor(model, sites) + b; }

ScalingFit fit_scaling(ScalingModel model, std::span<const double> sites, std::span<const double> values) {
  if (sites.size() != values.size()) throw InvalidArgument("fit: size mismatch");
  if (sites.size() < 4) throw InvalidArgument("fit: need at least 4 data points");
  const std::size_t n = sites.size();
  ScalingFit fit;
  fit.model = model;
  fit.points = static_cast<int>(n);

  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = model_regressor(model, sites[i]);
    sxx += x * x;
    sxy += x * values[i];
    sx += x;
    sy += values[i];
  }
  if (model == ScalingModel::LogLinear) {
    const double det = n * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) throw InvalidArgument("fit: degenerate regressor");
    fit.c = (n * sxy - sx * sy) / det;
    fit.b = (sxx * sy - sx * sxy) / det;
  } else {
    fit.c = sxy / sxx;
  }

  const double mean = sy / n;
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = values[i] - fit.predict(sites[i]);
    fit.rss += r * r;
    tss += (values[i] - mean) * (values[i] - mean);
  }
  fit.r_squared = tss > 0.0 ? std::clamp(1.0 - fit.rss / tss, 0.0, 1.0) : 0.0;
  return fit;
}

std::vector<int> size_range(int from, int to, int step) {
  if (step <= 0 || from > to) throw InvalidArgument("size range needs from <= to and step > 0");
  std::vector<int> out;
  for (int s = from; s <= to; s += step) {
    if (s < 3 || s % 3 != 0) throw InvalidArgument("size " + std::to_string(s) + " is not a multiple of 3");
    out.push_back(s);
  }
  return out;
}

std::vector<SizeRecord> analyze_sizes(std::span<const int> sizes, const SiteId& marked, bool with_search) {
  std::vector<SizeRecord> records(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const LatticeSpec spec(sizes[i], sizes[i]);
    if (!spec.dirac_exact()) throw DiracUnavailable("size " + std::to_string(sizes[i]) + " is not a multiple of 3");
    const SiteId site = spec.wrap(marked.alpha, marked.beta, marked.sublattice);
    const auto h = build_search_hamiltonian(spec, 1.0, site);
    const auto spectrum = std::make_shared<const SpectrumResult>(eig_sym(h.matrix()));
    const auto gap = gap_from_spectrum(spec, site, *spectrum);
    const auto moments = moment_sums(spec, 2);

    SizeRecord& r = records[i];
    r.m = spec.m();
    r.n = spec.n();
    r.sites = spec.sites();
    r.e_plus = gap.e_plus;
    r.e_minus = gap.e_minus;
    r.gap = gap.gap;
    r.resolvent_e_plus = resolvent_root(spec);
    r.i2 = moments[0];
    r.i4 = moments[1];
    r.dF_ratio = Resolvent(spec).dF(r.resolvent_e_plus) / (-2.0 * r.i2);
    r.reduced_energy = 2.0 * std::sqrt(3.0 / r.sites);
    r.log_corrected_energy = std::sqrt(4.0 * std::numbers::sqrt3 / (r.sites * r.i2));
    r.predicted_amplitude = 1.0 / (std::pow(3.0, 0.25) * std::sqrt(r.i2));
    r.t_gap = 0.5 * std::numbers::pi / r.e_plus;
    r.t_reduced = reduced_search_time(spec);
    if (with_search) {
      const auto run = run_search(spec, site, SearchOptions{}, spectrum);
      r.has_search = true;
      r.t_peak = run.t_peak;
      r.p_peak = run.p_peak;
      r.amplitude = std::abs(run.ell_amplitude_at_peak);
    }
  });
  return records;
}

GapStudy gap_scaling_study(std::span<const int> sizes, const SiteId& marked) {
  return gap_scaling_study(analyze_sizes(sizes, marked, false));
}

GapStudy gap_scaling_study(std::vector<SizeRecord> records) {
  require_records(records, false);
  GapStudy study;
  const auto n = column(records, &SizeRecord::sites);
  const auto gap = column(records, &SizeRecord::gap);
  study.inv_sqrt = fit_scaling(ScalingModel::InvSqrtN, n, gap);
  study.inv_sqrt_log = fit_scaling(ScalingModel::InvSqrtNLogN, n, gap);
  study.verdict = study.inv_sqrt_log.rss < study.inv_sqrt.rss ? ScalingModel::InvSqrtNLogN : ScalingModel::InvSqrtN;

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return n[a] < n[b]; });
  if (records.size() >= 5) {
    std::vector<double> n_rest, gap_rest;
    for (std::size_t k = 1; k < order.size(); ++k) {
      n_rest.push_back(n[order[k]]);
      gap_rest.push_back(gap[order[k]]);
    }
    study.c2_without_smallest = fit_scaling(ScalingModel::InvSqrtNLogN, n_rest, gap_rest).c;
  }
  study.monotone_decreasing = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    study.monotone_decreasing = study.monotone_decreasing && gap[order[k]] < gap[order[k - 1]];
  }
  study.records = std::move(records);
  return study;
}

TimeStudy search_time_study(std::span<const int> sizes, const SiteId& marked) {
  return search_time_study(analyze_sizes(sizes, marked, true));
}

TimeStudy search_time_study(std::vector<SizeRecord> records) {
  require_records(records, true);
  TimeStudy study;
  const auto n = column(records, &SizeRecord::sites);
  const auto t = column(records, &SizeRecord::t_peak);
  study.sqrt_log = fit_scaling(ScalingModel::SqrtNLogN, n, t);
  study.sqrt = fit_scaling(ScalingModel::SqrtN, n, t);
  study.verdict = study.sqrt_log.rss < study.sqrt.rss ? ScalingModel::SqrtNLogN : ScalingModel::SqrtN;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double v = records[i].p_peak * std::log(static_cast<double>(records[i].sites));
    lo = i == 0 ? v : std::min(lo, v);
    hi = i == 0 ? v : std::max(hi, v);
  }
  study.p_peak_log_drift = (hi - lo) / lo;
  study.records = std::move(records);
  return study;
}

AmplitudeStudy amplitude_envelope_study(std::span<const int> sizes, const SiteId& marked) {
  return amplitude_envelope_study(analyze_sizes(sizes, marked, true));
}

AmplitudeStudy amplitude_envelope_study(std::vector<SizeRecord> records) {
  require_records(records, true);
  AmplitudeStudy study;
  for (const auto& r : records) study.ratio.push_back(r.amplitude / r.predicted_amplitude);
  study.records = std::move(records);
  return study;
}

MomentStudy moment_study(std::span<const int> sizes) {
  MomentStudy study;
  std::vector<LatticeSpec> specs;
  for (int s : sizes) {
    const LatticeSpec spec(s, s);
    const auto moments = moment_sums(spec, 2);
    SizeRecord r;
    r.m = s;
    r.n = s;
    r.sites = spec.sites();
    r.i2 = moments[0];
    r.i4 = moments[1];
    study.records.push_back(r);
    specs.push_back(spec);
  }
  require_records(study.records, false);
  study.i2_log = fit_scaling(ScalingModel::LogLinear, column(study.records, &SizeRecord::sites),
                             column(study.records, &SizeRecord::i2));
  study.limit = verify_moment_limit(specs, 2);
  return study;
}

}  // namespace gsearch
