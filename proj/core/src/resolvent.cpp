#include "gsearch/resolvent.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsearch/bloch.hpp"
#include "gsearch/errors.hpp"

namespace gsearch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectionTolerance = 1e-13;

}  // namespace

Resolvent::Resolvent(const LatticeSpec& spec) : spec_(spec) {
  prefactor_ = std::numbers::sqrt3 / spec.sites();
  std::vector<double> magnitudes;
  for (const auto& k : momentum_grid(spec)) {
    if (k.dirac) {
      ++dirac_count_;
    } else {
      magnitudes.push_back(dispersion(k).upper);
    }
  }
  std::sort(magnitudes.begin(), magnitudes.end());
  for (double e : magnitudes) {
    if (!poles_.empty() && e - poles_.back() <= kPoleMergeTolerance) {
      ++multiplicity_.back();
    } else {
      poles_.push_back(e);
      multiplicity_.push_back(1);
    }
  }
  if (poles_.empty() || poles_.front() <= 0.0) {
    throw NumericalFailure("resolvent: non-Dirac momentum with zero band energy");
  }
}

void Resolvent::check_distance(double energy) const {
  if (dirac_count_ > 0 && std::abs(energy) <= kPoleProximity) throw PoleProximity(energy, 0.0);
  const double a = std::abs(energy);
  auto it = std::lower_bound(poles_.begin(), poles_.end(), a);
  if (it != poles_.end() && *it - a <= kPoleProximity) {
    throw PoleProximity(energy, std::copysign(*it, energy));
  }
  if (it != poles_.begin() && a - *(it - 1) <= kPoleProximity) {
    throw PoleProximity(energy, std::copysign(*(it - 1), energy));
  }
}

double Resolvent::F_unchecked(double energy) const {
  long double sum = 0.0L;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const long double e = poles_[j];
    sum += multiplicity_[j] * (1.0L / (energy - e) + 1.0L / (energy + e));
  }
  sum += 2.0L * dirac_count_ / energy;
  return static_cast<double>(prefactor_ * sum);
}

double Resolvent::dF_unchecked(double energy) const {
  long double sum = 0.0L;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const long double dm = energy - poles_[j];
    const long double dp = energy + poles_[j];
    sum += multiplicity_[j] * (1.0L / (dm * dm) + 1.0L / (dp * dp));
  }
  sum += 2.0L * dirac_count_ / (static_cast<long double>(energy) * energy);
  return static_cast<double>(-prefactor_ * sum);
}

double Resolvent::F(double energy) const {
  check_distance(energy);
  return F_unchecked(energy);
}

double Resolvent::dF(double energy) const {
  check_distance(energy);
  return dF_unchecked(energy);
}

// F runs from +inf just above lo to -inf just below hi.
double Resolvent::bisect(double lo, double hi) const {
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (F_unchecked(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> Resolvent::roots() const {
  std::vector<double> edges;
  edges.reserve(2 * poles_.size() + 1);
  for (auto it = poles_.rbegin(); it != poles_.rend(); ++it) edges.push_back(-*it);
  if (dirac_count_ > 0) edges.push_back(0.0);
  for (double e : poles_) edges.push_back(e);

  std::vector<double> out;
  out.reserve(edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) out.push_back(bisect(edges[i], edges[i + 1]));
  return out;
}

double resolvent_F(const LatticeSpec& spec, double energy) { return Resolvent(spec).F(energy); }

double resolvent_dF(const LatticeSpec& spec, double energy) { return Resolvent(spec).dF(energy); }

double resolvent_root(const LatticeSpec& spec) {
  if (!spec.dirac_exact()) throw DiracUnavailable("resolvent root needs the Dirac pole at E = 0");
  const Resolvent r(spec);
  const double eps_min = r.smallest_pole();
  double lo = 1e-6 * eps_min;
  double hi = eps_min * (1.0 - 1e-6);
  double f_lo = r.F(lo);
  double f_hi = r.F(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw NumericalFailure("resolvent root: no sign change on (1e-6 eps_min, eps_min)");
  }
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = r.F(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  double root = 0.5 * (lo + hi);
  const double secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
  if (secant >= lo && secant <= hi && std::abs(r.F(secant)) <= std::abs(r.F(root))) root = secant;

  const double residual = std::abs(r.F(root));
  if (residual > 1e-12 * std::abs(r.dF(root)) * root) {
    throw NumericalFailure("resolvent root: residual " + std::to_string(residual) +
                           " above tolerance");
  }
  return root;
}

std::vector<double> moment_sums(const LatticeSpec& spec, int n_max) {
  if (!spec.dirac_exact()) throw DiracUnavailable("moment sums exclude K and K' exactly");
  if (n_max < 1) throw InvalidArgument("moment_sums: n_max must be >= 1");
  std::vector<long double> sums(n_max, 0.0L);
  for (const auto& k : momentum_grid(spec)) {
    if (k.dirac) continue;
    const long double inv_sq = 1.0L / std::pow(static_cast<long double>(dispersion(k).upper), 2);
    long double term = 1.0L;
    for (int n = 0; n < n_max; ++n) {
      term *= inv_sq;
      sums[n] += term;
    }
  }
  const double scale = 2.0 * std::numbers::sqrt3 / spec.sites();
  std::vector<double> out(n_max);
  for (int n = 0; n < n_max; ++n) out[n] = static_cast<double>(scale * sums[n]);
  return out;
}

ZetaResult epstein_zeta(const Eigen::Matrix2d& form, double x, int cutoff) {
  if (std::abs(form(0, 1) - form(1, 0)) > 1e-12 * form.cwiseAbs().maxCoeff()) {
    throw InvalidArgument("epstein_zeta: form matrix is not symmetric");
  }
  const double s11 = form(0, 0);
  const double s12 = form(0, 1);
  const double s22 = form(1, 1);
  const double det = s11 * s22 - s12 * s12;
  if (!(s11 > 0.0) || !(det > 0.0)) {
    throw InvalidArgument("epstein_zeta: form matrix is not positive definite");
  }
  if (x < 2.0) throw InvalidArgument("epstein_zeta: exponent must be >= 2");
  if (cutoff < 10) throw InvalidArgument("epstein_zeta: cutoff must be >= 10");

  const bool integer_exponent = x == std::floor(x) && x <= 64.0;
  const auto inverse_power = [&](double quad) {
    const long double inv = 1.0L / quad;
    if (!integer_exponent) return std::pow(inv, static_cast<long double>(x));
    long double acc = 1.0L;
    for (int i = 0; i < static_cast<int>(x); ++i) acc *= inv;
    return acc;
  };

  // Half-plane {p > 0} u {p = 0, q > 0} carries exactly the factor 1/2.
  long double sum = 0.0L;
  for (int p = cutoff; p >= 0; --p) {
    long double row = 0.0L;
    for (int q = cutoff; q >= (p == 0 ? 1 : -cutoff); --q) {
      const double quad = s11 * p * p + 2.0 * s12 * p * q + s22 * static_cast<double>(q) * q;
      row += inverse_power(quad);
    }
    sum += row;
  }

  const auto angular = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double q = s11 * c * c + 2.0 * s12 * c * s + s22 * s * s;
    const double edge = std::max(std::abs(c), std::abs(s));
    return std::pow(q, -x) * std::pow(edge, 2.0 * x - 2.0);
  };
  double integral = 0.0;
  for (int octant = 0; octant < 8; ++octant) {
    integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        angular, octant * kPi / 4.0, (octant + 1) * kPi / 4.0, 10, 1e-14);
  }
  const double half_width = cutoff + 0.5;

  ZetaResult out;
  out.truncated = static_cast<double>(sum);
  out.tail_estimate = 0.5 * std::pow(half_width, 2.0 - 2.0 * x) / (2.0 * x - 2.0) * integral;
  const double lambda_min = 0.5 * (s11 + s22) - std::sqrt(0.25 * (s11 - s22) * (s11 - s22) + s12 * s12);
  out.tail_bound = kPi * std::pow(lambda_min, -x) * std::pow(static_cast<double>(cutoff), 2.0 - 2.0 * x) /
                   (2.0 * x - 2.0);
  out.value = out.truncated + out.tail_estimate;
  return out;
}

Eigen::Matrix2d dirac_form_matrix() {
  Eigen::Matrix2d s;
  s << 2.0, -1.0, -1.0, 2.0;
  return 4.0 * kPi * kPi * s;
}

MomentLimitReport verify_moment_limit(const std::vector<LatticeSpec>& specs, int k) {
  if (k < 2) throw InvalidArgument("verify_moment_limit: k must be >= 2");
  if (specs.size() < 2) throw InvalidArgument("verify_moment_limit: need at least two sizes");
  MomentLimitReport report;
  report.k = k;
  for (const auto& spec : specs) {
    MomentLimitRow row;
    row.m = spec.m();
    row.n = spec.n();
    row.sites = spec.sites();
    row.moment = moment_sums(spec, k).back();
    row.ratio = row.moment / std::pow(static_cast<double>(spec.sites()), k - 1);
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const auto& a, const auto& b) { return a.sites < b.sites; });

  report.zeta = epstein_zeta(dirac_form_matrix(), k, 2000).value;
  const double pair = 2.0 * report.zeta;
  report.limit_4sqrt3 = 4.0 * std::numbers::sqrt3 * pair;
  report.limit_2sqrt3 = 2.0 * std::numbers::sqrt3 * pair;
  const double last = report.rows.back().ratio;
  report.favoured_prefactor = std::abs(last - report.limit_4sqrt3) <= std::abs(last - report.limit_2sqrt3)
                                  ? 4.0 * std::numbers::sqrt3
                                  : 2.0 * std::numbers::sqrt3;

  const auto& rows = report.rows;
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    up = up && rows[i].ratio > rows[i - 1].ratio;
    down = down && rows[i].ratio < rows[i - 1].ratio;
  }
  report.monotone = up || down;
  if (rows.size() >= 3) {
    const double first_step = std::abs(rows[1].ratio - rows[0].ratio);
    const double last_step = std::abs(rows.back().ratio - rows[rows.size() - 2].ratio);
    report.converging = last_step < first_step;
  }
  return report;
}

}  // namespace gsearch
