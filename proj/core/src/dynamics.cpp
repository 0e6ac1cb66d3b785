#include "gsearch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsearch/bloch.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/resolvent.hpp"

namespace gsearch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

void require_unit_norm(const WaveFunction& psi, int dimension) {
  if (psi.size() != dimension) throw InvalidArgument("initial state has the wrong dimension");
  if (std::abs(psi.norm() - 1.0) > kNormTolerance) {
    throw InvalidArgument("initial state is not normalised (norm " + std::to_string(psi.norm()) + ")");
  }
}

void require_ascending(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("times must be strictly ascending");
  }
}

Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& energies, std::span<const double> times) {
  Eigen::MatrixXcd phases(energies.size(), static_cast<Eigen::Index>(times.size()));
  for (Eigen::Index j = 0; j < phases.cols(); ++j) {
    for (Eigen::Index a = 0; a < phases.rows(); ++a) {
      phases(a, j) = std::exp(-kI * (energies[a] * times[j]));
    }
  }
  return phases;
}

double smallest_positive_eigenvalue(const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > 1e-10) return values[i];
  }
  throw NumericalFailure("spectrum has no positive eigenvalue");
}

double max_norm_error(const Propagator& prop, std::span<const double> times) {
  const Eigen::MatrixXcd states = prop.states_at(times);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < states.cols(); ++j) {
    worst = std::max(worst, std::abs(states.col(j).norm() - 1.0));
  }
  return worst;
}

}  // namespace

Propagator::Propagator(std::shared_ptr<const SpectrumResult> spectrum, const WaveFunction& psi0)
    : spectrum_(std::move(spectrum)), initial_(psi0) {
  if (!spectrum_) throw InvalidArgument("propagator needs a spectrum");
  require_unit_norm(psi0, spectrum_->dimension());
  coefficients_ = spectrum_->eigenvectors.transpose().cast<std::complex<double>>() * psi0;
}

WaveFunction Propagator::state_at(double t) const {
  const double times[] = {t};
  return states_at(times).col(0);
}

Eigen::MatrixXcd Propagator::states_at(std::span<const double> times) const {
  Eigen::MatrixXcd weighted = phase_matrix(spectrum_->eigenvalues, times);
  weighted.array().colwise() *= coefficients_.array();
  const Eigen::MatrixXd re = spectrum_->eigenvectors * weighted.real();
  const Eigen::MatrixXd im = spectrum_->eigenvectors * weighted.imag();
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] == 0.0) out.col(static_cast<Eigen::Index>(j)) = initial_;
  }
  return out;
}

Eigen::MatrixXcd Propagator::projections(const Eigen::MatrixXcd& bras,
                                         std::span<const double> times) const {
  if (bras.cols() != spectrum_->dimension()) throw InvalidArgument("bra has the wrong dimension");
  Eigen::MatrixXcd rows = bras.conjugate() * spectrum_->eigenvectors.cast<std::complex<double>>();
  rows.array().rowwise() *= coefficients_.transpose().array();
  Eigen::MatrixXcd out = rows * phase_matrix(spectrum_->eigenvalues, times);
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] == 0.0) out.col(static_cast<Eigen::Index>(j)) = bras.conjugate() * initial_;
  }
  return out;
}

std::vector<WaveFunction> propagate(const SearchHamiltonian& h, const WaveFunction& psi0,
                                    std::span<const double> times) {
  require_ascending(times);
  const Propagator prop(std::make_shared<const SpectrumResult>(eig_sym(h.matrix())), psi0);
  const Eigen::MatrixXcd states = prop.states_at(times);
  std::vector<WaveFunction> out;
  out.reserve(times.size());
  for (Eigen::Index j = 0; j < states.cols(); ++j) {
    if (std::abs(states.col(j).norm() - 1.0) > kNormTolerance) {
      throw NumericalFailure("propagation lost unitarity at t = " + std::to_string(times[j]));
    }
    out.emplace_back(states.col(j));
  }
  return out;
}

std::vector<double> time_grid(double dt, double t_max) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) * dt;
  return grid;
}

double reduced_search_time(const LatticeSpec& spec) noexcept {
  return 0.25 * kPi * std::sqrt(spec.sites() / 3.0);
}

double parabolic_peak(std::span<const double> times, std::span<const double> values, std::size_t i) {
  if (i == 0 || i + 1 >= values.size()) return times[i];
  const double y0 = values[i - 1];
  const double y1 = values[i];
  const double y2 = values[i + 1];
  const double curvature = y0 - 2.0 * y1 + y2;
  if (!(curvature < 0.0)) return times[i];
  const double h = times[i + 1] - times[i];
  const double shift = std::clamp(0.5 * h * (y0 - y2) / curvature, -h, h);
  return times[i] + shift;
}

SearchRun run_search(const LatticeSpec& spec, const SiteId& marked, const SearchOptions& options) {
  const auto h = build_search_hamiltonian(spec, 1.0, marked);
  return run_search(spec, marked, options, std::make_shared<const SpectrumResult>(eig_sym(h.matrix())));
}

SearchRun run_search(const LatticeSpec& spec, const SiteId& marked, const SearchOptions& options,
                     std::shared_ptr<const SpectrumResult> spectrum) {
  if (!spec.contains(marked)) throw InvalidArgument("marked site outside the lattice");
  if (!spectrum || spectrum->dimension() != spec.sites()) {
    throw InvalidArgument("spectrum does not match the lattice");
  }
  if (options.start != StartKind::Custom && !spec.dirac_exact()) {
    throw DiracUnavailable("optimal and uniform starts need m and n divisible by 3");
  }

  SearchRun run{.spec = spec, .marked = marked, .start = options.start, .neighbors = neighbors_of(spec, marked)};
  run.e_plus = spec.dirac_exact() ? gap_from_spectrum(spec, marked, *spectrum).e_plus
                                  : smallest_positive_eigenvalue(spectrum->eigenvalues);
  run.t_reduced = reduced_search_time(spec);
  run.t_gap = 0.5 * kPi / run.e_plus;
  run.dt = options.dt > 0.0 ? options.dt : run.t_reduced / 200.0;
  run.t_max = options.t_max > 0.0 ? options.t_max : 2.5 * run.t_reduced;
  if (options.dt < 0.0 || options.t_max < 0.0) throw InvalidArgument("dt and t_max must be positive");
  if (run.dt > kPi / (8.0 * run.e_plus)) {
    throw InvalidArgument("dt = " + std::to_string(run.dt) + " undersamples the oscillation (limit pi/(8 E+) = " +
                          std::to_string(kPi / (8.0 * run.e_plus)) + ")");
  }
  run.times = time_grid(run.dt, run.t_max);

  WaveFunction psi0;
  switch (options.start) {
    case StartKind::Optimal: psi0 = optimal_start_state(spec, marked); break;
    case StartKind::UniformDirac: psi0 = uniform_dirac_state(spec); break;
    case StartKind::Custom: psi0 = options.custom; break;
  }
  const Propagator prop(spectrum, psi0);

  Eigen::MatrixXcd bras(5, spec.sites());
  for (int i = 0; i < 3; ++i) bras.row(i) = site_state(spec, run.neighbors[i]).transpose();
  bras.row(3) = site_state(spec, marked).transpose();
  bras.row(4) = neighbor_state(spec, marked).transpose();
  const Eigen::MatrixXcd amp = prop.projections(bras, run.times);

  const std::size_t count = run.times.size();
  for (auto& series : run.p_site) series.resize(count);
  run.p_total.resize(count);
  run.p_marked.resize(count);
  run.p_ell.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      run.p_site[i][j] = std::norm(amp(i, col));
      total += run.p_site[i][j];
    }
    run.p_total[j] = total;
    run.p_marked[j] = std::norm(amp(3, col));
    run.p_ell[j] = std::norm(amp(4, col));
  }

  const auto best = static_cast<std::size_t>(
      std::max_element(run.p_total.begin(), run.p_total.end()) - run.p_total.begin());
  run.t_peak = parabolic_peak(run.times, run.p_total, best);
  const double peak_time[] = {run.t_peak};
  const Eigen::MatrixXcd at_peak = prop.projections(bras, peak_time);
  run.p_peak = std::norm(at_peak(0, 0)) + std::norm(at_peak(1, 0)) + std::norm(at_peak(2, 0));
  run.ell_amplitude_at_peak = at_peak(4, 0);

  const double checks[] = {0.0, run.t_peak, run.times.back()};
  run.max_norm_error = max_norm_error(prop, checks);
  if (run.max_norm_error > kNormTolerance) throw NumericalFailure("search run lost unitarity");
  run.mean_site_probability = prop.state_at(run.t_peak).squaredNorm() / spec.sites();
  return run;
}

ResolventAmplitude amplitude_via_resolvent(const LatticeSpec& spec, const SiteId& marked,
                                           std::span<const double> times) {
  if (!spec.dirac_exact()) throw DiracUnavailable("resolvent amplitude needs the Dirac pole");
  if (!spec.contains(marked)) throw InvalidArgument("marked site outside the lattice");
  const Resolvent resolvent(spec);
  ResolventAmplitude out;
  out.times.assign(times.begin(), times.end());
  out.energies = resolvent.roots();
  out.weights.reserve(out.energies.size());
  for (double e : out.energies) out.weights.push_back(1.0 / (e * std::abs(resolvent.dF(e))));
  out.e_plus = resolvent_root(spec);
  out.i2 = moment_sums(spec, 1).front();
  out.marked_overlap = optimal_start_state(spec, marked)[site_index(spec, marked)];

  const double envelope_scale = 1.0 / (std::pow(3.0, 0.25) * std::sqrt(out.i2));
  for (double t : times) {
    std::complex<double> sum = 0.0;
    for (std::size_t a = 0; a < out.energies.size(); ++a) {
      sum += std::exp(-kI * (out.energies[a] * t)) * out.weights[a];
    }
    out.full.push_back(out.marked_overlap * sum);
    out.envelope.push_back(envelope_scale * std::abs(std::sin(out.e_plus * t)));
  }
  return out;
}

TransferRun run_transfer(const LatticeSpec& spec, const SiteId& first, const SiteId& second,
                         double dt, double t_max) {
  if (!spec.contains(first) || !spec.contains(second)) {
    throw InvalidArgument("marked site outside the lattice");
  }
  if (first == second) throw InvalidArgument("transfer needs two distinct marked sites");
  if (dt < 0.0 || t_max < 0.0) throw InvalidArgument("dt and t_max must be positive");

  TransferRun run{.spec = spec, .first = first, .second = second};
  run.pairing = first.sublattice == second.sublattice ? SublatticePair::Same : SublatticePair::Cross;
  const double t_reduced = reduced_search_time(spec);
  run.dt = dt > 0.0 ? dt : t_reduced / 20.0;
  run.t_max = t_max > 0.0 ? t_max : 150.0 * t_reduced;
  run.times = time_grid(run.dt, run.t_max);

  const SiteId marks[] = {first, second};
  const auto h = build_search_hamiltonian(spec, 1.0, marks);
  auto spectrum = std::make_shared<const SpectrumResult>(eig_sym(h.matrix()));

  run.window = 0.5 * smallest_positive_energy(spec);
  const Eigen::VectorXd ell1 = neighbor_state(spec, first).real();
  Eigen::VectorXd projected = Eigen::VectorXd::Zero(spec.sites());
  for (int a = 0; a < spectrum->dimension(); ++a) {
    if (std::abs(spectrum->eigenvalues[a]) >= run.window) continue;
    const auto v = spectrum->eigenvectors.col(a);
    projected += v.dot(ell1) * v;
    ++run.window_states;
  }
  if (projected.norm() < 1e-8) {
    throw NumericalFailure("transfer: |l_1> has no weight in the window |E| < eps_min/2");
  }
  const WaveFunction psi0 = (projected / projected.norm()).cast<std::complex<double>>();
  run.initial_localization = std::pow(ell1.dot(projected) / projected.norm(), 2);

  const Propagator prop(spectrum, psi0);
  Eigen::MatrixXcd bras(2, spec.sites());
  bras.row(0) = neighbor_state(spec, first).transpose();
  bras.row(1) = neighbor_state(spec, second).transpose();
  const Eigen::MatrixXcd amp = prop.projections(bras, run.times);
  const std::size_t count = run.times.size();
  run.p_ell1.resize(count);
  run.p_ell2.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    run.p_ell1[j] = std::norm(amp(0, static_cast<Eigen::Index>(j)));
    run.p_ell2[j] = std::norm(amp(1, static_cast<Eigen::Index>(j)));
  }
  const double checks[] = {0.0, run.times.back()};
  run.max_norm_error = max_norm_error(prop, checks);
  if (run.max_norm_error > kNormTolerance) throw NumericalFailure("transfer run lost unitarity");

  run.p2_max = *std::max_element(run.p_ell2.begin(), run.p_ell2.end());
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const double p = run.p_ell2[j];
    if (p >= 0.5 * run.p2_max && p >= run.p_ell2[j - 1] && p >= run.p_ell2[j + 1]) {
      run.period = parabolic_peak(run.times, run.p_ell2, j);
      const double at[] = {*run.period};
      run.p2_at_period = std::norm(prop.projections(bras.row(1), at)(0, 0));
      break;
    }
  }
  return run;
}

}  // namespace gsearch
