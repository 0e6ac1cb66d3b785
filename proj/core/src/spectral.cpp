#include "gsearch/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gsearch/bloch.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/parallel.hpp"

namespace gsearch {

namespace {

constexpr double kZeroModeTolerance = 1e-10;
constexpr double kBranchZeroTolerance = 1e-8;

void check_symmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) throw InvalidArgument("eig_sym: empty matrix");
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("eig_sym: matrix is not square");
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw InvalidArgument("eig_sym: matrix not symmetric (max |H - H^T| = " +
                          std::to_string(asym) + ")");
  }
}

}  // namespace

std::vector<DegeneracyGroup> group_degenerate(const Eigen::VectorXd& sorted_values,
                                              double tolerance) {
  std::vector<DegeneracyGroup> groups;
  const int n = static_cast<int>(sorted_values.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || sorted_values[i] - sorted_values[i - 1] > tolerance) {
      const int size = i - begin;
      groups.push_back({begin, size, sorted_values.segment(begin, size).mean()});
      begin = i;
    }
  }
  return groups;
}

SpectrumResult eig_sym(const Eigen::MatrixXd& matrix) {
  check_symmetric(matrix);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eig_sym: QR iteration did not converge");
  SpectrumResult out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.groups = group_degenerate(out.eigenvalues);
  return out;
}

Eigen::VectorXd eigvals_sym(const Eigen::MatrixXd& matrix) {
  check_symmetric(matrix);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigvals_sym: QR iteration did not converge");
  return solver.eigenvalues();
}

std::vector<double> gamma_grid(double from, double to, int points) {
  if (!(from < to)) throw InvalidArgument("gamma grid needs from < to");
  if (points < 2) throw InvalidArgument("gamma grid needs at least 2 points");
  std::vector<double> grid(points);
  const double step = (to - from) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = from + step * i;
  grid.back() = to;
  return grid;
}

int grid_points(double from, double to, double step) {
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(from < to)) throw InvalidArgument("grid needs from < to");
  return static_cast<int>(std::lround((to - from) / step)) + 1;
}

GammaSweep gamma_sweep(const LatticeSpec& spec, const SiteId& marked, double gamma_from,
                       double gamma_to, int points) {
  GammaSweep sweep{spec, marked, gamma_grid(gamma_from, gamma_to, points), {}, {}, {}, {}, {}, {}};
  const auto adj = build_lattice(spec);
  const Eigen::MatrixXd w = perturbation_matrix(spec, Perturbation{marked});
  const int marked_index = site_index(spec, marked);
  const Eigen::VectorXd ell = neighbor_state(spec, marked).real();

  const std::size_t total = sweep.gammas.size();
  sweep.spectra.resize(total);
  sweep.branch_index.resize(total);
  sweep.branch_energy.resize(total);
  sweep.branch_weight.resize(total);
  sweep.continuity.assign(total, 1.0);
  sweep.broken.assign(total, false);

  // Eigenvectors are only needed for the branch pick, so spectra are computed in batches
  // that are reduced in grid order before the next batch starts.
  const std::size_t batch = static_cast<std::size_t>(std::max(1, worker_count()));
  Eigen::VectorXd previous_upper;
  std::vector<SpectrumResult> results(batch);
  for (std::size_t start = 0; start < total; start += batch) {
    const std::size_t count = std::min(batch, total - start);
    parallel_for(count, [&](std::size_t k) {
      results[k] = eig_sym(-sweep.gammas[start + k] * adj.dense() + w);
    });
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t g = start + k;
      const auto& res = results[k];
      const Eigen::RowVectorXd ell_proj = ell.transpose() * res.eigenvectors;
      const Eigen::RowVectorXd weight =
          res.eigenvectors.row(marked_index).array().square() + ell_proj.array().square();

      int upper = -1;
      int lower = -1;
      for (int i = 0; i < res.dimension(); ++i) {
        const double e = res.eigenvalues[i];
        if (e > kBranchZeroTolerance && (upper < 0 || weight[i] > weight[upper])) upper = i;
        if (e < -kBranchZeroTolerance && (lower < 0 || weight[i] > weight[lower])) lower = i;
      }
      if (upper < 0 || lower < 0) {
        throw NumericalFailure("gamma sweep: no non-zero eigenvalue at gamma = " +
                               std::to_string(sweep.gammas[g]));
      }
      sweep.spectra[g] = res.eigenvalues;
      sweep.branch_index[g] = {upper, lower};
      sweep.branch_energy[g] = {res.eigenvalues[upper], res.eigenvalues[lower]};
      sweep.branch_weight[g] = weight[upper];
      const Eigen::VectorXd current = res.eigenvectors.col(upper);
      if (g > 0) {
        sweep.continuity[g] = std::abs(previous_upper.dot(current));
        sweep.broken[g] = sweep.continuity[g] < 0.5;
      }
      previous_upper = current;
    }
  }
  return sweep;
}

CrossingLocation locate_crossing(const GammaSweep& sweep) {
  if (sweep.gammas.empty()) throw InvalidArgument("locate_crossing: empty sweep");
  CrossingLocation best;
  double best_sep = 0.0;
  for (std::size_t g = 0; g < sweep.gammas.size(); ++g) {
    const double sep = sweep.branch_energy[g][0] - sweep.branch_energy[g][1];
    if (g == 0 || sep < best_sep) {
      best_sep = sep;
      best.index = static_cast<int>(g);
      best.gamma = sweep.gammas[g];
      best.upper = sweep.branch_energy[g][0];
      best.lower = sweep.branch_energy[g][1];
    }
  }
  return best;
}

double spectral_asymmetry(const Eigen::VectorXd& sorted_values) {
  const auto n = sorted_values.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(sorted_values[i] + sorted_values[n - 1 - i]));
  }
  return worst;
}

GapResult gap_at_crossing(const LatticeSpec& spec, const SiteId& marked) {
  const auto h = build_search_hamiltonian(spec, 1.0, marked);
  return gap_from_spectrum(spec, marked, eig_sym(h.matrix()));
}

GapResult gap_from_spectrum(const LatticeSpec& spec, const SiteId& marked,
                            const SpectrumResult& spectrum) {
  if (!spec.dirac_exact()) {
    throw DiracUnavailable("gap at the crossing needs exact Dirac states");
  }
  if (spectrum.dimension() != spec.sites()) {
    throw InvalidArgument("gap_from_spectrum: spectrum dimension does not match lattice");
  }
  const auto& values = spectrum.eigenvalues;
  GapResult out;
  int first_zero = -1;
  for (int i = 0; i < spectrum.dimension(); ++i) {
    const double e = values[i];
    if (e < -kZeroModeTolerance) {
      out.e_minus = e;
      out.e_minus_index = i;
    } else if (e <= kZeroModeTolerance) {
      if (first_zero < 0) first_zero = i;
      ++out.zero_modes;
    } else {
      out.e_plus = e;
      out.e_plus_index = i;
      break;
    }
  }
  if (out.e_plus <= 0.0 || out.e_minus >= 0.0) {
    throw NumericalFailure("gap: no eigenvalue on one side of the zero modes");
  }

  // Threshold alone is fragile at this degeneracy: the known analytic zero modes must lie
  // inside the excluded eigenspace.
  if (out.zero_modes < 4) {
    throw NumericalFailure("gap: expected at least 4 zero modes at gamma = 1, found " +
                           std::to_string(out.zero_modes) + " (wrong gamma?)");
  }
  const Eigen::MatrixXd zero_space = spectrum.eigenvectors.middleCols(first_zero, out.zero_modes);
  const Sublattice other = opposite(marked.sublattice);
  const auto k_other = dirac_state(spec, Valley::K, other);
  const auto kp_other = dirac_state(spec, Valley::KPrime, other);
  const auto red = reduced_hamiltonian(spec, marked);
  const WaveFunction psi0 = red.eigenvectors(0, 1) * dirac_state(spec, Valley::K, marked.sublattice) +
                            red.eigenvectors(1, 1) * dirac_state(spec, Valley::KPrime, marked.sublattice);
  for (const WaveFunction& mode : {site_state(spec, marked), k_other, kp_other, psi0}) {
    const Eigen::VectorXd re = mode.real();
    const Eigen::VectorXd im = mode.imag();
    const double captured = (zero_space.transpose() * re).squaredNorm() +
                            (zero_space.transpose() * im).squaredNorm();
    if (std::abs(captured - mode.squaredNorm()) > 1e-8) {
      throw NumericalFailure("gap: analytic zero mode not contained in the |E| <= 1e-10 eigenspace");
    }
  }

  const double eps_min = smallest_positive_energy(spec);
  if (out.e_plus >= eps_min) {
    throw NumericalFailure("gap: no perturbed level below the smallest unperturbed level " +
                           std::to_string(eps_min) + " (wrong gamma?)");
  }
  if (std::abs(out.e_plus + out.e_minus) > 1e-9) {
    throw NumericalFailure("gap: E+ and E- are not symmetric about 0");
  }
  out.gap = out.e_plus - out.e_minus;
  return out;
}

}  // namespace gsearch
