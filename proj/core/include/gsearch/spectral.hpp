#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gsearch/lattice.hpp"
#include "gsearch/search.hpp"

namespace gsearch {

/// Eigenvalues closer than this (absolute, hopping units) form one degeneracy group.
inline constexpr double kDegeneracyTolerance = 1e-9;
/// Largest |H - H^T| entry accepted by eig_sym.
inline constexpr double kSymmetryTolerance = 1e-12;

struct DegeneracyGroup {
  int begin = 0;  ///< first index into the sorted eigenvalues
  int size = 0;
  double value = 0.0;  ///< mean of the group
};

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< orthonormal columns aligned with eigenvalues
  std::vector<DegeneracyGroup> groups;

  int dimension() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

std::vector<DegeneracyGroup> group_degenerate(const Eigen::VectorXd& sorted_values,
                                              double tolerance = kDegeneracyTolerance);

/// Dense symmetric eigendecomposition: Householder tridiagonalisation plus implicit-shift QR.
/// Deterministic for identical input.
SpectrumResult eig_sym(const Eigen::MatrixXd& matrix);
/// Eigenvalues only, ascending.
Eigen::VectorXd eigvals_sym(const Eigen::MatrixXd& matrix);

/// Uniform grid with inclusive endpoints, `points` >= 2 values.
std::vector<double> gamma_grid(double from, double to, int points);
/// Number of grid points for FROM:TO:STEP (rounded to the nearest integer count).
int grid_points(double from, double to, double step);

/// Spectra of H_gamma over a gamma grid with the two perturber branches picked out.
///
/// At every gamma the upper (lower) branch is the positive (negative) energy eigenvector with
/// the largest weight |<marked|v>|^2 + |<l|v>|^2; exact zero modes (|E| <= 1e-8) are skipped.
/// `continuity` holds |<v(gamma_{i-1})|v(gamma_i)>| of the upper branch; steps below 0.5 are
/// flagged in `broken`.
struct GammaSweep {
  LatticeSpec spec;
  SiteId marked;
  std::vector<double> gammas;
  std::vector<Eigen::VectorXd> spectra;
  std::vector<std::array<int, 2>> branch_index;  ///< {upper, lower}
  std::vector<std::array<double, 2>> branch_energy;
  std::vector<double> branch_weight;  ///< perturber weight of the upper branch
  std::vector<double> continuity;
  std::vector<bool> broken;
};

GammaSweep gamma_sweep(const LatticeSpec& spec, const SiteId& marked, double gamma_from,
                       double gamma_to, int points);

/// Where the perturber branches come closest to each other (and so to E = 0).
struct CrossingLocation {
  int index = 0;
  double gamma = 0.0;
  double upper = 0.0;
  double lower = 0.0;
};

CrossingLocation locate_crossing(const GammaSweep& sweep);

/// Largest |lambda_i + lambda_{N-1-i}| over one sorted spectrum.
double spectral_asymmetry(const Eigen::VectorXd& sorted_values);

struct GapResult {
  double e_plus = 0.0;
  double e_minus = 0.0;
  double gap = 0.0;
  int zero_modes = 0;       ///< eigenvalues with |E| <= 1e-10
  int e_plus_index = 0;     ///< index into the sorted spectrum
  int e_minus_index = 0;
};

/// Gap of H_{gamma=1} at the central avoided crossing. Checks that the exact zero modes
/// (|marked>, |K>^B, |K'>^B, psi_0 for an A site) span the excluded eigenspace and that
/// E_+ stays below the smallest unperturbed level.
GapResult gap_at_crossing(const LatticeSpec& spec, const SiteId& marked);
GapResult gap_from_spectrum(const LatticeSpec& spec, const SiteId& marked,
                            const SpectrumResult& spectrum);

}  // namespace gsearch
