#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gsearch/lattice.hpp"

namespace gsearch {

/// Poles closer than this are merged into one pole with multiplicity.
inline constexpr double kPoleMergeTolerance = 1e-10;
/// Evaluating F or F' within this distance of a pole raises PoleProximity.
inline constexpr double kPoleProximity = 1e-12;

/// Quantisation function of a marked site at gamma = 1:
///   F(E) = (sqrt3/N) sum_k [1/(E - eps(k)) + 1/(E + eps(k))].
/// Perturbed eigenenergies with weight on |l> are exactly the roots of F. F' < 0 everywhere,
/// so every interval between consecutive poles holds exactly one root.
class Resolvent {
 public:
  explicit Resolvent(const LatticeSpec& spec);

  const LatticeSpec& spec() const noexcept { return spec_; }
  /// Distinct positive band magnitudes, ascending.
  const std::vector<double>& poles() const noexcept { return poles_; }
  const std::vector<int>& multiplicities() const noexcept { return multiplicity_; }
  /// Momenta exactly at K or K' (0 or 2); each adds 2/E to the bracket sum.
  int dirac_count() const noexcept { return dirac_count_; }
  double smallest_pole() const noexcept { return poles_.front(); }

  double F(double energy) const;
  double dF(double energy) const;

  /// Every real root of F, ascending (one per interval between consecutive distinct poles,
  /// the pole at 0 included when Dirac momenta exist).
  std::vector<double> roots() const;

 private:
  void check_distance(double energy) const;
  double F_unchecked(double energy) const;
  double dF_unchecked(double energy) const;
  double bisect(double lo, double hi) const;

  LatticeSpec spec_;
  std::vector<double> poles_;
  std::vector<int> multiplicity_;
  int dirac_count_ = 0;
  double prefactor_ = 0.0;
};

double resolvent_F(const LatticeSpec& spec, double energy);
double resolvent_dF(const LatticeSpec& spec, double energy);

/// Smallest positive root E_+ of F on (1e-6 eps_min, eps_min (1 - 1e-6)): bisection to 1e-13
/// followed by one secant step. Guarantees |F(E_+)| <= 1e-12 |F'(E_+)| E_+.
double resolvent_root(const LatticeSpec& spec);

/// I_2, I_4, ..., I_{2 n_max} with I_{2n} = (2 sqrt3 / N) sum_{k != K,K'} eps(k)^{-2n}.
/// Odd moments vanish identically and are not returned.
std::vector<double> moment_sums(const LatticeSpec& spec, int n_max);

struct ZetaResult {
  double value = 0.0;          ///< truncated sum plus tail estimate
  double truncated = 0.0;      ///< sum over 0 < max(|p|,|q|) <= R
  double tail_estimate = 0.0;  ///< integral over the exterior of the square of half-width R + 1/2
  double tail_bound = 0.0;     ///< pi lambda_min^{-x} R^{2-2x} / (2x - 2)
};

/// Z_2(S, x) = 1/2 sum_{(p,q) != 0} (S11 p^2 + 2 S12 p q + S22 q^2)^{-x}.
/// Requires S positive definite, x >= 2 and cutoff >= 10.
ZetaResult epstein_zeta(const Eigen::Matrix2d& form, double x, int cutoff);

/// S_K = S_K' = 4 pi^2 [[2, -1], [-1, 2]].
Eigen::Matrix2d dirac_form_matrix();

struct MomentLimitRow {
  int m = 0;
  int n = 0;
  int sites = 0;
  double moment = 0.0;  ///< I_{2k}
  double ratio = 0.0;   ///< I_{2k} / N^{k-1}
};

struct MomentLimitReport {
  int k = 2;
  std::vector<MomentLimitRow> rows;
  double zeta = 0.0;               ///< Z_2(S_K, k) = Z_2(S_K', k)
  double limit_4sqrt3 = 0.0;       ///< 4 sqrt3 (Z_2(S_K,k) + Z_2(S_K',k))
  double limit_2sqrt3 = 0.0;       ///< 2 sqrt3 (Z_2(S_K,k) + Z_2(S_K',k))
  double favoured_prefactor = 0.0; ///< 4 sqrt3 or 2 sqrt3, whichever limit the last ratio is nearer
  bool monotone = false;           ///< ratios strictly monotone across the rows
  bool converging = false;         ///< successive ratio steps shrink
};

/// Compares I_{2k}/N^{k-1} with both candidate limits. Requires k >= 2 and dirac_exact specs.
MomentLimitReport verify_moment_limit(const std::vector<LatticeSpec>& specs, int k);

}  // namespace gsearch
