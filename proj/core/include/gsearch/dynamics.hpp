#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gsearch/lattice.hpp"
#include "gsearch/search.hpp"
#include "gsearch/spectral.hpp"

namespace gsearch {

/// Largest accepted deviation of ||psi(t)|| from 1.
inline constexpr double kNormTolerance = 1e-10;

/// psi(t) = sum_a exp(-i E_a t) |psi_a><psi_a|psi0> over a full eigendecomposition.
/// At t = 0 the stored psi0 is returned exactly.
class Propagator {
 public:
  Propagator(std::shared_ptr<const SpectrumResult> spectrum, const WaveFunction& psi0);

  const SpectrumResult& spectrum() const noexcept { return *spectrum_; }
  /// <psi_a|psi0> in eigenvalue order.
  const Eigen::VectorXcd& coefficients() const noexcept { return coefficients_; }

  WaveFunction state_at(double t) const;
  /// One column per time.
  Eigen::MatrixXcd states_at(std::span<const double> times) const;
  /// <bra_i|psi(t)> for each row bra_i^dagger of `bras` (rows x N) and each time (columns).
  Eigen::MatrixXcd projections(const Eigen::MatrixXcd& bras, std::span<const double> times) const;

 private:
  std::shared_ptr<const SpectrumResult> spectrum_;
  WaveFunction initial_;
  Eigen::VectorXcd coefficients_;
};

/// States at ascending times; psi0 must have unit norm. Norm is checked at every time.
std::vector<WaveFunction> propagate(const SearchHamiltonian& h, const WaveFunction& psi0,
                                    std::span<const double> times);

/// t_i = i dt for i = 0 .. floor(t_max/dt) (t_max itself included when it is a grid point).
std::vector<double> time_grid(double dt, double t_max);

/// (pi/4) sqrt(N/3), the three-state rotation time.
double reduced_search_time(const LatticeSpec& spec) noexcept;

enum class StartKind { Optimal, UniformDirac, Custom };

struct SearchOptions {
  StartKind start = StartKind::Optimal;
  WaveFunction custom;  ///< used when start == Custom
  double dt = 0.0;      ///< 0 selects reduced_search_time / 200
  double t_max = 0.0;   ///< 0 selects 2.5 reduced_search_time
};

struct SearchRun {
  LatticeSpec spec;
  SiteId marked;
  StartKind start = StartKind::Optimal;
  std::array<SiteId, 3> neighbors;
  double dt = 0.0;
  double t_max = 0.0;
  std::vector<double> times{};
  std::vector<double> p_total{};  ///< sum of the three neighbour-site probabilities
  std::array<std::vector<double>, 3> p_site{};
  std::vector<double> p_marked{};
  std::vector<double> p_ell{};  ///< |<l|psi(t)>|^2
  double max_norm_error = 0.0;

  double t_peak = 0.0;  ///< grid argmax of p_total, parabola-refined
  double p_peak = 0.0;  ///< p_total evaluated at t_peak
  std::complex<double> ell_amplitude_at_peak{};
  double mean_site_probability = 0.0;  ///< ||psi(t_peak)||^2 / N

  double e_plus = 0.0;     ///< smallest positive non-zero-mode eigenvalue
  double t_reduced = 0.0;  ///< (pi/4) sqrt(N/3)
  double t_gap = 0.0;      ///< pi / (2 E_+)
};

/// Search at gamma = 1. Rejects dt > pi/(8 E_+). Optimal and uniform starts need dirac_exact.
SearchRun run_search(const LatticeSpec& spec, const SiteId& marked, const SearchOptions& options = {});
/// Same, reusing the eigendecomposition of H_{gamma=1} for this marked site.
SearchRun run_search(const LatticeSpec& spec, const SiteId& marked, const SearchOptions& options,
                     std::shared_ptr<const SpectrumResult> spectrum);

struct ResolventAmplitude {
  std::vector<double> times{};
  std::vector<std::complex<double>> full{};  ///< <m|s> sum_a exp(-i E_a t) / (E_a |F'(E_a)|)
  std::vector<double> envelope{};            ///< |sin(E_+ t)| / (3^(1/4) I_2^(1/2))
  std::vector<double> energies{};            ///< roots E_a of F
  std::vector<double> weights{};             ///< 1 / (E_a |F'(E_a)|)
  double e_plus = 0.0;
  double i2 = 0.0;
  std::complex<double> marked_overlap;  ///< <m|s>
};

/// <l|exp(-iHt)|s> for the optimal start state from the roots of F alone.
ResolventAmplitude amplitude_via_resolvent(const LatticeSpec& spec, const SiteId& marked,
                                           std::span<const double> times);

enum class SublatticePair { Same, Cross };

struct TransferRun {
  LatticeSpec spec;
  SiteId first;
  SiteId second;
  SublatticePair pairing = SublatticePair::Same;
  double dt = 0.0;
  double t_max = 0.0;
  double window = 0.0;    ///< |E| < window spans the initial state
  int window_states = 0;  ///< eigenvectors inside the window
  double initial_localization = 0.0;  ///< |<l_1|psi(0)>|^2
  std::vector<double> times{};
  std::vector<double> p_ell1{};
  std::vector<double> p_ell2{};
  double max_norm_error = 0.0;
  double p2_max = 0.0;
  /// First local maximum of p_ell2 reaching half of p2_max, parabola-refined; empty when absent.
  std::optional<double> period{};
  double p2_at_period = 0.0;
};

/// Two perturbations at gamma = 1. psi(0) is |l_1> projected onto the eigenvectors with
/// |E| < eps_min/2 and renormalised. dt and t_max of 0 select reduced_search_time/20 and
/// 150 reduced_search_time.
TransferRun run_transfer(const LatticeSpec& spec, const SiteId& first, const SiteId& second,
                         double dt = 0.0, double t_max = 0.0);

/// Vertex of the parabola through (x-1, x, x+1) samples at index i, clamped to the grid.
double parabolic_peak(std::span<const double> times, std::span<const double> values, std::size_t i);

}  // namespace gsearch
