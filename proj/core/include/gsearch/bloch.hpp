#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gsearch/lattice.hpp"

namespace gsearch {

/// Quantised Bloch momentum (lattice constant a = 1):
///   k_x = 2 pi p / m,   k_y = (4 pi q / n - k_x) / sqrt(3).
struct QuasiMomentum {
  int p = 0;
  int q = 0;
  double kx = 0.0;
  double ky = 0.0;
  /// Exactly at K or K'; only possible on dirac_exact lattices.
  bool dirac = false;
};

std::vector<QuasiMomentum> momentum_grid(const LatticeSpec& spec);

/// |1 + 4cos^2(kx/2) + 4cos(kx/2)cos(sqrt(3)ky/2)|^(1/2), the band magnitude at unit hopping.
/// Radicands down to -1e-12 are clamped to zero; anything more negative throws NumericalFailure.
double band_magnitude(double kx, double ky);

struct BandPair {
  double upper = 0.0;
  double lower = 0.0;
};

/// eps_D +- v * band_magnitude(k); exact zero magnitude at Dirac momenta.
BandPair dispersion(const QuasiMomentum& k, double v = 1.0, double eps_d = 0.0);

/// Non-negative band magnitudes, one per momentum of the grid (Dirac momenta give exactly 0).
std::vector<double> band_energies(const LatticeSpec& spec);

/// All N band energies eps_D +- v * eps(k), sorted ascending.
std::vector<double> unperturbed_spectrum(const LatticeSpec& spec, double v = 1.0,
                                         double eps_d = 0.0);

/// Smallest strictly positive band magnitude.
double smallest_positive_energy(const LatticeSpec& spec);

enum class Valley { K, KPrime };

struct DiracState {
  Valley valley = Valley::K;
  Sublattice sublattice = Sublattice::A;
  Eigen::VectorXcd amplitudes;
};

/// Cube root of unity omega^r, taken from an exact table.
std::complex<double> omega_power(int r) noexcept;

/// Phase exponent r (mod 3) of the Dirac state on cell (alpha, beta):
///   K : alpha + 2 beta + 2 sigma,   K' : 2 alpha + beta,   sigma = 1 on B.
int dirac_phase_residue(Valley valley, Sublattice sublattice, int alpha, int beta) noexcept;

/// sqrt(2/N) sum omega^r |alpha,beta>^sublattice. Throws DiracUnavailable when !dirac_exact.
Eigen::VectorXcd dirac_state(const LatticeSpec& spec, Valley valley, Sublattice sublattice);

/// The four zero modes of the torus in the order (K,A), (K',A), (K,B), (K',B).
std::array<DiracState, 4> dirac_states(const LatticeSpec& spec);

}  // namespace gsearch
