#include "gsearch/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsearch/errors.hpp"

namespace gsearch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadicandSlack = 1e-12;

bool is_dirac_momentum(const LatticeSpec& spec, int p, int q) noexcept {
  if (!spec.dirac_exact()) return false;
  const int m3 = spec.m() / 3;
  const int n3 = spec.n() / 3;
  return (p == m3 && q == 2 * n3) || (p == 2 * m3 && q == n3);
}

}  // namespace

std::vector<QuasiMomentum> momentum_grid(const LatticeSpec& spec) {
  std::vector<QuasiMomentum> grid;
  grid.reserve(spec.cells());
  for (int p = 0; p < spec.m(); ++p) {
    for (int q = 0; q < spec.n(); ++q) {
      QuasiMomentum k;
      k.p = p;
      k.q = q;
      k.kx = 2.0 * kPi * p / spec.m();
      k.ky = (4.0 * kPi * q / spec.n() - k.kx) / std::numbers::sqrt3;
      k.dirac = is_dirac_momentum(spec, p, q);
      grid.push_back(k);
    }
  }
  return grid;
}

double band_magnitude(double kx, double ky) {
  const double cx = std::cos(0.5 * kx);
  const double radicand = 1.0 + 4.0 * cx * cx + 4.0 * cx * std::cos(0.5 * std::numbers::sqrt3 * ky);
  if (radicand < -kRadicandSlack) {
    throw NumericalFailure("negative dispersion radicand " + std::to_string(radicand));
  }
  return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

BandPair dispersion(const QuasiMomentum& k, double v, double eps_d) {
  const double mag = k.dirac ? 0.0 : band_magnitude(k.kx, k.ky);
  return {eps_d + v * mag, eps_d - v * mag};
}

std::vector<double> band_energies(const LatticeSpec& spec) {
  std::vector<double> out;
  out.reserve(spec.cells());
  for (const auto& k : momentum_grid(spec)) out.push_back(dispersion(k).upper);
  return out;
}

std::vector<double> unperturbed_spectrum(const LatticeSpec& spec, double v, double eps_d) {
  std::vector<double> out;
  out.reserve(spec.sites());
  for (const auto& k : momentum_grid(spec)) {
    const auto bands = dispersion(k, v, eps_d);
    out.push_back(bands.upper);
    out.push_back(bands.lower);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double smallest_positive_energy(const LatticeSpec& spec) {
  double best = 0.0;
  for (const auto& k : momentum_grid(spec)) {
    if (k.dirac) continue;
    const double e = band_magnitude(k.kx, k.ky);
    // Non-exact specs never hit eps = 0, but roundoff can leave ~1e-8 near K.
    if (e > 1e-9 && (best == 0.0 || e < best)) best = e;
  }
  return best;
}

std::complex<double> omega_power(int r) noexcept {
  static constexpr double kHalfSqrt3 = 0.5 * std::numbers::sqrt3;
  switch (((r % 3) + 3) % 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {-0.5, kHalfSqrt3};
    default:
      return {-0.5, -kHalfSqrt3};
  }
}

int dirac_phase_residue(Valley valley, Sublattice sublattice, int alpha, int beta) noexcept {
  const int sigma = sublattice == Sublattice::B ? 1 : 0;
  const int r = valley == Valley::K ? alpha + 2 * beta + 2 * sigma : 2 * alpha + beta;
  return ((r % 3) + 3) % 3;
}

Eigen::VectorXcd dirac_state(const LatticeSpec& spec, Valley valley, Sublattice sublattice) {
  if (!spec.dirac_exact()) {
    throw DiracUnavailable(std::to_string(spec.m()) + "x" + std::to_string(spec.n()) +
                           " torus is not a multiple of 3 in both directions");
  }
  const double amp = std::sqrt(2.0 / spec.sites());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.sites());
  for (int a = 0; a < spec.m(); ++a) {
    for (int b = 0; b < spec.n(); ++b) {
      const int i = site_index(spec, SiteId{a, b, sublattice});
      v[i] = amp * omega_power(dirac_phase_residue(valley, sublattice, a, b));
    }
  }
  return v;
}

std::array<DiracState, 4> dirac_states(const LatticeSpec& spec) {
  std::array<DiracState, 4> out;
  std::size_t i = 0;
  for (Sublattice sub : {Sublattice::A, Sublattice::B}) {
    for (Valley valley : {Valley::K, Valley::KPrime}) {
      out[i++] = DiracState{valley, sub, dirac_state(spec, valley, sub)};
    }
  }
  return out;
}

}  // namespace gsearch
