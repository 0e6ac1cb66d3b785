#include "gsearch/search.hpp"

#include <cmath>

#include "gsearch/errors.hpp"

namespace gsearch {

namespace {

using cd = std::complex<double>;

void require_dirac(const LatticeSpec& spec) {
  if (!spec.dirac_exact()) {
    throw DiracUnavailable(std::to_string(spec.m()) + "x" + std::to_string(spec.n()) +
                           " torus has no exact Dirac states");
  }
}

// Value of the (valley, sublattice) Dirac state at the marked cell divided by sqrt(2/N).
int marked_residue(Valley valley, const SiteId& marked) noexcept {
  return dirac_phase_residue(valley, marked.sublattice, marked.alpha, marked.beta);
}

}  // namespace

Eigen::MatrixXd perturbation_matrix(const LatticeSpec& spec, const Perturbation& w) {
  const int n_sites = spec.sites();
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n_sites, n_sites);
  const int m = site_index(spec, w.marked);
  // strength * <j|l> with <j|l> = 1/sqrt(3); dividing keeps sqrt(3)/sqrt(3) == 1 exactly.
  const double entry = w.strength / std::numbers::sqrt3;
  for (const auto& nb : neighbors_of(spec, w.marked)) {
    const int j = site_index(spec, nb);
    mat(m, j) += entry;
    mat(j, m) += entry;
  }
  return mat;
}

SearchHamiltonian build_search_hamiltonian(const LatticeSpec& spec, double gamma,
                                           const SiteId& marked) {
  return build_search_hamiltonian(spec, gamma, std::span<const SiteId>(&marked, 1));
}

SearchHamiltonian build_search_hamiltonian(const LatticeSpec& spec, double gamma,
                                           std::span<const SiteId> marked) {
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  SearchHamiltonian h(spec, gamma);
  h.marked_.assign(marked.begin(), marked.end());
  const auto adj = build_lattice(spec);
  h.matrix_ = -gamma * adj.dense();
  for (const auto& site : marked) {
    h.matrix_ += perturbation_matrix(spec, Perturbation{site});
  }
  return h;
}

WaveFunction site_state(const LatticeSpec& spec, const SiteId& site) {
  WaveFunction v = WaveFunction::Zero(spec.sites());
  v[site_index(spec, site)] = 1.0;
  return v;
}

WaveFunction neighbor_state(const LatticeSpec& spec, const SiteId& marked) {
  WaveFunction v = WaveFunction::Zero(spec.sites());
  const double amp = 1.0 / std::numbers::sqrt3;
  for (const auto& nb : neighbors_of(spec, marked)) v[site_index(spec, nb)] = amp;
  return v;
}

ReducedHamiltonian reduced_hamiltonian(const LatticeSpec& spec, const SiteId& marked) {
  require_dirac(spec);
  if (!spec.contains(marked)) throw InvalidArgument("marked site outside torus");
  const int n_sites = spec.sites();
  const double g = std::sqrt(6.0 / n_sites);
  const cd phase_k = omega_power(marked_residue(Valley::K, marked));
  const cd phase_kp = omega_power(marked_residue(Valley::KPrime, marked));

  ReducedHamiltonian red;
  red.marked = marked;
  red.n_sites = n_sites;
  red.matrix.setZero();
  red.matrix(0, 2) = g * std::conj(phase_k);
  red.matrix(1, 2) = g * std::conj(phase_kp);
  red.matrix(2, 0) = g * phase_k;
  red.matrix(2, 1) = g * phase_kp;

  const double e = 2.0 * std::sqrt(3.0 / n_sites);
  red.eigenvalues << -e, 0.0, e;

  const double r2 = std::numbers::sqrt2;
  Eigen::Vector3cd plus(0.5 * std::conj(phase_k), 0.5 * std::conj(phase_kp), 0.5 * r2);
  Eigen::Vector3cd minus(0.5 * std::conj(phase_k), 0.5 * std::conj(phase_kp), -0.5 * r2);
  Eigen::Vector3cd zero(std::conj(phase_k) / r2, -std::conj(phase_kp) / r2, 0.0);
  red.eigenvectors.col(0) = minus;
  red.eigenvectors.col(1) = zero;
  red.eigenvectors.col(2) = plus;
  return red;
}

Eigen::Matrix3cd project_onto_reduced_basis(const SearchHamiltonian& h, const SiteId& marked) {
  const auto& spec = h.spec();
  require_dirac(spec);
  std::array<WaveFunction, 3> basis{dirac_state(spec, Valley::K, marked.sublattice),
                                    dirac_state(spec, Valley::KPrime, marked.sublattice),
                                    neighbor_state(spec, marked)};
  const Eigen::MatrixXcd hc = h.matrix().cast<cd>();
  Eigen::Matrix3cd out;
  for (int i = 0; i < 3; ++i) {
    const WaveFunction hb = hc * basis[i];
    for (int j = 0; j < 3; ++j) out(j, i) = basis[j].dot(hb);
  }
  return out;
}

WaveFunction optimal_start_state(const LatticeSpec& spec, const SiteId& marked) {
  const auto red = reduced_hamiltonian(spec, marked);
  // (psi_+ + psi_-)/sqrt 2 has no |l> component; its K, K' coefficients are conj phases / sqrt 2.
  const Eigen::Vector3cd coeffs = (red.eigenvectors.col(2) + red.eigenvectors.col(0)) /
                                  std::numbers::sqrt2;
  return coeffs[0] * dirac_state(spec, Valley::K, marked.sublattice) +
         coeffs[1] * dirac_state(spec, Valley::KPrime, marked.sublattice);
}

int start_state_class(const SiteId& marked) noexcept {
  const int diff = marked_residue(Valley::KPrime, marked) - marked_residue(Valley::K, marked);
  return ((diff % 3) + 3) % 3;
}

std::array<WaveFunction, 6> enumerate_start_states(const LatticeSpec& spec) {
  require_dirac(spec);
  std::array<WaveFunction, 6> out;
  std::size_t i = 0;
  for (Sublattice sub : {Sublattice::A, Sublattice::B}) {
    const auto k = dirac_state(spec, Valley::K, sub);
    const auto kp = dirac_state(spec, Valley::KPrime, sub);
    for (int r = 0; r < 3; ++r) {
      out[i++] = (k + std::conj(omega_power(r)) * kp) / std::numbers::sqrt2;
    }
  }
  return out;
}

WaveFunction uniform_dirac_state(const LatticeSpec& spec) {
  WaveFunction u = WaveFunction::Zero(spec.sites());
  for (const auto& d : dirac_states(spec)) u += d.amplitudes;
  return 0.5 * u;
}

}  // namespace gsearch
