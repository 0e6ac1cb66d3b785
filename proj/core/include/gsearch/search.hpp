#pragma once

#include <array>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gsearch/bloch.hpp"
#include "gsearch/lattice.hpp"

namespace gsearch {

/// Complex amplitudes over the N sites; constructors return unit-norm states.
using WaveFunction = Eigen::VectorXcd;

/// Bond perturbation W = s (|marked><l| + |l><marked|), rank 2.
struct Perturbation {
  SiteId marked;
  double strength = std::numbers::sqrt3;
};

/// Real symmetric N x N matrix of a single perturbation.
Eigen::MatrixXd perturbation_matrix(const LatticeSpec& spec, const Perturbation& w);

/// H = -gamma A + sum_i W_i.
class SearchHamiltonian {
 public:
  const LatticeSpec& spec() const noexcept { return spec_; }
  double gamma() const noexcept { return gamma_; }
  const std::vector<SiteId>& marked() const noexcept { return marked_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

 private:
  friend SearchHamiltonian build_search_hamiltonian(const LatticeSpec&, double,
                                                    std::span<const SiteId>);
  SearchHamiltonian(const LatticeSpec& spec, double gamma) : spec_(spec), gamma_(gamma) {}

  LatticeSpec spec_;
  double gamma_;
  std::vector<SiteId> marked_;
  Eigen::MatrixXd matrix_;
};

SearchHamiltonian build_search_hamiltonian(const LatticeSpec& spec, double gamma,
                                           const SiteId& marked);
/// Several marked sites, each with the default sqrt(3) perturbation (used for state transfer).
SearchHamiltonian build_search_hamiltonian(const LatticeSpec& spec, double gamma,
                                           std::span<const SiteId> marked);

/// |site>.
WaveFunction site_state(const LatticeSpec& spec, const SiteId& site);

/// |l> = (1/sqrt 3) * sum of the three neighbours of marked.
WaveFunction neighbor_state(const LatticeSpec& spec, const SiteId& marked);

/// Three-state model on the basis (|K>, |K'>, |l>), Dirac states taken on the marked
/// sublattice. For an A site the matrix is
///   sqrt(6/N) [[0, 0, w^-r_K], [0, 0, w^-r_K'], [w^r_K, w^r_K', 0]],  w = exp(2 pi i / 3).
struct ReducedHamiltonian {
  SiteId marked;
  int n_sites = 0;
  Eigen::Matrix3cd matrix;
  /// Ascending: -2 sqrt(3/N), 0, +2 sqrt(3/N).
  Eigen::Vector3d eigenvalues;
  /// Columns aligned with eigenvalues: psi_-, psi_0, psi_+ in closed form.
  Eigen::Matrix3cd eigenvectors;
};

ReducedHamiltonian reduced_hamiltonian(const LatticeSpec& spec, const SiteId& marked);

/// <b_i| H |b_j> over (|K>, |K'>, |l>) for a full Hamiltonian; used to check the three-state model.
Eigen::Matrix3cd project_onto_reduced_basis(const SearchHamiltonian& h, const SiteId& marked);

/// |s> = (psi_+ + psi_-)/sqrt 2 expanded on the lattice, global phase included.
WaveFunction optimal_start_state(const LatticeSpec& spec, const SiteId& marked);

/// Residue class (0..2) selecting which of the three sublattice start states fits `marked`.
int start_state_class(const SiteId& marked) noexcept;

/// Candidate start states without knowledge of the marked site: entries 0..2 are the A-type
/// classes, 3..5 the B-type. Canonical global phase (coefficient of |K> is real positive).
std::array<WaveFunction, 6> enumerate_start_states(const LatticeSpec& spec);

/// (|K>^A + |K'>^A + |K>^B + |K'>^B) / 2.
WaveFunction uniform_dirac_state(const LatticeSpec& spec);

}  // namespace gsearch
