#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gsearch {

enum class Sublattice : std::uint8_t { A = 0, B = 1 };

constexpr Sublattice opposite(Sublattice s) noexcept {
  return s == Sublattice::A ? Sublattice::B : Sublattice::A;
}

constexpr char to_char(Sublattice s) noexcept { return s == Sublattice::A ? 'A' : 'B'; }

/// A site of the honeycomb torus: cell (alpha, beta) and the sublattice within the cell.
struct SiteId {
  int alpha = 0;
  int beta = 0;
  Sublattice sublattice = Sublattice::A;

  friend auto operator<=>(const SiteId&, const SiteId&) = default;
};

std::string to_string(const SiteId& site);

/// Torus of m x n unit cells spanned by a1 and a2; N = 2mn sites.
class LatticeSpec {
 public:
  LatticeSpec(int m, int n);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int cells() const noexcept { return m_ * n_; }
  int sites() const noexcept { return 2 * m_ * n_; }

  /// True when both m and n are multiples of 3, i.e. K and K' lie on the momentum grid.
  bool dirac_exact() const noexcept { return m_ % 3 == 0 && n_ % 3 == 0; }

  bool contains(const SiteId& site) const noexcept;

  /// Reduces (alpha, beta) modulo (m, n).
  SiteId wrap(int alpha, int beta, Sublattice sublattice) const noexcept;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  int m_;
  int n_;
};

/// Flat index: the A block (row-major in alpha, beta) followed by the B block.
int site_index(const LatticeSpec& spec, const SiteId& site);
SiteId index_site(const LatticeSpec& spec, int index);

/// The three nearest neighbours on the opposite sublattice.
///   A(a,b) -> B(a,b), B(a,b-1), B(a+1,b-1)
///   B(a,b) -> A(a,b), A(a,b+1), A(a-1,b+1)
std::array<SiteId, 3> neighbors_of(const LatticeSpec& spec, const SiteId& site);

/// Adjacency of the honeycomb torus, dense plus a neighbour-list view.
class AdjacencyMatrix {
 public:
  const LatticeSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return spec_.sites(); }

  const Eigen::MatrixXd& dense() const noexcept { return dense_; }
  const std::vector<std::array<int, 3>>& neighbor_lists() const noexcept { return neighbors_; }

  /// O(N) product A * v using the neighbour lists.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

 private:
  friend AdjacencyMatrix build_lattice(const LatticeSpec& spec);
  explicit AdjacencyMatrix(const LatticeSpec& spec) : spec_(spec) {}

  LatticeSpec spec_;
  Eigen::MatrixXd dense_;
  std::vector<std::array<int, 3>> neighbors_;
};

AdjacencyMatrix build_lattice(const LatticeSpec& spec);

}  // namespace gsearch
