#include "gsearch/lattice.hpp"

#include "gsearch/errors.hpp"

namespace gsearch {

namespace {

int positive_mod(int value, int modulus) noexcept {
  const int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

}  // namespace

std::string to_string(const SiteId& site) {
  return std::to_string(site.alpha) + "," + std::to_string(site.beta) + "," +
         to_char(site.sublattice);
}

LatticeSpec::LatticeSpec(int m, int n) : m_(m), n_(n) {
  // Below 2 cells the periodic wrap turns distinct bonds into double edges.
  if (m < 2 || n < 2) {
    throw InvalidArgument("lattice needs m >= 2 and n >= 2 (got " + std::to_string(m) + "x" +
                          std::to_string(n) + ")");
  }
}

bool LatticeSpec::contains(const SiteId& site) const noexcept {
  return site.alpha >= 0 && site.alpha < m_ && site.beta >= 0 && site.beta < n_;
}

SiteId LatticeSpec::wrap(int alpha, int beta, Sublattice sublattice) const noexcept {
  return SiteId{positive_mod(alpha, m_), positive_mod(beta, n_), sublattice};
}

int site_index(const LatticeSpec& spec, const SiteId& site) {
  if (!spec.contains(site)) {
    throw InvalidArgument("site (" + to_string(site) + ") outside " + std::to_string(spec.m()) +
                          "x" + std::to_string(spec.n()) + " torus");
  }
  const int block = site.sublattice == Sublattice::A ? 0 : spec.cells();
  return block + site.alpha * spec.n() + site.beta;
}

SiteId index_site(const LatticeSpec& spec, int index) {
  if (index < 0 || index >= spec.sites()) {
    throw InvalidArgument("site index " + std::to_string(index) + " outside [0, " +
                          std::to_string(spec.sites()) + ")");
  }
  const Sublattice sub = index < spec.cells() ? Sublattice::A : Sublattice::B;
  const int cell = index % spec.cells();
  return SiteId{cell / spec.n(), cell % spec.n(), sub};
}

std::array<SiteId, 3> neighbors_of(const LatticeSpec& spec, const SiteId& site) {
  if (!spec.contains(site)) {
    throw InvalidArgument("site (" + to_string(site) + ") outside torus");
  }
  const int a = site.alpha;
  const int b = site.beta;
  if (site.sublattice == Sublattice::A) {
    return {spec.wrap(a, b, Sublattice::B), spec.wrap(a, b - 1, Sublattice::B),
            spec.wrap(a + 1, b - 1, Sublattice::B)};
  }
  return {spec.wrap(a, b, Sublattice::A), spec.wrap(a, b + 1, Sublattice::A),
          spec.wrap(a - 1, b + 1, Sublattice::A)};
}

Eigen::VectorXcd AdjacencyMatrix::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != dimension()) throw InvalidArgument("adjacency apply: dimension mismatch");
  Eigen::VectorXcd out(v.size());
  for (int i = 0; i < dimension(); ++i) {
    const auto& nb = neighbors_[i];
    out[i] = v[nb[0]] + v[nb[1]] + v[nb[2]];
  }
  return out;
}

Eigen::VectorXd AdjacencyMatrix::apply(const Eigen::VectorXd& v) const {
  if (v.size() != dimension()) throw InvalidArgument("adjacency apply: dimension mismatch");
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < dimension(); ++i) {
    const auto& nb = neighbors_[i];
    out[i] = v[nb[0]] + v[nb[1]] + v[nb[2]];
  }
  return out;
}

AdjacencyMatrix build_lattice(const LatticeSpec& spec) {
  AdjacencyMatrix adj(spec);
  const int n_sites = spec.sites();
  adj.dense_ = Eigen::MatrixXd::Zero(n_sites, n_sites);
  adj.neighbors_.resize(n_sites);
  for (int i = 0; i < n_sites; ++i) {
    const auto nbs = neighbors_of(spec, index_site(spec, i));
    for (int k = 0; k < 3; ++k) {
      const int j = site_index(spec, nbs[k]);
      adj.neighbors_[i][k] = j;
      adj.dense_(i, j) = 1.0;
    }
  }
  return adj;
}

}  // namespace gsearch
