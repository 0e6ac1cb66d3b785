#include <gtest/gtest.h>

#include <set>

#include "gsearch/errors.hpp"
#include "gsearch/lattice.hpp"
#include "oracles.hpp"

using namespace gsearch;

TEST(LatticeSpec, RejectsDegenerateTori) {
  EXPECT_THROW(LatticeSpec(1, 5), InvalidArgument);
  EXPECT_THROW(LatticeSpec(5, 0), InvalidArgument);
  EXPECT_NO_THROW(LatticeSpec(2, 2));
}

TEST(LatticeSpec, CountsAndDiracFlag) {
  const LatticeSpec spec(12, 9);
  EXPECT_EQ(spec.cells(), 108);
  EXPECT_EQ(spec.sites(), 216);
  EXPECT_TRUE(spec.dirac_exact());
  EXPECT_FALSE(LatticeSpec(12, 10).dirac_exact());
  EXPECT_FALSE(LatticeSpec(4, 4).dirac_exact());
}

TEST(LatticeSpec, WrapReducesIntoRange) {
  const LatticeSpec spec(4, 5);
  EXPECT_EQ(spec.wrap(-1, 7, Sublattice::B), (SiteId{3, 2, Sublattice::B}));
  EXPECT_EQ(spec.wrap(8, -10, Sublattice::A), (SiteId{0, 0, Sublattice::A}));
}

TEST(SiteIndex, RoundTripsEverySite) {
  const LatticeSpec spec(5, 7);
  std::set<int> seen;
  for (int i = 0; i < spec.sites(); ++i) {
    const SiteId s = index_site(spec, i);
    EXPECT_EQ(site_index(spec, s), i);
    seen.insert(i);
  }
  EXPECT_EQ(static_cast<int>(seen.size()), spec.sites());
  EXPECT_EQ(site_index(spec, {0, 0, Sublattice::B}), spec.cells());
}

TEST(SiteIndex, RejectsOutOfRange) {
  const LatticeSpec spec(3, 3);
  EXPECT_THROW(site_index(spec, {3, 0, Sublattice::A}), InvalidArgument);
  EXPECT_THROW(site_index(spec, {0, -1, Sublattice::B}), InvalidArgument);
  EXPECT_THROW(index_site(spec, 18), InvalidArgument);
  EXPECT_THROW(index_site(spec, -1), InvalidArgument);
  EXPECT_THROW(neighbors_of(spec, {5, 5, Sublattice::A}), InvalidArgument);
}

TEST(Adjacency, MatchesGeometricNeighbourSearch) {
  for (const auto& [m, n] : {std::pair{2, 2}, {3, 3}, {4, 5}, {6, 6}, {2, 7}, {7, 3}}) {
    const LatticeSpec spec(m, n);
    const auto adj = build_lattice(spec);
    const Eigen::MatrixXd oracle = oracle::geometric_adjacency(spec);
    EXPECT_EQ((adj.dense() - oracle).cwiseAbs().maxCoeff(), 0.0) << m << "x" << n;
  }
}

TEST(Adjacency, SymmetricBipartiteCubic) {
  const LatticeSpec spec(6, 9);
  const auto adj = build_lattice(spec);
  const Eigen::MatrixXd& a = adj.dense();
  const int c = spec.cells();
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.topLeftCorner(c, c).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.bottomRightCorner(c, c).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.trace(), 0.0);
  for (int i = 0; i < spec.sites(); ++i) EXPECT_EQ(a.row(i).sum(), 3.0);
}

TEST(Adjacency, NeighbourRelationIsSymmetric) {
  const LatticeSpec spec(5, 4);
  for (int i = 0; i < spec.sites(); ++i) {
    const SiteId s = index_site(spec, i);
    for (const auto& nb : neighbors_of(spec, s)) {
      EXPECT_NE(nb.sublattice, s.sublattice);
      const auto back = neighbors_of(spec, nb);
      EXPECT_NE(std::find(back.begin(), back.end(), s), back.end()) << to_string(s);
    }
  }
}

TEST(Adjacency, ListProductMatchesDense) {
  const LatticeSpec spec(6, 6);
  const auto adj = build_lattice(spec);
  const Eigen::VectorXcd v = oracle::random_state(spec.sites(), 7);
  EXPECT_LT((adj.apply(v) - adj.dense() * v).norm(), 1e-13);
  const Eigen::VectorXd r = v.real();
  EXPECT_LT((adj.apply(r) - adj.dense() * r).norm(), 1e-13);
  EXPECT_THROW(adj.apply(Eigen::VectorXd(3)), InvalidArgument);
}

TEST(SiteId, FormatsAndOrders) {
  EXPECT_EQ(to_string(SiteId{3, 4, Sublattice::B}), "3,4,B");
  EXPECT_LT((SiteId{0, 1, Sublattice::A}), (SiteId{1, 0, Sublattice::A}));
  EXPECT_EQ(opposite(Sublattice::A), Sublattice::B);
}
