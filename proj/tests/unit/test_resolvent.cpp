#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gsearch/bloch.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/resolvent.hpp"
#include "gsearch/spectral.hpp"

using namespace gsearch;

namespace {

constexpr double kZeta2 = 1.6449340668482264;       // pi^2 / 6
constexpr double kCatalan = 0.915965594177219015;   // Dirichlet beta(2)
constexpr double kLChi3 = 0.781302412896486296;     // L(2, chi_-3)

double perturber_energy_oracle(const LatticeSpec& spec) {
  const auto r = eig_sym(build_search_hamiltonian(spec, 1.0, SiteId{}).matrix());
  const auto l = neighbor_state(spec, SiteId{}).real();
  for (int i = 0; i < r.dimension(); ++i) {
    const double e = r.eigenvalues[i];
    if (e > 1e-8 && std::abs(l.dot(r.eigenvectors.col(i))) > 1e-6) return e;
  }
  return 0.0;
}

}  // namespace

TEST(Resolvent, OddAndDecreasing) {
  const Resolvent f(LatticeSpec(9, 9));
  for (double e : {0.01, 0.1, 0.33, 1.7, 2.9, 3.4}) {
    EXPECT_NEAR(f.F(-e), -f.F(e), 1e-12 * std::abs(f.F(e)));
    EXPECT_LT(f.dF(e), 0.0);
  }
  EXPECT_EQ(f.dirac_count(), 2);
  EXPECT_EQ(Resolvent(LatticeSpec(8, 8)).dirac_count(), 0);
}

TEST(Resolvent, SmallEnergyDiracPole) {
  const LatticeSpec spec(12, 12);
  const Resolvent f(spec);
  const double e = 1e-7;
  // Two Dirac momenta contribute (sqrt3/N) * 2 * 2/E.
  EXPECT_NEAR(f.F(e) * spec.sites() * e / (4.0 * std::sqrt(3.0)), 1.0, 1e-6);
}

TEST(Resolvent, PoleProximityRaised) {
  const Resolvent f(LatticeSpec(6, 6));
  const double pole = f.smallest_pole();
  EXPECT_THROW(f.F(pole), PoleProximity);
  EXPECT_THROW(f.dF(-pole + 1e-14), PoleProximity);
  EXPECT_THROW(f.F(0.0), PoleProximity);
  try {
    f.F(pole);
  } catch (const PoleProximity& err) {
    EXPECT_EQ(err.pole(), pole);
  }
}

TEST(Resolvent, DerivativeMatchesFiniteDifference) {
  const LatticeSpec spec(9, 12);
  const Resolvent f(spec);
  for (double e : {0.05, 0.2, 1.1, 2.3}) {
    const double h = 1e-6 * e;
    const double fd = (f.F(e + h) - f.F(e - h)) / (2.0 * h);
    EXPECT_NEAR(f.dF(e), fd, 1e-6 * std::abs(fd)) << e;
  }
  EXPECT_EQ(resolvent_F(spec, 0.3), f.F(0.3));
  EXPECT_EQ(resolvent_dF(spec, 0.3), f.dF(0.3));
}

TEST(Resolvent, SingleSignChangeBelowSmallestPole) {
  const LatticeSpec spec(12, 12);
  const Resolvent f(spec);
  const double top = f.smallest_pole();
  int changes = 0;
  double prev = f.F(top * 1e-4);
  for (int i = 2; i < 10000; ++i) {
    const double v = f.F(top * i * 1e-4);
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  EXPECT_EQ(changes, 1);
}

TEST(ResolventRoot, MatchesEigensolverAndBounds) {
  for (int m : {6, 9, 12, 15}) {
    const LatticeSpec spec(m, m);
    const double root = resolvent_root(spec);
    EXPECT_NEAR(root, perturber_energy_oracle(spec), 1e-8) << m;
    const double i2 = moment_sums(spec, 1)[0];
    EXPECT_LT(root, std::sqrt(4.0 * std::sqrt(3.0) / (spec.sites() * i2)));
    const Resolvent f(spec);
    EXPECT_LE(std::abs(f.F(root)), 1e-12 * std::abs(f.dF(root)) * root);
  }
}

TEST(ResolventRoot, AllRootsAreEigenvalues) {
  const LatticeSpec spec(6, 6);
  const auto roots = Resolvent(spec).roots();
  const auto r = eig_sym(build_search_hamiltonian(spec, 1.0, SiteId{}).matrix());
  const auto l = neighbor_state(spec, SiteId{}).real();
  std::vector<double> carrying;
  for (int i = 0; i < r.dimension(); ++i) {
    if (std::abs(l.dot(r.eigenvectors.col(i))) > 1e-8) carrying.push_back(r.eigenvalues[i]);
  }
  ASSERT_EQ(roots.size(), carrying.size());
  for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(roots[i], carrying[i], 1e-9);
}

TEST(Moments, MatchEigenvalueSums) {
  const LatticeSpec spec(9, 9);
  const auto values = eigvals_sym(build_lattice(spec).dense());
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : values) {
    if (std::abs(v) > 1e-8) {
      s2 += std::pow(v, -2);
      s4 += std::pow(v, -4);
    }
  }
  // Each momentum carries +eps and -eps, so the eigenvalue sum doubles the momentum sum.
  const auto mom = moment_sums(spec, 2);
  EXPECT_NEAR(mom[0], std::sqrt(3.0) / spec.sites() * s2, 1e-11);
  EXPECT_NEAR(mom[1], std::sqrt(3.0) / spec.sites() * s4, 1e-10);
  EXPECT_THROW(moment_sums(LatticeSpec(4, 4), 1), DiracUnavailable);
}

TEST(Moments, SecondMomentGrowsLogarithmically) {
  double prev = 0.0;
  for (int m : {6, 12, 24, 48}) {
    const double i2 = moment_sums(LatticeSpec(m, m), 1)[0];
    EXPECT_GT(i2, prev);
    if (prev > 0.0) {
      // Doubling m adds roughly a constant times ln 4.
      EXPECT_LT(i2 - prev, 1.5);
      EXPECT_GT(i2 - prev, 0.1);
    }
    prev = i2;
  }
}

TEST(Zeta, SquareLatticeClosedForm) {
  const auto z = epstein_zeta(Eigen::Matrix2d::Identity(), 2.0, 1000);
  EXPECT_NEAR(z.value, 2.0 * kZeta2 * kCatalan, 1e-9);
  EXPECT_LE(std::abs(z.value - z.truncated), z.tail_bound);
  EXPECT_GT(z.tail_estimate, 0.0);
}

TEST(Zeta, HexagonalFormClosedForm) {
  const double expected =
      0.5 * std::pow(8.0 * std::numbers::pi * std::numbers::pi, -2) * 6.0 * kZeta2 * kLChi3;
  const auto z = epstein_zeta(dirac_form_matrix(), 2.0, 1000);
  EXPECT_NEAR(z.value, expected, 1e-12);
  EXPECT_NEAR(z.value / expected, 1.0, 1e-8);
}

TEST(Zeta, HomogeneityAndCutoffConvergence) {
  const Eigen::Matrix2d s{{2.0, 0.3}, {0.3, 1.5}};
  const double a = epstein_zeta(s, 3.0, 200).value;
  EXPECT_NEAR(epstein_zeta(2.5 * s, 3.0, 200).value, a * std::pow(2.5, -3.0), 1e-13);
  const double r1 = epstein_zeta(s, 2.0, 250).value;
  const double r2 = epstein_zeta(s, 2.0, 500).value;
  EXPECT_LT(std::abs(r1 - r2), 1e-8);
}

TEST(Zeta, RejectsBadArguments) {
  EXPECT_THROW(epstein_zeta(Eigen::Matrix2d{{1.0, 2.0}, {2.0, 1.0}}, 2.0, 100), InvalidArgument);
  EXPECT_THROW(epstein_zeta(Eigen::Matrix2d{{1.0, 0.1}, {0.0, 1.0}}, 2.0, 100), InvalidArgument);
  EXPECT_THROW(epstein_zeta(Eigen::Matrix2d::Identity(), 1.5, 100), InvalidArgument);
  EXPECT_THROW(epstein_zeta(Eigen::Matrix2d::Identity(), 2.0, 5), InvalidArgument);
}

TEST(Zeta, SquareTorusMomentControl) {
  // Square torus: sum over nonzero momenta of |k|^-4 / L^4 -> sum (4 pi^2 |n|^2)^-2 = 2 Z_2(4pi^2 I, 2).
  const double target = 2.0 * epstein_zeta(4.0 * std::numbers::pi * std::numbers::pi *
                                               Eigen::Matrix2d::Identity(), 2.0, 500).value;
  const int L = 400;
  double sum = 0.0;
  for (int p = 0; p < L; ++p) {
    for (int q = 0; q < L; ++q) {
      if (p == 0 && q == 0) continue;
      const double e = 4.0 * (std::pow(std::sin(std::numbers::pi * p / L), 2) +
                              std::pow(std::sin(std::numbers::pi * q / L), 2));
      sum += 1.0 / (e * e);
    }
  }
  EXPECT_NEAR(sum / std::pow(L, 4), target, 2e-3 * target);
}

TEST(MomentLimit, FavoursLargerPrefactor) {
  std::vector<LatticeSpec> specs;
  for (int m = 6; m <= 30; m += 6) specs.emplace_back(m, m);
  const auto rep = verify_moment_limit(specs, 2);
  EXPECT_NEAR(rep.limit_4sqrt3, 4.0 * std::sqrt(3.0) * 2.0 * rep.zeta, 1e-15);
  EXPECT_NEAR(rep.limit_2sqrt3 * 2.0, rep.limit_4sqrt3, 1e-15);
  EXPECT_EQ(rep.favoured_prefactor, 4.0 * std::sqrt(3.0));
  EXPECT_TRUE(rep.monotone);
  EXPECT_TRUE(rep.converging);
  EXPECT_NEAR(rep.rows.back().ratio, rep.limit_4sqrt3, 0.05 * rep.limit_4sqrt3);
  EXPECT_THROW(verify_moment_limit(specs, 1), InvalidArgument);
}
