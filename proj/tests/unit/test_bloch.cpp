#include <gtest/gtest.h>

#include <algorithm>

#include "gsearch/bloch.hpp"
#include "gsearch/errors.hpp"
#include "oracles.hpp"

using namespace gsearch;

namespace {

Eigen::VectorXd adjacency_eigenvalues(const LatticeSpec& spec) {
  const auto adj = build_lattice(spec);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(-adj.dense(), Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST(Bloch, SpectrumMatchesDenseDiagonalisation) {
  for (const auto& [m, n] : {std::pair{3, 3}, {4, 4}, {6, 6}, {5, 7}, {9, 6}}) {
    const LatticeSpec spec(m, n);
    const auto analytic = unperturbed_spectrum(spec);
    const Eigen::VectorXd dense = adjacency_eigenvalues(spec);
    ASSERT_EQ(static_cast<int>(analytic.size()), spec.sites());
    for (int i = 0; i < spec.sites(); ++i) EXPECT_NEAR(analytic[i], dense[i], 1e-10) << m << "x" << n;
  }
}

TEST(Bloch, FourZeroModesOnThreeByThree) {
  const auto values = unperturbed_spectrum(LatticeSpec(3, 3));
  EXPECT_EQ(std::count(values.begin(), values.end(), 0.0), 4);
  const Eigen::VectorXd dense = adjacency_eigenvalues(LatticeSpec(3, 3));
  EXPECT_EQ((dense.array().abs() < 1e-9).count(), 4);
}

TEST(Bloch, DiracMomentaOnlyOnExactGrids) {
  int dirac = 0;
  for (const auto& k : momentum_grid(LatticeSpec(12, 12))) {
    if (k.dirac) {
      ++dirac;
      EXPECT_EQ(dispersion(k).upper, 0.0);
      EXPECT_NEAR(band_magnitude(k.kx, k.ky), 0.0, 1e-7);
    }
  }
  EXPECT_EQ(dirac, 2);
  for (const auto& k : momentum_grid(LatticeSpec(10, 12))) {
    EXPECT_FALSE(k.dirac);
    EXPECT_GT(dispersion(k).upper, 0.0);
  }
}

TEST(Bloch, DispersionShiftsAndScales) {
  const QuasiMomentum k{1, 2, 0.7, -0.3, false};
  const double mag = band_magnitude(k.kx, k.ky);
  const auto bands = dispersion(k, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(bands.upper, 0.5 + 2.0 * mag);
  EXPECT_DOUBLE_EQ(bands.lower, 0.5 - 2.0 * mag);
  EXPECT_NEAR(band_magnitude(-k.kx, -k.ky), mag, 1e-15);
  EXPECT_NEAR(band_magnitude(0.0, 0.0), 3.0, 1e-15);
}

TEST(Bloch, SmallestPositiveEnergyMatchesDense) {
  const LatticeSpec spec(12, 12);
  const Eigen::VectorXd dense = adjacency_eigenvalues(spec);
  double oracle = 1e9;
  for (double v : dense) {
    if (v > 1e-8) oracle = std::min(oracle, v);
  }
  EXPECT_NEAR(smallest_positive_energy(spec), oracle, 1e-10);
  EXPECT_EQ(band_energies(spec).size(), 144u);
}

TEST(Bloch, OmegaTableIsExact) {
  EXPECT_EQ(omega_power(0), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(omega_power(1).real(), -0.5);
  EXPECT_EQ(omega_power(2).real(), -0.5);
  EXPECT_EQ(omega_power(1).imag(), -omega_power(2).imag());
  EXPECT_EQ(omega_power(4), omega_power(1));
  EXPECT_EQ(omega_power(-1), omega_power(2));
  EXPECT_EQ(omega_power(0) + omega_power(1) + omega_power(2), std::complex<double>(0.0, 0.0));
  EXPECT_NEAR(std::abs(omega_power(1) * omega_power(1) * omega_power(1) - 1.0), 0.0, 1e-15);
}

TEST(Bloch, DiracStatesAreNormalisedZeroModes) {
  const LatticeSpec spec(9, 6);
  const auto adj = build_lattice(spec);
  const auto states = dirac_states(spec);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& v = states[i].amplitudes;
    EXPECT_NEAR(v.norm(), 1.0, 1e-13);
    EXPECT_LT(adj.apply(v).norm(), 1e-13);
    const int c = spec.cells();
    const auto other = states[i].sublattice == Sublattice::A ? v.tail(c) : v.head(c);
    EXPECT_EQ(other.cwiseAbs().maxCoeff(), 0.0);
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      EXPECT_LT(std::abs(v.dot(states[j].amplitudes)), 1e-13);
    }
  }
  EXPECT_EQ(states[1].valley, Valley::KPrime);
  EXPECT_EQ(states[2].sublattice, Sublattice::B);
}

TEST(Bloch, DiracStatesNeedExactGrid) {
  EXPECT_THROW(dirac_state(LatticeSpec(4, 6), Valley::K, Sublattice::A), DiracUnavailable);
  EXPECT_THROW(dirac_states(LatticeSpec(6, 5)), DiracUnavailable);
}

TEST(Bloch, PhaseResidueMatchesPlaneWave) {
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      EXPECT_EQ(dirac_phase_residue(Valley::K, Sublattice::A, a, b), (a + 2 * b) % 3);
      EXPECT_EQ(dirac_phase_residue(Valley::KPrime, Sublattice::A, a, b), (2 * a + b) % 3);
      EXPECT_EQ(dirac_phase_residue(Valley::K, Sublattice::B, a, b), (a + 2 * b + 2) % 3);
    }
  }
}
