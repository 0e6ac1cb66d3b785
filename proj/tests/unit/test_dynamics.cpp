#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "gsearch/dynamics.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/resolvent.hpp"
#include "oracles.hpp"

using namespace gsearch;

namespace {

using cd = std::complex<double>;

std::shared_ptr<const SpectrumResult> spectrum_of(const SearchHamiltonian& h) {
  return std::make_shared<const SpectrumResult>(eig_sym(h.matrix()));
}

}  // namespace

TEST(Propagator, InitialStateReturnedExactly) {
  const auto h = build_search_hamiltonian(LatticeSpec(6, 6), 1.0, SiteId{});
  const auto psi0 = optimal_start_state(h.spec(), SiteId{});
  const Propagator prop(spectrum_of(h), psi0);
  EXPECT_EQ((prop.state_at(0.0) - psi0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Propagator, EigenvectorOnlyAcquiresPhase) {
  const auto h = build_search_hamiltonian(LatticeSpec(6, 6), 0.8, SiteId{1, 1, Sublattice::B});
  const auto spec = spectrum_of(h);
  const int k = 17;
  const WaveFunction v = spec->eigenvectors.col(k).cast<cd>();
  const Propagator prop(spec, v);
  for (double t : {0.5, 3.0, 40.0}) {
    const WaveFunction expected = std::exp(cd(0.0, -spec->eigenvalues[k] * t)) * v;
    EXPECT_LT((prop.state_at(t) - expected).norm(), 1e-12);
  }
}

TEST(Propagator, MatchesMatrixExponential) {
  const LatticeSpec spec(6, 6);
  const auto h = build_search_hamiltonian(spec, 1.0, SiteId{2, 4, Sublattice::A});
  const WaveFunction psi0 = oracle::random_state(spec.sites(), 5);
  const Propagator prop(spectrum_of(h), psi0);
  const Eigen::MatrixXcd hc = h.matrix().cast<cd>();
  for (double t : {0.3, 2.0, 7.5}) {
    const Eigen::MatrixXcd u = (cd(0.0, -t) * hc).exp();
    EXPECT_LT((prop.state_at(t) - u * psi0).norm(), 1e-10) << t;
  }
}

TEST(Propagator, ProjectionsAndBatchAgree) {
  const LatticeSpec spec(6, 6);
  const auto h = build_search_hamiltonian(spec, 1.0, SiteId{});
  const WaveFunction psi0 = oracle::random_state(spec.sites(), 9);
  const Propagator prop(spectrum_of(h), psi0);
  const std::vector<double> times{0.0, 1.0, 4.5};
  const Eigen::MatrixXcd states = prop.states_at(times);
  Eigen::MatrixXcd bras(2, spec.sites());
  bras.row(0) = oracle::random_state(spec.sites(), 1).transpose();
  bras.row(1) = site_state(spec, SiteId{}).transpose();
  const Eigen::MatrixXcd proj = prop.projections(bras, times);
  for (std::size_t j = 0; j < times.size(); ++j) {
    EXPECT_LT((states.col(j) - prop.state_at(times[j])).norm(), 1e-13);
    for (int i = 0; i < 2; ++i) {
      const cd expected = bras.row(i).transpose().dot(states.col(j));
      EXPECT_LT(std::abs(proj(i, j) - expected), 1e-13);
    }
  }
}

TEST(Propagate, PreservesNormOfRandomStates) {
  const LatticeSpec spec(9, 9);
  const auto h = build_search_hamiltonian(spec, 1.0, SiteId{});
  const std::vector<double> times{0.0, 10.0, 100.0};
  const auto states = propagate(h, oracle::random_state(spec.sites(), 21), times);
  for (const auto& s : states) EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  EXPECT_THROW(propagate(h, 2.0 * oracle::random_state(spec.sites(), 2), times), InvalidArgument);
  const std::vector<double> unsorted{1.0, 0.5};
  EXPECT_THROW(propagate(h, oracle::random_state(spec.sites(), 2), unsorted), InvalidArgument);
}

TEST(TimeGrid, InclusiveWhenOnGrid) {
  const auto g = time_grid(0.5, 2.0);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(time_grid(0.3, 1.0).size(), 4u);
  EXPECT_NEAR(reduced_search_time(LatticeSpec(12, 12)), std::numbers::pi / 4.0 * std::sqrt(96.0), 1e-14);
}

TEST(ParabolicPeak, RecoversVertex) {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 - std::pow(0.1 * i - 0.437, 2));
  }
  EXPECT_NEAR(parabolic_peak(t, y, 4), 0.437, 1e-12);
  EXPECT_EQ(parabolic_peak(t, y, 0), 0.0);
}

class SearchRunTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { run_ = new SearchRun(run_search(LatticeSpec(12, 12), SiteId{})); }
  static void TearDownTestSuite() {
    delete run_;
    run_ = nullptr;
  }
  static SearchRun* run_;
};

SearchRun* SearchRunTest::run_ = nullptr;

TEST_F(SearchRunTest, PeakAndSymmetry) {
  const auto& r = *run_;
  EXPECT_GE(r.p_peak, 0.40);
  EXPECT_LE(r.p_peak, 0.50);
  EXPECT_EQ(r.times.front(), 0.0);
  EXPECT_EQ(r.p_total.front(), 0.0);
  for (std::size_t i = 0; i < r.times.size(); i += 37) {
    EXPECT_NEAR(r.p_site[0][i], r.p_site[1][i], 1e-12);
    EXPECT_NEAR(r.p_site[1][i], r.p_site[2][i], 1e-12);
    EXPECT_NEAR(r.p_total[i], r.p_site[0][i] + r.p_site[1][i] + r.p_site[2][i], 1e-14);
    // |l> = (sum of the neighbours)/sqrt3 and the three amplitudes are equal.
    EXPECT_NEAR(r.p_ell[i], r.p_total[i], 1e-12);
    // |m> is a zero mode, so its population stays at |<m|s>|^2 = 4/N.
    EXPECT_NEAR(r.p_marked[i], 4.0 / 288.0, 1e-12);
  }
  EXPECT_NEAR(r.mean_site_probability, 1.0 / 288.0, 1e-12);
  EXPECT_LT(r.max_norm_error, 1e-10);
}

TEST_F(SearchRunTest, GapTimePredictsPeak) {
  const auto& r = *run_;
  EXPECT_NEAR(r.t_gap, std::numbers::pi / (2.0 * r.e_plus), 1e-12);
  EXPECT_LT(std::abs(r.t_peak - r.t_gap), std::abs(r.t_peak - r.t_reduced));
  EXPECT_NEAR(r.e_plus, resolvent_root(r.spec), 1e-8);
}

TEST(Search, RejectsCoarseStepAndInexactGrid) {
  const LatticeSpec spec(6, 6);
  SearchOptions opts;
  opts.dt = 10.0;
  EXPECT_THROW(run_search(spec, SiteId{}, opts), InvalidArgument);
  EXPECT_THROW(run_search(LatticeSpec(4, 4), SiteId{}), DiracUnavailable);
}

TEST(Search, CustomStartOnNonDiracTorus) {
  const LatticeSpec spec(4, 4);
  SearchOptions opts;
  opts.start = StartKind::Custom;
  opts.custom = WaveFunction::Constant(spec.sites(), 1.0 / std::sqrt(spec.sites()));
  const auto r = run_search(spec, SiteId{}, opts);
  EXPECT_LT(r.max_norm_error, 1e-10);
  EXPECT_GT(r.p_peak, 0.0);
  EXPECT_LE(r.p_peak, 1.0);
}

TEST(Search, UniformStartHalvesPeak) {
  const LatticeSpec spec(12, 12);
  const auto optimal = run_search(spec, SiteId{});
  SearchOptions opts;
  opts.start = StartKind::UniformDirac;
  const auto uniform = run_search(spec, SiteId{}, opts);
  // |<s|u>|^2 = 1/2 exactly; the remaining half interferes weakly with the neighbour amplitude.
  EXPECT_NEAR(uniform.p_peak / optimal.p_peak, 0.5, 0.05);
}

TEST(Search, DiracSpaceAverageIsQuarter) {
  // Orthonormal basis of the four zero modes: the start state, its partner psi_0 on the marked
  // sublattice, and the two opposite-sublattice states. Averaging P_l over it gives P_opt / 4.
  const LatticeSpec spec(12, 12);
  const SiteId marked{};
  const auto h = build_search_hamiltonian(spec, 1.0, marked);
  const auto spec_ptr = spectrum_of(h);
  const auto red = reduced_hamiltonian(spec, marked);
  const WaveFunction psi0 = red.eigenvectors(0, 1) * dirac_state(spec, Valley::K, Sublattice::A) +
                            red.eigenvectors(1, 1) * dirac_state(spec, Valley::KPrime, Sublattice::A);
  const std::array<WaveFunction, 4> basis{optimal_start_state(spec, marked), psi0,
                                          dirac_state(spec, Valley::K, Sublattice::B),
                                          dirac_state(spec, Valley::KPrime, Sublattice::B)};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(basis[i].dot(basis[j])), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
  const double t = std::numbers::pi / (2.0 * resolvent_root(spec));
  const std::vector<double> times{t};
  Eigen::MatrixXcd bra(1, spec.sites());
  bra.row(0) = neighbor_state(spec, marked).transpose();
  double avg = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double p = std::norm(Propagator(spec_ptr, basis[i]).projections(bra, times)(0, 0));
    avg += p / 4.0;
    if (i == 0) best = p;
  }
  EXPECT_NEAR(avg, best / 4.0, 1e-10);
}

TEST(ResolventAmplitude, MatchesDirectPropagation) {
  const LatticeSpec spec(12, 12);
  const SiteId marked{};
  std::vector<double> times;
  for (int i = 0; i < 20; ++i) times.push_back(1.3 * i);
  const auto amp = amplitude_via_resolvent(spec, marked, times);
  const auto h = build_search_hamiltonian(spec, 1.0, marked);
  const Propagator prop(spectrum_of(h), optimal_start_state(spec, marked));
  Eigen::MatrixXcd bra(1, spec.sites());
  bra.row(0) = neighbor_state(spec, marked).transpose();
  const Eigen::MatrixXcd direct = prop.projections(bra, times);
  for (std::size_t j = 0; j < times.size(); ++j) {
    EXPECT_LT(std::abs(amp.full[j] - direct(0, j)), 1e-6) << times[j];
  }
  EXPECT_LT(std::abs(amp.full[0]), 1e-9);
  const double peak = 1.0 / (std::pow(3.0, 0.25) * std::sqrt(amp.i2));
  EXPECT_NEAR(amp.envelope[5], std::abs(std::sin(amp.e_plus * times[5])) * peak, 1e-14);
  EXPECT_NEAR(std::abs(amp.marked_overlap), 1.0 / std::sqrt(72.0), 1e-12);
}

TEST(Transfer, SameSublatticeTransfers) {
  const auto run = run_transfer(LatticeSpec(12, 12), SiteId{0, 0, Sublattice::A},
                                SiteId{6, 6, Sublattice::A});
  EXPECT_EQ(run.pairing, SublatticePair::Same);
  EXPECT_GT(run.window_states, 0);
  EXPECT_NEAR(run.p_ell1.front(), run.initial_localization, 1e-12);
  EXPECT_LT(run.max_norm_error, 1e-10);
  ASSERT_TRUE(run.period.has_value());
  EXPECT_GT(*run.period, 0.0);
  EXPECT_GE(run.p2_at_period, 0.5 * run.p2_max);
}

TEST(Transfer, RejectsIdenticalOrOutsideSites) {
  const LatticeSpec spec(6, 6);
  EXPECT_THROW(run_transfer(spec, SiteId{}, SiteId{}), InvalidArgument);
  EXPECT_THROW(run_transfer(spec, SiteId{}, SiteId{7, 0, Sublattice::A}), InvalidArgument);
}
