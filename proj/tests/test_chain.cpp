#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spinwire/chain.hpp"

using namespace spinwire;

namespace {

std::vector<CouplingProfile> symmetric_profiles() {
  return {profile::Uniform{1.0},        profile::WeakLimit{1.0, 0.05},
          profile::EndPattern{1.0, 0.05, {1, 2}, true},
          profile::Triangle{1.0},       profile::Parabola{1.0},
          profile::Exponent{1.0},       profile::PST{1.0},
          profile::Trapezia{1.0, {}},   profile::Interpolation{1.0, 0.05, 0.3},
          profile::Interpolation{1.0, 0.05, 1.2}};
}

}  // namespace

TEST(BuildProfile, PstSmallChain) {
  const auto j = build_profile(profile::PST{1.0}, 4);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_DOUBLE_EQ(j[0], 2.0 * std::sqrt(3.0) / 4.0);
  EXPECT_DOUBLE_EQ(j[1], 1.0);
  EXPECT_DOUBLE_EQ(j[2], 2.0 * std::sqrt(3.0) / 4.0);
}

TEST(BuildProfile, TriangleSixSites) {
  const auto j = build_profile(profile::Triangle{1.0}, 6);
  const std::vector<double> expected{1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0 / 3.0, 1.0 / 3.0};
  ASSERT_EQ(j.size(), expected.size());
  for (std::size_t i = 0; i < j.size(); ++i) EXPECT_DOUBLE_EQ(j[i], expected[i]);
}

TEST(BuildProfile, WeakLimitEndsOnly) {
  const auto j = build_profile(profile::WeakLimit{1.0, 0.05}, 130);
  ASSERT_EQ(j.size(), 129u);
  EXPECT_EQ(j.front(), 0.05);
  EXPECT_EQ(j.back(), 0.05);
  for (std::size_t i = 1; i + 1 < j.size(); ++i) EXPECT_EQ(j[i], 1.0);
}

TEST(BuildProfile, InterpolationEndpoints) {
  EXPECT_EQ(build_profile(profile::Interpolation{1.0, 0.05, std::numbers::pi / 2.0}, 130),
            build_profile(profile::PST{1.0}, 130));
  EXPECT_EQ(build_profile(profile::Interpolation{1.0, 0.05, 0.0}, 130), build_profile(profile::WeakLimit{1.0, 0.05}, 130));
}

TEST(BuildProfile, InterpolationMixesLinearly) {
  const double theta = 0.7;
  const auto mixed = build_profile(profile::Interpolation{1.0, 0.05, theta}, 20);
  const auto pst = build_profile(profile::PST{1.0}, 20);
  const auto weak = build_profile(profile::WeakLimit{1.0, 0.05}, 20);
  for (std::size_t i = 0; i < mixed.size(); ++i)
    EXPECT_NEAR(mixed[i], std::sin(theta) * pst[i] + std::cos(theta) * weak[i], 1e-15);
}

TEST(BuildProfile, TrapeziaMatchesPrintedInstance) {
  // N = 130: plateau for bonds 26..104, min(i, N-i)/26 elsewhere
  const auto j = build_profile(profile::Trapezia{1.0, {}}, 130);
  for (std::size_t i = 1; i <= 129; ++i) {
    const double expected = (i >= 26 && i <= 104) ? 1.0 : std::min<double>(i, 130 - i) / 26.0;
    EXPECT_DOUBLE_EQ(j[i - 1], expected) << "bond " << i;
  }
}

TEST(BuildProfile, MirrorSymmetryIsExact) {
  for (std::size_t n : {2u, 3u, 7u, 10u, 64u, 129u, 130u}) {
    for (const auto& p : symmetric_profiles()) {
      if (n < 4 && std::holds_alternative<profile::EndPattern>(p)) continue;
      const auto j = build_profile(p, n);
      ASSERT_TRUE(is_mirror_symmetric(p));
      for (std::size_t i = 0; i < j.size(); ++i) ASSERT_EQ(j[i], j[j.size() - 1 - i]) << "n=" << n << " bond " << i + 1;
    }
  }
}

TEST(BuildProfile, AnalyticProfilesShareTheirMaximum) {
  for (std::size_t n : {10u, 64u, 130u}) {
    for (const CouplingProfile& p : std::vector<CouplingProfile>{profile::Triangle{1.3}, profile::Parabola{1.3},
                                                                  profile::Exponent{1.3}, profile::PST{1.3},
                                                                  profile::Trapezia{1.3, {}}}) {
      const auto j = build_profile(p, n);
      EXPECT_NEAR(*std::max_element(j.begin(), j.end()), 1.3, 1e-12);
      EXPECT_NEAR(j[n / 2 - 1], 1.3, 1e-12);  // mid-chain bond N/2
    }
  }
}

TEST(BuildProfile, RejectsBadParameters) {
  EXPECT_THROW(build_profile(profile::Interpolation{1.0, 0.05, 2.0}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::Interpolation{1.0, 0.05, -0.1}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::EndPattern{1.0, 0.05, {10}, false}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::EndPattern{1.0, 0.05, {0}, false}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::Custom{{1.0, 1.0}}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::Uniform{0.0}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::WeakLimit{1.0, -0.1}, 10), std::invalid_argument);
  EXPECT_THROW(build_profile(profile::Uniform{1.0}, 1), std::invalid_argument);
}

TEST(EndPattern, CaseThreeIsAsymmetric) {
  const std::size_t n = 130;
  auto j = apply_end_pattern(std::vector<double>(n - 1, 1.0), {1, 2}, 0.05, false);
  j = apply_end_pattern(j, {n - 1}, 0.05, false);
  EXPECT_EQ(j, build_profile(end_pattern_case(3, n).pattern, n));
  EXPECT_EQ(j[0], 0.05);
  EXPECT_EQ(j[1], 0.05);
  EXPECT_EQ(j[n - 2], 0.05);
  EXPECT_EQ(j[n - 3], 1.0);
}

TEST(EndPattern, EmptyIsIdentity) {
  const std::vector<double> base{0.3, 0.7, 1.1, 0.2};
  EXPECT_EQ(apply_end_pattern(base, {}, 0.05, true), base);
}

TEST(EndPattern, MirrorSetsReflection) {
  const auto j = apply_end_pattern(std::vector<double>(9, 1.0), {1}, 0.05, true);
  EXPECT_EQ(j.front(), 0.05);
  EXPECT_EQ(j.back(), 0.05);
  for (std::size_t i = 0; i < j.size(); ++i) EXPECT_EQ(j[i], j[j.size() - 1 - i]);
}

TEST(EndPattern, InteriorCasesMoveSenderAndReceiver) {
  for (int c : {5, 6}) {
    const auto fig = end_pattern_case(c, 130);
    EXPECT_EQ(fig.sender, 4u);
    EXPECT_EQ(fig.receiver, 127u);
  }
  const auto c6 = build_profile(end_pattern_case(6, 130).pattern, 130);
  // both bonds touching site 4 (bonds 3 and 4) and site 127 (bonds 126, 127)
  EXPECT_EQ(c6[2], 0.05);
  EXPECT_EQ(c6[3], 0.05);
  EXPECT_EQ(c6[125], 0.05);
  EXPECT_EQ(c6[126], 0.05);
  EXPECT_THROW(end_pattern_case(7, 130), std::invalid_argument);
}

TEST(StaticDisorder, ZeroAmplitudeIsIdentity) {
  const ChainSpec spec = make_chain(build_profile(profile::PST{1.0}, 30));
  EXPECT_EQ(sample_static_disorder(spec, DisorderSpec{0.0, 0.0, 0.0, 0.1, 99}, 4), spec);
}

TEST(StaticDisorder, BoundedByAmplitude) {
  const ChainSpec spec = make_chain(std::vector<double>(129, 1.0));
  const DisorderSpec d{0.1, 0.2, 0.0, 0.1, 7};
  for (std::uint64_t r = 0; r < 20; ++r) {
    const ChainSpec s = sample_static_disorder(spec, d, r);
    for (double c : s.couplings) {
      EXPECT_GE(c, 0.9);
      EXPECT_LE(c, 1.1);
    }
    for (double e : s.onsite) {
      EXPECT_GE(e, -0.2);
      EXPECT_LE(e, 0.2);
    }
  }
}

TEST(StaticDisorder, DeterministicAndRealizationKeyed) {
  const ChainSpec spec = make_chain(std::vector<double>(20, 1.0));
  const DisorderSpec d{0.1, 0.1, 0.0, 0.1, 123};
  EXPECT_EQ(sample_static_disorder(spec, d, 5), sample_static_disorder(spec, d, 5));
  EXPECT_NE(sample_static_disorder(spec, d, 5).couplings, sample_static_disorder(spec, d, 6).couplings);
  // the input is never modified
  EXPECT_EQ(spec.couplings, std::vector<double>(20, 1.0));
}

TEST(NoiseInterval, ZeroEtaIsIdentity) {
  const ChainSpec spec = make_chain(std::vector<double>(12, 1.0));
  for (std::uint64_t k : {0u, 1u, 1000u}) EXPECT_EQ(sample_noise_interval(spec, DisorderSpec{}, 3, k), spec);
}

TEST(NoiseInterval, IntervalsDifferAndReproduce) {
  const ChainSpec spec = make_chain(std::vector<double>(129, 1.0));
  const DisorderSpec d{0.0, 0.0, 0.1, 0.1, 77};
  const auto a0 = sample_noise_interval(spec, d, 2, 0);
  const auto a1 = sample_noise_interval(spec, d, 2, 1);
  EXPECT_NE(a0.couplings, a1.couplings);
  EXPECT_EQ(a0, sample_noise_interval(spec, d, 2, 0));
  EXPECT_EQ(a1, sample_noise_interval(spec, d, 2, 1));
  for (const auto* s : {&a0, &a1})
    for (double c : s->couplings) {
      EXPECT_GE(c, 0.9);
      EXPECT_LE(c, 1.1);
    }
}

TEST(DisorderSpecValidation, RejectsNegativeAndZeroTau) {
  EXPECT_THROW((DisorderSpec{-0.1, 0.0, 0.0, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((DisorderSpec{0.0, 0.0, 0.0, 0.0, 0}.validate()), std::invalid_argument);
}

TEST(ChainSpecValidation, Invariants) {
  ChainSpec s = make_chain({1.0, 1.0});
  s.receiver = s.sender;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = make_chain({1.0, 1.0});
  s.receiver = 4;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = make_chain({1.0, 1.0});
  s.couplings[1] = std::nan("");
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(make_chain({}), std::invalid_argument);
}

TEST(UnknownStateFidelity, Values) {
  EXPECT_NEAR(unknown_state_fidelity(0.9, 0.5), std::sqrt(0.95), 1e-15);
  EXPECT_NEAR(unknown_state_fidelity(0.9, 0.5), 0.97, 0.005);  // "f = 0.97 only requires F = 0.9"
  for (double b : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(unknown_state_fidelity(1.0, b), 1.0);
  for (double f : {0.0, 0.4, 1.0}) EXPECT_DOUBLE_EQ(unknown_state_fidelity(f, 0.0), 1.0);
  EXPECT_THROW(unknown_state_fidelity(1.1, 0.5), std::invalid_argument);
  EXPECT_THROW(unknown_state_fidelity(0.5, -0.1), std::invalid_argument);
}

TEST(UnknownStateFidelity, MonotoneAndEqualsOneOnlyAtEdges) {
  for (double b = 0.05; b <= 1.0; b += 0.05) {
    double prev = unknown_state_fidelity(0.0, b);
    for (double f = 0.01; f <= 1.0; f += 0.01) {
      const double now = unknown_state_fidelity(f, b);
      EXPECT_GE(now, prev);
      prev = now;
      if (f < 0.999) {
        EXPECT_LT(now, 1.0);
      }
    }
  }
}

TEST(OpticalLattice, HighPrecisionValues) {
  // 40-digit evaluations of (4/sqrt(pi)) s^0.75 exp(-2.07 sqrt(s))
  EXPECT_NEAR(optical_lattice_tunneling(10.0), 0.018223441509830672170, 1e-16);
  EXPECT_NEAR(optical_lattice_tunneling(16.0), 0.0045773775136466764135, 1e-17);
  EXPECT_NEAR(optical_lattice_tunneling(1.0), 0.28477081451925558323, 1e-15);
  EXPECT_LT(optical_lattice_tunneling(16.0), optical_lattice_tunneling(10.0));
  EXPECT_LT(optical_lattice_tunneling(1e-8), 1e-5);
  EXPECT_THROW(optical_lattice_tunneling(0.0), std::invalid_argument);
  EXPECT_THROW(optical_lattice_tunneling(-1.0), std::invalid_argument);
}

TEST(OpticalLattice, DecreasingBeyondTurningPoint) {
  // d/ds log J = 0.75/s - 1.035/sqrt(s) vanishes at s = (0.75/1.035)^2
  const double turn = std::pow(0.75 / 1.035, 2.0);
  for (double s = turn + 0.01; s < 40.0; s += 0.25)
    EXPECT_GT(optical_lattice_tunneling(s), optical_lattice_tunneling(s + 0.25));
}
