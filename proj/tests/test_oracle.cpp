#include <gtest/gtest.h>

#include <cmath>

#include "spinwire/dynamics.hpp"
#include "spinwire/oracle.hpp"
#include "spinwire/random.hpp"

using namespace spinwire;

TEST(FullHilbertOracle, TwoSitesMatchClosedForm) {
  const ChainSpec spec = make_chain({0.8});
  const FullHilbertOracle oracle(spec);
  EXPECT_EQ(oracle.dimension(), 4u);
  for (double t = 0.0; t < 6.0; t += 0.37) {
    const Complex a = oracle.aligned_amplitude(t);
    EXPECT_NEAR(a.real(), 0.0, 1e-12);
    EXPECT_NEAR(a.imag(), std::sin(2.0 * 0.8 * t), 1e-12);
  }
}

TEST(FullHilbertOracle, AgreesWithReducedDynamics) {
  for (std::uint64_t k = 0; k < 6; ++k) {
    const std::size_t n = 8;
    std::vector<double> j(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) j[i] = 1.0 + 0.5 * keyed_uniform(k, 0, 0, i, Stream::OracleSampling);
    ChainSpec spec = make_chain(std::move(j));
    for (std::size_t i = 0; i < n; ++i) spec.onsite[i] = 0.5 * keyed_uniform(k, 1, 0, i, Stream::OracleSampling);
    const double t = 10.0 * (1.0 + keyed_uniform(k, 2, 0, 0, Stream::OracleSampling));

    const FullHilbertOracle oracle(spec);
    const auto eig = eigendecompose(build_hamiltonian(spec));
    const Complex reduced = transfer_amplitude(eig, 1, n, t);
    EXPECT_LE(std::abs(oracle.aligned_amplitude(t) - reduced), 1e-8);
    // phase alignment only touches the phase
    EXPECT_NEAR(std::abs(oracle.amplitude(t)), std::abs(reduced), 1e-8);
    EXPECT_NEAR(oracle.sector_probability(t), 1.0, 1e-10);
  }
}

TEST(FullHilbertOracle, InteriorSitesAgree) {
  ChainSpec spec = make_chain({0.7, 1.2, 0.9, 1.4, 0.6});
  spec.sender = 2;
  spec.receiver = 5;
  spec.onsite = {0.1, -0.3, 0.0, 0.25, -0.1, 0.2};
  const FullHilbertOracle oracle(spec);
  const auto eig = eigendecompose(build_hamiltonian(spec));
  for (double t : {0.5, 2.5, 11.0}) EXPECT_LE(std::abs(oracle.aligned_amplitude(t) - transfer_amplitude(eig, 2, 5, t)), 1e-8);
}

TEST(FullHilbertOracle, RejectsLargeChains) {
  EXPECT_THROW(FullHilbertOracle(make_chain(std::vector<double>(10, 1.0))), std::invalid_argument);
  EXPECT_NO_THROW(FullHilbertOracle(make_chain(std::vector<double>(9, 1.0))));
}
