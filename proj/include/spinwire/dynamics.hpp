#pragma once

// Single-excitation dynamics of the XY chain
//
//   H = -sum_i J_i (X_i X_{i+1} + Y_i Y_{i+1}) + H_site
//
// In the one-magnon sector the hopping matrix element between neighbouring
// sites is -2 J_i (Pauli operators, not spin-1/2), and H_site contributes the
// site energies on the diagonal. U(t) = W exp(-i H_d t) W^T with W real.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinwire/chain.hpp"
#include "spinwire/tridiagonal.hpp"

namespace spinwire {

using Complex = std::complex<double>;

/// How a transfer amplitude A = <r|U(t)|s> is turned into the fidelity F.
enum class FidelityConvention {
  Modulus,      // F = |A|
  Probability,  // F = |A|^2
};

inline constexpr FidelityConvention kDefaultConvention = FidelityConvention::Modulus;

inline std::string_view to_string(FidelityConvention c) {
  return c == FidelityConvention::Modulus ? "modulus" : "probability";
}

inline FidelityConvention parse_convention(std::string_view name) {
  if (name == "modulus") return FidelityConvention::Modulus;
  if (name == "probability") return FidelityConvention::Probability;
  throw std::invalid_argument("unknown fidelity convention '" + std::string(name) +
                              "' (expected modulus or probability)");
}

inline double fidelity_of(Complex amplitude, FidelityConvention c) {
  return c == FidelityConvention::Modulus ? std::abs(amplitude) : std::norm(amplitude);
}

/// Hopping factor between J and the one-magnon matrix element.
inline constexpr double kHoppingFactor = -2.0;

struct TridiagonalHamiltonian {
  std::vector<double> diagonal;
  std::vector<double> offdiagonal;

  std::size_t size() const { return diagonal.size(); }

  /// Largest absolute row sum, an upper bound on the spectral norm.
  double norm_bound() const {
    double best = 0.0;
    for (std::size_t i = 0; i < diagonal.size(); ++i) {
      double row = std::abs(diagonal[i]);
      if (i > 0) row += std::abs(offdiagonal[i - 1]);
      if (i < offdiagonal.size()) row += std::abs(offdiagonal[i]);
      best = std::max(best, row);
    }
    return best;
  }
};

inline TridiagonalHamiltonian build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  TridiagonalHamiltonian h;
  h.diagonal = spec.onsite;
  h.offdiagonal.resize(spec.couplings.size());
  std::transform(spec.couplings.begin(), spec.couplings.end(), h.offdiagonal.begin(),
                 [](double j) { return kHoppingFactor * j; });
  return h;
}

/// H = W diag(eigenvalues) W^T.
struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  RealMatrix eigenvectors;          // columns

  std::size_t size() const { return eigenvalues.size(); }
};

inline EigenSystem eigendecompose(const TridiagonalHamiltonian& h) {
  auto solved = tridiagonal_eigen(h.diagonal, h.offdiagonal);
  return {std::move(solved.eigenvalues), std::move(solved.eigenvectors)};
}

namespace detail {

inline void check_site(std::size_t site, std::size_t n, const char* what) {
  if (site < 1 || site > n)
    throw std::invalid_argument(std::string(what) + " site " + std::to_string(site) + " outside [1, " +
                                std::to_string(n) + "]");
}

}  // namespace detail

/// <r|U(t)|s> for 1-based site numbers.
inline Complex transfer_amplitude(const EigenSystem& eig, std::size_t sender, std::size_t receiver, double t) {
  const std::size_t n = eig.size();
  detail::check_site(sender, n, "sender");
  detail::check_site(receiver, n, "receiver");
  Complex sum{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = eig.eigenvectors(receiver - 1, k) * eig.eigenvectors(sender - 1, k);
    sum += w * std::polar(1.0, -eig.eigenvalues[k] * t);
  }
  return sum;
}

/// All amplitudes <j|U(t)|s>, j = 1..N.
inline std::vector<Complex> propagate_column(const EigenSystem& eig, std::size_t sender, double t) {
  const std::size_t n = eig.size();
  detail::check_site(sender, n, "sender");
  std::vector<Complex> phased(n);
  for (std::size_t k = 0; k < n; ++k)
    phased[k] = eig.eigenvectors(sender - 1, k) * std::polar(1.0, -eig.eigenvalues[k] * t);
  std::vector<Complex> out(n, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    const auto col = eig.eigenvectors.column(k);
    for (std::size_t j = 0; j < n; ++j) out[j] += col[j] * phased[k];
  }
  return out;
}

/// Precomputed sender/receiver mode weights; evaluates A(t) in O(N).
class TransferKernel {
 public:
  explicit TransferKernel(const ChainSpec& spec)
      : TransferKernel(eigendecompose(build_hamiltonian(spec)), spec.sender, spec.receiver) {}

  TransferKernel(const EigenSystem& eig, std::size_t sender, std::size_t receiver)
      : energies_(eig.eigenvalues), weights_(eig.size()) {
    detail::check_site(sender, eig.size(), "sender");
    detail::check_site(receiver, eig.size(), "receiver");
    for (std::size_t k = 0; k < eig.size(); ++k)
      weights_[k] = eig.eigenvectors(receiver - 1, k) * eig.eigenvectors(sender - 1, k);
  }

  Complex amplitude(double t) const {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < energies_.size(); ++k) {
      const double phase = energies_[k] * t;
      re += weights_[k] * std::cos(phase);
      im -= weights_[k] * std::sin(phase);
    }
    return {re, im};
  }

  double fidelity(double t, FidelityConvention c) const { return fidelity_of(amplitude(t), c); }

  /// Largest |H| eigenvalue; sets the fastest oscillation of A(t).
  double bandwidth() const {
    double b = 0.0;
    for (double e : energies_) b = std::max(b, std::abs(e));
    return b;
  }

 private:
  std::vector<double> energies_;
  std::vector<double> weights_;
};

struct AmplitudeTrace {
  std::vector<double> times;
  std::vector<Complex> amplitudes;
  double final_norm = 1.0;  // ||psi(horizon)|| for piecewise runs

  std::vector<double> fidelities(FidelityConvention c = kDefaultConvention) const {
    std::vector<double> out(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), out.begin(),
                   [c](Complex a) { return fidelity_of(a, c); });
    return out;
  }
};

namespace detail {

inline void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument("time grid contains a non-finite value");
    if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("time grid must be nondecreasing");
  }
}

}  // namespace detail

/// Amplitudes at every grid time from a single diagonalization.
inline AmplitudeTrace fidelity_trace(const ChainSpec& spec, std::span<const double> t_grid) {
  detail::check_grid(t_grid);
  const TransferKernel kernel(spec);
  AmplitudeTrace trace;
  trace.times.assign(t_grid.begin(), t_grid.end());
  trace.amplitudes.reserve(t_grid.size());
  for (double t : t_grid) trace.amplitudes.push_back(kernel.amplitude(t));
  return trace;
}

/// Uniform grid 0, step, 2 step, ... up to and including t_max.
inline std::vector<double> uniform_grid(double t_max, double step) {
  if (!(t_max > 0.0) || !(step > 0.0)) throw std::invalid_argument("uniform_grid: t_max and step must be > 0");
  const auto count = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i) grid[i] = static_cast<double>(i) * step;
  if (grid.back() < t_max - 1e-12 * t_max) grid.push_back(t_max);
  return grid;
}

// ---------------------------------------------------------------------------
// Piecewise-constant evolution

inline constexpr std::uint64_t kDefaultMaxIntervals = 1'000'000;

struct PiecewiseOptions {
  std::uint64_t max_intervals = kDefaultMaxIntervals;
  double norm_tolerance = 1e-9;
};

/// Chain used during interval k.
using IntervalProvider = std::function<ChainSpec(std::uint64_t interval)>;

/// Evolve the sender basis state through consecutive intervals of length tau,
/// diagonalizing each interval's Hamiltonian, and record <r|psi(t)> at the
/// grid times. The last interval may be partial.
inline AmplitudeTrace evolve_piecewise(const IntervalProvider& chain_at, std::size_t n_sites, std::size_t sender,
                                       std::size_t receiver, double tau, double horizon,
                                       std::span<const double> record_grid, const PiecewiseOptions& options = {}) {
  if (!(tau > 0.0)) throw std::invalid_argument("evolve_piecewise: tau must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("evolve_piecewise: horizon must be > 0");
  detail::check_grid(record_grid);
  if (record_grid.front() < 0.0 || record_grid.back() > horizon)
    throw std::invalid_argument("evolve_piecewise: record grid must lie within [0, horizon]");
  detail::check_site(sender, n_sites, "sender");
  detail::check_site(receiver, n_sites, "receiver");

  const double ratio = horizon / tau;
  // an interval shorter than 1e-12 tau at the end is dropped as round-off
  auto n_intervals = static_cast<std::uint64_t>(std::ceil(ratio - 1e-12));
  if (n_intervals == 0) n_intervals = 1;
  if (n_intervals > options.max_intervals)
    throw std::invalid_argument("evolve_piecewise: horizon/tau = " + std::to_string(n_intervals) +
                                " intervals exceeds the cap of " + std::to_string(options.max_intervals));

  const std::size_t n = n_sites;
  std::vector<Complex> psi(n, Complex{0.0, 0.0});
  psi[sender - 1] = 1.0;
  std::vector<Complex> modal(n);

  AmplitudeTrace trace;
  trace.times.assign(record_grid.begin(), record_grid.end());
  trace.amplitudes.reserve(record_grid.size());
  std::size_t next = 0;

  for (std::uint64_t k = 0; k < n_intervals; ++k) {
    const double start = static_cast<double>(k) * tau;
    const bool last = k + 1 == n_intervals;
    const double stop = last ? horizon : static_cast<double>(k + 1) * tau;

    const ChainSpec chain = chain_at(k);
    if (chain.n_sites != n) throw std::invalid_argument("evolve_piecewise: interval chain changed size");
    const EigenSystem eig = eigendecompose(build_hamiltonian(chain));
    const auto& w = eig.eigenvectors;

    for (std::size_t m = 0; m < n; ++m) {
      const auto col = w.column(m);
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += col[j] * psi[j];
      modal[m] = acc;
    }

    while (next < record_grid.size() && (record_grid[next] < stop || (last && record_grid[next] <= stop))) {
      const double dt = record_grid[next] - start;
      Complex acc{0.0, 0.0};
      for (std::size_t m = 0; m < n; ++m)
        acc += w(receiver - 1, m) * std::polar(1.0, -eig.eigenvalues[m] * dt) * modal[m];
      trace.amplitudes.push_back(acc);
      ++next;
    }

    const double dt = stop - start;
    for (std::size_t m = 0; m < n; ++m) modal[m] *= std::polar(1.0, -eig.eigenvalues[m] * dt);
    std::fill(psi.begin(), psi.end(), Complex{0.0, 0.0});
    for (std::size_t m = 0; m < n; ++m) {
      const auto col = w.column(m);
      for (std::size_t j = 0; j < n; ++j) psi[j] += col[j] * modal[m];
    }
  }

  double norm_sq = 0.0;
  for (const Complex& c : psi) norm_sq += std::norm(c);
  trace.final_norm = std::sqrt(norm_sq);
  if (std::abs(trace.final_norm - 1.0) > options.norm_tolerance)
    throw NumericalError("evolve_piecewise: state norm drifted to " + std::to_string(trace.final_norm));
  return trace;
}

/// Static defects are drawn once for the realization; coupling noise is
/// redrawn for every interval.
inline AmplitudeTrace evolve_piecewise(const ChainSpec& spec, const DisorderSpec& disorder,
                                       std::uint64_t realization, double horizon,
                                       std::span<const double> record_grid, const PiecewiseOptions& options = {}) {
  spec.validate();
  disorder.validate();
  const ChainSpec defected = sample_static_disorder(spec, disorder, realization);
  const IntervalProvider chain_at = [&](std::uint64_t k) {
    return sample_noise_interval(defected, disorder, realization, k);
  };
  return evolve_piecewise(chain_at, spec.n_sites, spec.sender, spec.receiver, disorder.tau, horizon, record_grid,
                          options);
}

}  // namespace spinwire
