#pragma once

// Chain configurations: coupling profiles, end patterns, disorder sampling and
// the scalar fidelity relations.
//
// Indexing: sites are numbered 1..N and bond i joins sites i and i+1
// (1 <= i <= N-1). Storage is zero-based, so bond i lives at couplings[i - 1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "spinwire/random.hpp"

namespace spinwire {

/// A fully resolved chain instance.
struct ChainSpec {
  std::size_t n_sites = 0;
  std::vector<double> couplings;  // length N-1, bond i at [i-1]
  std::vector<double> onsite;     // length N
  std::size_t sender = 1;         // 1-based site number
  std::size_t receiver = 0;       // 1-based site number

  void validate() const {
    if (n_sites < 2) throw std::invalid_argument("chain: n_sites must be >= 2");
    if (couplings.size() != n_sites - 1)
      throw std::invalid_argument("chain: expected " + std::to_string(n_sites - 1) + " couplings, got " +
                                  std::to_string(couplings.size()));
    if (onsite.size() != n_sites)
      throw std::invalid_argument("chain: expected " + std::to_string(n_sites) + " onsite energies, got " +
                                  std::to_string(onsite.size()));
    for (std::size_t i = 0; i < couplings.size(); ++i)
      if (!std::isfinite(couplings[i]))
        throw std::invalid_argument("chain: coupling at bond " + std::to_string(i + 1) + " is not finite");
    for (std::size_t i = 0; i < onsite.size(); ++i)
      if (!std::isfinite(onsite[i]))
        throw std::invalid_argument("chain: onsite energy at site " + std::to_string(i + 1) + " is not finite");
    if (sender < 1 || sender > n_sites) throw std::invalid_argument("chain: sender site out of range");
    if (receiver < 1 || receiver > n_sites) throw std::invalid_argument("chain: receiver site out of range");
    if (sender == receiver) throw std::invalid_argument("chain: sender and receiver must differ");
  }

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// End-to-end chain with zero site energies.
inline ChainSpec make_chain(std::vector<double> couplings) {
  ChainSpec spec;
  spec.n_sites = couplings.size() + 1;
  spec.couplings = std::move(couplings);
  spec.onsite.assign(spec.n_sites, 0.0);
  spec.sender = 1;
  spec.receiver = spec.n_sites;
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Coupling profiles

namespace profile {

struct Uniform {
  double j = 1.0;
};
/// J0 on the two end bonds, J elsewhere.
struct WeakLimit {
  double j = 1.0;
  double j0 = 0.05;
};
/// Uniform J with the listed bonds (and optionally their mirror images) set to J0.
struct EndPattern {
  double j = 1.0;
  double j0 = 0.05;
  std::vector<std::size_t> bonds;
  bool mirror = false;
};
struct Triangle {
  double j = 1.0;
};
struct Parabola {
  double j = 1.0;
};
struct Exponent {
  double j = 1.0;
};
struct PST {
  double j = 1.0;
};
/// Plateau at J with linear ramps; ramp length defaults to ceil(N/5) bonds.
struct Trapezia {
  double j = 1.0;
  std::optional<std::size_t> ramp;
};
/// sin(theta) * PST + cos(theta) * WeakLimit.
struct Interpolation {
  double j = 1.0;
  double j0 = 0.05;
  double theta = 0.0;
};
struct Custom {
  std::vector<double> couplings;
};

}  // namespace profile

using CouplingProfile =
    std::variant<profile::Uniform, profile::WeakLimit, profile::EndPattern, profile::Triangle, profile::Parabola,
                 profile::Exponent, profile::PST, profile::Trapezia, profile::Interpolation, profile::Custom>;

/// Set the listed bonds to j0. With `mirror`, bond i also sets bond N-i.
inline std::vector<double> apply_end_pattern(std::vector<double> base, const std::vector<std::size_t>& bonds,
                                             double j0, bool mirror) {
  const std::size_t n_bonds = base.size();
  for (std::size_t b : bonds) {
    if (b < 1 || b > n_bonds)
      throw std::invalid_argument("end pattern: bond index " + std::to_string(b) + " outside [1, " +
                                  std::to_string(n_bonds) + "]");
    base[b - 1] = j0;
    if (mirror) base[n_bonds - b] = j0;  // bond N-i
  }
  return base;
}

namespace detail {

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string("profile: ") + what + " must be positive and finite");
}

template <class F>
std::vector<double> tabulate(std::size_t n_sites, F&& f) {
  std::vector<double> out(n_sites - 1);
  for (std::size_t i = 1; i < n_sites; ++i) out[i - 1] = f(static_cast<double>(i));
  return out;
}

inline std::vector<double> weak_limit(std::size_t n_sites, double j, double j0) {
  std::vector<double> out(n_sites - 1, j);
  out.front() = j0;
  out.back() = j0;
  return out;
}

inline std::vector<double> pst(std::size_t n_sites, double j) {
  const double n = static_cast<double>(n_sites);
  return tabulate(n_sites, [&](double i) { return 2.0 * j * std::sqrt(i * (n - i)) / n; });
}

}  // namespace detail

/// Expand a profile recipe into a coupling vector of length N-1.
inline std::vector<double> build_profile(const CouplingProfile& recipe, std::size_t n_sites) {
  if (n_sites < 2) throw std::invalid_argument("profile: n_sites must be >= 2");
  const double n = static_cast<double>(n_sites);

  return std::visit(
      [&](const auto& p) -> std::vector<double> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, profile::Custom>) {
          if (p.couplings.size() != n_sites - 1)
            throw std::invalid_argument("profile: custom coupling vector has length " +
                                        std::to_string(p.couplings.size()) + ", expected " +
                                        std::to_string(n_sites - 1));
          for (double c : p.couplings)
            if (!std::isfinite(c)) throw std::invalid_argument("profile: custom coupling is not finite");
          return p.couplings;
        } else {
          detail::require_positive(p.j, "J");
          const double j = p.j;
          if constexpr (std::is_same_v<P, profile::Uniform>) {
            return std::vector<double>(n_sites - 1, j);
          } else if constexpr (std::is_same_v<P, profile::WeakLimit>) {
            detail::require_positive(p.j0, "J0");
            return detail::weak_limit(n_sites, j, p.j0);
          } else if constexpr (std::is_same_v<P, profile::EndPattern>) {
            detail::require_positive(p.j0, "J0");
            return apply_end_pattern(std::vector<double>(n_sites - 1, j), p.bonds, p.j0, p.mirror);
          } else if constexpr (std::is_same_v<P, profile::Triangle>) {
            return detail::tabulate(n_sites, [&](double i) { return 2.0 * j / n * std::min(i, n - i); });
          } else if constexpr (std::is_same_v<P, profile::Parabola>) {
            const double scale = (1.0 - n / 2.0) * (1.0 - n / 2.0);
            if (scale == 0.0) return std::vector<double>(n_sites - 1, j);  // N = 2
            return detail::tabulate(n_sites, [&](double i) {
              const double d = i - n / 2.0;
              return -0.95 * j * d * d / scale + j;
            });
          } else if constexpr (std::is_same_v<P, profile::Exponent>) {
            const double scale = (1.0 - n / 2.0) * (1.0 - n / 2.0);
            if (scale == 0.0) return std::vector<double>(n_sites - 1, j);  // N = 2
            return detail::tabulate(n_sites, [&](double i) {
              const double d = i - n / 2.0;
              return j * std::exp(std::log(0.05) * d * d / scale);
            });
          } else if constexpr (std::is_same_v<P, profile::PST>) {
            return detail::pst(n_sites, j);
          } else if constexpr (std::is_same_v<P, profile::Trapezia>) {
            const std::size_t ramp = p.ramp.value_or((n_sites + 4) / 5);
            if (ramp < 1) throw std::invalid_argument("profile: trapezia ramp must be >= 1 bond");
            const double r = static_cast<double>(ramp);
            return detail::tabulate(n_sites, [&](double i) {
              const double edge = std::min(i, n - i);
              return edge >= r ? j : edge / r * j;
            });
          } else if constexpr (std::is_same_v<P, profile::Interpolation>) {
            detail::require_positive(p.j0, "J0");
            if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 2.0))
              throw std::invalid_argument("profile: theta must lie in [0, pi/2]");
            auto out = detail::pst(n_sites, j);
            const auto weak = detail::weak_limit(n_sites, j, p.j0);
            // cos(pi/2) is not exactly 0 in floating point
            if (p.theta == 0.0) return weak;
            if (p.theta == std::numbers::pi / 2.0) return out;
            const double s = std::sin(p.theta);
            const double c = std::cos(p.theta);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * out[k] + c * weak[k];
            return out;
          }
        }
      },
      recipe);
}

/// Whether the profile kind is mirror symmetric by construction.
inline bool is_mirror_symmetric(const CouplingProfile& recipe) {
  if (const auto* e = std::get_if<profile::EndPattern>(&recipe)) return e->mirror;
  return !std::holds_alternative<profile::Custom>(recipe);
}

// ---------------------------------------------------------------------------
// End-pattern configurations of the figure cases.
//
// Cases 1 and 3 are stated in the text. Cases 2, 4, 5 and 6 are read off the
// configuration diagram and are figure-derived:
//   case 1: bond 1, mirrored                 (symmetric)
//   case 2: bonds 1, 2, mirrored             (symmetric)
//   case 3: bonds 1, 2 and N-1, no mirror    (asymmetric)
//   case 4: bonds 1, 2, 3, mirrored          (symmetric)
//   case 5: sender 4, receiver N-3; bond 4 (sender's inner side), mirrored
//   case 6: sender 4, receiver N-3; bonds 3 and 4 (both sides), mirrored

struct EndPatternCase {
  profile::EndPattern pattern;
  std::size_t sender = 1;
  std::size_t receiver = 0;
};

inline EndPatternCase end_pattern_case(int which, std::size_t n_sites, double j = 1.0, double j0 = 0.05) {
  if (n_sites < 8) throw std::invalid_argument("end pattern case: needs at least 8 sites");
  EndPatternCase out;
  out.pattern.j = j;
  out.pattern.j0 = j0;
  out.receiver = n_sites;
  switch (which) {
    case 1: out.pattern.bonds = {1}; out.pattern.mirror = true; break;
    case 2: out.pattern.bonds = {1, 2}; out.pattern.mirror = true; break;
    case 3: out.pattern.bonds = {1, 2, n_sites - 1}; out.pattern.mirror = false; break;
    case 4: out.pattern.bonds = {1, 2, 3}; out.pattern.mirror = true; break;
    case 5:
      out.pattern.bonds = {4};
      out.pattern.mirror = true;
      out.sender = 4;
      out.receiver = n_sites - 3;
      break;
    case 6:
      out.pattern.bonds = {3, 4};
      out.pattern.mirror = true;
      out.sender = 4;
      out.receiver = n_sites - 3;
      break;
    default: throw std::invalid_argument("end pattern case must be 1..6, got " + std::to_string(which));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disorder

struct DisorderSpec {
  double gamma = 0.0;    // static coupling amplitude
  double epsilon = 0.0;  // static on-site amplitude
  double eta = 0.0;      // dynamic coupling amplitude
  double tau = 0.1;      // dynamic refresh interval
  std::uint64_t master_seed = 0;

  void validate() const {
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("disorder: ") + name + " must be >= 0 and finite");
    };
    nonneg(gamma, "gamma");
    nonneg(epsilon, "epsilon");
    nonneg(eta, "eta");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("disorder: tau must be > 0");
  }

  bool is_static_free() const { return gamma == 0.0 && epsilon == 0.0; }
  bool has_dynamic() const { return eta != 0.0; }
};

/// Static defects of one realization: each coupling offset by gamma*u and each
/// site energy by epsilon*u', with u, u' uniform in [-1, 1].
inline ChainSpec sample_static_disorder(const ChainSpec& spec, const DisorderSpec& disorder,
                                        std::uint64_t realization) {
  disorder.validate();
  ChainSpec out = spec;
  if (disorder.gamma != 0.0)
    for (std::size_t i = 0; i < out.couplings.size(); ++i)
      out.couplings[i] +=
          disorder.gamma * keyed_uniform(disorder.master_seed, realization, 0, i, Stream::StaticCoupling);
  if (disorder.epsilon != 0.0)
    for (std::size_t i = 0; i < out.onsite.size(); ++i)
      out.onsite[i] +=
          disorder.epsilon * keyed_uniform(disorder.master_seed, realization, 0, i, Stream::StaticOnsite);
  return out;
}

/// Coupling noise held fixed over one refresh interval.
inline ChainSpec sample_noise_interval(const ChainSpec& spec, const DisorderSpec& disorder,
                                       std::uint64_t realization, std::uint64_t interval_index) {
  disorder.validate();
  ChainSpec out = spec;
  if (disorder.eta != 0.0)
    for (std::size_t i = 0; i < out.couplings.size(); ++i)
      out.couplings[i] += disorder.eta * keyed_uniform(disorder.master_seed, realization, interval_index, i,
                                                       Stream::DynamicCoupling);
  return out;
}

// ---------------------------------------------------------------------------
// Scalar relations

/// Fidelity of an unknown state alpha|0> + beta|1> given the known-state
/// fidelity F: sqrt(|alpha|^2 + |beta|^2 F).
inline double unknown_state_fidelity(double known_fidelity, double beta_sq) {
  if (!(known_fidelity >= 0.0 && known_fidelity <= 1.0))
    throw std::invalid_argument("unknown_state_fidelity: F must lie in [0, 1]");
  if (!(beta_sq >= 0.0 && beta_sq <= 1.0))
    throw std::invalid_argument("unknown_state_fidelity: |beta|^2 must lie in [0, 1]");
  return std::sqrt(1.0 - beta_sq + beta_sq * known_fidelity);
}

/// Tunneling rate J/E_R of a lattice of depth s (in recoil units).
inline double optical_lattice_tunneling(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("optical_lattice_tunneling: s must be > 0");
  return 4.0 / std::sqrt(std::numbers::pi) * std::pow(s, 0.75) * std::exp(-2.07 * std::sqrt(s));
}

}  // namespace spinwire
