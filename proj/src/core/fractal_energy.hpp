#pragma once

#include "complexity.hpp"
#include "dyadic.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bmdim {

/// Mass distribution on T_Z: halves at branch positions, follows the 0-child elsewhere.
class MassTree {
 public:
  MassTree(ResidueMask mask, std::size_t depth_cap = 4096) : mask_(mask), cap_(depth_cap) {}

  const ResidueMask& mask() const { return mask_; }
  std::size_t depth_cap() const { return cap_; }

  /// 2^-(branch positions below |sigma|) when sigma lies in T_Z, else 0.
  Dyadic cylinder_mass(const Bits& sigma) const;
  /// Draws a prefix of length n from the distribution.
  Bits sample(BitSource& source, std::size_t n) const;

 private:
  ResidueMask mask_;
  std::size_t cap_;
};

/// Exponent m of 2^-m = first differing position; nullopt when identical.
std::optional<std::size_t> ultrametric_exponent(const Bits& x, const Bits& y);

struct EnergyExact {
  bool divergent = false;
  double value = 0.0;      // full series
  double partial = 0.0;    // first `terms` terms
  double tail = 0.0;       // value - partial
};

/// Sum over m >= 1 of 2^-m * 2^(alpha * n_m), n_m the m-th branch position.
/// Divergent exactly when alpha >= p/q.
EnergyExact energy_exact(const ResidueMask& mask, const Rational& alpha, std::size_t terms = 64);

struct EnergyMcOptions {
  std::uint64_t samples = 1'000'000;
  std::size_t depth = 0;  // 0: auto, so about 2^5 pairs reach the truncation level
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double z = 3.2905267314919255;
};

struct EnergyMc {
  double mean = 0.0;
  double std_error = 0.0;
  double truncation = 0.0;  // exact expected shortfall of the truncated integrand
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t depth = 0;
  std::uint64_t samples = 0;
};

/// Mean of upsilon(x,y)^-alpha over sampled pairs truncated at `depth`
/// (pairs that agree up to depth count as 2^-depth apart). Refuses with
/// Error(Divergent) when alpha >= p/q.
EnergyMc energy_mc(const ResidueMask& mask, const Rational& alpha, const EnergyMcOptions& options);

struct DensityRow {
  std::size_t depth = 0;
  double max_ratio = 0.0;
};

/// max over sampled x of mu(B(x, 2^-n)) / 2^(-n alpha) per depth n, with
/// B(x, r) the cylinder of x of length n + 1.
std::vector<DensityRow> density_check(const ResidueMask& mask, const Rational& alpha, std::uint64_t samples,
                                      const std::vector<std::size_t>& depths, std::uint64_t seed);

/// Largest grid alpha with a finite energy; nullopt when none is.
std::optional<Rational> dimension_lower_bound(const ResidueMask& mask, const std::vector<Rational>& grid);
/// {k/denominator : 0 < k < denominator}.
std::vector<Rational> alpha_grid(std::uint64_t denominator);

}  // namespace bmdim
