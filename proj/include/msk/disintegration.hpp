#pragma once

#include <bit>
#include <utility>
#include <vector>

#include "msk/kernel.hpp"

namespace msk {

/// A Borel map f: X → Y together with measures μ on X and ν on Y, the raw
/// material of pushforward relations and disintegration.
struct MeasuredMap {
  SpaceMap f;
  Measure mu;
  Measure nu;

  MeasuredMap(SpaceMap map, Measure mu_, Measure nu_)
      : f(std::move(map)), mu(std::move(mu_)), nu(std::move(nu_)) {
    if (mu.space() != f.domain())
      throw InputError("measured map: mu lives on '" + mu.space().id() +
                       "', map leaves '" + f.domain().id() + "'");
    if (nu.space() != f.codomain())
      throw InputError("measured map: nu lives on '" + nu.space().id() +
                       "', map lands in '" + f.codomain().id() + "'");
  }
};

/// f_*μ = ν, exactly.
inline bool is_measure_preserving(const MeasuredMap& mm) {
  return pushforward(mm.f, mm.mu) == mm.nu;
}

/// f_*μ ~ ν (mutual absolute continuity). On finite spaces equivalence of
/// measures is equality of supports.
inline bool is_measure_class_preserving(const MeasuredMap& mm) {
  return pushforward(mm.f, mm.mu).support_mask() == mm.nu.support_mask();
}

/// Radon–Nikodym derivative h = dμ/dν of two measures on one space:
/// h(y) = μ(y)/ν(y) on supp(ν) and 0 off it, so that μ(E) = Σ_{y∈E} h(y)ν(y)
/// for every subset E. Requires μ ≪ ν; the returned h is automatically the
/// minimal L∞ representative, with bound C = max_y h(y).
inline std::vector<Rational> rn_derivative(const Measure& mu, const Measure& nu) {
  if (mu.space() != nu.space())
    throw InputError("rn_derivative: measures live on different spaces");
  std::vector<Rational> h(mu.space().size());
  for (std::size_t y = 0; y < h.size(); ++y) {
    const Rational& m = mu.mass(static_cast<int>(y));
    const Rational& n = nu.mass(static_cast<int>(y));
    if (n.is_zero()) {
      if (!m.is_zero())
        throw NotAbsolutelyContinuousError(mu.space().label(static_cast<int>(y)));
      continue;
    }
    h[y] = m / n;
  }
  return h;
}

/// Constructive disintegration of μ with respect to ν along f: the kernel
/// γʸ(x) = μ(x)/ν(y) for f(x) = y with ν(y) > 0, and γʸ = 0 at ν-null
/// points. Requires f measure-class-preserving, which guarantees μ vanishes
/// over ν-null fibers, so no division by zero can arise and the
/// reconstruction identity μ(E) = Σ_y ν(y)·γʸ(E) holds exactly.
inline Kernel disintegrate(const MeasuredMap& mm) {
  Measure push = pushforward(mm.f, mm.mu);
  Mask push_supp = push.support_mask();
  Mask nu_supp = mm.nu.support_mask();
  if (push_supp != nu_supp) {
    Mask diff = push_supp ^ nu_supp;
    int bit = std::countr_zero(diff);
    throw NotClassPreservingError(mm.f.codomain().label(bit));
  }
  std::vector<Measure> fibers;
  fibers.reserve(mm.f.codomain().size());
  for (std::size_t y = 0; y < mm.f.codomain().size(); ++y) {
    std::vector<Rational> mass(mm.f.domain().size());
    const Rational& ny = mm.nu.mass(static_cast<int>(y));
    if (!ny.is_zero())
      for (std::size_t x = 0; x < mass.size(); ++x)
        if (mm.f.apply_index(static_cast<int>(x)) == static_cast<int>(y))
          mass[x] = mm.mu.mass(static_cast<int>(x)) / ny;
    fibers.push_back(Measure(mm.f.domain(), std::move(mass)));
  }
  return detail::TrustedKernel::make(mm.f, std::move(fibers));
}

/// Whether k disintegrates μ with respect to ν: the reconstruction identity
/// checked at every singleton, which by additivity settles every subset.
inline bool is_disintegration(const MeasuredMap& mm, const Kernel& k) {
  if (k.base_map() != mm.f) return false;
  return integrate_measure(k, mm.nu) == mm.mu;
}

/// ν-a.e. uniqueness of disintegration, in its finite form: two
/// disintegrations of the same measured map agree at every y with ν(y) > 0.
inline bool disintegration_unique(const MeasuredMap& mm, const Kernel& k1, const Kernel& k2) {
  if (!is_disintegration(mm, k1) || !is_disintegration(mm, k2))
    throw InputError("disintegration_unique: inputs must both disintegrate mu w.r.t. nu");
  for (std::size_t y = 0; y < mm.f.codomain().size(); ++y) {
    if (mm.nu.mass(static_cast<int>(y)).is_zero()) continue;
    if (k1.at(static_cast<int>(y)) != k2.at(static_cast<int>(y))) return false;
  }
  return true;
}

/// Minimal constant C_K with μ(K ∩ f⁻¹(E)) ≤ C_K·ν(E) for every subset E:
/// the max over ν-positive y of μ(K ∩ f⁻¹(y))/ν(y), which also equals
/// sup_y γʸ(K) for the disintegration γ. Returns 0 when K misses supp(μ).
inline Rational bounded_constant(const MeasuredMap& mm, Mask k_subset) {
  if ((k_subset & ~mm.f.domain().full_mask()) != 0)
    throw InputError("bounded_constant: subset escapes the domain space");
  Measure push = pushforward(mm.f, mm.mu);
  if (push.support_mask() != mm.nu.support_mask()) {
    Mask diff = push.support_mask() ^ mm.nu.support_mask();
    throw NotClassPreservingError(mm.f.codomain().label(std::countr_zero(diff)));
  }
  Rational best;
  for (std::size_t y = 0; y < mm.f.codomain().size(); ++y) {
    const Rational& ny = mm.nu.mass(static_cast<int>(y));
    if (ny.is_zero()) continue;
    Mask fiber = mm.f.preimage_mask(Mask{1} << y);
    best = max(best, mm.mu.of(k_subset & fiber) / ny);
  }
  return best;
}

} // namespace msk
