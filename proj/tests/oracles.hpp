// Independent brute-force oracles. Everything here recomputes expected
// values from first principles (exhaustive enumeration over subsets, atom
// partitions, raw double sums) and must stay independent of the library
// implementation paths it is used to check.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "msk/disintegration.hpp"
#include "msk/pullback.hpp"
#include "msk/setsystem.hpp"

namespace oracle {

using msk::Mask;
using msk::Measure;
using msk::MeasuredMap;
using msk::Kernel;
using msk::Rational;

/// Reconstruction identity mu(E) = sum_y nu(y)·k^y(E) checked literally over
/// every one of the 2^|X| subsets.
inline bool is_disintegration_all_subsets(const MeasuredMap& mm, const Kernel& k) {
  const std::size_t n = mm.mu.space().size();
  for (Mask e = 0;; ++e) {
    Rational lhs = mm.mu.of(e);
    Rational rhs;
    for (std::size_t y = 0; y < mm.nu.space().size(); ++y)
      rhs += mm.nu.mass(static_cast<int>(y)) * k.at(static_cast<int>(y)).of(e);
    if (lhs != rhs) return false;
    if (e == (n == 64 ? ~Mask{0} : (Mask{1} << n) - 1)) break;
  }
  return true;
}

/// Second, route-independent construction of the disintegration: restrict mu
/// to each fiber and rescale by 1/nu(y); zero measure at nu-null points.
inline Kernel disintegrate_by_restriction(const MeasuredMap& mm) {
  std::map<std::string, Measure> family;
  for (std::size_t y = 0; y < mm.nu.space().size(); ++y) {
    Mask fiber = mm.f.preimage_mask(Mask{1} << y);
    const Rational& ny = mm.nu.mass(static_cast<int>(y));
    Measure restricted = Measure::zero(mm.mu.space());
    if (!ny.is_zero()) {
      std::vector<Rational> mass(mm.mu.space().size());
      for (std::size_t x = 0; x < mass.size(); ++x)
        if (fiber >> x & 1) mass[x] = mm.mu.mass(static_cast<int>(x));
      restricted = msk::scale(Rational(1) / ny, Measure(mm.mu.space(), std::move(mass)));
    }
    family.emplace(mm.nu.space().label(static_cast<int>(y)), std::move(restricted));
  }
  return Kernel::from_family(mm.f, family);
}

/// Minimal constant C with mu(K ∩ f⁻¹(E)) <= C·nu(E) for all E, found by
/// enumerating every subset E of Y. Returns nullopt when no finite constant
/// exists (some nu-null E catches mu-mass).
inline std::optional<Rational> min_bound_constant_all_subsets(const MeasuredMap& mm,
                                                              Mask k_subset) {
  const std::size_t n = mm.nu.space().size();
  Rational best;
  for (Mask e = 0;; ++e) {
    Rational covered = mm.mu.of(k_subset & mm.f.preimage_mask(e));
    Rational weight = mm.nu.of(e);
    if (weight.is_zero()) {
      if (!covered.is_zero()) return std::nullopt;
    } else {
      best = msk::max(best, covered / weight);
    }
    if (e == (n == 64 ? ~Mask{0} : (Mask{1} << n) - 1)) break;
  }
  return best;
}

/// sigma-algebra generated by a family, via the atom partition: two points
/// are equivalent when no member separates them; the sigma-algebra is the
/// set of unions of atoms.
inline std::vector<Mask> sigma_by_atoms(const msk::SetFamily& f) {
  const std::size_t n = f.ground().size();
  std::vector<Mask> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    Mask atom = f.ground().full_mask();
    for (Mask m : f.members())
      atom &= (m >> i & 1) ? m : ~m & f.ground().full_mask();
    if (std::find(atoms.begin(), atoms.end(), atom) == atoms.end()) atoms.push_back(atom);
  }
  std::vector<Mask> out;
  for (Mask pick = 0;; ++pick) {
    Mask u = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (pick >> a & 1) u |= atoms[a];
    out.push_back(u);
    if (pick == (atoms.empty() ? 0 : (Mask{1} << atoms.size()) - 1)) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Intersection closure of a family of masks (all finite intersections of
/// nonempty subcollections), by fixpoint of pairwise intersection.
inline std::vector<Mask> pi_closure(std::vector<Mask> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Mask> fresh;
    for (Mask a : sets)
      for (Mask b : sets) {
        Mask c = a & b;
        if (!std::binary_search(sets.begin(), sets.end(), c) &&
            std::find(fresh.begin(), fresh.end(), c) == fresh.end())
          fresh.push_back(c);
      }
    if (!fresh.empty()) {
      grew = true;
      sets.insert(sets.end(), fresh.begin(), fresh.end());
      std::sort(sets.begin(), sets.end());
    }
  }
  return sets;
}

/// Elementary subset (A × B) ∩ (X*Y) of a pullback, as a mask over the
/// pullback's points.
inline Mask elementary_mask(const msk::Pullback& pb, Mask a, Mask b) {
  Mask out = 0;
  for (std::size_t pt = 0; pt < pb.pairs().size(); ++pt) {
    const auto& [x, y] = pb.pairs()[pt];
    if ((a >> x & 1) && (b >> y & 1)) out |= Mask{1} << pt;
  }
  return out;
}

} // namespace oracle
