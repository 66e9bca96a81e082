#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msk/measure.hpp"

namespace msk {

namespace detail {
struct TrustedKernel;
}

/// System of measures λ• on a map π: X → Y: one measure λʸ on X per point y
/// of Y, each concentrated on the fiber π⁻¹(y). On finite discrete spaces
/// every system of measures is automatically a Borel system (every function
/// on Y is Borel), every system is locally finite and bounded on compact
/// sets, and concentration is the only substantive constraint; it is
/// validated eagerly at construction.
class Kernel {
public:
  /// Validating constructor; `fibers` is indexed by codomain point order.
  Kernel(SpaceMap base, std::vector<Measure> fibers)
      : base_(std::move(base)), fibers_(std::move(fibers)) {
    validate();
  }

  /// Builds from a per-point family keyed by codomain labels. The family
  /// must cover exactly the codomain points.
  static Kernel from_family(SpaceMap base, const std::map<std::string, Measure>& family) {
    if (family.size() != base.codomain().size())
      throw InputError("kernel family must name each codomain point of '" +
                       base.codomain().id() + "' exactly once");
    std::vector<Measure> fibers;
    fibers.reserve(family.size());
    for (const auto& y : base.codomain().points()) {
      auto it = family.find(y);
      if (it == family.end())
        throw InputError("kernel family missing a measure for point '" + y + "'");
      fibers.push_back(it->second);
    }
    return Kernel(std::move(base), std::move(fibers));
  }

  /// δ-kernel on the identity: λʸ = δ_y.
  static Kernel identity(const FiniteSpace& s) {
    std::vector<Measure> fibers;
    fibers.reserve(s.size());
    for (const auto& y : s.points()) fibers.push_back(dirac(y, s));
    return Kernel(SpaceMap::identity(s), std::move(fibers));
  }

  static Kernel zero(SpaceMap base) {
    std::vector<Measure> fibers(base.codomain().size(), Measure::zero(base.domain()));
    return Kernel(std::move(base), std::move(fibers));
  }

  const SpaceMap& base_map() const { return base_; }
  const FiniteSpace& domain() const { return base_.domain(); }
  const FiniteSpace& codomain() const { return base_.codomain(); }

  const Measure& at(int y_index) const { return fibers_.at(static_cast<std::size_t>(y_index)); }
  const Measure& at(std::string_view y) const { return at(codomain().index_of(y)); }
  const std::vector<Measure>& fibers() const { return fibers_; }

  friend bool operator==(const Kernel& a, const Kernel& b) {
    return a.base_ == b.base_ && a.fibers_ == b.fibers_;
  }
  friend bool operator!=(const Kernel& a, const Kernel& b) { return !(a == b); }

private:
  friend struct detail::TrustedKernel;

  struct trusted_tag {};
  Kernel(trusted_tag, SpaceMap base, std::vector<Measure> fibers)
      : base_(std::move(base)), fibers_(std::move(fibers)) {
#ifndef NDEBUG
    validate();
#endif
  }

  void validate() const {
    if (fibers_.size() != base_.codomain().size())
      throw InputError("kernel must carry one measure per point of '" +
                       base_.codomain().id() + "'");
    for (std::size_t y = 0; y < fibers_.size(); ++y) {
      const Measure& lam = fibers_[y];
      if (lam.space() != base_.domain())
        throw InputError("kernel fiber measure lives on '" + lam.space().id() +
                         "', expected '" + base_.domain().id() + "'");
      for (std::size_t x = 0; x < lam.masses().size(); ++x)
        if (!lam.mass(static_cast<int>(x)).is_zero() &&
            base_.apply_index(static_cast<int>(x)) != static_cast<int>(y))
          throw ConcentrationError(base_.codomain().label(static_cast<int>(y)),
                                   base_.domain().label(static_cast<int>(x)),
                                   lam.mass(static_cast<int>(x)).str());
    }
  }

  SpaceMap base_;
  std::vector<Measure> fibers_;
};

namespace detail {

/// Constructions that preserve concentration by the shape of their formula
/// build through here; the full validation re-runs in debug builds only.
struct TrustedKernel {
  static Kernel make(SpaceMap base, std::vector<Measure> fibers) {
    return Kernel(Kernel::trusted_tag{}, std::move(base), std::move(fibers));
  }
};

} // namespace detail

/// Validating construction from a labelled family.
inline Kernel new_kernel(SpaceMap pi, const std::map<std::string, Measure>& family) {
  return Kernel::from_family(std::move(pi), family);
}

/// y ↦ λʸ(E), indexed by codomain point order. Borel automatically.
inline std::vector<Rational> evaluate(const Kernel& k, Mask e) {
  if ((e & ~k.domain().full_mask()) != 0)
    throw InputError("evaluate: subset escapes the kernel domain");
  std::vector<Rational> out;
  out.reserve(k.fibers().size());
  for (const auto& lam : k.fibers()) out.push_back(lam.of(e));
  return out;
}

inline std::vector<Rational> evaluate(const Kernel& k, std::span<const std::string> labels) {
  return evaluate(k, k.domain().mask_of(labels));
}

/// y ↦ ∫ f dλʸ for a nonnegative rational f given pointwise on the domain.
/// Linear in f; agrees with evaluate on indicator functions.
inline std::vector<Rational> integrate_fn(const Kernel& k, std::span<const Rational> f) {
  if (f.size() != k.domain().size())
    throw InputError("integrate_fn: function must be total on the kernel domain");
  std::vector<Rational> out;
  out.reserve(k.fibers().size());
  for (const auto& lam : k.fibers()) {
    Rational r;
    for (std::size_t x = 0; x < f.size(); ++x) r += f[x] * lam.mass(static_cast<int>(x));
    out.push_back(std::move(r));
  }
  return out;
}

/// Positive on open sets: supp(λʸ) = π⁻¹(y) for every y. Empty fibers force
/// the zero measure and never falsify.
inline bool is_positive_on_open_sets(const Kernel& k) {
  for (std::size_t y = 0; y < k.fibers().size(); ++y) {
    Mask fiber = k.base_map().preimage_mask(Mask{1} << y);
    if (k.at(static_cast<int>(y)).support_mask() != fiber) return false;
  }
  return true;
}

/// Always true: masses are finite rationals by construction. Retained for
/// interface parity with the finite/locally-finite/locally-bounded family of
/// notions, which all coincide here.
inline bool is_finite_system(const Kernel&) { return true; }

inline bool is_probability_system(const Kernel& k) {
  for (const auto& lam : k.fibers())
    if (lam.total() != Rational(1)) return false;
  return true;
}

/// max_y λʸ(K); the finite analogue of boundedness constants on compacts.
inline Rational sup_on_set(const Kernel& k, Mask subset) {
  Rational best;
  for (const auto& lam : k.fibers()) best = max(best, lam.of(subset));
  return best;
}

/// Composition (β∘α)ᶻ(E) = ∫_Y αʸ(E) dβᶻ(y): beta after alpha, a kernel on
/// q∘p. Atomically, (β∘α)ᶻ(x) = Σ_y βᶻ(y)·αʸ(x).
inline Kernel compose(const Kernel& alpha, const Kernel& beta) {
  if (alpha.codomain() != beta.domain())
    throw InputError("kernel composition mismatch: '" + alpha.codomain().id() +
                     "' vs '" + beta.domain().id() + "'");
  SpaceMap base = alpha.base_map().then(beta.base_map());
  std::vector<Measure> fibers;
  fibers.reserve(beta.codomain().size());
  for (std::size_t z = 0; z < beta.codomain().size(); ++z) {
    std::vector<Rational> mass(alpha.domain().size());
    const Measure& bz = beta.at(static_cast<int>(z));
    for (std::size_t y = 0; y < alpha.codomain().size(); ++y) {
      const Rational& w = bz.mass(static_cast<int>(y));
      if (w.is_zero()) continue;
      const Measure& ay = alpha.at(static_cast<int>(y));
      for (std::size_t x = 0; x < mass.size(); ++x)
        mass[x] += w * ay.mass(static_cast<int>(x));
    }
    fibers.push_back(Measure(alpha.domain(), std::move(mass)));
  }
  return detail::TrustedKernel::make(std::move(base), std::move(fibers));
}

/// μ(E) = ∫_Y αʸ(E) dβ(y): integrating a measure on the codomain through the
/// kernel yields a measure on the domain. Equals composition against the
/// one-point-space view of β.
inline Measure integrate_measure(const Kernel& alpha, const Measure& beta) {
  if (beta.space() != alpha.codomain())
    throw InputError("integrate_measure: measure lives on '" + beta.space().id() +
                     "', kernel lands in '" + alpha.codomain().id() + "'");
  std::vector<Rational> mass(alpha.domain().size());
  for (std::size_t y = 0; y < beta.masses().size(); ++y) {
    const Rational& w = beta.mass(static_cast<int>(y));
    if (w.is_zero()) continue;
    const Measure& ay = alpha.at(static_cast<int>(y));
    for (std::size_t x = 0; x < mass.size(); ++x)
      mass[x] += w * ay.mass(static_cast<int>(x));
  }
  return Measure(alpha.domain(), std::move(mass));
}

} // namespace msk
