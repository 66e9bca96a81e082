#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "msk/rational.hpp"
#include "msk/space.hpp"

namespace msk {

/// Finite positive Borel measure on a finite discrete space, stored densely:
/// every point has an explicit (possibly zero) mass. Total mass is always a
/// finite rational by construction; infinite-valued measures are not modeled.
class Measure {
public:
  static Measure zero(FiniteSpace space) { return Measure(std::move(space)); }

  /// Builds from named atoms; points not mentioned get mass zero.
  static Measure from_atoms(FiniteSpace space,
                            const std::map<std::string, Rational>& atoms) {
    Measure m(std::move(space));
    for (const auto& [label, r] : atoms)
      m.mass_[static_cast<std::size_t>(m.space_.index_of(label))] = r;
    return m;
  }

  Measure(FiniteSpace space, std::vector<Rational> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {
    if (mass_.size() != space_.size())
      throw InputError("mass vector size mismatch on space '" + space_.id() + "'");
  }

  const FiniteSpace& space() const { return space_; }

  const Rational& mass(int i) const { return mass_.at(static_cast<std::size_t>(i)); }
  const Rational& mass(std::string_view label) const {
    return mass_[static_cast<std::size_t>(space_.index_of(label))];
  }
  const std::vector<Rational>& masses() const { return mass_; }

  /// m(E) for a subset given as a mask.
  Rational of(Mask subset) const {
    space_.full_mask(); // enforce the 64-point mask limit
    Rational r;
    for (std::size_t i = 0; i < mass_.size(); ++i)
      if (subset >> i & 1) r += mass_[i];
    return r;
  }

  Rational total() const {
    Rational r;
    for (const auto& m : mass_) r += m;
    return r;
  }

  Mask support_mask() const {
    space_.full_mask(); // enforce the 64-point mask limit
    Mask m = 0;
    for (std::size_t i = 0; i < mass_.size(); ++i)
      if (!mass_[i].is_zero()) m |= Mask{1} << i;
    return m;
  }

  bool is_zero() const {
    for (const auto& m : mass_)
      if (!m.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.space_ == b.space_ && a.mass_ == b.mass_;
  }
  friend bool operator!=(const Measure& a, const Measure& b) { return !(a == b); }

private:
  explicit Measure(FiniteSpace space)
      : space_(std::move(space)), mass_(space_.size()) {}

  FiniteSpace space_;
  std::vector<Rational> mass_;
};

/// supp(m): on a discrete space, exactly the set of positive-mass atoms.
inline std::vector<std::string> support(const Measure& m) {
  return m.space().labels_of(m.support_mask());
}

inline Rational total_mass(const Measure& m) { return m.total(); }

/// True iff m(X \ S) = 0. Equivalent to support(m) ⊆ S.
inline bool is_concentrated_on(const Measure& m, Mask subset) {
  return (m.support_mask() & ~subset) == 0;
}

inline bool is_concentrated_on(const Measure& m, std::span<const std::string> labels) {
  return is_concentrated_on(m, m.space().mask_of(labels));
}

inline Measure add(const Measure& a, const Measure& b) {
  if (a.space() != b.space())
    throw InputError("measure addition across different spaces: '" + a.space().id() +
                     "' vs '" + b.space().id() + "'");
  std::vector<Rational> mass(a.masses());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] += b.mass(static_cast<int>(i));
  return Measure(a.space(), std::move(mass));
}

inline Measure scale(const Rational& c, const Measure& m) {
  std::vector<Rational> mass(m.masses());
  for (auto& r : mass) r *= c;
  return Measure(m.space(), std::move(mass));
}

/// Unit mass at x.
inline Measure dirac(std::string_view x, const FiniteSpace& space) {
  std::vector<Rational> mass(space.size());
  mass[static_cast<std::size_t>(space.index_of(x))] = Rational(1);
  return Measure(space, std::move(mass));
}

/// Cartesian product space with points encoded "(x|y)" in lexicographic
/// (x-major) order.
inline FiniteSpace product_space(const FiniteSpace& a, const FiniteSpace& b) {
  std::vector<std::string> points;
  points.reserve(a.size() * b.size());
  for (const auto& x : a.points())
    for (const auto& y : b.points()) points.push_back("(" + x + "|" + y + ")");
  return FiniteSpace("(" + a.id() + "x" + b.id() + ")", std::move(points));
}

/// m1 × m2 on the product space: mass(x,y) = m1(x)·m2(y).
inline Measure product_measure(const Measure& m1, const Measure& m2) {
  FiniteSpace prod = product_space(m1.space(), m2.space());
  std::vector<Rational> mass;
  mass.reserve(prod.size());
  for (std::size_t i = 0; i < m1.space().size(); ++i)
    for (std::size_t j = 0; j < m2.space().size(); ++j)
      mass.push_back(m1.mass(static_cast<int>(i)) * m2.mass(static_cast<int>(j)));
  return Measure(std::move(prod), std::move(mass));
}

/// f_* m: (f_* m)(F) = m(f⁻¹(F)) for every subset F; computed by fiber sums.
inline Measure pushforward(const SpaceMap& f, const Measure& m) {
  if (m.space() != f.domain())
    throw InputError("pushforward: measure lives on '" + m.space().id() +
                     "', map leaves '" + f.domain().id() + "'");
  std::vector<Rational> mass(f.codomain().size());
  for (std::size_t i = 0; i < m.space().size(); ++i)
    mass[static_cast<std::size_t>(f.apply_index(static_cast<int>(i)))] +=
        m.mass(static_cast<int>(i));
  return Measure(f.codomain(), std::move(mass));
}

} // namespace msk
