#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msk/kernel.hpp"

namespace msk {

/// Pullback X *_Z Y of two maps p: X → Z and q: Y → Z: the space of pairs
/// {(x,y) : p(x) = q(y)} with its two projections. Points use the canonical
/// encoding "(x|y)" in lexicographic (x-major) order, so pullbacks built
/// twice from the same legs are equal, and kernels constructed along
/// different routes over the same square can be compared directly.
class Pullback {
public:
  Pullback(SpaceMap p, SpaceMap q)
      : left_(std::move(p)), right_(std::move(q)),
        space_(build_space(left_, right_, pairs_)),
        proj_left_(build_proj(space_, left_.domain(), pairs_, true)),
        proj_right_(build_proj(space_, right_.domain(), pairs_, false)) {}

  const SpaceMap& left() const { return left_; }    // p: X → Z
  const SpaceMap& right() const { return right_; }  // q: Y → Z
  const FiniteSpace& space() const { return space_; }
  const SpaceMap& proj_left() const { return proj_left_; }
  const SpaceMap& proj_right() const { return proj_right_; }

  /// Matching index pairs (x,y), aligned with the space's point order.
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  friend bool operator==(const Pullback& a, const Pullback& b) {
    return a.left_ == b.left_ && a.right_ == b.right_;
  }
  friend bool operator!=(const Pullback& a, const Pullback& b) { return !(a == b); }

private:
  static FiniteSpace build_space(const SpaceMap& p, const SpaceMap& q,
                                 std::vector<std::pair<int, int>>& pairs) {
    if (p.codomain() != q.codomain())
      throw InputError("pullback legs land in different spaces: '" +
                       p.codomain().id() + "' vs '" + q.codomain().id() + "'");
    std::vector<std::string> points;
    for (std::size_t x = 0; x < p.domain().size(); ++x)
      for (std::size_t y = 0; y < q.domain().size(); ++y)
        if (p.apply_index(static_cast<int>(x)) == q.apply_index(static_cast<int>(y))) {
          pairs.emplace_back(static_cast<int>(x), static_cast<int>(y));
          points.push_back("(" + p.domain().label(static_cast<int>(x)) + "|" +
                           q.domain().label(static_cast<int>(y)) + ")");
        }
    return FiniteSpace("(" + p.domain().id() + "*" + q.domain().id() + ")",
                       std::move(points));
  }

  static SpaceMap build_proj(const FiniteSpace& space, const FiniteSpace& target,
                             const std::vector<std::pair<int, int>>& pairs, bool first) {
    std::vector<int> to;
    to.reserve(pairs.size());
    for (const auto& [x, y] : pairs) to.push_back(first ? x : y);
    return SpaceMap(space, target, std::move(to));
  }

  SpaceMap left_;
  SpaceMap right_;
  std::vector<std::pair<int, int>> pairs_;
  FiniteSpace space_;
  SpaceMap proj_left_;
  SpaceMap proj_right_;
};

inline Pullback make_pullback(SpaceMap p, SpaceMap q) {
  return Pullback(std::move(p), std::move(q));
}

/// Lifting (q*α)ʸ = α^{q(y)} × δ_y of a kernel α on the left leg p to the
/// right projection π_Y. On an elementary set E = (A×B) ∩ (X*Y) the lift
/// evaluates to α^{q(y)}(A)·δ_y(B). The kernel must be given on the exact
/// left-leg map of this pullback, not a merely similar one.
inline Kernel lift_right(const Pullback& pb, const Kernel& alpha) {
  if (alpha.base_map() != pb.left())
    throw InputError("lift_right: kernel is not based on this pullback's left leg");
  const FiniteSpace& y_space = pb.right().domain();
  std::vector<Measure> fibers;
  fibers.reserve(y_space.size());
  for (std::size_t y = 0; y < y_space.size(); ++y) {
    int z = pb.right().apply_index(static_cast<int>(y));
    const Measure& az = alpha.at(z);
    std::vector<Rational> mass(pb.space().size());
    for (std::size_t pt = 0; pt < pb.pairs().size(); ++pt) {
      const auto& [xi, yi] = pb.pairs()[pt];
      if (yi == static_cast<int>(y)) mass[pt] = az.mass(xi);
    }
    fibers.push_back(Measure(pb.space(), std::move(mass)));
  }
  return detail::TrustedKernel::make(pb.proj_right(), std::move(fibers));
}

/// Mirror lifting (p*β)ˣ = δ_x × β^{p(x)} of a kernel β on the right leg q
/// to the left projection π_X.
inline Kernel lift_left(const Pullback& pb, const Kernel& beta) {
  if (beta.base_map() != pb.right())
    throw InputError("lift_left: kernel is not based on this pullback's right leg");
  const FiniteSpace& x_space = pb.left().domain();
  std::vector<Measure> fibers;
  fibers.reserve(x_space.size());
  for (std::size_t x = 0; x < x_space.size(); ++x) {
    int z = pb.left().apply_index(static_cast<int>(x));
    const Measure& bz = beta.at(z);
    std::vector<Rational> mass(pb.space().size());
    for (std::size_t pt = 0; pt < pb.pairs().size(); ++pt) {
      const auto& [xi, yi] = pb.pairs()[pt];
      if (xi == static_cast<int>(x)) mass[pt] = bz.mass(yi);
    }
    fibers.push_back(Measure(pb.space(), std::move(mass)));
  }
  return detail::TrustedKernel::make(pb.proj_left(), std::move(fibers));
}

struct SquareWitness {
  std::string z;
  std::string point;
  Rational via_right; // (β ∘ q*α)ᶻ at the point
  Rational via_left;  // (α ∘ p*β)ᶻ at the point
};

struct SquareReport {
  bool commutes = false;
  std::optional<SquareWitness> witness;
};

/// Composes both ways around the pullback square of α (on p: X→Z) and
/// β (on q: Y→Z) and compares the resulting kernels atom by atom:
/// (β ∘ q*α)• = (α ∘ p*β)•. A theorem for every valid input; the first
/// differing (z, point) is reported if the implementation ever disagrees.
inline SquareReport check_square(const Kernel& alpha, const Kernel& beta) {
  if (alpha.codomain() != beta.codomain())
    throw InputError("check_square: kernels do not share a base space");
  Pullback pb(alpha.base_map(), beta.base_map());
  Kernel via_right = compose(lift_right(pb, alpha), beta);
  Kernel via_left = compose(lift_left(pb, beta), alpha);
  SquareReport report;
  for (std::size_t z = 0; z < beta.codomain().size(); ++z)
    for (std::size_t pt = 0; pt < pb.space().size(); ++pt) {
      const Rational& r = via_right.at(static_cast<int>(z)).mass(static_cast<int>(pt));
      const Rational& l = via_left.at(static_cast<int>(z)).mass(static_cast<int>(pt));
      if (r != l) {
        report.witness = SquareWitness{beta.codomain().label(static_cast<int>(z)),
                                       pb.space().label(static_cast<int>(pt)), r, l};
        return report;
      }
    }
  report.commutes = true;
  return report;
}

} // namespace msk
