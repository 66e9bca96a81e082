#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msk/pullback.hpp"

namespace msk {

/// Two pullback squares over the same base connected by maps f: X₁ → X₂ and
/// g: Y₁ → Y₂ with p₁ = p₂∘f and q₁ = q₂∘g, together with the induced map
/// f*g: X₁*Y₁ → X₂*Y₂, (x,y) ↦ (f(x), g(y)). The fibers of f*g are the
/// Cartesian products (f*g)⁻¹(x₂,y₂) = f⁻¹(x₂) × g⁻¹(y₂).
class FibredSquare {
public:
  FibredSquare(SpaceMap f, SpaceMap g, Pullback lower, Pullback upper)
      : f_(std::move(f)), g_(std::move(g)),
        lower_(std::move(lower)), upper_(std::move(upper)),
        fg_(build_fg(f_, g_, lower_, upper_)) {}

  const SpaceMap& f() const { return f_; }
  const SpaceMap& g() const { return g_; }
  const Pullback& lower() const { return lower_; }
  const Pullback& upper() const { return upper_; }
  const SpaceMap& fg() const { return fg_; }

private:
  static SpaceMap build_fg(const SpaceMap& f, const SpaceMap& g,
                           const Pullback& lower, const Pullback& upper) {
    if (f.domain() != lower.left().domain() || g.domain() != lower.right().domain())
      throw InputError("fibred square: connecting maps do not leave the lower pullback legs");
    if (f.codomain() != upper.left().domain() || g.codomain() != upper.right().domain())
      throw InputError("fibred square: connecting maps do not reach the upper pullback legs");
    for (std::size_t x = 0; x < f.domain().size(); ++x) {
      int lhs = lower.left().apply_index(static_cast<int>(x));
      int rhs = upper.left().apply_index(f.apply_index(static_cast<int>(x)));
      if (lhs != rhs)
        throw CompatibilityError(f.domain().label(static_cast<int>(x)),
                                 "p1(x) = p2(f(x))");
    }
    for (std::size_t y = 0; y < g.domain().size(); ++y) {
      int lhs = lower.right().apply_index(static_cast<int>(y));
      int rhs = upper.right().apply_index(g.apply_index(static_cast<int>(y)));
      if (lhs != rhs)
        throw CompatibilityError(g.domain().label(static_cast<int>(y)),
                                 "q1(y) = q2(g(y))");
    }

    // Compatibility puts (f(x), g(y)) in the upper pullback for every lower
    // point, so the index lookup below always succeeds.
    std::vector<int> upper_index(f.codomain().size() * g.codomain().size(), -1);
    for (std::size_t pt = 0; pt < upper.pairs().size(); ++pt) {
      const auto& [x2, y2] = upper.pairs()[pt];
      upper_index[static_cast<std::size_t>(x2) * g.codomain().size() +
                  static_cast<std::size_t>(y2)] = static_cast<int>(pt);
    }
    std::vector<int> to;
    to.reserve(lower.pairs().size());
    for (const auto& [x1, y1] : lower.pairs()) {
      int x2 = f.apply_index(x1);
      int y2 = g.apply_index(y1);
      to.push_back(upper_index[static_cast<std::size_t>(x2) * g.codomain().size() +
                               static_cast<std::size_t>(y2)]);
    }
    return SpaceMap(lower.space(), upper.space(), std::move(to));
  }

  SpaceMap f_;
  SpaceMap g_;
  Pullback lower_;
  Pullback upper_;
  SpaceMap fg_;
};

inline FibredSquare make_fibred_map(SpaceMap f, SpaceMap g, Pullback lower, Pullback upper) {
  return FibredSquare(std::move(f), std::move(g), std::move(lower), std::move(upper));
}

/// Fibred product (γ_X * γ_Y)^{(x₂,y₂)} = γ_X^{x₂} × γ_Y^{y₂} as a kernel on
/// f*g. On an elementary set E = (A×B) ∩ (X₁*Y₁) it evaluates to
/// γ_X^{x₂}(A)·γ_Y^{y₂}(B); empty fibers yield the zero measure.
inline Kernel fibred_product_kernel(const Kernel& gamma_x, const Kernel& gamma_y,
                                    const FibredSquare& square) {
  if (gamma_x.base_map() != square.f())
    throw InputError("fibred product: first kernel is not based on the f connecting map");
  if (gamma_y.base_map() != square.g())
    throw InputError("fibred product: second kernel is not based on the g connecting map");
  const Pullback& lower = square.lower();
  const Pullback& upper = square.upper();
  std::vector<Measure> fibers;
  fibers.reserve(upper.space().size());
  for (const auto& [x2, y2] : upper.pairs()) {
    const Measure& mx = gamma_x.at(x2);
    const Measure& my = gamma_y.at(y2);
    std::vector<Rational> mass;
    mass.reserve(lower.space().size());
    for (const auto& [x1, y1] : lower.pairs()) mass.push_back(mx.mass(x1) * my.mass(y1));
    fibers.push_back(Measure(lower.space(), std::move(mass)));
  }
  return detail::TrustedKernel::make(square.fg(), std::move(fibers));
}

struct InterchangeWitness {
  std::string top_point;  // point of X₃*Y₃
  std::string point;      // point of X₁*Y₁
  Rational composed_of_products;
  Rational product_of_composites;
};

struct InterchangeReport {
  bool ok = false;
  std::optional<InterchangeWitness> witness;
};

/// The interchange law between fibred products and composition on a
/// two-stage tower of compatible squares:
///   [(γ₂*ξ₂) ∘ (γ₁*ξ₁)]• = [(γ₂∘γ₁) * (ξ₂∘ξ₁)]•.
/// Both sides are built independently and compared atom by atom. A theorem
/// for every compatible tower; a witness is reported on any mismatch.
inline InterchangeReport check_interchange(const Kernel& gamma1, const Kernel& xi1,
                                           const FibredSquare& stage1,
                                           const Kernel& gamma2, const Kernel& xi2,
                                           const FibredSquare& stage2) {
  if (!(stage1.upper() == stage2.lower()))
    throw InputError("check_interchange: the tower's middle pullbacks differ");
  Kernel lhs = compose(fibred_product_kernel(gamma1, xi1, stage1),
                       fibred_product_kernel(gamma2, xi2, stage2));
  FibredSquare outer(stage1.f().then(stage2.f()), stage1.g().then(stage2.g()),
                     stage1.lower(), stage2.upper());
  Kernel rhs = fibred_product_kernel(compose(gamma1, gamma2), compose(xi1, xi2), outer);
  InterchangeReport report;
  const FiniteSpace& top = stage2.upper().space();
  const FiniteSpace& bottom = stage1.lower().space();
  for (std::size_t t = 0; t < top.size(); ++t)
    for (std::size_t pt = 0; pt < bottom.size(); ++pt) {
      const Rational& a = lhs.at(static_cast<int>(t)).mass(static_cast<int>(pt));
      const Rational& b = rhs.at(static_cast<int>(t)).mass(static_cast<int>(pt));
      if (a != b) {
        report.witness = InterchangeWitness{top.label(static_cast<int>(t)),
                                            bottom.label(static_cast<int>(pt)), a, b};
        return report;
      }
    }
  report.ok = true;
  return report;
}

} // namespace msk
