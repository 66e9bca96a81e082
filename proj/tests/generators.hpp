// Seeded random instance generators shared by the unit and acceptance
// suites. All sampling is deterministic per seed.
#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "msk/disintegration.hpp"
#include "msk/fibred.hpp"
#include "msk/groupoid.hpp"
#include "msk/setsystem.hpp"

namespace gen {

using msk::FibredSquare;
using msk::FiniteGroupoid;
using msk::FiniteSpace;
using msk::Kernel;
using msk::Mask;
using msk::Measure;
using msk::MeasuredMap;
using msk::Pullback;
using msk::Rational;
using msk::SetFamily;
using msk::SpaceMap;

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational rational(Rng& rng, bool positive = false) {
  return Rational(static_cast<unsigned long long>(pick(rng, positive ? 1 : 0, 6)),
                  static_cast<unsigned long long>(pick(rng, 1, 6)));
}

inline FiniteSpace space(Rng& rng, const std::string& prefix, int min_pts, int max_pts) {
  int n = pick(rng, min_pts, max_pts);
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(prefix + std::to_string(i));
  return FiniteSpace(prefix, std::move(points));
}

inline SpaceMap map(Rng& rng, const FiniteSpace& dom, const FiniteSpace& cod) {
  std::vector<int> to;
  to.reserve(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i)
    to.push_back(pick(rng, 0, static_cast<int>(cod.size()) - 1));
  return SpaceMap(dom, cod, std::move(to));
}

inline Measure measure(Rng& rng, const FiniteSpace& s, bool positive = false) {
  std::vector<Rational> mass;
  mass.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) mass.push_back(rational(rng, positive));
  return Measure(s, std::move(mass));
}

/// Random kernel on the map: masses only on fiber atoms, so concentration
/// holds by construction. `positive` forces full support on every fiber.
inline Kernel kernel(Rng& rng, const SpaceMap& base, bool positive = false) {
  std::vector<Measure> fibers;
  for (std::size_t y = 0; y < base.codomain().size(); ++y) {
    std::vector<Rational> mass(base.domain().size());
    for (int x : base.fiber_indices(static_cast<int>(y)))
      mass[static_cast<std::size_t>(x)] = rational(rng, positive);
    fibers.push_back(Measure(base.domain(), std::move(mass)));
  }
  return Kernel(base, std::move(fibers));
}

struct Square {
  FiniteSpace X, Y, Z;
  SpaceMap p, q;
  Kernel alpha, beta;
};

inline Square square(Rng& rng, int max_pts = 5, bool positive = false) {
  FiniteSpace X = space(rng, "x", 1, max_pts);
  FiniteSpace Y = space(rng, "y", 1, max_pts);
  FiniteSpace Z = space(rng, "z", 1, max_pts);
  SpaceMap p = map(rng, X, Z);
  SpaceMap q = map(rng, Y, Z);
  Kernel alpha = kernel(rng, p, positive);
  Kernel beta = kernel(rng, q, positive);
  return Square{X, Y, Z, p, q, alpha, beta};
}

/// Random measured map with support(f_* mu) = support(nu) guaranteed, by
/// drawing nu positive exactly on the pushforward's support.
inline MeasuredMap class_preserving(Rng& rng, int max_x = 10) {
  FiniteSpace X = space(rng, "x", 1, max_x);
  FiniteSpace Y = space(rng, "y", 1, std::max(1, static_cast<int>(X.size())));
  SpaceMap f = map(rng, X, Y);
  Measure mu = measure(rng, X);
  Measure push = msk::pushforward(f, mu);
  std::vector<Rational> numass(Y.size());
  for (std::size_t y = 0; y < Y.size(); ++y)
    if (!push.mass(static_cast<int>(y)).is_zero()) numass[y] = rational(rng, true);
  return MeasuredMap(f, mu, Measure(Y, std::move(numass)));
}

struct Tower {
  FiniteSpace X1, X2, X3, Y1, Y2, Y3, Z;
  SpaceMap f1, f2, g1, g2;
  SpaceMap p1, p2, p3, q1, q2, q3;
  Pullback lower, middle, upper;
  FibredSquare stage1, stage2;
  Kernel gamma1, gamma2, xi1, xi2;
};

/// Compatible two-stage tower: the top legs p3/q3 are drawn freely and the
/// lower legs derived by composition, so compatibility holds by
/// construction.
inline Tower tower(Rng& rng, int max_pts = 4, bool positive = false) {
  FiniteSpace X1 = space(rng, "x1_", 1, max_pts), X2 = space(rng, "x2_", 1, max_pts),
              X3 = space(rng, "x3_", 1, max_pts);
  FiniteSpace Y1 = space(rng, "y1_", 1, max_pts), Y2 = space(rng, "y2_", 1, max_pts),
              Y3 = space(rng, "y3_", 1, max_pts);
  FiniteSpace Z = space(rng, "z_", 1, max_pts);
  SpaceMap f1 = map(rng, X1, X2), f2 = map(rng, X2, X3);
  SpaceMap g1 = map(rng, Y1, Y2), g2 = map(rng, Y2, Y3);
  SpaceMap p3 = map(rng, X3, Z), q3 = map(rng, Y3, Z);
  SpaceMap p2 = f2.then(p3), q2 = g2.then(q3);
  SpaceMap p1 = f1.then(p2), q1 = g1.then(q2);
  Pullback lower(p1, q1), middle(p2, q2), upper(p3, q3);
  FibredSquare stage1(f1, g1, lower, middle), stage2(f2, g2, middle, upper);
  Kernel gamma1 = kernel(rng, f1, positive), gamma2 = kernel(rng, f2, positive);
  Kernel xi1 = kernel(rng, g1, positive), xi2 = kernel(rng, g2, positive);
  return Tower{X1, X2, X3, Y1, Y2, Y3, Z, f1, f2, g1, g2,
               p1, p2, p3, q1, q2, q3, lower, middle, upper,
               FibredSquare(stage1), FibredSquare(stage2),
               gamma1, gamma2, xi1, xi2};
}

/// Random groupoid drawn from the standard constructions.
inline FiniteGroupoid groupoid(Rng& rng) {
  switch (pick(rng, 0, 4)) {
    case 0: return FiniteGroupoid::pair_groupoid(pick(rng, 1, 4));
    case 1: return FiniteGroupoid::cyclic_group_groupoid(pick(rng, 1, 6));
    case 2: { // Z/2 acting on points by a random involution
      int m = pick(rng, 1, 4);
      std::vector<int> perm(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
      for (int i = 0; i + 1 < m; i += 2)
        if (pick(rng, 0, 1)) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
      std::vector<std::vector<int>> act(2, std::vector<int>(static_cast<std::size_t>(m)));
      for (int s = 0; s < m; ++s) {
        act[0][static_cast<std::size_t>(s)] = s;
        act[1][static_cast<std::size_t>(s)] = perm[static_cast<std::size_t>(s)];
      }
      std::vector<std::string> pts;
      for (int s = 0; s < m; ++s) pts.push_back("s" + std::to_string(s));
      return FiniteGroupoid::action_groupoid({{0, 1}, {1, 0}}, {"e", "t"}, act, pts);
    }
    case 3:
      return FiniteGroupoid::disjoint_union(
          FiniteGroupoid::pair_groupoid(pick(rng, 1, 2)),
          FiniteGroupoid::cyclic_group_groupoid(pick(rng, 1, 3)));
    default:
      return FiniteGroupoid::pair_groupoid(pick(rng, 2, 3));
  }
}

inline SetFamily family(Rng& rng, const FiniteSpace& ground, int count) {
  std::vector<Mask> members;
  Mask full = ground.full_mask();
  for (int i = 0; i < count; ++i)
    members.push_back(static_cast<Mask>(rng()) & full);
  return SetFamily(ground, std::move(members));
}

/// Family that covers the ground set and generates the full power set as
/// its sigma-algebra (members separate every pair of points).
inline SetFamily generating_family(Rng& rng, const FiniteSpace& ground) {
  Mask full = ground.full_mask();
  std::vector<Mask> members;
  for (int guard = 0; guard < 256; ++guard) {
    members.push_back(static_cast<Mask>(rng()) & full);
    Mask covered = 0;
    for (Mask m : members) covered |= m;
    if (covered != full) continue;
    SetFamily candidate(ground, members);
    if (msk::generated_sigma(candidate).size() == (Mask{1} << ground.size())) return candidate;
  }
  // Singletons always work; reached only for tiny grounds with unlucky draws.
  for (std::size_t i = 0; i < ground.size(); ++i) members.push_back(Mask{1} << i);
  return SetFamily(ground, std::move(members));
}

} // namespace gen
