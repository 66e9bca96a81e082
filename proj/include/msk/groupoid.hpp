#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msk/kernel.hpp"

namespace msk {

struct GroupoidReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Finite groupoid: arrows with range and source maps onto a distinguished
/// unit set, an explicit partial composition table defined exactly where
/// d(x) = r(y), and a total inverse. Arbitrary user tables are admitted at
/// construction; `validate` checks every axiom exhaustively and reports all
/// violations, so the verification surface can take adversarial input.
class FiniteGroupoid {
public:
  /// `units` lists which arrow labels are units; `range`/`source` assign a
  /// unit label to every arrow; `compose` holds triples (x, y, xy);
  /// `inverse` is a total arrow map. Structural resolution errors throw;
  /// axiom violations are left for validate().
  FiniteGroupoid(FiniteSpace arrows, const std::vector<std::string>& units,
                 const std::map<std::string, std::string>& range,
                 const std::map<std::string, std::string>& source,
                 const std::vector<std::array<std::string, 3>>& compose_triples,
                 const std::map<std::string, std::string>& inverse)
      : arrows_(std::move(arrows)),
        units_(FiniteSpace(arrows_.id() + "^(0)", units)) {
    unit_arrow_.reserve(units.size());
    for (const auto& u : units) unit_arrow_.push_back(arrows_.index_of(u));

    auto resolve_unit_map = [&](const std::map<std::string, std::string>& m,
                                const char* what) {
      std::vector<int> out(arrows_.size(), -1);
      for (const auto& [from, to] : m)
        out[static_cast<std::size_t>(arrows_.index_of(from))] = units_.index_of(to);
      for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] < 0)
          throw InputError(std::string(what) + " not total: arrow '" +
                           arrows_.label(static_cast<int>(i)) + "' unassigned");
      return out;
    };
    range_ = resolve_unit_map(range, "range");
    source_ = resolve_unit_map(source, "source");

    comp_.assign(arrows_.size() * arrows_.size(), -1);
    for (const auto& [x, y, xy] : compose_triples) {
      std::size_t slot = static_cast<std::size_t>(arrows_.index_of(x)) * arrows_.size() +
                         static_cast<std::size_t>(arrows_.index_of(y));
      if (comp_[slot] >= 0)
        throw InputError("duplicate composition entry for (" + x + ", " + y + ")");
      comp_[slot] = arrows_.index_of(xy);
    }

    inverse_.assign(arrows_.size(), -1);
    for (const auto& [x, xi] : inverse)
      inverse_[static_cast<std::size_t>(arrows_.index_of(x))] = arrows_.index_of(xi);
    for (std::size_t i = 0; i < inverse_.size(); ++i)
      if (inverse_[i] < 0)
        throw InputError("inverse not total: arrow '" + arrows_.label(static_cast<int>(i)) +
                         "' unassigned");
  }

  const FiniteSpace& arrows() const { return arrows_; }
  const FiniteSpace& unit_space() const { return units_; }
  std::size_t arrow_count() const { return arrows_.size(); }
  std::size_t unit_count() const { return units_.size(); }

  int range_of(int arrow) const { return range_.at(static_cast<std::size_t>(arrow)); }
  int source_of(int arrow) const { return source_.at(static_cast<std::size_t>(arrow)); }
  int inverse_of(int arrow) const { return inverse_.at(static_cast<std::size_t>(arrow)); }
  int unit_arrow(int unit) const { return unit_arrow_.at(static_cast<std::size_t>(unit)); }

  /// Composite arrow index of x·y, or -1 where undefined.
  int compose_idx(int x, int y) const {
    return comp_[static_cast<std::size_t>(x) * arrows_.size() + static_cast<std::size_t>(y)];
  }

  SpaceMap range_map() const { return SpaceMap(arrows_, units_, range_); }
  SpaceMap source_map() const { return SpaceMap(arrows_, units_, source_); }

  /// Range fiber G^u = r⁻¹(u), as arrow indices.
  std::vector<int> range_fiber(int unit) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < range_.size(); ++i)
      if (range_[i] == unit) out.push_back(static_cast<int>(i));
    return out;
  }

  GroupoidReport validate() const {
    GroupoidReport rep;
    auto flaw = [&](std::string text) {
      rep.ok = false;
      rep.violations.push_back(std::move(text));
    };
    const std::size_t n = arrows_.size();
    auto lbl = [&](int a) { return arrows_.label(a); };

    for (int u = 0; u < static_cast<int>(unit_count()); ++u) {
      int ua = unit_arrow_[static_cast<std::size_t>(u)];
      if (range_[static_cast<std::size_t>(ua)] != u)
        flaw("unit '" + lbl(ua) + "' has range '" + units_.label(range_[static_cast<std::size_t>(ua)]) + "', expected itself");
      if (source_[static_cast<std::size_t>(ua)] != u)
        flaw("unit '" + lbl(ua) + "' has source '" + units_.label(source_[static_cast<std::size_t>(ua)]) + "', expected itself");
    }

    // Composition defined exactly when d(x) = r(y); ranges and sources of
    // composites; unit laws; inverses.
    for (int x = 0; x < static_cast<int>(n); ++x) {
      for (int y = 0; y < static_cast<int>(n); ++y) {
        int xy = compose_idx(x, y);
        bool composable = source_of(x) == range_of(y);
        if (composable && xy < 0)
          flaw("composition undefined for composable pair (" + lbl(x) + ", " + lbl(y) + ")");
        if (!composable && xy >= 0)
          flaw("composition defined for non-composable pair (" + lbl(x) + ", " + lbl(y) + ")");
        if (composable && xy >= 0) {
          if (range_of(xy) != range_of(x))
            flaw("r(" + lbl(x) + "·" + lbl(y) + ") differs from r(" + lbl(x) + ")");
          if (source_of(xy) != source_of(y))
            flaw("d(" + lbl(x) + "·" + lbl(y) + ") differs from d(" + lbl(y) + ")");
        }
      }
      int ur = unit_arrow_[static_cast<std::size_t>(range_of(x))];
      int ud = unit_arrow_[static_cast<std::size_t>(source_of(x))];
      if (compose_idx(ur, x) != x)
        flaw("left unit law fails at arrow '" + lbl(x) + "'");
      if (compose_idx(x, ud) != x)
        flaw("right unit law fails at arrow '" + lbl(x) + "'");
      int xi = inverse_of(x);
      if (range_of(xi) != source_of(x) || source_of(xi) != range_of(x))
        flaw("inverse of '" + lbl(x) + "' has wrong range or source");
      else {
        if (compose_idx(x, xi) != ur)
          flaw("x·x⁻¹ is not the unit at r(x) for arrow '" + lbl(x) + "'");
        if (compose_idx(xi, x) != ud)
          flaw("x⁻¹·x is not the unit at d(x) for arrow '" + lbl(x) + "'");
      }
    }

    // Associativity over all composable triples.
    for (int x = 0; x < static_cast<int>(n); ++x)
      for (int y = 0; y < static_cast<int>(n); ++y) {
        if (source_of(x) != range_of(y)) continue;
        int xy = compose_idx(x, y);
        if (xy < 0) continue;
        for (int z = 0; z < static_cast<int>(n); ++z) {
          if (source_of(y) != range_of(z)) continue;
          int yz = compose_idx(y, z);
          if (yz < 0) continue;
          if (compose_idx(xy, z) != compose_idx(x, yz))
            flaw("associativity fails at (" + lbl(x) + ", " + lbl(y) + ", " + lbl(z) + ")");
        }
      }

    // Left translation y ↦ x·y must biject G^{d(x)} onto G^{r(x)}; a
    // consequence of the axioms, asserted directly as a validation check.
    if (rep.ok)
      for (int x = 0; x < static_cast<int>(n); ++x) {
        std::vector<int> image;
        for (int y : range_fiber(source_of(x))) image.push_back(compose_idx(x, y));
        std::vector<int> target = range_fiber(range_of(x));
        std::sort(image.begin(), image.end());
        if (image != target)
          flaw("left translation by '" + lbl(x) + "' is not a bijection of fibers");
      }

    return rep;
  }

  /// Orbit partition of the unit space: u ~ v when some arrow has range u
  /// and source v. Invariance couples fibers within an orbit only.
  std::vector<std::vector<int>> orbits() const {
    std::vector<int> parent(unit_count());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
      return a;
    };
    for (std::size_t x = 0; x < arrows_.size(); ++x) {
      int a = find(range_[x]);
      int b = find(source_[x]);
      if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
    std::map<int, std::vector<int>> buckets;
    for (int u = 0; u < static_cast<int>(unit_count()); ++u) buckets[find(u)].push_back(u);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : buckets) out.push_back(std::move(members));
    return out;
  }

  // -- standard constructions -------------------------------------------

  /// Pair groupoid on n points: arrows (i,j), r(i,j) = i, d(i,j) = j,
  /// (i,j)·(j,k) = (i,k), (i,j)⁻¹ = (j,i); units are the diagonal.
  static FiniteGroupoid pair_groupoid(int n) {
    if (n < 1) throw InputError("pair groupoid needs at least one point");
    auto name = [](int i, int j) {
      return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) labels.push_back(name(i, j));
    FiniteSpace arrows("Pair" + std::to_string(n), std::move(labels));
    std::vector<std::string> units;
    for (int i = 0; i < n; ++i) units.push_back(name(i, i));
    std::map<std::string, std::string> range, source, inverse;
    std::vector<std::array<std::string, 3>> comp;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        range[name(i, j)] = name(i, i);
        source[name(i, j)] = name(j, j);
        inverse[name(i, j)] = name(j, i);
        for (int k = 0; k < n; ++k) comp.push_back({name(i, j), name(j, k), name(i, k)});
      }
    return FiniteGroupoid(std::move(arrows), units, range, source, comp, inverse);
  }

  /// One-object groupoid of a finite group given by its multiplication
  /// table: mult[i][j] = index of g_i·g_j. The table is validated as a
  /// group before the groupoid is assembled.
  static FiniteGroupoid group_groupoid(const std::vector<std::vector<int>>& mult,
                                       const std::vector<std::string>& names) {
    int k = static_cast<int>(mult.size());
    if (k == 0 || names.size() != mult.size())
      throw InputError("group table and element names must agree and be nonempty");
    auto at = [&](int i, int j) {
      int v = mult.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
      if (v < 0 || v >= k) throw InputError("group table entry out of range");
      return v;
    };
    int e = -1;
    for (int i = 0; i < k && e < 0; ++i) {
      bool ident = true;
      for (int j = 0; j < k; ++j)
        if (at(i, j) != j || at(j, i) != j) { ident = false; break; }
      if (ident) e = i;
    }
    if (e < 0) throw InputError("group table has no identity element");
    std::vector<int> inv(static_cast<std::size_t>(k), -1);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (at(i, j) == e && at(j, i) == e) inv[static_cast<std::size_t>(i)] = j;
    for (int i = 0; i < k; ++i)
      if (inv[static_cast<std::size_t>(i)] < 0)
        throw InputError("group table element '" + names[static_cast<std::size_t>(i)] +
                         "' has no inverse");
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            throw InputError("group table is not associative");

    FiniteSpace arrows("Group" + std::to_string(k) + "[" + names[static_cast<std::size_t>(e)] + "]",
                       names);
    std::map<std::string, std::string> range, source, inverse;
    std::vector<std::array<std::string, 3>> comp;
    const std::string& unit = names[static_cast<std::size_t>(e)];
    for (int i = 0; i < k; ++i) {
      range[names[static_cast<std::size_t>(i)]] = unit;
      source[names[static_cast<std::size_t>(i)]] = unit;
      inverse[names[static_cast<std::size_t>(i)]] = names[static_cast<std::size_t>(inv[static_cast<std::size_t>(i)])];
      for (int j = 0; j < k; ++j)
        comp.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)],
                        names[static_cast<std::size_t>(at(i, j))]});
    }
    return FiniteGroupoid(std::move(arrows), {unit}, range, source, comp, inverse);
  }

  /// Cyclic group Z/k as a groupoid.
  static FiniteGroupoid cyclic_group_groupoid(int k) {
    if (k < 1) throw InputError("cyclic group needs k >= 1");
    std::vector<std::vector<int>> mult(static_cast<std::size_t>(k),
                                       std::vector<int>(static_cast<std::size_t>(k)));
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) {
      names.push_back("g" + std::to_string(i));
      for (int j = 0; j < k; ++j) mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % k;
    }
    return group_groupoid(mult, names);
  }

  /// Transformation groupoid G ⋉ S of a left action: arrows (g, s) with
  /// d(g,s) = s, r(g,s) = g·s, (h, g·s)·(g, s) = (hg, s), (g,s)⁻¹ = (g⁻¹, g·s).
  /// `action[g][s]` gives g·s; validated as a genuine action first.
  static FiniteGroupoid action_groupoid(const std::vector<std::vector<int>>& mult,
                                        const std::vector<std::string>& group_names,
                                        const std::vector<std::vector<int>>& action,
                                        const std::vector<std::string>& point_names) {
    FiniteGroupoid base = group_groupoid(mult, group_names); // validates the table
    int k = static_cast<int>(mult.size());
    int m = static_cast<int>(point_names.size());
    if (static_cast<int>(action.size()) != k)
      throw InputError("action table must have one row per group element");
    auto act = [&](int g, int s) {
      int v = action.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(s));
      if (v < 0 || v >= m) throw InputError("action table entry out of range");
      return v;
    };
    int e = base.arrows().index_of(base.unit_space().label(0));
    for (int s = 0; s < m; ++s)
      if (act(e, s) != s) throw InputError("action table: identity does not fix points");
    for (int g = 0; g < k; ++g)
      for (int h = 0; h < k; ++h)
        for (int s = 0; s < m; ++s)
          if (act(mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)], s) != act(g, act(h, s)))
            throw InputError("action table is not compatible with the group law");

    auto name = [&](int g, int s) {
      return "(" + group_names[static_cast<std::size_t>(g)] + "," +
             point_names[static_cast<std::size_t>(s)] + ")";
    };
    std::vector<std::string> labels;
    for (int g = 0; g < k; ++g)
      for (int s = 0; s < m; ++s) labels.push_back(name(g, s));
    FiniteSpace arrows("Action[" + std::to_string(k) + "on" + std::to_string(m) + "]",
                       std::move(labels));
    std::vector<std::string> units;
    for (int s = 0; s < m; ++s) units.push_back(name(e, s));
    std::map<std::string, std::string> range, source, inverse;
    std::vector<std::array<std::string, 3>> comp;
    std::vector<int> inv(static_cast<std::size_t>(k));
    for (int g = 0; g < k; ++g)
      for (int h = 0; h < k; ++h)
        if (mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] == e &&
            mult[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)] == e)
          inv[static_cast<std::size_t>(g)] = h;
    for (int g = 0; g < k; ++g)
      for (int s = 0; s < m; ++s) {
        range[name(g, s)] = name(e, act(g, s));
        source[name(g, s)] = name(e, s);
        inverse[name(g, s)] = name(inv[static_cast<std::size_t>(g)], act(g, s));
        for (int h = 0; h < k; ++h)
          comp.push_back({name(h, act(g, s)), name(g, s),
                          name(mult[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)], s)});
      }
    return FiniteGroupoid(std::move(arrows), units, range, source, comp, inverse);
  }

  /// Disjoint union, with labels prefixed "1:" and "2:" to keep them apart.
  static FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    auto tag = [](const std::string& prefix, const std::string& l) { return prefix + l; };
    std::vector<std::string> labels;
    for (const auto& l : a.arrows().points()) labels.push_back(tag("1:", l));
    for (const auto& l : b.arrows().points()) labels.push_back(tag("2:", l));
    FiniteSpace arrows("(" + a.arrows().id() + "+" + b.arrows().id() + ")", std::move(labels));
    std::vector<std::string> units;
    std::map<std::string, std::string> range, source, inverse;
    std::vector<std::array<std::string, 3>> comp;
    auto absorb = [&](const FiniteGroupoid& g, const std::string& prefix) {
      for (int u = 0; u < static_cast<int>(g.unit_count()); ++u)
        units.push_back(tag(prefix, g.arrows().label(g.unit_arrow(u))));
      for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
        const std::string& lx = g.arrows().label(x);
        range[tag(prefix, lx)] = tag(prefix, g.arrows().label(g.unit_arrow(g.range_of(x))));
        source[tag(prefix, lx)] = tag(prefix, g.arrows().label(g.unit_arrow(g.source_of(x))));
        inverse[tag(prefix, lx)] = tag(prefix, g.arrows().label(g.inverse_of(x)));
        for (int y = 0; y < static_cast<int>(g.arrow_count()); ++y) {
          int xy = g.compose_idx(x, y);
          if (xy >= 0)
            comp.push_back({tag(prefix, lx), tag(prefix, g.arrows().label(y)),
                            tag(prefix, g.arrows().label(xy))});
        }
      }
    };
    absorb(a, "1:");
    absorb(b, "2:");
    return FiniteGroupoid(std::move(arrows), units, range, source, comp, inverse);
  }

private:
  FiniteSpace arrows_;
  FiniteSpace units_;
  std::vector<int> unit_arrow_; // unit index → arrow index
  std::vector<int> range_;      // arrow index → unit index
  std::vector<int> source_;     // arrow index → unit index
  std::vector<int> comp_;       // arrow×arrow → arrow index or -1
  std::vector<int> inverse_;    // arrow index → arrow index
};

/// Packages per-arrow weights as the system of measures λᵘ = weights|_{G^u}
/// on the range map; concentration holds by construction.
inline Kernel range_system(const FiniteGroupoid& g, const Measure& weights) {
  if (weights.space() != g.arrows())
    throw InputError("range_system: weights must live on the groupoid's arrow space");
  std::vector<Measure> fibers;
  fibers.reserve(g.unit_count());
  for (int u = 0; u < static_cast<int>(g.unit_count()); ++u) {
    std::vector<Rational> mass(g.arrow_count());
    for (int x : g.range_fiber(u)) mass[static_cast<std::size_t>(x)] = weights.mass(x);
    fibers.push_back(Measure(g.arrows(), std::move(mass)));
  }
  return detail::TrustedKernel::make(g.range_map(), std::move(fibers));
}

struct InvarianceWitness {
  std::string arrow;
  std::vector<std::string> subset; // E ∩ G^{d(x)}
  Rational lhs;                    // λ^{d(x)}(E)
  Rational rhs;                    // λ^{r(x)}(x·(E ∩ G^{d(x)}))
};

struct InvarianceReport {
  bool ok = false;
  std::optional<InvarianceWitness> witness;
};

/// Left invariance in its set form: λ^{d(x)}(E) = λ^{r(x)}(x·(E ∩ G^{d(x)}))
/// for every arrow x and subset E. Only E ∩ G^{d(x)} matters, so E ranges
/// over subsets of the source's range fiber: exhaustively when the fiber has
/// at most `exhaustive_cap_bits` arrows, otherwise singletons (which already
/// decide equality of measures on a finite space) plus seeded random subsets
/// as a redundant oracle.
inline InvarianceReport is_left_invariant_sets(const FiniteGroupoid& g, const Kernel& lambda,
                                               int exhaustive_cap_bits = 12,
                                               std::uint64_t seed = 0) {
  if (lambda.base_map() != g.range_map())
    throw InputError("left invariance: kernel must be a system on the groupoid's range map");
  InvarianceReport rep;
  auto fail = [&](int x, const std::vector<int>& subset, Rational lhs, Rational rhs) {
    std::vector<std::string> labels;
    for (int e : subset) labels.push_back(g.arrows().label(e));
    rep.witness = InvarianceWitness{g.arrows().label(x), std::move(labels),
                                    std::move(lhs), std::move(rhs)};
  };
  std::uint64_t rng = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&rng]() {
    rng ^= rng << 13; rng ^= rng >> 7; rng ^= rng << 17;
    return rng;
  };

  for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
    const Measure& at_source = lambda.at(g.source_of(x));
    const Measure& at_range = lambda.at(g.range_of(x));
    std::vector<int> fiber = g.range_fiber(g.source_of(x));

    auto check_positions = [&](const std::vector<std::size_t>& positions) {
      Rational lhs, rhs;
      std::vector<int> chosen;
      for (std::size_t i : positions) {
        int xy = g.compose_idx(x, fiber[i]);
        if (xy < 0)
          throw InputError("left invariance: composition table incomplete; "
                           "validate the groupoid first");
        chosen.push_back(fiber[i]);
        lhs += at_source.mass(fiber[i]);
        rhs += at_range.mass(xy);
      }
      if (lhs != rhs) {
        fail(x, chosen, std::move(lhs), std::move(rhs));
        return false;
      }
      return true;
    };

    if (fiber.size() <= static_cast<std::size_t>(exhaustive_cap_bits)) {
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << fiber.size()); ++bits) {
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < fiber.size(); ++i)
          if (bits >> i & 1) positions.push_back(i);
        if (!check_positions(positions)) return rep;
      }
    } else {
      for (std::size_t i = 0; i < fiber.size(); ++i)
        if (!check_positions({i})) return rep;
      for (int t = 0; t < 64; ++t) {
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < fiber.size(); ++i)
          if (next() & 1) positions.push_back(i);
        if (!check_positions(positions)) return rep;
      }
    }
  }
  rep.ok = true;
  return rep;
}

/// Left invariance in its functional form: ∫f(x·y) dλ^{d(x)}(y) =
/// ∫f(y) dλ^{r(x)}(y), checked for every indicator of a single arrow (which
/// decides the identity) and a batch of seeded random rational test
/// functions. Agrees with the set form on every input.
inline bool is_left_invariant_fn(const FiniteGroupoid& g, const Kernel& lambda,
                                 int random_functions = 8, std::uint64_t seed = 0) {
  if (lambda.base_map() != g.range_map())
    throw InputError("left invariance: kernel must be a system on the groupoid's range map");
  const std::size_t n = g.arrow_count();
  std::vector<std::vector<Rational>> tests;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<Rational> f(n);
    f[e] = Rational(1);
    tests.push_back(std::move(f));
  }
  std::uint64_t rng = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&rng]() {
    rng ^= rng << 13; rng ^= rng >> 7; rng ^= rng << 17;
    return rng;
  };
  for (int t = 0; t < random_functions; ++t) {
    std::vector<Rational> f(n);
    for (auto& v : f) v = Rational(next() % 7, 1 + next() % 5);
    tests.push_back(std::move(f));
  }

  for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
    const Measure& at_source = lambda.at(g.source_of(x));
    const Measure& at_range = lambda.at(g.range_of(x));
    std::vector<int> source_fiber = g.range_fiber(g.source_of(x));
    std::vector<int> range_fiber = g.range_fiber(g.range_of(x));
    for (const auto& f : tests) {
      Rational lhs, rhs;
      for (int y : source_fiber) {
        int xy = g.compose_idx(x, y);
        if (xy < 0)
          throw InputError("left invariance: composition table incomplete; "
                           "validate the groupoid first");
        lhs += f[static_cast<std::size_t>(xy)] * at_source.mass(y);
      }
      for (int y : range_fiber) rhs += f[static_cast<std::size_t>(y)] * at_range.mass(y);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

/// Haar system: left invariant and positive on open sets. Continuity is
/// automatic on a finite discrete groupoid and therefore not a separate
/// condition here.
inline bool is_haar(const FiniteGroupoid& g, const Kernel& lambda) {
  return is_left_invariant_sets(g, lambda).ok && is_positive_on_open_sets(lambda);
}

} // namespace msk
