#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "msk/errors.hpp"

namespace msk {

/// Subsets of a finite space as bitmasks over point indices. Every subset of
/// a finite T1 space is open, closed and Borel, so one representation serves
/// all three roles. Restricted to spaces of at most 64 points.
using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }

/// Finite labelled point set with discrete topology. Spaces carry an id so
/// that measure/map compatibility is nominal: two spaces with the same points
/// but different ids are distinct.
class FiniteSpace {
public:
  FiniteSpace(std::string id, std::vector<std::string> points)
      : d_(std::make_shared<const Data>(make(std::move(id), std::move(points)))) {}

  const std::string& id() const { return d_->id; }
  const std::vector<std::string>& points() const { return d_->points; }
  std::size_t size() const { return d_->points.size(); }
  bool empty() const { return d_->points.empty(); }

  bool contains(std::string_view label) const {
    return d_->index.find(std::string(label)) != d_->index.end();
  }

  int index_of(std::string_view label) const {
    auto it = d_->index.find(std::string(label));
    if (it == d_->index.end())
      throw InputError("unknown point '" + std::string(label) + "' in space '" + id() + "'");
    return it->second;
  }

  const std::string& label(int i) const { return d_->points.at(static_cast<std::size_t>(i)); }

  /// Full subset as a mask. Throws for spaces past the 64-point mask limit.
  Mask full_mask() const {
    check_mask_capacity();
    if (size() == 64) return ~Mask{0};
    return (Mask{1} << size()) - 1;
  }

  Mask mask_of(std::span<const std::string> labels) const {
    check_mask_capacity();
    Mask m = 0;
    for (const auto& l : labels) m |= Mask{1} << index_of(l);
    return m;
  }

  std::vector<std::string> labels_of(Mask m) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (m >> i & 1) out.push_back(d_->points[i]);
    return out;
  }

  /// Renders {a,c} style subset text for witnesses.
  std::string subset_str(Mask m) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < size(); ++i)
      if (m >> i & 1) {
        if (!first) out += ",";
        out += d_->points[i];
        first = false;
      }
    return out + "}";
  }

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    if (a.d_ == b.d_) return true;
    return a.d_->id == b.d_->id && a.d_->points == b.d_->points;
  }
  friend bool operator!=(const FiniteSpace& a, const FiniteSpace& b) { return !(a == b); }

private:
  struct Data {
    std::string id;
    std::vector<std::string> points;
    std::unordered_map<std::string, int> index;
  };

  static Data make(std::string id, std::vector<std::string> points) {
    Data d;
    d.id = std::move(id);
    d.points = std::move(points);
    for (std::size_t i = 0; i < d.points.size(); ++i) {
      auto [it, fresh] = d.index.emplace(d.points[i], static_cast<int>(i));
      if (!fresh)
        throw InputError("duplicate point '" + d.points[i] + "' in space '" + d.id + "'");
    }
    return d;
  }

  void check_mask_capacity() const {
    if (size() > 64)
      throw InputError("space '" + id() + "' exceeds the 64-point subset limit");
  }

  std::shared_ptr<const Data> d_;
};

/// Total map between finite spaces. On finite discrete spaces every map is
/// Borel, continuous, open and closed, so no side conditions are tracked.
class SpaceMap {
public:
  SpaceMap(FiniteSpace domain, FiniteSpace codomain,
           const std::map<std::string, std::string>& assignment)
      : dom_(std::move(domain)), cod_(std::move(codomain)) {
    to_.resize(dom_.size(), -1);
    for (const auto& [from, to] : assignment) {
      int i = dom_.index_of(from);
      to_[static_cast<std::size_t>(i)] = cod_.index_of(to);
    }
    for (std::size_t i = 0; i < to_.size(); ++i)
      if (to_[i] < 0)
        throw InputError("map not total: point '" + dom_.label(static_cast<int>(i)) +
                         "' of '" + dom_.id() + "' has no image");
  }

  SpaceMap(FiniteSpace domain, FiniteSpace codomain, std::vector<int> assignment)
      : dom_(std::move(domain)), cod_(std::move(codomain)), to_(std::move(assignment)) {
    if (to_.size() != dom_.size())
      throw InputError("assignment size mismatch for map out of '" + dom_.id() + "'");
    for (int t : to_)
      if (t < 0 || static_cast<std::size_t>(t) >= cod_.size())
        throw InputError("assignment target out of range in map to '" + cod_.id() + "'");
  }

  static SpaceMap identity(const FiniteSpace& s) {
    std::vector<int> to(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) to[i] = static_cast<int>(i);
    return SpaceMap(s, s, std::move(to));
  }

  static SpaceMap constant(const FiniteSpace& domain, const FiniteSpace& codomain,
                           std::string_view point) {
    int t = codomain.index_of(point);
    return SpaceMap(domain, codomain, std::vector<int>(domain.size(), t));
  }

  const FiniteSpace& domain() const { return dom_; }
  const FiniteSpace& codomain() const { return cod_; }

  int apply_index(int i) const { return to_.at(static_cast<std::size_t>(i)); }
  const std::string& apply(std::string_view label) const {
    return cod_.label(apply_index(dom_.index_of(label)));
  }
  const std::vector<int>& assignment() const { return to_; }

  Mask preimage_mask(Mask codomain_subset) const {
    dom_.full_mask(); // enforce the 64-point mask limit on both ends
    cod_.full_mask();
    Mask m = 0;
    for (std::size_t i = 0; i < to_.size(); ++i)
      if (codomain_subset >> to_[i] & 1) m |= Mask{1} << i;
    return m;
  }

  std::vector<int> fiber_indices(int codomain_index) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < to_.size(); ++i)
      if (to_[i] == codomain_index) out.push_back(static_cast<int>(i));
    return out;
  }

  /// g after this: returns g ∘ this.
  SpaceMap then(const SpaceMap& g) const {
    if (cod_ != g.dom_)
      throw InputError("maps not composable: '" + cod_.id() + "' vs '" + g.dom_.id() + "'");
    std::vector<int> to(to_.size());
    for (std::size_t i = 0; i < to_.size(); ++i)
      to[i] = g.to_[static_cast<std::size_t>(to_[i])];
    return SpaceMap(dom_, g.cod_, std::move(to));
  }

  friend bool operator==(const SpaceMap& a, const SpaceMap& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.to_ == b.to_;
  }
  friend bool operator!=(const SpaceMap& a, const SpaceMap& b) { return !(a == b); }

private:
  FiniteSpace dom_;
  FiniteSpace cod_;
  std::vector<int> to_;
};

} // namespace msk
