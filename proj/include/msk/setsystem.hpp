#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "msk/space.hpp"

namespace msk {

/// A collection of subsets of a finite ground space. Members are kept sorted
/// and deduplicated, so equality of families is decidable and stable.
class SetFamily {
public:
  SetFamily(FiniteSpace ground, std::vector<Mask> members)
      : ground_(std::move(ground)), members_(std::move(members)) {
    Mask full = ground_.full_mask();
    for (Mask m : members_)
      if ((m & ~full) != 0)
        throw InputError("family member outside ground space '" + ground_.id() + "'");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  SetFamily(const FiniteSpace& ground, const std::vector<std::vector<std::string>>& members)
      : SetFamily(ground, to_masks(ground, members)) {}

  const FiniteSpace& ground() const { return ground_; }
  const std::vector<Mask>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(Mask m) const {
    return std::binary_search(members_.begin(), members_.end(), m);
  }

  bool subset_of(const SetFamily& other) const {
    for (Mask m : members_)
      if (!other.contains(m)) return false;
    return true;
  }

  std::vector<std::vector<std::string>> member_labels() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(members_.size());
    for (Mask m : members_) out.push_back(ground_.labels_of(m));
    return out;
  }

  friend bool operator==(const SetFamily& a, const SetFamily& b) {
    return a.ground_ == b.ground_ && a.members_ == b.members_;
  }
  friend bool operator!=(const SetFamily& a, const SetFamily& b) { return !(a == b); }

private:
  static std::vector<Mask> to_masks(const FiniteSpace& ground,
                                    const std::vector<std::vector<std::string>>& members) {
    std::vector<Mask> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(ground.mask_of(m));
    return out;
  }

  FiniteSpace ground_;
  std::vector<Mask> members_;
};

/// Closed under finite intersections. The empty family is rejected.
inline bool is_pi_system(const SetFamily& f) {
  if (f.empty()) throw InputError("pi-system check on an empty family");
  const auto& ms = f.members();
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i; j < ms.size(); ++j)
      if (!f.contains(ms[i] & ms[j])) return false;
  return true;
}

/// Dynkin system: contains the ground set and is closed under relative
/// complements. Closure under increasing unions holds automatically on a
/// finite ground set, where every increasing chain stabilizes at its top.
inline bool is_dynkin(const SetFamily& f) {
  if (!f.contains(f.ground().full_mask())) return false;
  const auto& ms = f.members();
  for (Mask a : ms)
    for (Mask b : ms)
      if ((a & ~b) == 0 && !f.contains(b & ~a)) return false;
  return true;
}

namespace detail {

/// σ-algebras satisfy both pre-Dynkin conditions outright; used as a fast
/// path before the subcollection search.
inline bool is_sigma_algebra(const SetFamily& f) {
  Mask full = f.ground().full_mask();
  if (!f.contains(full)) return false;
  const auto& ms = f.members();
  for (Mask a : ms)
    if (!f.contains(full & ~a)) return false;
  for (Mask a : ms)
    for (Mask b : ms)
      if (!f.contains(a | b)) return false;
  return true;
}

/// DFS over subcollections C of the family, pruning any branch whose
/// intersection closure escapes the family. Qualification is downward
/// closed, so pruning is sound. Checks union membership at every complete
/// nonempty subcollection.
struct PreDynkinSearch {
  const SetFamily& family;
  std::uint64_t budget;
  bool ok = true;

  void run() {
    std::vector<Mask> closure;
    descend(0, closure, 0, false);
  }

  void descend(std::size_t i, std::vector<Mask>& closure, Mask union_so_far, bool nonempty) {
    if (!ok) return;
    if (budget-- == 0)
      throw InputError("pre-Dynkin subcollection search exceeded its budget; "
                       "raise the cap for families this large");
    if (i == family.size()) {
      if (nonempty && !family.contains(union_so_far)) ok = false;
      return;
    }
    descend(i + 1, closure, union_so_far, nonempty);
    if (!ok) return;

    Mask m = family.members()[i];
    std::size_t base = closure.size();
    bool qualifies = true;
    auto add = [&](Mask c) {
      if (std::find(closure.begin(), closure.end(), c) == closure.end()) {
        if (!family.contains(c)) { qualifies = false; return; }
        closure.push_back(c);
      }
    };
    add(m);
    for (std::size_t k = 0; qualifies && k < base; ++k) add(closure[k] & m);
    if (qualifies) descend(i + 1, closure, union_so_far | m, true);
    closure.resize(base);
  }
};

} // namespace detail

/// Pre-Dynkin system:
///  (1) E, F, E∩F ∈ D implies E∪F ∈ D and E∖F ∈ D;
///  (2) for every nonempty subcollection C ⊆ D whose finite intersections all
///      lie in D, the union of C lies in D.
/// Countable unions reduce to finite ones on a finite ground set, so (2) is
/// decided by exhaustive subcollection search (pruned; capped by `budget`).
inline bool is_pre_dynkin(const SetFamily& f, std::uint64_t budget = std::uint64_t{1} << 26) {
  const auto& ms = f.members();
  for (Mask a : ms)
    for (Mask b : ms) {
      if (!f.contains(a & b)) continue;
      if (!f.contains(a | b) || !f.contains(a & ~b)) return false;
    }
  if (detail::is_sigma_algebra(f)) return true;
  detail::PreDynkinSearch search{f, budget};
  search.run();
  return search.ok;
}

/// Smallest Dynkin system containing f, by closure iteration to a fixed
/// point. Terminates: at most 2^|ground| sets can ever be added.
inline SetFamily generated_dynkin(const SetFamily& f) {
  std::vector<Mask> sets(f.members());
  sets.push_back(f.ground().full_mask());
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::unordered_set<Mask> seen(sets.begin(), sets.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Mask> fresh;
    for (Mask a : sets)
      for (Mask b : sets)
        if ((a & ~b) == 0 && seen.insert(b & ~a).second) fresh.push_back(b & ~a);
    if (!fresh.empty()) {
      grew = true;
      sets.insert(sets.end(), fresh.begin(), fresh.end());
    }
  }
  return SetFamily(f.ground(), std::move(sets));
}

/// Smallest σ-algebra containing f, by closure under complements and
/// pairwise unions.
inline SetFamily generated_sigma(const SetFamily& f) {
  Mask full = f.ground().full_mask();
  std::vector<Mask> sets(f.members());
  sets.push_back(full);
  sets.push_back(0);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::unordered_set<Mask> seen(sets.begin(), sets.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Mask> fresh;
    for (Mask a : sets) {
      if (seen.insert(full & ~a).second) fresh.push_back(full & ~a);
      for (Mask b : sets)
        if (seen.insert(a | b).second) fresh.push_back(a | b);
    }
    if (!fresh.empty()) {
      grew = true;
      sets.insert(sets.end(), fresh.begin(), fresh.end());
    }
  }
  return SetFamily(f.ground(), std::move(sets));
}

/// The π-λ theorem as an executable check: given a π-system P inside a
/// Dynkin system D, the σ-algebra generated by P is contained in D. Always
/// true when the preconditions hold; the operation exists so the test suite
/// can falsify the implementation, not the theorem.
inline bool verify_pi_lambda(const SetFamily& p, const SetFamily& d) {
  if (p.ground() != d.ground())
    throw InputError("pi-lambda check across different ground spaces");
  if (!is_pi_system(p)) throw InputError("pi-lambda: first family is not a pi-system");
  if (!is_dynkin(d)) throw InputError("pi-lambda: second family is not a Dynkin system");
  if (!p.subset_of(d)) throw InputError("pi-lambda: pi-system is not contained in the Dynkin system");
  return generated_sigma(p).subset_of(d);
}

} // namespace msk
