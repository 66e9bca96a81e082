#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "msk/pullback.hpp"

using namespace msk;

TEST_CASE("pullback enumeration") {
  FiniteSpace x("X", {"a", "b"});
  FiniteSpace y("Y", {"u", "v"});
  FiniteSpace z("Z", {"0", "1"});
  SpaceMap p(x, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "1"}});
  SpaceMap q(y, z, std::map<std::string, std::string>{{"u", "0"}, {"v", "0"}});

  Pullback pb(p, q);
  CHECK(pb.space().points() == std::vector<std::string>{"(a|u)", "(a|v)"});
  CHECK(pb.proj_left().apply("(a|v)") == "a");
  CHECK(pb.proj_right().apply("(a|v)") == "v");

  // q = identity ⇒ pullback is X in pair form
  Pullback along_id(p, SpaceMap::identity(z));
  CHECK(along_id.space().points() == std::vector<std::string>{"(a|0)", "(b|1)"});

  // constant legs to a point ⇒ the full product
  FiniteSpace pt("P", {"z"});
  Pullback full(SpaceMap::constant(x, pt, "z"), SpaceMap::constant(y, pt, "z"));
  CHECK(full.space().size() == x.size() * y.size());

  CHECK_THROWS_AS(Pullback(p, SpaceMap::constant(y, pt, "z")), InputError);
}

TEST_CASE("pullback squares commute and fibers are products", "[property]") {
  gen::Rng rng(83);
  for (int t = 0; t < 50; ++t) {
    auto sq = gen::square(rng, 5);
    Pullback pb(sq.p, sq.q);

    CHECK(pb.proj_left().then(sq.p) == pb.proj_right().then(sq.q));

    // π_Y⁻¹(y) = p⁻¹(q(y)) × {y}, and the left projection restricted to that
    // fiber is a bijection onto p⁻¹(q(y)).
    for (std::size_t y = 0; y < sq.Y.size(); ++y) {
      std::vector<int> expected = sq.p.fiber_indices(sq.q.apply_index(static_cast<int>(y)));
      std::vector<int> seen;
      for (std::size_t pt = 0; pt < pb.pairs().size(); ++pt)
        if (pb.pairs()[pt].second == static_cast<int>(y))
          seen.push_back(pb.pairs()[pt].first);
      CHECK(seen == expected);
    }
  }
}

TEST_CASE("lift_right on constant legs") {
  // α^z = 2δ_a + 5δ_b over constant maps to {z}
  FiniteSpace x("X", {"a", "b"});
  FiniteSpace y("Y", {"u", "w"});
  FiniteSpace z("Z", {"z"});
  SpaceMap p = SpaceMap::constant(x, z, "z");
  SpaceMap q = SpaceMap::constant(y, z, "z");
  std::map<std::string, Measure> af;
  af.emplace("z", Measure::from_atoms(x, {{"a", Rational(2)}, {"b", Rational(5)}}));
  Kernel alpha = new_kernel(p, af);

  Pullback pb(p, q);
  Kernel lifted = lift_right(pb, alpha);
  CHECK(lifted.base_map() == pb.proj_right());
  CHECK(lifted.at("u").mass("(a|u)") == Rational(2));
  CHECK(lifted.at("u").mass("(b|u)") == Rational(5));
  CHECK(lifted.at("u").mass("(a|w)") == Rational(0)); // misses the fiber of u

  // total mass of (q*α)ʸ is α^{q(y)} of the whole fiber p⁻¹(q(y))
  for (const auto& yl : y.points()) {
    Mask fiber = p.preimage_mask(Mask{1} << q.apply_index(y.index_of(yl)));
    CHECK(total_mass(lifted.at(yl)) == alpha.at(q.apply(yl)).of(fiber));
  }
}

TEST_CASE("lift validates the exact leg") {
  FiniteSpace x("X", {"a", "b"});
  FiniteSpace y("Y", {"u"});
  FiniteSpace z("Z", {"0", "1"});
  SpaceMap p(x, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "1"}});
  SpaceMap q = SpaceMap::constant(y, z, "0");
  Pullback pb(p, q);

  // equal-looking map with a different assignment
  SpaceMap p2(x, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "0"}});
  gen::Rng rng(5);
  Kernel alpha_wrong = gen::kernel(rng, p2);
  CHECK_THROWS_AS(lift_right(pb, alpha_wrong), InputError);

  // same assignment but nominally different domain space
  FiniteSpace x_clone("Xclone", {"a", "b"});
  SpaceMap p3(x_clone, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "1"}});
  CHECK_THROWS_AS(lift_right(pb, Kernel::zero(p3)), InputError);

  CHECK_THROWS_AS(lift_left(pb, Kernel::zero(p)), InputError); // p is not the right leg
}

TEST_CASE("lifting evaluates elementary sets as products", "[property]") {
  gen::Rng rng(89);
  for (int t = 0; t < 30; ++t) {
    auto sq = gen::square(rng, 4);
    Pullback pb(sq.p, sq.q);
    Kernel lifted = lift_right(pb, sq.alpha);
    for (std::size_t y = 0; y < sq.Y.size(); ++y) {
      Mask dy = Mask{1} << y;
      int z = sq.q.apply_index(static_cast<int>(y));
      for (Mask a = 0; a < (Mask{1} << sq.X.size()); ++a)
        for (Mask b = 0; b < (Mask{1} << sq.Y.size()); ++b) {
          Mask e = oracle::elementary_mask(pb, a, b);
          Rational delta_b = (b >> y & 1) ? Rational(1) : Rational(0);
          REQUIRE(lifted.at(static_cast<int>(y)).of(e) ==
                  sq.alpha.at(z).of(a) * delta_b);
        }
      (void)dy;
    }
  }
}

TEST_CASE("lifting preserves positivity on open sets", "[property]") {
  gen::Rng rng(97);
  for (int t = 0; t < 40; ++t) {
    auto sq = gen::square(rng, 5, true);
    Pullback pb(sq.p, sq.q);
    REQUIRE(is_positive_on_open_sets(sq.alpha));
    CHECK(is_positive_on_open_sets(lift_right(pb, sq.alpha)));
    CHECK(is_positive_on_open_sets(lift_left(pb, sq.beta)));
  }
}

TEST_CASE("mirrored lifts agree under swapping the legs", "[property]") {
  gen::Rng rng(101);
  for (int t = 0; t < 30; ++t) {
    auto sq = gen::square(rng, 4);
    Pullback pb(sq.p, sq.q);
    Pullback mirrored(sq.q, sq.p);
    Kernel via_right = lift_right(pb, sq.alpha);
    Kernel via_left = lift_left(mirrored, sq.alpha);
    // same masses under the pair swap (x|y) ↔ (y|x)
    for (std::size_t y = 0; y < sq.Y.size(); ++y)
      for (std::size_t pt = 0; pt < pb.pairs().size(); ++pt) {
        auto [xi, yi] = pb.pairs()[pt];
        std::string swapped =
            "(" + sq.Y.label(yi) + "|" + sq.X.label(xi) + ")";
        REQUIRE(via_right.at(static_cast<int>(y)).mass(static_cast<int>(pt)) ==
                via_left.at(static_cast<int>(y)).mass(swapped));
      }
  }
}

TEST_CASE("commuting square against the delta kernel") {
  FiniteSpace x("X", {"a", "b", "c"});
  FiniteSpace z("Z", {"0", "1"});
  SpaceMap p(x, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "1"}, {"c", "0"}});
  gen::Rng rng(103);
  Kernel alpha = gen::kernel(rng, p);
  Kernel beta = Kernel::identity(z);
  auto rep = check_square(alpha, beta);
  CHECK(rep.commutes);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("commuting square on random kernels", "[property]") {
  gen::Rng rng(107);
  for (int t = 0; t < 100; ++t) {
    auto sq = gen::square(rng, 5);
    auto rep = check_square(sq.alpha, sq.beta);
    REQUIRE(rep.commutes);
  }
}

TEST_CASE("both compositions evaluate to the product formula on elementary sets") {
  FiniteSpace x("X", {"a", "b"});
  FiniteSpace y("Y", {"u", "v", "w"});
  FiniteSpace z("Z", {"0", "1"});
  SpaceMap p(x, z, std::map<std::string, std::string>{{"a", "0"}, {"b", "1"}});
  SpaceMap q(y, z,
             std::map<std::string, std::string>{{"u", "0"}, {"v", "1"}, {"w", "0"}});
  gen::Rng rng(109);
  Kernel alpha = gen::kernel(rng, p);
  Kernel beta = gen::kernel(rng, q);

  Pullback pb(p, q);
  Kernel via_right = compose(lift_right(pb, alpha), beta);
  Kernel via_left = compose(lift_left(pb, beta), alpha);

  for (std::size_t zz = 0; zz < z.size(); ++zz)
    for (Mask a = 0; a < (Mask{1} << x.size()); ++a)
      for (Mask b = 0; b < (Mask{1} << y.size()); ++b) {
        Mask e = oracle::elementary_mask(pb, a, b);
        Rational expected =
            alpha.at(static_cast<int>(zz)).of(a) * beta.at(static_cast<int>(zz)).of(b);
        REQUIRE(via_right.at(static_cast<int>(zz)).of(e) == expected);
        REQUIRE(via_left.at(static_cast<int>(zz)).of(e) == expected);
      }
}

TEST_CASE("check_square rejects mismatched bases") {
  FiniteSpace x("X", {"a"});
  FiniteSpace z("Z", {"0"});
  FiniteSpace w("W", {"1"});
  Kernel alpha = Kernel::zero(SpaceMap::constant(x, z, "0"));
  Kernel beta = Kernel::zero(SpaceMap::constant(x, w, "1"));
  CHECK_THROWS_AS(check_square(alpha, beta), InputError);
}
