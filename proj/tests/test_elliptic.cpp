#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/brute.hpp"
#include "wdl/curvedb.hpp"
#include "wdl/elliptic.hpp"
#include "wdl/error.hpp"

using namespace wdl;

namespace {

WeierstrassCurve curve(long a1, long a2, long a3, long a4, long a6) {
  return WeierstrassCurve{{Integer(a1), Integer(a2), Integer(a3), Integer(a4), Integer(a6)}, ""};
}

const WeierstrassCurve kX11 = curve(0, -1, 1, 0, 0);

std::array<mpz_class, 5> ainvs(const WeierstrassCurve& e) { return e.a; }

const std::vector<CurveRecord>& fixture() {
  static const std::vector<CurveRecord> records =
      ingest(WDL_TEST_DATA "/allcurves.00001-09999", CurveFormat::Cremona, false).records;
  return records;
}

}  // namespace

TEST_CASE("invariants of X1(11) and y^2 = x^3 + 1") {
  const CurveInvariants x = invariants(kX11);
  CHECK(x.c4 == 16);
  CHECK(x.c6 == -152);
  CHECK(x.discriminant == -11);
  CHECK(x.j == Rational(-4096, 11));
  const CurveInvariants y = invariants(curve(0, 0, 0, 0, 1));
  CHECK(y.c4 == 0);
  CHECK(y.discriminant == -432);
  CHECK(y.j == 0);
  for (const auto& e : {curve(1, 0, 0, 0, 1), curve(1, 0, 0, 0, -1), curve(1, -1, 1, 3, -7), kX11}) {
    const CurveInvariants v = invariants(e);
    CHECK(1728 * v.discriminant == v.c4 * v.c4 * v.c4 - v.c6 * v.c6);
  }
  CHECK_THROWS_AS(invariants(curve(0, 0, 0, 0, 0)), Error);
}

TEST_CASE("minimal models") {
  CHECK(minimal_model(kX11).a == kX11.a);
  const WeierstrassCurve scaled = scale_model(kX11, 2);
  CHECK(invariants(scaled).discriminant == Integer(-11) * 4096);
  const WeierstrassCurve back = minimal_model(scaled);
  CHECK(invariants(back).discriminant == -11);
  CHECK(back.a == kX11.a);
  CHECK(minimal_model(back).a == back.a);
}

TEST_CASE("reduction types") {
  const ReductionInfo at11 = reduction_at(kX11, 11);
  CHECK(at11.type == ReductionType::SplitMultiplicative);
  CHECK(at11.vq_delta == 1);
  CHECK(at11.vq_j == -1);
  CHECK(reduction_at(kX11, 7).type == ReductionType::Good);
  CHECK(reduction_at(curve(0, 0, 0, 0, 1), 3).type == ReductionType::Additive);
  CHECK(semistable_conductor(kX11) == Integer(11));
  CHECK_FALSE(semistable_conductor(curve(0, 0, 0, 0, 1)).has_value());
  // compare with the point count of the singular fibre
  const WeierstrassCurve e14 = curve(1, 0, 1, 4, -6);
  for (std::uint64_t q : {2u, 7u}) {
    const ReductionInfo r = reduction_at(e14, q);
    REQUIRE(r.multiplicative());
    // #E~(F_q) counts the node: split gives q points, nonsplit q + 2
    const std::uint64_t n = count_points(e14, q);
    CHECK(n == (r.type == ReductionType::SplitMultiplicative ? q : q + 2));
  }
}

TEST_CASE("Frobenius traces") {
  CHECK(ap(kX11, 2) == -2);
  CHECK(ap(kX11, 3) == -1);
  CHECK(count_points(kX11, 2) == 5);
  CHECK_THROWS_AS(ap(kX11, 11), Error);
}

TEST_CASE("irreducibility certificates") {
  CHECK(irreducibility_certificate(kX11, 3, 100) == std::optional<std::uint64_t>(2));
  CHECK(irreducibility_certificate(kX11, 3, 2) == std::optional<std::uint64_t>(2));
  CHECK(irreducibility_certificate(kX11, 3, 10000) == std::optional<std::uint64_t>(2));
  // 11a1 = X0(11) has a rational 5-torsion point
  const WeierstrassCurve x0 = curve(0, -1, 1, -10, -20);
  CHECK_FALSE(irreducibility_certificate(x0, 5, 1000).has_value());
  // 14a1 has a rational point of order 6
  CHECK_FALSE(irreducibility_certificate(curve(1, 0, 1, 4, -6), 3, 1000).has_value());
}

TEST_CASE("property: point counts against brute force and Hasse") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-30, 30);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    WeierstrassCurve e = curve(d(rng) % 2, d(rng) % 2, d(rng) % 2, d(rng), d(rng));
    if (invariants(e).discriminant == 0) continue;
    const Integer disc = invariants(e).discriminant;
    for (std::uint64_t l : {2u, 3u, 5u, 7u, 11u, 13u, 29u, 53u}) {
      const std::uint64_t n = count_points(e, l);
      CHECK(n == oracle::brute_point_count(ainvs(e), static_cast<std::int64_t>(l)));
      if (disc % static_cast<unsigned long>(l) != 0) {
        const std::int64_t a = ap(e, l);
        CHECK(static_cast<double>(a * a) <= 4.0 * static_cast<double>(l));
        ++checked;
      }
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("property: invariance under changes of coordinates") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> d(-12, 12);
  const auto& recs = fixture();
  for (int trial = 0; trial < 80; ++trial) {
    const WeierstrassCurve e = recs[rng() % recs.size()].curve();
    const WeierstrassCurve moved = change_coordinates(e, d(rng), d(rng), d(rng));
    const CurveInvariants a = invariants(e), b = invariants(moved);
    CHECK(a.j == b.j);
    CHECK(a.discriminant == b.discriminant);
    for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
      CHECK(reduction_at(e, q).type == reduction_at(moved, q).type);
      CHECK(count_points(e, q) == count_points(moved, q));
    }
    // scaling by u changes nothing away from u
    const WeierstrassCurve scaled = scale_model(moved, 6);
    CHECK(invariants(scaled).j == a.j);
    for (std::uint64_t l : {5u, 7u, 11u, 13u}) CHECK(count_points(scaled, l) == count_points(e, l));
    const WeierstrassCurve min = minimal_model(scaled);
    CHECK(min.a == e.a);
    CHECK(abs(invariants(min).discriminant) <= abs(invariants(scaled).discriminant));
    CHECK(minimal_model(min).a == min.a);
  }
}

TEST_CASE("property: reduced minimal models match the curve table") {
  const auto& recs = fixture();
  REQUIRE(recs.size() > 60000);
  std::size_t semistable = 0;
  for (std::size_t i = 0; i < recs.size(); i += 23) {
    const WeierstrassCurve e = recs[i].curve();
    CHECK(minimal_model(e).a == e.a);
    const auto n = semistable_conductor(e);
    if (n) {
      CHECK(*n == recs[i].conductor);
      CHECK(conductor_matches(e, recs[i].conductor));
      for (const auto& [q, k] : factor_integer(*n)) {
        const ReductionInfo r = reduction_at(e, q.get_ui());
        CHECK(r.multiplicative());
        CHECK(r.vq_j == -static_cast<std::int64_t>(r.vq_delta));
      }
      ++semistable;
    } else {
      CHECK_FALSE(conductor_matches(e, recs[i].conductor));
    }
  }
  CHECK(semistable > 300);
}
