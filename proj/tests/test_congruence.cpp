#include <doctest.h>

#include <random>

#include "oracles/modular.hpp"
#include "wdl/congruence.hpp"
#include "wdl/error.hpp"
#include "support.hpp"

using namespace wdl;
using testsupport::random_algebra;
using testsupport::rk_algebra;
using testsupport::rdelta_algebra;

namespace {

std::vector<oracle::Vec> mod_gens(const oracle::ModRing& ring, const OAlgebra& r) {
  std::vector<oracle::Vec> out;
  for (const auto& g : r.generators()) {
    oracle::Vec v;
    for (const auto& x : g) v.push_back(ring.red(x));
    out.push_back(std::move(v));
  }
  return out;
}

// Oracle lengths at the largest N the machine-integer oracle supports, and a
// flag saying they are already stable three digits earlier.
struct OracleResult {
  oracle::AlgebraLengths lengths;
  bool stable = false;
};

OracleResult oracle_lengths(const OAlgebra& r, std::size_t i) {
  const std::uint64_t p = r.prime();
  const unsigned n = p == 3 ? 19 : (p == 5 ? 13 : 11);
  const oracle::ModRing hi(static_cast<std::int64_t>(p), n), lo(static_cast<std::int64_t>(p), n - 3);
  const auto a = oracle::algebra_lengths(hi, r.num_augmentations(), mod_gens(hi, r), i);
  const auto b = oracle::algebra_lengths(lo, r.num_augmentations(), mod_gens(lo, r), i);
  return {a, a.cotangent == b.cotangent && a.eta == b.eta};
}

}  // namespace

TEST_CASE("R = O") {
  const OAlgebra o(3, 1, {});
  CHECK(cotangent_length(o, 0) == PAdicVal(0));
  CHECK(algebra_congruence_length(o, 0) == PAdicVal(0));
  CHECK(wiles_defect(o, 0).defect == 0);
  const OAlgebra sub = build_remark_subalgebra(o);
  CHECK(sub.basis() == o.basis());
}

TEST_CASE("R_k fixtures") {
  for (unsigned k = 1; k <= 3; ++k) {
    const OAlgebra r = rk_algebra(3, k);
    CHECK(r.stabilization_degree() <= 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(cotangent_length(r, i) == PAdicVal(k));
      CHECK(algebra_congruence_length(r, i) == PAdicVal(k));
      const DefectReport rep = wiles_defect(r, i);
      CHECK(rep.defect == 0);
      CHECK(rep.lambda_rank == 1);
      CHECK(module_congruence_length(regular_module(r), i) == PAdicVal(k));
      const auto o = oracle_lengths(r, i);
      CHECK(o.stable);
      CHECK(o.lengths.cotangent == static_cast<int>(k));
      CHECK(o.lengths.eta == static_cast<int>(k));
    }
    // R_k is generated by its annihilator generators
    const OAlgebra sub = build_remark_subalgebra(r);
    CHECK(sub.basis() == r.basis());
  }
}

TEST_CASE("R_Delta fixture") {
  const OAlgebra r = rdelta_algebra(3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(cotangent_length(r, i) == PAdicVal(2));
    CHECK(algebra_congruence_length(r, i) == PAdicVal(1));
    const DefectReport rep = wiles_defect(r, i);
    CHECK(rep.phi_length == PAdicVal(2));
    CHECK(rep.psi_length == PAdicVal(1));
    CHECK(rep.defect == 1);
    const auto o = oracle_lengths(r, i);
    CHECK(o.stable);
    CHECK(o.lengths.cotangent == 2);
    CHECK(o.lengths.eta == 1);
  }
  const IntVector alpha = annihilator_generator(r, 0);
  CHECK(abs(alpha[0]) == 3);
  CHECK(alpha[1] == 0);
  CHECK(alpha[2] == 0);
  const OAlgebra sub = build_remark_subalgebra(r);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(algebra_congruence_length(sub, i) == algebra_congruence_length(r, i));
}

TEST_CASE("admissibility and module validity are enforced") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code_of([] { OAlgebra(3, 2, {{1, 2}}); }) == ErrorCode::Inadmissible);
  CHECK(code_of([] { OAlgebra(3, 2, {{3, 3}}); }) == ErrorCode::Inadmissible);
  CHECK(code_of([] { OAlgebra(3, 3, {{0, 3, 3}}); }) == ErrorCode::Inadmissible);
  CHECK(code_of([] { OAlgebra(4, 2, {{0, 4}}); }) == ErrorCode::NotPrime);
  CHECK(code_of([] { OAlgebra(3, 2, {{0, 9, 1}}); }) == ErrorCode::InvalidArgument);

  const OAlgebra r = rk_algebra(3, 2);  // x = (0, 9): x^2 = 9x
  CHECK_NOTHROW(RModule(r, 1, {IntMatrix{{9}}}));
  CHECK_NOTHROW(RModule(r, 1, {IntMatrix{{0}}}));
  CHECK(code_of([&] { RModule(r, 1, {IntMatrix{{1}}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { RModule(r, 2, {IntMatrix{{9}}}); }) == ErrorCode::InvalidArgument);

  const OAlgebra d = rdelta_algebra(3);
  // two rank-2 actions that do not commute
  CHECK(code_of([&] { RModule(d, 2, {IntMatrix{{3, 1}, {0, 0}}, IntMatrix{{0, 0}, {1, 3}}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { module_congruence(RModule(d, 1, {IntMatrix{{3}}, IntMatrix{{0}}}), 1); }) ==
        ErrorCode::Precondition);
}

TEST_CASE("JSON presentations") {
  const OAlgebra r = algebra_from_json(R"({"p": 3, "r": 3, "generators": [[3,0,0],[0,3,"0"]]})");
  CHECK(r.basis() == rdelta_algebra(3).basis());
  const RModule m = module_from_json(r, R"({"rank": 1, "actions": [[[3]], [[0]]]})");
  CHECK(m.lambda_rank(0) == 1);
  CHECK(module_congruence_length(m, 0) == PAdicVal(0));
  CHECK_THROWS_AS(algebra_from_json(R"({"p": 3, "r": 1, "generators": [], "extra": 1})"), Error);
  CHECK_THROWS_AS(algebra_from_json(R"({"p": 3, "generators": []})"), Error);
  CHECK_THROWS_AS(algebra_from_json(R"({"p": 3, "r": 2, "generators": [[0, "x"]]})"), Error);
  CHECK_THROWS_AS(algebra_from_json("not json"), Error);
  CHECK_THROWS_AS(module_from_json(r, R"({"rank": 1, "actions": [[[3]]]})"), Error);
}

TEST_CASE("property: Wiles-Lenstra inequality and oracle agreement on random algebras") {
  std::mt19937_64 rng(1234);
  int algebras = 0, oracle_checked = 0;
  while (algebras < 220) {
    const std::uint64_t p = algebras % 2 ? 3 : 5;
    const std::size_t r = 1 + rng() % 4;
    const OAlgebra alg = random_algebra(rng, p, r);
    ++algebras;
    for (std::size_t i = 0; i < r; ++i) {
      const std::uint64_t phi = cotangent_length(alg, i).value();
      const std::uint64_t eta = algebra_congruence_length(alg, i).value();
      CHECK(eta <= phi);
      const DefectReport rep = wiles_defect(alg, i);
      CHECK(rep.defect >= 0);
      CHECK(rep.psi_length == PAdicVal(eta));  // equality for the regular module
      if (i == 0 && algebras % 2 == 0) {
        const auto o = oracle_lengths(alg, i);
        if (o.stable) {
          CHECK(o.lengths.cotangent == static_cast<int>(phi));
          CHECK(o.lengths.eta == static_cast<int>(eta));
          ++oracle_checked;
        }
      }
    }
  }
  CHECK(oracle_checked >= 60);
}

TEST_CASE("property: module congruence lengths on random modules") {
  std::mt19937_64 rng(98765);
  int modules = 0;
  std::uniform_int_distribution<long> coeff(-20, 20);
  while (modules < 120) {
    const std::uint64_t p = modules % 2 ? 3 : 5;
    const std::size_t r = 2 + rng() % 3;
    const OAlgebra alg = random_algebra(rng, p, r);
    // an R-submodule of the normalization O^r with full support
    std::vector<IntVector> vectors;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 2); ++k) {
      IntVector v(r);
      for (auto& x : v) {
        x = coeff(rng);
        if (x == 0) x = 1;
      }
      vectors.push_back(v);
    }
    const RModule m = submodule_of_normalization(alg, vectors);
    ++modules;
    const RModule dual = dual_module(m);
    const RModule reg = regular_module(alg);
    for (std::size_t i = 0; i < r; ++i) {
      const auto info = module_congruence(m, i);
      REQUIRE(info.lambda_rank == 1);
      const PAdicVal eta = algebra_congruence_length(alg, i);
      CHECK(info.length <= eta);                                 // lambda-rank one bound
      CHECK(module_congruence_length(dual, i) == info.length);   // duality
      CHECK(module_congruence_length(reg, i) == eta);            // regular module
      const RModule sum = direct_sum(m, reg);
      const auto sinfo = module_congruence(sum, i);
      CHECK(sinfo.lambda_rank == 2);
      CHECK(sinfo.length == info.length + eta);                  // additivity
      if (modules % 10 == 0) {
        const RModule triple = direct_sum(direct_sum(m, m), m);
        const DefectReport one = wiles_defect(alg, m, i);
        const DefectReport three = wiles_defect(alg, triple, i);
        CHECK(three.psi_length == PAdicVal(3 * info.length.value()));
        CHECK(three.defect == one.defect);
      }
    }
  }
  CHECK(modules >= 100);
}

TEST_CASE("property: the remark subalgebra keeps every eta length") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t p = trial % 2 ? 3 : 5;
    const std::size_t r = 1 + rng() % 4;
    const OAlgebra alg = random_algebra(rng, p, r);
    const OAlgebra sub = build_remark_subalgebra(alg);
    for (const auto& g : sub.generators()) CHECK(alg.contains(g));
    for (std::size_t i = 0; i < r; ++i)
      CHECK(algebra_congruence_length(sub, i) == algebra_congruence_length(alg, i));
  }
}

TEST_CASE("generic rank above the lambda-rank is flagged") {
  const OAlgebra r = rdelta_algebra(3);
  // R plus two copies of the rank-one module on which R acts through lambda_2
  const RModule point(r, 1, {IntMatrix{{0}}, IntMatrix{{0}}});
  const RModule m = direct_sum(direct_sum(regular_module(r), point), point);
  CHECK(m.lambda_rank(2) == 3);
  const DefectReport rep = wiles_defect(r, m, 0);
  CHECK(rep.lambda_rank == 1);
  CHECK(rep.generic_rank_exceeds_lambda_rank);
  CHECK_FALSE(wiles_defect(r, 0).generic_rank_exceeds_lambda_rank);
}
