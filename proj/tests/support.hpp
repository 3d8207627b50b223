#pragma once

// Shared fixtures and generators for the test suites.

#include <random>

#include "wdl/congruence.hpp"
#include "wdl/error.hpp"

namespace testsupport {

// O[x]/(x^2 - p^k x) inside O^2, x = (0, p^k).
inline wdl::OAlgebra rk_algebra(std::uint64_t p, unsigned k) {
  wdl::Integer pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
  return wdl::OAlgebra(p, 2, {{0, pk}});
}

// Triples congruent mod p: generators (p,0,0), (0,p,0).
inline wdl::OAlgebra rdelta_algebra(std::uint64_t p) {
  const wdl::Integer q(static_cast<unsigned long>(p));
  return wdl::OAlgebra(p, 3, {{q, 0, 0}, {0, q, 0}});
}

// Admissible algebra with r augmentations: each generator is c + p * (noise),
// entries within [-p^3, p^3]. Retries until the coordinates are separated.
inline wdl::OAlgebra random_algebra(std::mt19937_64& rng, std::uint64_t p, std::size_t r) {
  const long pl = static_cast<long>(p);
  const long bound = pl * pl * pl;
  std::uniform_int_distribution<long> base(-pl + 1, pl - 1);
  std::uniform_int_distribution<long> noise(-pl * pl, pl * pl);
  while (true) {
    std::vector<wdl::IntVector> gens;
    const std::size_t count = r == 1 ? rng() % 2 : 1 + rng() % 3;
    for (std::size_t g = 0; g < count; ++g) {
      const long c = base(rng);
      wdl::IntVector v(r);
      for (auto& x : v) {
        long y = c + pl * noise(rng);
        while (y > bound) y -= pl;
        while (y < -bound) y += pl;
        x = y;
      }
      gens.push_back(std::move(v));
    }
    try {
      return wdl::OAlgebra(p, r, std::move(gens));
    } catch (const wdl::Error& e) {
      if (e.code() != wdl::ErrorCode::Inadmissible) throw;
    }
  }
}

}  // namespace testsupport
