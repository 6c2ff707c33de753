#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bkk/mellin.hpp"

namespace bkk {

struct CorpusEntry {
  std::string name;
  MellinModule module;
};

/// Orbit representatives (smallest exponent vector in each Weyl orbit) of the characters at level q.
std::vector<TorusCharacter> orbit_representatives(const RootDatum& rd, int q);

/// Deterministic corpus of small modules (dimension <= 6, rank <= 2): E_theta and its untwisted
/// variant, graded quotients at Weyl-fixed points with either twist, modules induced from the trivial
/// subgroup, direct sums, and random changes of basis.
std::vector<CorpusEntry> generate_corpus(uint64_t seed = 20240601, size_t min_size = 100);

}  // namespace bkk
