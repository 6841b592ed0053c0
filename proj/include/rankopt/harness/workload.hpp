#pragma once

#include <cstdint>
#include <vector>

#include "rankopt/engine/query.hpp"

namespace rankopt {

/// A small default template family over the generated catalog: a 2-chain, a
/// 3-chain, a 3-star, a 4-chain, and (given enough tables) a 5-chain.
std::vector<Query> default_templates(const Catalog& catalog);

/// Seeded query stream: each query instantiates a uniformly drawn template
/// with fresh random range filters; ids are unique and queries never repeat
/// verbatim. If `count` >= the template count and some template went unused,
/// the whole stream is regenerated with the next seed (deterministically).
std::vector<Query> generate_workload(const std::vector<Query>& templates, int count,
                                     uint64_t seed, const Catalog& catalog);

}  // namespace rankopt
