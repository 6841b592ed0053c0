#pragma once

#include <cstdint>

#include "rankopt/engine/catalog.hpp"

namespace rankopt {

/// Shape of a generated database. Every table gets two join-key columns
/// (`jk0`, `jk1`) over [0, join_domain) and one filter column (`val`) over
/// [0, filter_domain). `correlation` in [0,1] controls the Zipf skew of the
/// join keys: 0 is uniform, larger values concentrate mass on few values and
/// make independence-based join estimates increasingly wrong.
struct CatalogSpec {
  int num_tables = 4;
  uint64_t rows_per_table = 1000;
  int32_t join_domain = 64;
  int32_t filter_domain = 100;
  double correlation = 0.0;
};

/// Deterministic for a fixed (seed, spec). Column values are apportioned to
/// the target distribution exactly (counts first, then a seeded shuffle), so
/// frequency-level properties hold by construction rather than in
/// expectation. All tuples start loaded; call Database::load_fraction to
/// hold back a growth pool.
Database generate_database(uint64_t seed, const CatalogSpec& spec);

}  // namespace rankopt
