#include "rankopt/engine/data_generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankopt/util/rng.hpp"

namespace rankopt {

namespace {

// In-band Zipf exponent of the join keys at correlation = 1. Within a
// shared band the skewed heads align, so those joins expand well past the
// estimate (bounded by the head mass); across bands they shrink below it.
constexpr double kMaxZipfExponent = 1.35;

// Join keys of table i live in a band of this fraction of the domain,
// shifted upward with the table index (scaled by the correlation). The
// estimator grounds join selectivity on distinct counts and cannot see band
// positions, so it believes every edge expands by rows/band; in truth the
// fanout shrinks with the tables' band distance, down to empty joins.
// Filters shift the effective bands further through the coupled columns.
// correlation = 0 aligns all bands: uniform data, exact estimates.
constexpr double kBandFraction = 0.40;

std::vector<int32_t> generate_column(uint64_t rows, int32_t domain, double skew, Rng& rng) {
  const auto weights = zipf_weights(static_cast<size_t>(domain), skew);
  const auto counts = apportion(rows, weights);
  std::vector<int32_t> values;
  values.reserve(rows);
  for (int32_t v = 0; v < domain; ++v) {
    values.insert(values.end(), counts[v], v);
  }
  rng.shuffle(values);
  return values;
}

// Reorders `column` so that it is rank-correlated with `anchor` at the given
// strength: values are assigned in sorted order against the anchor's sort
// order, then a (1 - strength) fraction of rows is re-shuffled. The value
// multiset is untouched, only the row order changes. strength = 0 is a plain
// full shuffle. This is what makes range filters interact with join keys:
// a filter that cuts the anchor's band head shifts the effective band while
// the estimator still believes it untouched.
std::vector<int32_t> couple_to_anchor(std::vector<int32_t> column,
                                      const std::vector<int32_t>& anchor, double strength,
                                      Rng& rng) {
  const size_t n = column.size();
  std::sort(column.begin(), column.end());
  std::vector<uint32_t> rank(n);
  for (size_t i = 0; i < n; ++i) rank[i] = static_cast<uint32_t>(i);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](uint32_t a, uint32_t b) { return anchor[a] < anchor[b]; });
  std::vector<int32_t> assigned(n);
  for (size_t j = 0; j < n; ++j) {
    assigned[rank[j]] = column[j];
  }

  std::vector<uint32_t> loose;
  for (size_t i = 0; i < n; ++i) {
    if (rng.next_double() >= strength) {
      loose.push_back(static_cast<uint32_t>(i));
    }
  }
  std::vector<int32_t> pool;
  pool.reserve(loose.size());
  for (const uint32_t i : loose) pool.push_back(assigned[i]);
  rng.shuffle(pool);
  for (size_t j = 0; j < loose.size(); ++j) {
    assigned[loose[j]] = pool[j];
  }
  return assigned;
}

}  // namespace

Database generate_database(uint64_t seed, const CatalogSpec& spec) {
  check(spec.num_tables > 0, "catalog spec needs at least one table");
  check(spec.rows_per_table > 0, "catalog spec needs at least one row per table");
  check(spec.join_domain > 0 && spec.filter_domain > 0, "domains must be positive");
  check(spec.correlation >= 0.0 && spec.correlation <= 1.0, "correlation must be in [0,1]");

  // Band width interpolates from the full domain (correlation 0, exactly
  // uniform columns) down to kBandFraction of it.
  const double width_fraction = 1.0 - spec.correlation * (1.0 - kBandFraction);
  const auto band = std::max<int32_t>(
      1, static_cast<int32_t>(std::lround(spec.join_domain * width_fraction)));
  const int32_t max_offset = spec.join_domain - band;

  Rng rng(seed);
  std::vector<Relation> relations;
  relations.reserve(spec.num_tables);
  const int groups = (spec.num_tables + 1) / 2;
  for (int t = 0; t < spec.num_tables; ++t) {
    // Tables pair up on a shared band; distinct pairs are staggered apart.
    const double grade = groups == 1 ? 0.0 : static_cast<double>(t / 2) / (groups - 1);
    const auto offset = static_cast<int32_t>(
        std::lround(spec.correlation * static_cast<double>(max_offset) * grade));
    const double skew = kMaxZipfExponent * spec.correlation;

    TableDef def;
    def.name = "t" + std::to_string(t);
    def.columns = {{"jk0", spec.join_domain}, {"jk1", spec.join_domain},
                   {"val", spec.filter_domain}};

    auto jk0 = generate_column(spec.rows_per_table, band, skew, rng);
    for (auto& v : jk0) v += offset;
    auto jk1_raw = generate_column(spec.rows_per_table, band, skew, rng);
    for (auto& v : jk1_raw) v += offset;
    // jk1 and val follow jk0 at the correlation strength, so predicates on
    // one column reshape the others in ways independence cannot track.
    const auto jk1 = couple_to_anchor(std::move(jk1_raw), jk0, spec.correlation, rng);
    const auto val = couple_to_anchor(
        generate_column(spec.rows_per_table, spec.filter_domain, 0.0, rng), jk0,
        spec.correlation, rng);

    std::vector<int32_t> values;
    values.reserve(spec.rows_per_table * 3);
    for (uint64_t r = 0; r < spec.rows_per_table; ++r) {
      values.push_back(jk0[r]);
      values.push_back(jk1[r]);
      values.push_back(val[r]);
    }
    relations.emplace_back(std::move(def), std::move(values));
  }
  return Database(std::move(relations));
}

}  // namespace rankopt
