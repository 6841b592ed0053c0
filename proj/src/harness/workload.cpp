#include "rankopt/harness/workload.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rankopt/util/rng.hpp"

namespace rankopt {

namespace {

Query chain_template(const Catalog& catalog, int first, int length) {
  Query query;
  for (int i = 0; i < length; ++i) {
    query.tables.push_back(catalog.tables[first + i].name);
  }
  for (int i = 0; i + 1 < length; ++i) {
    query.joins.push_back({query.tables[i], "jk1", query.tables[i + 1], "jk0"});
  }
  return query;
}

Query path_template(const Catalog& catalog, const std::vector<int>& tables) {
  Query query;
  for (const int t : tables) {
    query.tables.push_back(catalog.tables[t].name);
  }
  for (size_t i = 0; i + 1 < tables.size(); ++i) {
    query.joins.push_back({query.tables[i], "jk1", query.tables[i + 1], "jk0"});
  }
  return query;
}

Query star_template(const Catalog& catalog, int center, std::vector<int> arms) {
  Query query;
  query.tables.push_back(catalog.tables[center].name);
  for (const int arm : arms) {
    query.tables.push_back(catalog.tables[arm].name);
  }
  for (size_t i = 0; i < arms.size(); ++i) {
    query.joins.push_back({query.tables[0], "jk0", query.tables[i + 1], "jk0"});
  }
  return query;
}

// Any column may carry a range filter; filters on skewed join keys are the
// interesting case, since dropping or keeping a heavy value swings the true
// join size far more than the estimated fraction suggests.
std::vector<std::string> filterable_columns(const Query& tmpl, const TableDef& table) {
  (void)tmpl;
  std::vector<std::string> columns;
  for (const auto& column : table.columns) {
    columns.push_back(column.name);
  }
  return columns;
}

std::vector<Query> try_generate(const std::vector<Query>& templates, int count, uint64_t seed,
                                const Catalog& catalog, bool& all_templates_used) {
  Rng rng(seed);
  std::vector<Query> workload;
  std::unordered_set<std::string> seen;
  std::vector<bool> used(templates.size(), false);

  for (int i = 0; i < count; ++i) {
    Query query;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const size_t t = rng.next_below(templates.size());
      query = templates[t];
      query.id = "q" + std::to_string(i);
      query.filters.clear();
      auto add_filter = [&](const std::string& table_name) {
        const auto& table = catalog.table(table_name);
        const auto columns = filterable_columns(templates[t], table);
        if (columns.empty()) return;
        const auto& column_name = columns[rng.next_below(columns.size())];
        const int32_t domain = table.columns[table.column_index(column_name)].domain_size;
        // Moderate selectivities (15%..90%): narrow ranges make every join
        // tiny and scans dominate, leaving nothing for plan choice to win.
        const double fraction = 0.15 + 0.75 * rng.next_double();
        const auto span = std::max<int32_t>(1, static_cast<int32_t>(std::lround(domain * fraction)));
        const auto lo = static_cast<int32_t>(rng.next_below(domain - span + 1));
        query.filters.push_back({table_name, column_name, lo, lo + span - 1});
      };
      for (const auto& table_name : query.tables) {
        if (rng.next_double() < 0.7) {  // each table filtered w.p. 0.7
          add_filter(table_name);
        }
      }
      if (query.filters.empty()) {
        // Always at least one filter: keeps multi-join outputs bounded.
        add_filter(query.tables[rng.next_below(query.tables.size())]);
      }
      if (seen.insert(format_query_line(query)).second) {
        used[t] = true;
        break;
      }
    }
    workload.push_back(std::move(query));
  }

  all_templates_used = std::all_of(used.begin(), used.end(), [](bool b) { return b; });
  return workload;
}

}  // namespace

std::vector<Query> default_templates(const Catalog& catalog) {
  const int n = static_cast<int>(catalog.tables.size());
  check(n >= 2, "default templates need at least two tables");
  std::vector<Query> templates;
  if (n >= 5) {
    // Mix adjacent-band edges (mild true fanout) with distant ones (true
    // fanout far below the estimate), so ordering the joins is a genuine
    // dilemma for the independence assumption.
    templates.push_back(path_template(catalog, {0, 1, 2}));
    templates.push_back(path_template(catalog, {2, 3, 4}));
    templates.push_back(path_template(catalog, {0, 1, 2, 3}));
    templates.push_back(path_template(catalog, {1, 2, 3, 4}));
    templates.push_back(star_template(catalog, 1, {0, 3}));
    return templates;
  }
  templates.push_back(chain_template(catalog, n - 2, 2));
  if (n >= 3) templates.push_back(chain_template(catalog, 0, 3));
  if (n >= 4) templates.push_back(chain_template(catalog, 0, 4));
  if (n >= 4) templates.push_back(star_template(catalog, 1, {2, 3}));
  return templates;
  return templates;
}

std::vector<Query> generate_workload(const std::vector<Query>& templates, int count,
                                     uint64_t seed, const Catalog& catalog) {
  check(!templates.empty(), "workload generation needs at least one template");
  check(count >= 0, "workload count must be non-negative");
  for (const auto& tmpl : templates) {
    Query probe = tmpl;
    probe.id = "template";
    probe.validate(catalog);
  }
  if (count == 0) {
    return {};
  }

  // Deterministic retry: bump the seed until every template occurs (only
  // required once the stream is long enough to fit them all).
  for (uint64_t attempt = 0;; ++attempt) {
    bool all_used = false;
    auto workload = try_generate(templates, count, seed + attempt, catalog, all_used);
    if (all_used || count < static_cast<int>(templates.size())) {
      for (auto& query : workload) {
        query.validate(catalog);
      }
      return workload;
    }
  }
}

}  // namespace rankopt
