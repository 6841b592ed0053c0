#include "rankopt/engine/query.hpp"

#include <fstream>
#include <sstream>

namespace rankopt {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string::npos ? end : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// "a.x" -> {a, x}
std::pair<std::string, std::string> parse_column_ref(const std::string& ref) {
  const auto dot = ref.find('.');
  check(dot != std::string::npos, "malformed column reference '" + ref + "'");
  return {trim(ref.substr(0, dot)), trim(ref.substr(dot + 1))};
}

}  // namespace

int Query::table_index(const std::string& table) const {
  for (size_t i = 0; i < tables.size(); ++i) {
    if (tables[i] == table) {
      return static_cast<int>(i);
    }
  }
  fail("table '" + table + "' not in query " + id);
}

std::vector<std::pair<int, int>> Query::join_edges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(joins.size());
  for (const auto& join : joins) {
    edges.emplace_back(table_index(join.left_table), table_index(join.right_table));
  }
  return edges;
}

void Query::validate(const Catalog& catalog) const {
  check(!tables.empty(), "query " + id + " has no tables");
  check(tables.size() <= 32, "query " + id + " exceeds the 32-table mask limit");
  for (size_t i = 0; i < tables.size(); ++i) {
    check(catalog.table_index(tables[i]) >= 0, "query " + id + " uses unknown table " + tables[i]);
    for (size_t j = i + 1; j < tables.size(); ++j) {
      check(tables[i] != tables[j], "query " + id + " repeats table " + tables[i]);
    }
  }
  for (const auto& join : joins) {
    check(join.left_table != join.right_table, "query " + id + " has a self-join");
    catalog.table(join.left_table).column_index(join.left_column);
    catalog.table(join.right_table).column_index(join.right_column);
    table_index(join.left_table);
    table_index(join.right_table);
  }
  for (const auto& filter : filters) {
    catalog.table(filter.table).column_index(filter.column);
    table_index(filter.table);
  }
  check(induced_connected(*this, full_mask()), "query " + id + " join graph is not connected");
}

std::vector<std::string> SubQuery::table_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < query->table_count(); ++i) {
    if (contains(i)) {
      names.push_back(query->tables[i]);
    }
  }
  return names;
}

bool induced_connected(const Query& query, uint32_t mask) {
  if (mask == 0) return false;
  const auto edges = query.join_edges();
  const uint32_t start = mask & (~mask + 1);  // lowest set bit
  uint32_t reached = start;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [a, b] : edges) {
      const uint32_t bit_a = uint32_t{1} << a;
      const uint32_t bit_b = uint32_t{1} << b;
      if ((mask & bit_a) && (mask & bit_b)) {
        if ((reached & bit_a) && !(reached & bit_b)) {
          reached |= bit_b;
          changed = true;
        } else if ((reached & bit_b) && !(reached & bit_a)) {
          reached |= bit_a;
          changed = true;
        }
      }
    }
  }
  return reached == mask;
}

std::vector<uint32_t> connected_subquery_masks(const Query& query) {
  std::vector<uint32_t> masks;
  const uint32_t full = query.full_mask();
  for (uint32_t mask = 1; mask <= full; ++mask) {
    if (induced_connected(query, mask)) {
      masks.push_back(mask);
    }
  }
  return masks;
}

Query parse_query_line(const std::string& line, std::string id) {
  Query query;
  query.id = std::move(id);

  const auto tables_pos = line.find("TABLES ");
  check(tables_pos != std::string::npos, "workload line missing TABLES clause");
  const auto join_pos = line.find(" JOIN ");
  const auto filter_pos = line.find(" FILTER ");

  const auto tables_end = join_pos != std::string::npos
                              ? join_pos
                              : (filter_pos != std::string::npos ? filter_pos : line.size());
  for (const auto& name : split(line.substr(tables_pos + 7, tables_end - tables_pos - 7), ',')) {
    const auto trimmed = trim(name);
    check(!trimmed.empty(), "empty table name in workload line");
    query.tables.push_back(trimmed);
  }

  if (join_pos != std::string::npos) {
    const auto join_end = filter_pos != std::string::npos ? filter_pos : line.size();
    for (const auto& edge : split(line.substr(join_pos + 6, join_end - join_pos - 6), ',')) {
      const auto eq = edge.find('=');
      check(eq != std::string::npos, "malformed join predicate '" + edge + "'");
      const auto [lt, lc] = parse_column_ref(trim(edge.substr(0, eq)));
      const auto [rt, rc] = parse_column_ref(trim(edge.substr(eq + 1)));
      query.joins.push_back({lt, lc, rt, rc});
    }
  }

  if (filter_pos != std::string::npos) {
    // Filters look like "a.v in [3,17]"; split on "]," boundaries.
    auto rest = trim(line.substr(filter_pos + 8));
    while (!rest.empty()) {
      const auto close = rest.find(']');
      check(close != std::string::npos, "malformed FILTER clause");
      const auto item = trim(rest.substr(0, close + 1));
      rest = trim(rest.substr(close + 1));
      if (!rest.empty() && rest.front() == ',') rest = trim(rest.substr(1));

      const auto in_pos = item.find(" in ");
      check(in_pos != std::string::npos, "malformed filter '" + item + "'");
      const auto [table, column] = parse_column_ref(trim(item.substr(0, in_pos)));
      auto range = trim(item.substr(in_pos + 4));
      check(range.size() >= 5 && range.front() == '[' && range.back() == ']',
            "malformed filter range '" + range + "'");
      range = range.substr(1, range.size() - 2);
      const auto comma = range.find(',');
      check(comma != std::string::npos, "malformed filter range '" + range + "'");
      FilterPredicate filter;
      filter.table = table;
      filter.column = column;
      filter.lo = std::stoi(trim(range.substr(0, comma)));
      filter.hi = std::stoi(trim(range.substr(comma + 1)));
      query.filters.push_back(filter);
    }
  }
  return query;
}

std::string format_query_line(const Query& query) {
  std::ostringstream out;
  out << "TABLES ";
  for (size_t i = 0; i < query.tables.size(); ++i) {
    if (i != 0) out << ',';
    out << query.tables[i];
  }
  if (!query.joins.empty()) {
    out << " JOIN ";
    for (size_t i = 0; i < query.joins.size(); ++i) {
      if (i != 0) out << ',';
      const auto& join = query.joins[i];
      out << join.left_table << '.' << join.left_column << '=' << join.right_table << '.'
          << join.right_column;
    }
  }
  if (!query.filters.empty()) {
    out << " FILTER ";
    for (size_t i = 0; i < query.filters.size(); ++i) {
      if (i != 0) out << ',';
      const auto& filter = query.filters[i];
      out << filter.table << '.' << filter.column << " in [" << filter.lo << ',' << filter.hi
          << ']';
    }
  }
  return out.str();
}

std::vector<Query> load_workload(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot read '" + path + "'");
  std::vector<Query> workload;
  std::string line;
  size_t index = 0;
  while (std::getline(in, line)) {
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    workload.push_back(parse_query_line(trimmed, "q" + std::to_string(index++)));
  }
  return workload;
}

void save_workload(const std::vector<Query>& workload, const std::string& path) {
  std::ofstream out(path);
  check(out.good(), "cannot write '" + path + "'");
  for (const auto& query : workload) {
    out << format_query_line(query) << '\n';
  }
  check(out.good(), "write failed for '" + path + "'");
}

}  // namespace rankopt
