#include "rankopt/engine/plan.hpp"

#include <array>

#include "rankopt/util/hash.hpp"

namespace rankopt {

namespace {

const std::array<std::string, kOperatorCount> kOpNames = {"SeqScan", "HashJoin", "MergeJoin",
                                                          "NestedLoopJoin"};

void serialize_node(const PlanNode& node, const Query& query, std::string& out) {
  out += op_name(node.op);
  out += '(';
  if (node.is_scan()) {
    out += query.tables[node.table];
  } else {
    serialize_node(*node.left, query, out);
    out += ',';
    serialize_node(*node.right, query, out);
  }
  out += ')';
}

size_t count_nodes(const PlanNode& node) {
  return 1 + (node.left ? count_nodes(*node.left) : 0) + (node.right ? count_nodes(*node.right) : 0);
}

void validate_node(const PlanNode& node, const Query& query, uint32_t& seen) {
  if (node.is_scan()) {
    check(!node.left && !node.right, "scan node with children");
    check(node.table >= 0 && node.table < query.table_count(), "scan over unknown table");
    const uint32_t bit = uint32_t{1} << node.table;
    check(node.mask == bit, "scan mask does not match its table");
    check((seen & bit) == 0, "duplicate scan of " + query.tables[node.table]);
    seen |= bit;
    return;
  }
  check(node.left && node.right, "join node needs two children");
  validate_node(*node.left, query, seen);
  validate_node(*node.right, query, seen);
  check((node.left->mask & node.right->mask) == 0, "join children overlap");
  check(node.mask == (node.left->mask | node.right->mask),
        "join mask is not the union of its children");
}

struct PlanParser {
  const Query& query;
  const std::string& text;
  size_t pos = 0;

  std::unique_ptr<PlanNode> parse() {
    auto node = parse_node();
    check(pos == text.size(), "trailing characters in plan text");
    return node;
  }

  std::unique_ptr<PlanNode> parse_node() {
    const auto open = text.find('(', pos);
    check(open != std::string::npos, "malformed plan text");
    const auto name = text.substr(pos, open - pos);
    const PlanOp op = op_from_name(name);
    pos = open + 1;
    if (op == PlanOp::kSeqScan) {
      const auto close = text.find(')', pos);
      check(close != std::string::npos, "unterminated scan");
      const auto table = text.substr(pos, close - pos);
      pos = close + 1;
      return make_scan(query, query.table_index(table));
    }
    auto left = parse_node();
    check(pos < text.size() && text[pos] == ',', "expected ',' in join");
    ++pos;
    auto right = parse_node();
    check(pos < text.size() && text[pos] == ')', "expected ')' in join");
    ++pos;
    return make_join(op, std::move(left), std::move(right));
  }
};

}  // namespace

const std::string& op_name(PlanOp op) { return kOpNames[static_cast<int>(op)]; }

PlanOp op_from_name(const std::string& name) {
  for (int i = 0; i < kOperatorCount; ++i) {
    if (kOpNames[i] == name) {
      return static_cast<PlanOp>(i);
    }
  }
  fail("unknown plan operator '" + name + "'");
}

PlanTree PlanTree::clone() const {
  PlanTree copy;
  copy.query = query;
  if (root) copy.root = clone_subtree(*root);
  return copy;
}

size_t PlanTree::node_count() const { return root ? count_nodes(*root) : 0; }

std::string PlanTree::serialize() const {
  check(root != nullptr && query != nullptr, "cannot serialize an empty plan");
  std::string out;
  serialize_node(*root, *query, out);
  return out;
}

uint64_t PlanTree::structural_hash() const { return fnv1a64(serialize()); }

void PlanTree::validate() const {
  check(root != nullptr && query != nullptr, "empty plan");
  uint32_t seen = 0;
  validate_node(*root, *query, seen);
  check(root->mask == query->full_mask(), "plan does not cover the whole query");
}

std::unique_ptr<PlanNode> make_scan(const Query& query, int table) {
  check(table >= 0 && table < query.table_count(), "scan table position out of range");
  auto node = std::make_unique<PlanNode>();
  node->op = PlanOp::kSeqScan;
  node->table = table;
  node->mask = uint32_t{1} << table;
  return node;
}

std::unique_ptr<PlanNode> make_join(PlanOp op, std::unique_ptr<PlanNode> left,
                                    std::unique_ptr<PlanNode> right) {
  check(op != PlanOp::kSeqScan, "join node cannot be a scan");
  check(left && right, "join node needs two children");
  auto node = std::make_unique<PlanNode>();
  node->op = op;
  node->mask = left->mask | right->mask;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

std::unique_ptr<PlanNode> clone_subtree(const PlanNode& node) {
  auto copy = std::make_unique<PlanNode>();
  copy->op = node.op;
  copy->table = node.table;
  copy->mask = node.mask;
  copy->est_rows = node.est_rows;
  copy->row_width = node.row_width;
  if (node.left) copy->left = clone_subtree(*node.left);
  if (node.right) copy->right = clone_subtree(*node.right);
  return copy;
}

PlanTree parse_plan(const Query& query, const std::string& text) {
  PlanParser parser{query, text};
  PlanTree plan(&query, parser.parse());
  plan.validate();
  return plan;
}

}  // namespace rankopt
