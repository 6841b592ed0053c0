#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "rankopt/engine/query.hpp"

namespace rankopt {

enum class PlanOp { kSeqScan, kHashJoin, kMergeJoin, kNestedLoopJoin };

inline constexpr int kOperatorCount = 4;

const std::string& op_name(PlanOp op);
PlanOp op_from_name(const std::string& name);

/// Node of a binary physical plan. Scans have no children; joins have exactly
/// two. `est_rows` / `row_width` are advisory annotations stamped by whoever
/// built the plan; structural identity ignores them.
struct PlanNode {
  PlanOp op = PlanOp::kSeqScan;
  int table = -1;  // query table position, scans only
  std::unique_ptr<PlanNode> left, right;
  uint32_t mask = 0;  // tables covered by this subtree

  double est_rows = 0.0;
  double row_width = 0.0;

  bool is_scan() const { return op == PlanOp::kSeqScan; }
  SubQuery subquery(const Query& query) const { return SubQuery{&query, mask}; }
};

struct PlanTree {
  const Query* query = nullptr;
  std::unique_ptr<PlanNode> root;

  PlanTree() = default;
  PlanTree(const Query* q, std::unique_ptr<PlanNode> r) : query(q), root(std::move(r)) {}

  PlanTree clone() const;
  size_t node_count() const;

  /// Compact text form, e.g. HashJoin(SeqScan(a),SeqScan(b)). Carries
  /// operators, structure, and scan tables only, so it doubles as the
  /// structural identity for dedup and repository keys.
  std::string serialize() const;
  uint64_t structural_hash() const;

  /// Enforces the tree invariants: scan leaves over distinct tables, join
  /// masks the disjoint union of the children's, root covering the query.
  void validate() const;
};

std::unique_ptr<PlanNode> make_scan(const Query& query, int table);
std::unique_ptr<PlanNode> make_join(PlanOp op, std::unique_ptr<PlanNode> left,
                                    std::unique_ptr<PlanNode> right);
std::unique_ptr<PlanNode> clone_subtree(const PlanNode& node);

/// Inverse of PlanTree::serialize for the given query.
PlanTree parse_plan(const Query& query, const std::string& text);

}  // namespace rankopt
