#pragma once

#include <cstdint>
#include <vector>

namespace beldi {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct TableAxis {
  NodeId node = kNoNode;
  int cardinality = 0;

  friend bool operator==(const TableAxis&, const TableAxis&) = default;
};

// Dense nonnegative potential over an ordered list of node axes, row-major
// with the first axis slowest. For an unobserved node the first axis is the
// node's own outcome axis and the rest are its parents in parent-list order;
// an absorbed evidence node keeps only the parent axes (a likelihood). Values
// carry meaning only up to one positive scalar per table.
class PotentialTable {
 public:
  PotentialTable() = default;  // 0-axis table holding the single entry 1
  PotentialTable(std::vector<TableAxis> axes, std::vector<double> entries);

  static PotentialTable constant(double value);

  const std::vector<TableAxis>& axes() const { return axes_; }
  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int rank() const { return static_cast<int>(axes_.size()); }

  // Position of the axis belonging to `node`, or -1.
  int axis_of(NodeId node) const;
  bool has_axis(NodeId node) const { return axis_of(node) >= 0; }
  int cardinality_of(NodeId node) const;

  double at(const std::vector<int>& digits) const;
  std::size_t flat_index(const std::vector<int>& digits) const;

  // Per-axis multipliers of this table's flat index, aligned with `target`;
  // axes absent here contribute stride 0 (broadcast).
  std::vector<std::size_t> strides_onto(const std::vector<TableAxis>& target) const;

  // Fix `node`'s axis at `outcome` and drop it.
  PotentialTable slice(NodeId node, int outcome) const;

  // Drop `node`'s axis, summing entries along it.
  PotentialTable sum_out(NodeId node) const;

  // this *= factor, where factor's axes are a subset of this table's.
  void multiply_by(const PotentialTable& factor);

  // this /= denom (denom's axes a subset of ours); entries whose denominator
  // is zero are set to zero_fill.
  void divide_by(const PotentialTable& denom, double zero_fill);

  // Pointwise product laid out over `target`, which must cover the axes of
  // both operands.
  static PotentialTable product(std::vector<TableAxis> target,
                                const PotentialTable& a,
                                const PotentialTable& b);

  double max_entry() const;
  double sum() const;
  bool all_zero() const;

  // Scale so the maximum entry is 1; no-op on an all-zero table. Returns the
  // previous maximum.
  double rescale_unit_max();

  // Copy where every first-axis column sums to 1 (all-zero columns stay 0).
  PotentialTable normalized_first_axis() const;

  friend bool operator==(const PotentialTable&, const PotentialTable&) = default;

 private:
  std::vector<TableAxis> axes_;
  std::vector<double> entries_{1.0};
};

// Odometer over axis cardinalities; digits advance with the last axis
// fastest, matching row-major flat order.
class MultiIndex {
 public:
  explicit MultiIndex(const std::vector<TableAxis>& axes);

  const std::vector<int>& digits() const { return digits_; }
  int digit(int axis) const { return digits_[axis]; }
  bool next();  // false once wrapped back to all zeros

 private:
  std::vector<int> cards_;
  std::vector<int> digits_;
};

std::size_t axes_volume(const std::vector<TableAxis>& axes);

}  // namespace beldi
