#include "beldi/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beldi {

std::size_t axes_volume(const std::vector<TableAxis>& axes) {
  std::size_t n = 1;
  for (const TableAxis& a : axes) n *= static_cast<std::size_t>(a.cardinality);
  return n;
}

PotentialTable::PotentialTable(std::vector<TableAxis> axes, std::vector<double> entries)
    : axes_(std::move(axes)), entries_(std::move(entries)) {
  for (const TableAxis& a : axes_) {
    if (a.cardinality <= 0) throw std::invalid_argument("table axis with nonpositive cardinality");
  }
  if (entries_.size() != axes_volume(axes_)) {
    throw std::invalid_argument("table entry count does not match axis volume");
  }
}

PotentialTable PotentialTable::constant(double value) {
  return PotentialTable({}, {value});
}

int PotentialTable::axis_of(NodeId node) const {
  for (int i = 0; i < rank(); ++i) {
    if (axes_[i].node == node) return i;
  }
  return -1;
}

int PotentialTable::cardinality_of(NodeId node) const {
  int ax = axis_of(node);
  return ax < 0 ? 0 : axes_[ax].cardinality;
}

std::size_t PotentialTable::flat_index(const std::vector<int>& digits) const {
  std::size_t idx = 0;
  for (int i = 0; i < rank(); ++i) {
    idx = idx * static_cast<std::size_t>(axes_[i].cardinality) + static_cast<std::size_t>(digits[i]);
  }
  return idx;
}

double PotentialTable::at(const std::vector<int>& digits) const {
  return entries_[flat_index(digits)];
}

std::vector<std::size_t> PotentialTable::strides_onto(const std::vector<TableAxis>& target) const {
  // Own stride per axis, last axis contiguous.
  std::vector<std::size_t> own(axes_.size());
  std::size_t s = 1;
  for (int i = rank() - 1; i >= 0; --i) {
    own[static_cast<std::size_t>(i)] = s;
    s *= static_cast<std::size_t>(axes_[static_cast<std::size_t>(i)].cardinality);
  }
  std::vector<std::size_t> mapped(target.size(), 0);
  for (std::size_t t = 0; t < target.size(); ++t) {
    int ax = axis_of(target[t].node);
    if (ax >= 0) mapped[t] = own[static_cast<std::size_t>(ax)];
  }
  return mapped;
}

MultiIndex::MultiIndex(const std::vector<TableAxis>& axes)
    : cards_(axes.size()), digits_(axes.size(), 0) {
  for (std::size_t i = 0; i < axes.size(); ++i) cards_[i] = axes[i].cardinality;
}

bool MultiIndex::next() {
  for (int i = static_cast<int>(digits_.size()) - 1; i >= 0; --i) {
    if (++digits_[static_cast<std::size_t>(i)] < cards_[static_cast<std::size_t>(i)]) return true;
    digits_[static_cast<std::size_t>(i)] = 0;
  }
  return false;
}

PotentialTable PotentialTable::slice(NodeId node, int outcome) const {
  int ax = axis_of(node);
  if (ax < 0) throw std::invalid_argument("slice: node has no axis in this table");
  if (outcome < 0 || outcome >= axes_[static_cast<std::size_t>(ax)].cardinality) {
    throw std::invalid_argument("slice: outcome out of range");
  }
  std::vector<TableAxis> out_axes = axes_;
  out_axes.erase(out_axes.begin() + ax);
  std::vector<double> out(axes_volume(out_axes));

  std::vector<std::size_t> strides = strides_onto(out_axes);
  std::size_t fixed = static_cast<std::size_t>(outcome);
  // Stride of the removed axis in the source layout.
  std::size_t removed_stride = 1;
  for (int i = rank() - 1; i > ax; --i) {
    removed_stride *= static_cast<std::size_t>(axes_[static_cast<std::size_t>(i)].cardinality);
  }

  MultiIndex mi(out_axes);
  std::size_t o = 0;
  do {
    std::size_t src = fixed * removed_stride;
    for (std::size_t t = 0; t < out_axes.size(); ++t) {
      src += strides[t] * static_cast<std::size_t>(mi.digit(static_cast<int>(t)));
    }
    out[o++] = entries_[src];
  } while (mi.next());
  return PotentialTable(std::move(out_axes), std::move(out));
}

PotentialTable PotentialTable::sum_out(NodeId node) const {
  int ax = axis_of(node);
  if (ax < 0) throw std::invalid_argument("sum_out: node has no axis in this table");
  int card = axes_[static_cast<std::size_t>(ax)].cardinality;

  std::vector<TableAxis> out_axes = axes_;
  out_axes.erase(out_axes.begin() + ax);
  std::vector<double> out(axes_volume(out_axes), 0.0);

  std::vector<std::size_t> strides = strides_onto(out_axes);
  std::size_t removed_stride = 1;
  for (int i = rank() - 1; i > ax; --i) {
    removed_stride *= static_cast<std::size_t>(axes_[static_cast<std::size_t>(i)].cardinality);
  }

  MultiIndex mi(out_axes);
  std::size_t o = 0;
  do {
    std::size_t base = 0;
    for (std::size_t t = 0; t < out_axes.size(); ++t) {
      base += strides[t] * static_cast<std::size_t>(mi.digit(static_cast<int>(t)));
    }
    long double acc = 0.0L;
    for (int v = 0; v < card; ++v) {
      acc += entries_[base + static_cast<std::size_t>(v) * removed_stride];
    }
    out[o++] = static_cast<double>(acc);
  } while (mi.next());
  return PotentialTable(std::move(out_axes), std::move(out));
}

void PotentialTable::multiply_by(const PotentialTable& factor) {
  std::vector<std::size_t> strides = factor.strides_onto(axes_);
  MultiIndex mi(axes_);
  std::size_t o = 0;
  do {
    std::size_t src = 0;
    for (std::size_t t = 0; t < axes_.size(); ++t) {
      src += strides[t] * static_cast<std::size_t>(mi.digit(static_cast<int>(t)));
    }
    entries_[o++] *= factor.entries_[src];
  } while (mi.next());
}

void PotentialTable::divide_by(const PotentialTable& denom, double zero_fill) {
  std::vector<std::size_t> strides = denom.strides_onto(axes_);
  MultiIndex mi(axes_);
  std::size_t o = 0;
  do {
    std::size_t src = 0;
    for (std::size_t t = 0; t < axes_.size(); ++t) {
      src += strides[t] * static_cast<std::size_t>(mi.digit(static_cast<int>(t)));
    }
    double d = denom.entries_[src];
    entries_[o] = d == 0.0 ? zero_fill : entries_[o] / d;
    ++o;
  } while (mi.next());
}

PotentialTable PotentialTable::product(std::vector<TableAxis> target,
                                       const PotentialTable& a,
                                       const PotentialTable& b) {
  std::vector<double> out(axes_volume(target));
  std::vector<std::size_t> sa = a.strides_onto(target);
  std::vector<std::size_t> sb = b.strides_onto(target);
  MultiIndex mi(target);
  std::size_t o = 0;
  do {
    std::size_t ia = 0, ib = 0;
    for (std::size_t t = 0; t < target.size(); ++t) {
      std::size_t d = static_cast<std::size_t>(mi.digit(static_cast<int>(t)));
      ia += sa[t] * d;
      ib += sb[t] * d;
    }
    out[o++] = a.entries_[ia] * b.entries_[ib];
  } while (mi.next());
  return PotentialTable(std::move(target), std::move(out));
}

double PotentialTable::max_entry() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, v);
  return m;
}

double PotentialTable::sum() const {
  long double acc = 0.0L;
  for (double v : entries_) acc += v;
  return static_cast<double>(acc);
}

bool PotentialTable::all_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
}

double PotentialTable::rescale_unit_max() {
  double m = max_entry();
  if (m > 0.0 && m != 1.0) {
    for (double& v : entries_) v /= m;
  }
  return m;
}

PotentialTable PotentialTable::normalized_first_axis() const {
  if (rank() == 0) {
    return entries_[0] == 0.0 ? *this : PotentialTable::constant(1.0);
  }
  PotentialTable out = *this;
  std::size_t card = static_cast<std::size_t>(axes_[0].cardinality);
  std::size_t block = entries_.size() / card;
  for (std::size_t rest = 0; rest < block; ++rest) {
    long double acc = 0.0L;
    for (std::size_t v = 0; v < card; ++v) acc += entries_[v * block + rest];
    if (acc == 0.0L) continue;
    for (std::size_t v = 0; v < card; ++v) {
      out.entries_[v * block + rest] = static_cast<double>(entries_[v * block + rest] / acc);
    }
  }
  return out;
}

}  // namespace beldi
