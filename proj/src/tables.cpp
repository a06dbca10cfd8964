#include "dsbn/tables.hpp"

#include <cmath>
#include <sstream>

#include "dsbn/error.hpp"
#include "dsbn/simd/kernels.hpp"

namespace dsbn {

TableShape::TableShape(Frame child, std::vector<Frame> parents)
    : child_(std::move(child)), parents_(std::move(parents)), strides_(parents_.size()) {
  std::size_t stride = child_.slot_count();
  for (std::size_t p = parents_.size(); p-- > 0;) {
    strides_[p] = stride;
    stride *= parents_[p].slot_count();
  }
  slot_count_ = stride;
}

std::size_t TableShape::slot(std::span<const Subset> config, Subset child) const {
  if (config.size() != parents_.size()) {
    throw StructureError("configuration has " + std::to_string(config.size()) +
                         " coordinates, table for '" + child_.variable() + "' has " +
                         std::to_string(parents_.size()) + " parents");
  }
  std::size_t s = child.bits;
  for (std::size_t p = 0; p < config.size(); ++p) s += config[p].bits * strides_[p];
  return s;
}

bool TableShape::is_valid_slot(std::size_t slot) const {
  if ((slot % child_.slot_count()) == 0) return false;
  for (std::size_t p = 0; p < parents_.size(); ++p) {
    if ((slot / strides_[p]) % parents_[p].slot_count() == 0) return false;
  }
  return true;
}

std::vector<Config> TableShape::configurations() const {
  std::vector<Config> out{Config{}};
  for (const auto& frame : parents_) {
    std::vector<Config> next;
    const auto subsets = nonempty_subsets(frame);
    next.reserve(out.size() * subsets.size());
    for (const auto& prefix : out) {
      for (Subset s : subsets) {
        next.push_back(prefix);
        next.back().push_back(s);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string TableShape::format_config(std::span<const Subset> config) const {
  if (config.empty()) return "-";
  std::string out;
  for (std::size_t p = 0; p < config.size(); ++p) {
    if (p) out += " × ";
    out += format_subset(config[p], parents_[p]);
  }
  return out;
}

template <TableKind Kind>
CondTable<Kind>::CondTable(TableShape shape, std::vector<double> dense)
    : shape_(std::move(shape)), values_(std::move(dense)) {
  if (values_.size() != shape_.slot_count()) {
    throw StructureError("dense table size does not match its shape");
  }
}

template class CondTable<TableKind::mass>;
template class CondTable<TableKind::k>;

namespace {

// Applies one sweep per parent-coordinate bit. Child bits are excluded: K
// only aggregates over the conditioning side.
template <typename Sweep>
void sweep_parent_lattice(const TableShape& shape, std::vector<double>& values, Sweep sweep) {
  for (std::size_t p = 0; p < shape.parent_count(); ++p) {
    for (std::size_t b = 0; b < shape.parents()[p].size(); ++b) {
      sweep(values.data(), values.size(), shape.parent_stride(p) << b);
    }
  }
}

void zero_invalid_slots(const TableShape& shape, std::vector<double>& values) {
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (!shape.is_valid_slot(s)) values[s] = 0.0;
  }
}

}  // namespace

CondKTable m_to_k(const CondMassTable& m) {
  const auto& shape = m.shape();
  std::vector<double> values(m.dense().begin(), m.dense().end());
  sweep_parent_lattice(shape, values, simd::active().superset_sum);
  zero_invalid_slots(shape, values);

  for (const auto& config : shape.configurations()) {
    for (Subset child : shape.child_subsets()) {
      double& v = values[shape.slot(config, child)];
      if (v < -kIdentityTolerance) {
        std::ostringstream msg;
        msg << "K(" << format_subset(child, shape.child()) << " | " << shape.format_config(config)
            << ") = " << v << " is negative; table for '" << shape.child().variable()
            << "' is not K-representable";
        throw InfeasibleError(msg.str());
      }
      if (v < 0.0) v = 0.0;
    }
  }
  return CondKTable(shape, std::move(values));
}

CondMassTable k_to_m(const CondKTable& k) {
  const auto& shape = k.shape();
  std::vector<double> values(k.dense().begin(), k.dense().end());
  sweep_parent_lattice(shape, values, simd::active().superset_diff);
  zero_invalid_slots(shape, values);
  return CondMassTable(shape, std::move(values));
}

namespace {

bool all_full(const TableShape& shape, const Config& config) {
  for (std::size_t p = 0; p < config.size(); ++p) {
    if (config[p].bits != shape.parents()[p].full_mask()) return false;
  }
  return true;
}

template <TableKind Kind>
double row_sum(const CondTable<Kind>& t, const Config& config) {
  double sum = 0.0;
  for (Subset child : t.shape().child_subsets()) sum += t.at(config, child);
  return sum;
}

}  // namespace

ValidationReport validate_tables(const CondMassTable& m) {
  ValidationReport report;
  const auto& shape = m.shape();
  for (const auto& config : shape.configurations()) {
    for (Subset child : shape.child_subsets()) {
      if (!std::isfinite(m.at(config, child))) {
        report.violate("m(" + format_subset(child, shape.child()) + " | " +
                       shape.format_config(config) + ") is not finite");
      }
    }
    double expected = all_full(shape, config) ? 1.0 : 0.0;
    double sum = row_sum(m, config);
    if (std::abs(sum - expected) > kPrintedTolerance) {
      std::ostringstream msg;
      msg << "mass row " << shape.format_config(config) << " of '" << shape.child().variable()
          << "' sums to " << sum << ", convention expects " << expected;
      report.warn(msg.str());
    }
  }
  return report;
}

ValidationReport validate_tables(const CondKTable& k) {
  ValidationReport report;
  const auto& shape = k.shape();
  for (const auto& config : shape.configurations()) {
    for (Subset child : shape.child_subsets()) {
      double v = k.at(config, child);
      if (!(v >= -kIdentityTolerance)) {
        std::ostringstream msg;
        msg << "K(" << format_subset(child, shape.child()) << " | " << shape.format_config(config)
            << ") = " << v << " is negative";
        report.violate(msg.str());
      }
    }
    double sum = row_sum(k, config);
    if (!(std::abs(sum - 1.0) <= kPrintedTolerance)) {
      std::ostringstream msg;
      msg << "K row " << shape.format_config(config) << " of '" << shape.child().variable()
          << "' sums to " << sum << ", not 1";
      report.violate(msg.str());
    }
  }
  return report;
}

}  // namespace dsbn
