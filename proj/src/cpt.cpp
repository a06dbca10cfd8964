#include "dsbn/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dsbn/error.hpp"
#include "dsbn/simd/kernels.hpp"

namespace dsbn {

namespace {

constexpr double kNegativeTolerance = 1e-12;

template <typename T>
std::size_t sorted_index(const std::vector<T>& domain, const T& value) {
  auto it = std::lower_bound(domain.begin(), domain.end(), value);
  if (it == domain.end() || !(*it == value)) throw std::out_of_range("value not in domain");
  return static_cast<std::size_t>(it - domain.begin());
}

}  // namespace

ExtCPT::ExtCPT(CondKTable source, std::size_t successors)
    : source_(std::make_shared<const CondKTable>(std::move(source))),
      successors_(successors),
      child_domain_(&dsbn::child_domain(source_->shape().child(), successors)) {
  for (const auto& f : source_->shape().parents()) {
    parent_domains_.push_back(&enumerate_vexprs(f));
    radices_.push_back(parent_domains_.back()->size());
  }
  for (std::size_t r : radices_) row_count_ *= r;
  const double cells = static_cast<double>(row_count_) * static_cast<double>(column_count());
  if (cells > 5e7) {
    throw SizeError("extended table for '" + child_frame().variable() + "' would hold " +
                    std::to_string(static_cast<long long>(cells)) + " entries");
  }
  values_.assign(row_count_ * column_count(), std::numeric_limits<double>::quiet_NaN());
  filled_.assign(row_count_, false);
}

std::size_t ExtCPT::row_index(std::span<const std::size_t> parent_values) const {
  if (parent_values.size() != radices_.size()) throw std::out_of_range("wrong number of parent values");
  std::size_t r = 0;
  for (std::size_t p = 0; p < radices_.size(); ++p) {
    if (parent_values[p] >= radices_[p]) throw std::out_of_range("parent value index out of range");
    r = r * radices_[p] + parent_values[p];
  }
  return r;
}

std::vector<std::size_t> ExtCPT::row_values(std::size_t row) const {
  std::vector<std::size_t> out(radices_.size());
  for (std::size_t p = radices_.size(); p-- > 0;) {
    out[p] = row % radices_[p];
    row /= radices_[p];
  }
  return out;
}

std::size_t ExtCPT::parent_value_index(std::size_t p, const VExpr& v) const {
  return sorted_index(*parent_domains_.at(p), v);
}

std::size_t ExtCPT::child_index(const VnExpr& x) const { return sorted_index(*child_domain_, x); }

bool ExtCPT::complete() const {
  return std::all_of(filled_.begin(), filled_.end(), [](bool f) { return f; });
}

std::string ExtCPT::format_row(std::size_t r) const {
  if (radices_.empty()) return "-";
  auto idx = row_values(r);
  std::string out;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    if (p) out += " × ";
    out += format_vexpr((*parent_domains_[p])[idx[p]], parent_frames()[p]);
  }
  return out;
}

std::string ExtCPT::format_child(std::size_t column) const {
  return format_vn((*child_domain_)[column], child_frame());
}

// ---------------------------------------------------------------------------

namespace {

void screen_row(ExtCPT& cpt, std::size_t r, NegativePolicy policy) {
  auto row = cpt.mutable_row(r);
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (row[c] < -kNegativeTolerance) {
      if (policy == NegativePolicy::keep) continue;
      std::ostringstream msg;
      msg << "'" << cpt.child_frame().variable() << "': P(" << cpt.format_child(c) << "|"
          << cpt.format_row(r) << ") = " << row[c] << " is negative";
      throw InfeasibleError(msg.str());
    }
    if (row[c] < 0.0) row[c] = 0.0;
  }
}

}  // namespace

ExtCPT build_plain_rows(const CondKTable& k, std::size_t successors, NegativePolicy policy) {
  ExtCPT cpt(k, successors);
  const auto& shape = k.shape();
  const Frame& child = shape.child();
  const auto& domain = cpt.child_domain();
  const std::size_t n = successors;
  const double members = n == 0 ? 1.0 : static_cast<double>((1u << n) - 1u);

  // Child V-expressions by decreasing |MY|: a reserve only depends on
  // expressions with a strictly larger MY.
  std::vector<VExpr> by_size;
  if (n > 0) {
    by_size = enumerate_vexprs(child);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const VExpr& a, const VExpr& b) { return a.my().size() > b.my().size(); });
  }

  for (const auto& config : shape.configurations()) {
    std::vector<std::size_t> parent_values(config.size());
    for (std::size_t p = 0; p < config.size(); ++p) {
      parent_values[p] = cpt.parent_value_index(p, VExpr::base(config[p]));
    }
    const std::size_t r = cpt.row_index(parent_values);
    auto row = cpt.mutable_row(r);

    if (n == 0) {
      for (std::size_t c = 0; c < domain.size(); ++c) row[c] = k.at(config, domain[c].my());
    } else {
      // A class with K = 0 must be all zeros, so its families get nothing.
      auto open = [&](Subset s) { return k.at(config, s) > kIdentityTolerance; };
      std::map<VExpr, double> reserve;
      std::vector<double> family_sum(child.slot_count(), 0.0);
      std::vector<double> plain(child.slot_count(), 0.0);
      for (const VExpr& v : by_size) {
        const Subset my = v.my();
        double value;
        if (v.is_base()) {
          plain[my.bits] = k.at(config, my) - family_sum[my.bits];
          value = plain[my.bits];
        } else if (v.op() == Op::at) {
          value = open(my) ? reserve.at(*v.su()) / members : 0.0;
        } else {
          value = 0.0;
        }
        reserve.emplace(v, value);
        // Every family over (s, v) draws reserve(v) in total.
        if (my.size() >= 2) {
          for (std::uint32_t s = (my.bits - 1) & my.bits; s != 0; s = (s - 1) & my.bits) {
            if (open(Subset{s})) family_sum[s] += value;
          }
        }
      }
      for (std::size_t c = 0; c < domain.size(); ++c) {
        const VnExpr& x = domain[c];
        if (x.is_plain()) {
          row[c] = plain[x.my().bits];
        } else {
          row[c] = open(x.my()) ? reserve.at(*x.su()) / members : 0.0;
        }
      }
    }
    screen_row(cpt, r, policy);
    cpt.mark_filled(r);
  }
  return cpt;
}

ExtCPT extend_parent_rows(ExtCPT cpt, NegativePolicy policy) {
  const std::size_t parents = cpt.parent_frames().size();
  std::vector<std::size_t> rows(cpt.row_count());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  auto total_depth = [&](std::size_t r) {
    std::size_t d = 0;
    auto idx = cpt.row_values(r);
    for (std::size_t p = 0; p < parents; ++p) d += cpt.parent_domain(p)[idx[p]].depth();
    return d;
  };
  std::vector<std::size_t> depth(rows.size());
  for (std::size_t r : rows) depth[r] = total_depth(r);
  std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });

  const auto& kernels = simd::active();
  for (std::size_t r : rows) {
    if (cpt.row_filled(r)) continue;
    auto idx = cpt.row_values(r);
    std::size_t p = 0;
    while (p < parents && cpt.parent_domain(p)[idx[p]].is_base()) ++p;
    if (p == parents) throw std::logic_error("base-parent row missing from partial table");
    const VExpr& v = cpt.parent_domain(p)[idx[p]];

    auto su_idx = idx;
    su_idx[p] = cpt.parent_value_index(p, *v.su());
    const std::size_t su_row = cpt.row_index(su_idx);
    if (!cpt.row_filled(su_row)) throw std::logic_error("SU row not yet resolved");

    auto out = cpt.mutable_row(r);
    if (v.op() == Op::dot) {
      auto src = cpt.row(su_row);
      std::copy(src.begin(), src.end(), out.begin());
    } else {
      auto my_idx = idx;
      my_idx[p] = cpt.parent_value_index(p, VExpr::base(v.my()));
      const std::size_t my_row = cpt.row_index(my_idx);
      if (!cpt.row_filled(my_row)) throw std::logic_error("MY row not yet resolved");
      kernels.twice_minus(out.data(), cpt.row(my_row).data(), cpt.row(su_row).data(), out.size());
      screen_row(cpt, r, policy);
    }
    cpt.mark_filled(r);
  }
  return cpt;
}

ExtCPT build_ext_cpt(const CondKTable& k, std::size_t successors, NegativePolicy policy) {
  return extend_parent_rows(build_plain_rows(k, successors, policy), policy);
}

// ---------------------------------------------------------------------------

ValidationReport check_feasibility(const ExtCPT& cpt) {
  ValidationReport report;
  const std::size_t parents = cpt.parent_frames().size();
  const auto& domain = cpt.child_domain();
  auto describe = [&](std::size_t r) { return "'" + cpt.child_frame().variable() + "' row " + cpt.format_row(r); };

  for (std::size_t r = 0; r < cpt.row_count(); ++r) {
    if (!cpt.row_filled(r)) {
      report.violate(describe(r) + " is not filled");
      continue;
    }
    auto row = cpt.row(r);
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      sum += row[c];
      if (row[c] < -kNegativeTolerance) {
        std::ostringstream msg;
        msg << "'" << cpt.child_frame().variable() << "': P(" << cpt.format_child(c) << "|"
            << cpt.format_row(r) << ") = " << row[c] << " is negative";
        report.violate(msg.str());
      }
    }
    if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
      std::ostringstream msg;
      msg << describe(r) << " sums to " << sum;
      report.violate(msg.str());
    }

    const auto idx = cpt.row_values(r);
    bool all_base = true;
    std::vector<std::size_t> at_coords;
    for (std::size_t p = 0; p < parents; ++p) {
      const VExpr& v = cpt.parent_domain(p)[idx[p]];
      if (v.is_base()) continue;
      all_base = false;
      if (v.op() == Op::at) at_coords.push_back(p);
      if (v.op() == Op::dot) {
        auto su_idx = idx;
        su_idx[p] = cpt.parent_value_index(p, *v.su());
        auto su_row = cpt.row(cpt.row_index(su_idx));
        if (!std::equal(row.begin(), row.end(), su_row.begin(), [](double a, double b) {
              return std::memcmp(&a, &b, sizeof a) == 0 || (std::isnan(a) && std::isnan(b));
            })) {
          report.violate(describe(r) + " differs from the row of its ⊙ coordinate's SU");
        }
      }
    }

    if (all_base) {
      Config config(parents);
      for (std::size_t p = 0; p < parents; ++p) config[p] = cpt.parent_domain(p)[idx[p]].my();
      std::vector<double> by_my(cpt.child_frame().slot_count(), 0.0);
      for (std::size_t c = 0; c < row.size(); ++c) by_my[domain[c].my().bits] += row[c];
      for (Subset s : nonempty_subsets(cpt.child_frame())) {
        double k = cpt.source().at(config, s);
        if (!(std::abs(by_my[s.bits] - k) <= kRowSumTolerance)) {
          std::ostringstream msg;
          msg << describe(r) << ": MY-class of " << format_subset(s, cpt.child_frame()) << " sums to "
              << by_my[s.bits] << ", K is " << k;
          report.violate(msg.str());
        }
      }
    }

    if (!at_coords.empty()) {
      // Mean over every choice of x or SU(x) on the ⊗ coordinates must equal
      // the row with those coordinates replaced by MY(x).
      auto my_idx = idx;
      for (std::size_t p : at_coords) {
        my_idx[p] = cpt.parent_value_index(p, VExpr::base(cpt.parent_domain(p)[idx[p]].my()));
      }
      auto target = cpt.row(cpt.row_index(my_idx));
      std::vector<double> mean(row.size(), 0.0);
      const std::size_t choices = std::size_t{1} << at_coords.size();
      for (std::size_t choice = 0; choice < choices; ++choice) {
        auto sub = idx;
        for (std::size_t j = 0; j < at_coords.size(); ++j) {
          if (choice >> j & 1u) {
            std::size_t p = at_coords[j];
            sub[p] = cpt.parent_value_index(p, *cpt.parent_domain(p)[idx[p]].su());
          }
        }
        auto src = cpt.row(cpt.row_index(sub));
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += src[c];
      }
      for (std::size_t c = 0; c < mean.size(); ++c) {
        mean[c] /= static_cast<double>(choices);
        if (!(std::abs(mean[c] - target[c]) <= kRowSumTolerance)) {
          std::ostringstream msg;
          msg << describe(r) << ": ⊗ average for " << cpt.format_child(c) << " is " << mean[c]
              << ", MY row has " << target[c];
          report.violate(msg.str());
          break;
        }
      }
    }
  }
  return report;
}

void write_cpt_csv(const ExtCPT& cpt, std::ostream& os) {
  const std::size_t parents = cpt.parent_frames().size();
  for (const auto& f : cpt.parent_frames()) os << csv_cell(f.variable()) << ',';
  os << csv_cell(cpt.child_frame().variable()) << ",p\n";
  for (std::size_t r = 0; r < cpt.row_count(); ++r) {
    auto idx = cpt.row_values(r);
    std::string prefix;
    for (std::size_t p = 0; p < parents; ++p) {
      prefix += csv_cell(format_vexpr(cpt.parent_domain(p)[idx[p]], cpt.parent_frames()[p]));
      prefix += ',';
    }
    for (std::size_t c = 0; c < cpt.column_count(); ++c) {
      os << prefix << csv_cell(cpt.format_child(c)) << ',' << format_value(cpt.at(r, c)) << '\n';
    }
  }
}

}  // namespace dsbn
