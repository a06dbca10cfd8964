#include "dsbn/vexpr.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "dsbn/error.hpp"

namespace dsbn {

namespace {

std::strong_ordering compare_subsets(Subset a, Subset b) {
  if (a == b) return std::strong_ordering::equal;
  return canonical_less(a, b) ? std::strong_ordering::less : std::strong_ordering::greater;
}

}  // namespace

VExpr VExpr::base(Subset s) {
  if (s.empty()) throw std::invalid_argument("V-expression over the empty set");
  VExpr v;
  v.masks_.push_back(s);
  return v;
}

VExpr VExpr::compound(Subset s, Op op, const VExpr& v) {
  if (v.masks_.empty() || s.empty() || !v.my().proper_superset_of(s)) {
    throw std::invalid_argument("compound needs a proper nonempty subset of MY(V)");
  }
  VExpr out;
  out.masks_.reserve(v.masks_.size() + 1);
  out.masks_.push_back(s);
  out.masks_.insert(out.masks_.end(), v.masks_.begin(), v.masks_.end());
  out.ops_.reserve(v.ops_.size() + 1);
  out.ops_.push_back(op);
  out.ops_.insert(out.ops_.end(), v.ops_.begin(), v.ops_.end());
  return out;
}

std::optional<VExpr> VExpr::su() const {
  if (is_base()) return std::nullopt;
  VExpr out;
  out.masks_.assign(masks_.begin() + 1, masks_.end());
  out.ops_.assign(ops_.begin() + 1, ops_.end());
  return out;
}

std::strong_ordering operator<=>(const VExpr& a, const VExpr& b) {
  if (auto c = a.depth() <=> b.depth(); c != 0) return c;
  for (std::size_t i = 0; i < a.ops_.size(); ++i) {
    if (auto c = a.ops_[i] <=> b.ops_[i]; c != 0) return c;
  }
  for (std::size_t i = a.masks_.size(); i-- > 0;) {
    if (auto c = compare_subsets(a.masks_[i], b.masks_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

VnExpr VnExpr::plain(Subset s, std::size_t n) {
  if (s.empty()) throw std::invalid_argument("V(n)-expression over the empty set");
  VnExpr x;
  x.my_ = s;
  x.n_ = n;
  return x;
}

VnExpr VnExpr::family(Subset s, const VExpr& v, std::uint32_t pattern, std::size_t n) {
  if (n == 0 || n > 31) throw std::invalid_argument("family vectors need 1 <= n <= 31");
  if (pattern == 0 || pattern >= (1u << n)) {
    throw std::invalid_argument("family pattern must be nonzero and fit in n bits");
  }
  if (s.empty() || !v.my().proper_superset_of(s)) {
    throw std::invalid_argument("family needs a proper nonempty subset of MY(V)");
  }
  VnExpr x;
  x.my_ = s;
  x.su_ = v;
  x.pattern_ = pattern;
  x.n_ = n;
  return x;
}

VExpr VnExpr::component(std::size_t h) const {
  if (h < 1 || h > n_) {
    throw std::out_of_range("component " + std::to_string(h) + " of a " + std::to_string(n_) +
                            "-vector");
  }
  if (is_plain()) return VExpr::base(my_);
  Op op = (pattern_ >> (h - 1)) & 1u ? Op::at : Op::dot;
  return VExpr::compound(my_, op, *su_);
}

VExpr component(const VnExpr& x, std::size_t h) { return x.component(h); }

std::strong_ordering operator<=>(const VnExpr& a, const VnExpr& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  if (a.is_plain() != b.is_plain()) {
    return a.is_plain() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (!a.is_plain()) {
    if (auto c = *a.su_ <=> *b.su_; c != 0) return c;
  }
  if (auto c = compare_subsets(a.my_, b.my_); c != 0) return c;
  return a.pattern_ <=> b.pattern_;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<Subset> proper_nonempty_subsets(Subset of) {
  std::vector<Subset> out;
  for (std::uint32_t m = (of.bits - 1) & of.bits; m != 0; m = (m - 1) & of.bits) {
    out.push_back(Subset{m});
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<VExpr> build_vexprs(std::size_t frame_size) {
  std::vector<VExpr> out;
  for (std::uint32_t m = 1; m < (1u << frame_size); ++m) out.push_back(VExpr::base(Subset{m}));
  // Every compound strictly shrinks MY, so a single forward pass over the
  // growing list reaches the closure.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const VExpr v = out[i];
    if (v.my().size() < 2) continue;
    for (Subset s : proper_nonempty_subsets(v.my())) {
      out.push_back(VExpr::compound(s, Op::dot, v));
      out.push_back(VExpr::compound(s, Op::at, v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VnExpr> build_vn(std::size_t frame_size, std::size_t n, const std::vector<VExpr>& vexprs) {
  std::vector<VnExpr> out;
  std::vector<Subset> subsets;
  for (std::uint32_t m = 1; m < (1u << frame_size); ++m) subsets.push_back(Subset{m});
  std::sort(subsets.begin(), subsets.end(), canonical_less);
  for (Subset s : subsets) out.push_back(VnExpr::plain(s, n));
  if (n == 0) return out;
  for (const VExpr& v : vexprs) {
    if (v.my().size() < 2) continue;
    for (Subset s : proper_nonempty_subsets(v.my())) {
      for (std::uint32_t pattern = 1; pattern < (1u << n); ++pattern) {
        out.push_back(VnExpr::family(s, v, pattern, n));
      }
    }
  }
  return out;
}

void check_frame(const Frame& frame) {
  if (frame.size() > kMaxExtendedFrame) {
    throw SizeError("extended domains support at most " + std::to_string(kMaxExtendedFrame) +
                    " values; '" + frame.variable() + "' has " + std::to_string(frame.size()));
  }
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<VExpr>& enumerate_vexprs(const Frame& frame) {
  check_frame(frame);
  static std::map<std::size_t, std::unique_ptr<const std::vector<VExpr>>> cache;
  std::lock_guard lock(cache_mutex());
  auto& slot = cache[frame.size()];
  if (!slot) slot = std::make_unique<const std::vector<VExpr>>(build_vexprs(frame.size()));
  return *slot;
}

const std::vector<VnExpr>& child_domain(const Frame& frame, std::size_t n) {
  check_frame(frame);
  if (n > kMaxSuccessors) {
    throw SizeError("at most " + std::to_string(kMaxSuccessors) + " successors are supported; '" +
                    frame.variable() + "' has " + std::to_string(n));
  }
  const auto& vexprs = enumerate_vexprs(frame);
  static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<const std::vector<VnExpr>>> cache;
  std::lock_guard lock(cache_mutex());
  auto& slot = cache[{frame.size(), n}];
  if (!slot) slot = std::make_unique<const std::vector<VnExpr>>(build_vn(frame.size(), n, vexprs));
  return *slot;
}

const std::vector<VnExpr>& enumerate_vn(const Frame& frame, std::size_t n) {
  if (n == 0) throw SizeError("enumerate_vn needs n >= 1");
  return child_domain(frame, n);
}

// ---------------------------------------------------------------------------
// Text

std::string format_vexpr(const VExpr& v, const Frame& frame) {
  std::string out = format_subset(v.my(), frame);
  if (auto su = v.su()) {
    out += v.op() == Op::dot ? "o" : "@";
    out += format_vexpr(*su, frame);
  }
  return out;
}

std::string format_vn(const VnExpr& x, const Frame& frame) {
  if (x.n() == 0) return format_subset(x.my(), frame);
  if (x.n() == 1) return format_vexpr(x.component(1), frame);
  std::string out = "[";
  for (std::size_t h = 1; h <= x.n(); ++h) {
    if (h > 1) out += ';';
    out += format_vexpr(x.component(h), frame);
  }
  out += ']';
  return out;
}

VExpr parse_vexpr(std::string_view text, const Frame& frame) {
  // Left operands are always plain subsets, so the first operator outside
  // braces splits MY from SU.
  std::size_t close = text.find('}');
  if (close == std::string_view::npos) throw ParseError("expected a V-expression, got '" + std::string(text) + "'");
  Subset my = parse_subset_label(text.substr(0, close + 1), frame);
  std::string_view rest = text.substr(close + 1);
  if (rest.empty()) return VExpr::base(my);
  Op op;
  if (rest.front() == 'o') {
    op = Op::dot;
  } else if (rest.front() == '@') {
    op = Op::at;
  } else {
    throw ParseError("expected 'o' or '@' after subset in '" + std::string(text) + "'");
  }
  VExpr su = parse_vexpr(rest.substr(1), frame);
  if (!su.my().proper_superset_of(my)) {
    throw ParseError("'" + std::string(text) + "': left subset must be a proper subset of MY of the right side");
  }
  return VExpr::compound(my, op, su);
}

VnExpr parse_vn(std::string_view text, const Frame& frame, std::size_t n) {
  std::vector<VExpr> parts;
  if (n <= 1) {
    if (n == 0) return VnExpr::plain(parse_subset_label(text, frame), 0);
    parts.push_back(parse_vexpr(text, frame));
  } else {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
      throw ParseError("expected '[c1;...;cn]', got '" + std::string(text) + "'");
    }
    std::string_view body = text.substr(1, text.size() - 2);
    while (true) {
      auto semi = body.find(';');
      parts.push_back(parse_vexpr(body.substr(0, semi), frame));
      if (semi == std::string_view::npos) break;
      body.remove_prefix(semi + 1);
    }
    if (parts.size() != n) {
      throw ParseError("vector has " + std::to_string(parts.size()) + " components, expected " +
                       std::to_string(n));
    }
  }
  const VExpr& first = parts.front();
  if (first.is_base()) {
    for (const auto& p : parts) {
      if (p != first) throw ParseError("plain vectors repeat one base subset");
    }
    return VnExpr::plain(first.my(), n);
  }
  std::uint32_t pattern = 0;
  for (std::size_t h = 0; h < parts.size(); ++h) {
    const auto& p = parts[h];
    if (p.is_base() || p.my() != first.my() || p.su() != first.su()) {
      throw ParseError("family vector components must share MY and SU");
    }
    if (p.op() == Op::at) pattern |= 1u << h;
  }
  if (pattern == 0) throw ParseError("all-o vectors are not V(n)-expressions");
  return VnExpr::family(first.my(), *first.su(), pattern, n);
}

}  // namespace dsbn
