#include "dsbn/fusion.hpp"

#include <algorithm>
#include <ostream>

#include "dsbn/error.hpp"
#include "dsbn/graph.hpp"
#include "dsbn/simd/kernels.hpp"

namespace dsbn {

namespace {

constexpr std::uint64_t kUnusedLanes = ~std::uint64_t{0};
constexpr double kMaxFocalPairs = 1e7;
constexpr double kNegativeTolerance = 1e-12;

}  // namespace

JointMass::JointMass(std::vector<Frame> scope) : scope_(std::move(scope)) {
  if (scope_.size() > kMaxScope) {
    throw SizeError("joint scope of " + std::to_string(scope_.size()) + " variables exceeds " +
                    std::to_string(kMaxScope));
  }
}

std::vector<std::string> JointMass::variables() const {
  std::vector<std::string> out;
  for (const auto& f : scope_) out.push_back(f.variable());
  return out;
}

std::uint64_t JointMass::pack(std::span<const Subset> focal) const {
  if (focal.size() != scope_.size()) throw StructureError("focal does not match joint scope");
  std::uint64_t key = kUnusedLanes;
  for (std::size_t i = 0; i < focal.size(); ++i) {
    key &= ~(std::uint64_t{0xff} << (8 * i));
    key |= std::uint64_t{focal[i].bits} << (8 * i);
  }
  return key;
}

ProductFocal JointMass::unpack(std::uint64_t key) const {
  ProductFocal out(scope_.size());
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    out[i].bits = static_cast<std::uint32_t>((key >> (8 * i)) & 0xffu);
  }
  return out;
}

void JointMass::add(std::span<const Subset> focal, double mass) {
  for (Subset s : focal) {
    if (s.empty()) {
      empty_mass_ += mass;
      return;
    }
  }
  entries_[pack(focal)] += mass;
}

double JointMass::at(std::span<const Subset> focal) const {
  auto it = entries_.find(pack(focal));
  return it == entries_.end() ? 0.0 : it->second;
}

double JointMass::focal_total() const {
  double sum = 0.0;
  for (const auto& [key, mass] : entries_) sum += mass;
  return sum;
}

std::vector<std::pair<ProductFocal, double>> JointMass::entries() const {
  std::vector<std::pair<ProductFocal, double>> out;
  out.reserve(entries_.size());
  for (const auto& [key, mass] : entries_) out.emplace_back(unpack(key), mass);
  return out;
}

JointMass cylindrical_extension(const CondMassTable& table, const std::vector<Frame>& scope) {
  const auto& shape = table.shape();
  auto position = [&](const Frame& f) {
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (scope[i].variable() == f.variable()) {
        if (!(scope[i] == f)) {
          throw StructureError("variable '" + f.variable() + "' has different values in scope");
        }
        return i;
      }
    }
    throw StructureError("scope is missing table variable '" + f.variable() + "'");
  };
  const std::size_t child_pos = position(shape.child());
  std::vector<std::size_t> parent_pos;
  for (const auto& f : shape.parents()) parent_pos.push_back(position(f));

  JointMass out(scope);
  ProductFocal focal(scope.size());
  for (const auto& config : shape.configurations()) {
    for (Subset child : shape.child_subsets()) {
      for (std::size_t i = 0; i < scope.size(); ++i) focal[i].bits = scope[i].full_mask();
      for (std::size_t p = 0; p < config.size(); ++p) focal[parent_pos[p]] = config[p];
      focal[child_pos] = child;
      out.add(focal, table.at(config, child));
    }
  }
  return out;
}

JointMass conjunctive_combine(const JointMass& p, const JointMass& q) {
  if (!(p.scope_ == q.scope_)) throw StructureError("conjunctive_combine: scope mismatch");
  const double pairs = static_cast<double>(p.entries_.size()) * static_cast<double>(q.entries_.size());
  if (pairs >= kMaxFocalPairs) {
    throw SizeError("conjunctive_combine: " + std::to_string(static_cast<long long>(pairs)) +
                    " focal pairs exceeds the 1e7 guard");
  }

  std::vector<std::uint64_t> q_keys;
  std::vector<double> q_mass;
  q_keys.reserve(q.entries_.size());
  q_mass.reserve(q.entries_.size());
  for (const auto& [k, m] : q.entries_) {
    q_keys.push_back(k);
    q_mass.push_back(m);
  }
  std::vector<std::uint64_t> keys(q_keys.size());
  std::vector<double> mass(q_keys.size());
  std::vector<std::uint8_t> empty(q_keys.size());

  JointMass out(p.scope_);
  out.empty_mass_ = p.empty_mass_ * (q.focal_total() + q.empty_mass_) + q.empty_mass_ * p.focal_total();
  const auto& kernels = simd::active();
  // Fixed iteration order over p then q keeps every per-focal sum bit-stable.
  for (const auto& [pk, pm] : p.entries_) {
    kernels.conjoin_row(pk, pm, q_keys.data(), q_mass.data(), q_keys.size(), keys.data(),
                        mass.data(), empty.data());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (empty[i]) {
        out.empty_mass_ += mass[i];
      } else {
        out.entries_[keys[i]] += mass[i];
      }
    }
  }
  return out;
}

NetworkJoint network_joint(const Network& net) {
  const auto order = topological_order(net);
  std::vector<Frame> scope = net.frames();
  std::optional<JointMass> joint;
  for (std::size_t node : order) {
    JointMass ext = cylindrical_extension(net.mass_table(node), scope);
    joint = joint ? conjunctive_combine(*joint, ext) : std::move(ext);
  }
  if (!joint) joint.emplace(scope);

  NetworkJoint out{std::move(*joint), {}};
  for (auto& [focal, mass] : out.joint.entries()) {
    if (mass < -kNegativeTolerance) out.negatives.push_back({std::move(focal), mass});
  }
  return out;
}

void write_joint_csv(const JointMass& joint, std::ostream& os) {
  const auto& scope = joint.scope();
  std::vector<std::pair<std::vector<std::string>, double>> rows;
  for (const auto& [focal, mass] : joint.entries()) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < scope.size(); ++i) cells.push_back(format_subset(focal[i], scope[i]));
    rows.emplace_back(std::move(cells), mass);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& f : scope) os << csv_cell(f.variable()) << ',';
  os << "mass\n";
  for (const auto& [cells, mass] : rows) {
    for (const auto& c : cells) os << csv_cell(c) << ',';
    os << format_value(mass) << '\n';
  }
}

}  // namespace dsbn
