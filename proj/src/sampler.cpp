#include "dsbn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "dsbn/error.hpp"
#include "dsbn/simd/kernels.hpp"

namespace dsbn {

std::vector<ExtCPT> build_network_cpts(const Network& net, NegativePolicy policy) {
  auto report = validate_structure(net);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "network violates the sampling restrictions:\n" << report;
    throw StructureError(msg.str());
  }
  std::vector<ExtCPT> out;
  out.reserve(net.size());
  for (std::size_t node = 0; node < net.size(); ++node) {
    out.push_back(build_ext_cpt(net.k_table(node), net.successors(node).size(), policy));
  }
  return out;
}

namespace {

// Per-node lookup data shared read-only by all sampling threads.
struct NodePlan {
  std::size_t node;
  std::vector<std::size_t> parents;                  // table order
  std::vector<std::size_t> strides;                  // row stride per parent
  std::vector<std::vector<std::size_t>> translate;   // parent ext index -> parent-domain index
  std::vector<double> cdf;                           // row-major cumulative sums
  std::size_t columns;
};

std::vector<NodePlan> make_plan(const Network& net, const std::vector<ExtCPT>& cpts,
                                const std::vector<std::size_t>& order) {
  std::vector<NodePlan> plan;
  for (std::size_t node : order) {
    const ExtCPT& cpt = cpts[node];
    NodePlan p{node, net.table_parents(node), {}, {}, {}, cpt.column_count()};
    if (p.parents.size() != cpt.parent_frames().size()) {
      throw StructureError("extended table for '" + net.frame(node).variable() + "' has the wrong parents");
    }
    p.strides.assign(p.parents.size(), 1);
    for (std::size_t i = p.parents.size(); i-- > 1;) {
      p.strides[i - 1] = p.strides[i] * cpt.parent_domain(i).size();
    }
    for (std::size_t i = 0; i < p.parents.size(); ++i) {
      const std::size_t parent = p.parents[i];
      const std::size_t h = edge_index(net, parent, node);
      const auto& parent_domain = cpts[parent].child_domain();
      std::vector<std::size_t> t(parent_domain.size());
      for (std::size_t e = 0; e < parent_domain.size(); ++e) {
        t[e] = cpt.parent_value_index(i, parent_domain[e].component(h));
      }
      p.translate.push_back(std::move(t));
    }
    p.cdf.resize(cpt.row_count() * p.columns);
    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      if (!cpt.row_filled(r)) {
        throw InfeasibleError("extended table for '" + net.frame(node).variable() + "' is incomplete");
      }
      double acc = 0.0;
      auto row = cpt.row(r);
      for (std::size_t c = 0; c < p.columns; ++c) {
        if (!(row[c] >= 0.0)) {
          std::ostringstream msg;
          msg << "'" << net.frame(node).variable() << "': P(" << cpt.format_child(c) << "|"
              << cpt.format_row(r) << ") = " << row[c] << "; refusing to sample";
          throw InfeasibleError(msg.str());
        }
        acc += row[c];
        p.cdf[r * p.columns + c] = acc;
      }
    }
    plan.push_back(std::move(p));
  }
  return plan;
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void draw_records(const std::vector<NodePlan>& plan, std::uint64_t seed, std::size_t begin,
                  std::size_t end, std::vector<SampleRecord>& records) {
  const auto& kernels = simd::active();
  for (std::size_t r = begin; r < end; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(std::uint64_t{r} >> 32)};
    std::mt19937_64 gen(seq);
    auto& rec = records[r];
    for (const NodePlan& p : plan) {
      std::size_t row = 0;
      for (std::size_t i = 0; i < p.parents.size(); ++i) {
        row += p.translate[i][rec.extended[p.parents[i]]] * p.strides[i];
      }
      const double* cdf = p.cdf.data() + row * p.columns;
      const double t = uniform01(gen) * cdf[p.columns - 1];
      std::size_t c = kernels.count_at_most(cdf, p.columns, t);
      if (c == p.columns) {
        // t rounded up to the row total; take the last value with mass.
        c = p.columns - 1;
        while (c > 0 && cdf[c] == cdf[c - 1]) --c;
      }
      rec.extended[p.node] = static_cast<std::uint32_t>(c);
    }
  }
}

}  // namespace

Sample generate(const Network& net, const std::vector<ExtCPT>& cpts, std::size_t count,
                const SamplerOptions& options) {
  if (cpts.size() != net.size()) throw StructureError("one extended table per node is required");
  const auto order = topological_order(net);
  const auto plan = make_plan(net, cpts, order);

  Sample sample;
  sample.frames = net.frames();
  for (const auto& cpt : cpts) sample.domains.push_back(&cpt.child_domain());
  sample.records.assign(count, SampleRecord{std::vector<std::uint32_t>(net.size()), {}});

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    draw_records(plan, options.seed, 0, count, sample.records);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = std::min(count, t * chunk);
      std::size_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, begin, end] { draw_records(plan, options.seed, begin, end, sample.records); });
    }
  }

  for (std::size_t r = 0; r < count; ++r) sample.records[r].collapsed = collapse(sample, r);
  return sample;
}

std::vector<Subset> collapse(const Sample& sample, std::size_t record) {
  std::vector<Subset> out(sample.frames.size());
  for (std::size_t node = 0; node < out.size(); ++node) out[node] = sample.extended_value(record, node).my();
  return out;
}

void write_csv(const Sample& sample, std::ostream& os) {
  for (std::size_t i = 0; i < sample.frames.size(); ++i) {
    if (i) os << ',';
    os << csv_cell(sample.frames[i].variable());
  }
  os << '\n';
  std::string line;
  for (const auto& rec : sample.records) {
    line.clear();
    for (std::size_t i = 0; i < rec.collapsed.size(); ++i) {
      if (i) line += ',';
      line += csv_cell(format_subset(rec.collapsed[i], sample.frames[i]));
    }
    line += '\n';
    os << line;
  }
}

void write_csv(const Sample& sample, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(sample, out);
  out.flush();
  if (!out) throw Error("error writing '" + path.string() + "'");
}

}  // namespace dsbn
