// dsbn: command-line driver for belief-network sampling.
//
// Exit codes: 0 success, 1 parse or I/O error, 2 infeasible model (negative
// K or P), 3 validation failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dsbn/cpt.hpp"
#include "dsbn/error.hpp"
#include "dsbn/fusion.hpp"
#include "dsbn/graph.hpp"
#include "dsbn/sampler.hpp"
#include "dsbn/verify.hpp"

namespace {

enum Exit : int { kOk = 0, kInputError = 1, kInfeasible = 2, kInvalid = 3 };

struct Options {
  std::string input;
  std::string output;
  std::string to = "k";
  std::string node;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double linf = 0.005;
  unsigned threads = 0;
  bool extended = false;
};

// Writes to the -o path, or stdout when none was given.
template <typename Fn>
void emit(const Options& opt, Fn&& write) {
  if (opt.output.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(opt.output, std::ios::binary | std::ios::trunc);
  if (!out) throw dsbn::Error("cannot write '" + opt.output + "'");
  write(out);
  out.flush();
  if (!out) throw dsbn::Error("error writing '" + opt.output + "'");
}

int run_validate(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  dsbn::ValidationReport report = dsbn::validate_structure(net);
  for (std::size_t node = 0; node < net.size(); ++node) {
    const auto& table = net.table(node);
    if (const auto* m = std::get_if<dsbn::CondMassTable>(&table)) report.merge(dsbn::validate_tables(*m));
    report.merge(dsbn::validate_tables(net.k_table(node)));
  }
  std::cerr << report;
  std::cout << net.name() << ": " << net.size() << " variables, " << net.edges().size() << " edges, "
            << report.violation_count() << " violations, " << report.warning_count() << " warnings\n";
  return report.ok() ? kOk : kInvalid;
}

int run_transform(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  dsbn::Network out(net.name());
  for (const auto& f : net.frames()) out.add_variable(f);
  for (auto [from, to] : net.edges()) out.add_edge(from, to);
  for (std::size_t node = 0; node < net.size(); ++node) {
    if (opt.to == "k") {
      out.set_table(node, net.k_table(node));
    } else {
      out.set_table(node, net.mass_table(node));
    }
  }
  emit(opt, [&](std::ostream& os) { os << dsbn::format_network(out); });
  return kOk;
}

int run_joint(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  const auto result = dsbn::network_joint(net);
  emit(opt, [&](std::ostream& os) { dsbn::write_joint_csv(result.joint, os); });
  std::cerr << result.joint.focal_count() << " focal elements, total "
            << dsbn::format_value(result.joint.focal_total()) << ", empty-intersection mass "
            << dsbn::format_value(result.joint.empty_mass()) << '\n';
  if (!result.negatives.empty()) {
    std::cerr << result.negatives.size() << " negative entries (not a proper belief function)\n";
  }
  return kOk;
}

int run_cpt(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  const auto cpts = dsbn::build_network_cpts(net);
  std::optional<std::size_t> only;
  if (!opt.node.empty()) only = net.index_of(opt.node);
  emit(opt, [&](std::ostream& os) {
    for (std::size_t node = 0; node < net.size(); ++node) {
      if (only && *only != node) continue;
      if (!only) {
        if (node) os << '\n';
        os << "# " << net.frame(node).variable() << " (" << net.successors(node).size()
           << " successors)\n";
      }
      dsbn::write_cpt_csv(cpts[node], os);
    }
  });
  return kOk;
}

int run_sample(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  const auto cpts = dsbn::build_network_cpts(net);
  const auto sample = dsbn::generate(net, cpts, opt.count, {opt.seed, opt.threads});
  emit(opt, [&](std::ostream& os) { dsbn::write_csv(sample, os); });
  return kOk;
}

int run_verify(const Options& opt) {
  const auto net = dsbn::load_network(opt.input);
  const auto cpts = dsbn::build_network_cpts(net);
  const auto sample = dsbn::generate(net, cpts, opt.count, {opt.seed, opt.threads});
  const auto exact = opt.extended ? dsbn::exact_extended_joint(net, cpts)
                                  : dsbn::exact_collapsed_joint(net, cpts);
  const auto report = dsbn::compare_empirical(sample, exact, opt.linf);
  dsbn::print_report(report, exact, cpts, std::cout);
  return report.pass ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample generation from conditional belief functions"};
  app.require_subcommand(1);
  Options opt;

  auto* validate = app.add_subcommand("validate", "Check structure and tables");
  validate->add_option("network", opt.input)->required()->check(CLI::ExistingFile);

  auto* transform = app.add_subcommand("transform", "Rewrite every table as masses or K values");
  transform->add_option("network", opt.input)->required()->check(CLI::ExistingFile);
  transform->add_option("--to", opt.to, "Target kind")->check(CLI::IsMember({"m", "k"}));
  transform->add_option("-o,--output", opt.output);

  auto* joint = app.add_subcommand("joint", "Exact joint mass by conjunctive combination (CSV)");
  joint->add_option("network", opt.input)->required()->check(CLI::ExistingFile);
  joint->add_option("-o,--output", opt.output);

  auto* cpt = app.add_subcommand("cpt", "Dump extended conditional probability tables (CSV)");
  cpt->add_option("network", opt.input)->required()->check(CLI::ExistingFile);
  cpt->add_option("-o,--output", opt.output);
  cpt->add_option("--node", opt.node, "Dump only this variable, as a single CSV");

  auto* sample = app.add_subcommand("sample", "Generate a sample (CSV)");
  sample->add_option("network", opt.input)->required()->check(CLI::ExistingFile);
  sample->add_option("-n", opt.count, "Number of records")->required();
  sample->add_option("--seed", opt.seed);
  sample->add_option("-o,--output", opt.output);
  sample->add_option("--threads", opt.threads, "0 = hardware concurrency");

  auto* verify = app.add_subcommand("verify", "Compare a generated sample with the exact distribution");
  verify->add_option("network", opt.input)->required()->check(CLI::ExistingFile);
  verify->add_option("-n", opt.count, "Number of records")->required()->check(CLI::PositiveNumber);
  verify->add_option("--seed", opt.seed);
  verify->add_option("--linf", opt.linf, "Pass threshold on the L-infinity distance");
  verify->add_option("--threads", opt.threads);
  verify->add_flag("--extended", opt.extended, "Compare extended values instead of collapsed subsets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (validate->parsed()) return run_validate(opt);
    if (transform->parsed()) return run_transform(opt);
    if (joint->parsed()) return run_joint(opt);
    if (cpt->parsed()) return run_cpt(opt);
    if (sample->parsed()) return run_sample(opt);
    if (verify->parsed()) return run_verify(opt);
  } catch (const dsbn::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const dsbn::StructureError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
