// hlskit: Hausdorff leaf spaces of discretized codimension-one foliations,
// quotient metric constructions, and Gromov-Hausdorff estimates, wired to
// JSON/DOT/CSV files for reproducible runs.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hlskit/convergence.hpp"
#include "hlskit/foliated_complex.hpp"
#include "hlskit/gh_distance.hpp"
#include "hlskit/metric_graph.hpp"
#include "hlskit/metric_space.hpp"
#include "hlskit/quotient.hpp"
#include "hlskit/serialization.hpp"

namespace {

using hlskit::io::json;

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kStructuralError = 2;

struct Options {
  // empty format means the subcommand default: json everywhere except the
  // csv-reporting converge/audit commands
  std::string input, input2, output, format;
  std::string pairs, subset, generators, warp_file;
  std::string mode = "strict";
  std::string glue_mode = "tangential";
  std::string family = "const";
  std::string leaves;
  std::string ns = "1,2,4,8,16";
  std::string eps_grid = "0.5,0.25,0.125";
  double tol = -1;
  double step = 0;
  std::uint64_t seed = 0;
  std::size_t cap = 16;
  std::size_t net_size = 0;
  std::size_t budget = 64;
  std::size_t resolution = 16;
  std::size_t vertex_cap = 1200;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty())
    std::cout << text;
  else
    hlskit::io::save_text_file(opt.output, text);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> split_ints(const std::string& csv) {
  std::vector<int> out;
  for (const auto& item : split_list(csv)) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> split_doubles(const std::string& csv) {
  std::vector<double> out;
  for (const auto& item : split_list(csv)) out.push_back(std::stod(item));
  return out;
}

hlskit::FiniteMetricSpace load_space(const std::string& path) {
  json j = hlskit::io::load_json_file(path);
  switch (hlskit::io::detect_payload(j)) {
    case hlskit::io::PayloadKind::MetricSpace:
      return hlskit::io::space_from_json(j);
    case hlskit::io::PayloadKind::Hls:
      return hlskit::io::hls_from_json(j).space;
    case hlskit::io::PayloadKind::Quotient:
      return hlskit::io::space_from_json(j.at("space"));
    case hlskit::io::PayloadKind::WeightedGraph:
      return hlskit::geodesic_metric(hlskit::io::weighted_graph_from_json(j));
    default:
      throw hlskit::StructuralError("'" + path +
                                    "' does not contain a metric space");
  }
}

int run_validate(const Options& opt) {
  json j = hlskit::io::load_json_file(opt.input);
  switch (hlskit::io::detect_payload(j)) {
    case hlskit::io::PayloadKind::Complex: {
      auto report = hlskit::validate_complex(hlskit::io::complex_from_json(j));
      emit(opt, hlskit::io::dump(hlskit::io::to_json(report)));
      if (!report.ok()) {
        for (const auto& issue : report.issues)
          std::cerr << "invalid: " << issue << "\n";
        return kValidationFailure;
      }
      return kOk;
    }
    case hlskit::io::PayloadKind::Graph:
      hlskit::require_connected(hlskit::io::graph_from_json(j));
      emit(opt, "{\n  \"ok\": true\n}\n");
      return kOk;
    default: {
      auto space = load_space(opt.input);
      auto mode = opt.mode == "pseudo" ? hlskit::MetricMode::Pseudo
                                       : hlskit::MetricMode::Strict;
      if (opt.mode != "pseudo" && opt.mode != "strict")
        throw hlskit::StructuralError("unknown mode '" + opt.mode + "'");
      auto report = hlskit::validate_metric(space, mode, opt.tol);
      emit(opt, hlskit::io::dump(hlskit::io::to_json(report, space)));
      if (!report.ok()) {
        for (const auto& v : report.violations)
          std::cerr << "invalid: " << v.describe(space) << "\n";
        return kValidationFailure;
      }
      return kOk;
    }
  }
}

int run_hls(const Options& opt) {
  auto complex =
      hlskit::io::complex_from_json(hlskit::io::load_json_file(opt.input));
  if (opt.format == "dot") {
    emit(opt, hlskit::io::to_dot(complex));
    return kOk;
  }
  auto h = hlskit::hls(complex, opt.tol);
  emit(opt, hlskit::io::dump(hlskit::io::to_json(h)));
  return kOk;
}

int run_warp(const Options& opt) {
  auto complex =
      hlskit::io::complex_from_json(hlskit::io::load_json_file(opt.input));
  if (opt.warp_file.empty())
    throw hlskit::StructuralError("warp needs --warp <factors.json>");
  auto factors =
      hlskit::io::warp_from_json(hlskit::io::load_json_file(opt.warp_file));
  auto warped = hlskit::warp(complex, factors);
  if (opt.format == "dot")
    emit(opt, hlskit::io::to_dot(warped));
  else
    emit(opt, hlskit::io::dump(hlskit::io::to_json(warped)));
  return kOk;
}

int run_glue(const Options& opt) {
  json a = hlskit::io::load_json_file(opt.input);
  json b = hlskit::io::load_json_file(opt.input2);
  auto pairs = opt.pairs.empty()
                   ? std::vector<std::pair<std::string, std::string>>{}
                   : hlskit::io::pairs_from_json(
                         hlskit::io::load_json_file(opt.pairs));
  auto kind_a = hlskit::io::detect_payload(a);
  auto kind_b = hlskit::io::detect_payload(b);
  if (kind_a != kind_b)
    throw hlskit::StructuralError("--input and --input2 hold different kinds");

  switch (kind_a) {
    case hlskit::io::PayloadKind::Complex: {
      hlskit::GlueMode mode;
      if (opt.glue_mode == "tangential")
        mode = hlskit::GlueMode::Tangential;
      else if (opt.glue_mode == "transverse")
        mode = hlskit::GlueMode::Transverse;
      else
        throw hlskit::StructuralError("unknown glue mode '" + opt.glue_mode +
                                      "'");
      auto result = hlskit::glue_complexes(hlskit::io::complex_from_json(a),
                                           hlskit::io::complex_from_json(b),
                                           pairs, mode);
      json out = hlskit::io::to_json(result.complex);
      out["connected"] = result.connected;
      emit(opt, hlskit::io::dump(out));
      return kOk;
    }
    case hlskit::io::PayloadKind::Graph: {
      auto glued = hlskit::glue_graphs(hlskit::io::graph_from_json(a),
                                       hlskit::io::graph_from_json(b), pairs);
      if (opt.format == "dot")
        emit(opt, hlskit::io::to_dot(glued));
      else
        emit(opt, hlskit::io::dump(hlskit::io::to_json(glued)));
      return kOk;
    }
    default: {
      auto result = hlskit::glue(load_space(opt.input), load_space(opt.input2),
                                 pairs, opt.tol);
      emit(opt, hlskit::io::dump(hlskit::io::to_json(result)));
      return kOk;
    }
  }
}

int run_collapse(const Options& opt) {
  auto space = load_space(opt.input);
  auto subset = split_list(opt.subset);
  auto result = hlskit::collapse_subset(space, subset, opt.tol);
  emit(opt, hlskit::io::dump(hlskit::io::to_json(result)));
  return kOk;
}

int run_orbit(const Options& opt) {
  auto space = load_space(opt.input);
  if (opt.generators.empty())
    throw hlskit::StructuralError("orbit needs --generators <file.json>");
  auto generators = hlskit::io::generators_from_json(
      hlskit::io::load_json_file(opt.generators));
  auto result = hlskit::orbit_quotient(space, generators, opt.tol);
  emit(opt, hlskit::io::dump(hlskit::io::to_json(result)));
  return kOk;
}

int run_gh(const Options& opt) {
  auto x = load_space(opt.input);
  auto y = load_space(opt.input2);
  hlskit::GhEstimate estimate;
  if (x.size() * y.size() <= opt.cap) {
    double value = hlskit::gh_exact(x, y, opt.cap);
    estimate.lower = estimate.upper = value;
    estimate.method = "exact";
    std::cout << "exact " << value << "\n";
  } else {
    std::size_t k = opt.net_size > 0
                        ? opt.net_size
                        : std::min({x.size(), y.size(), std::size_t{16}});
    auto net = hlskit::gromov_net_bound(x, y, k, opt.seed);
    auto heur = hlskit::gh_heuristic(x, y, opt.budget, opt.seed);
    estimate = net.upper <= heur.upper ? net : heur;
    estimate.upper = std::min(net.upper, heur.upper);
    estimate.lower = std::max(net.lower, heur.lower);
    std::cout << "estimate lower=" << estimate.lower
              << " upper=" << estimate.upper << " method=" << estimate.method
              << "\n";
  }
  if (!opt.output.empty())
    hlskit::io::save_text_file(
        opt.output, hlskit::io::dump(hlskit::io::to_json(estimate, x, y)));
  return kOk;
}

int run_realize(const Options& opt) {
  auto graph = hlskit::io::graph_from_json(hlskit::io::load_json_file(opt.input));
  auto realized = hlskit::realize_graph(graph, opt.resolution);
  if (opt.format == "dot") {
    emit(opt, hlskit::io::to_dot(realized.complex));
    return kOk;
  }
  json out = hlskit::io::to_json(realized.complex);
  out["leaf_block"] = realized.leaf_block;
  emit(opt, hlskit::io::dump(out));
  return kOk;
}

int run_sample(const Options& opt) {
  auto graph = hlskit::io::graph_from_json(hlskit::io::load_json_file(opt.input));
  if (!(opt.step > 0))
    throw hlskit::StructuralError("sample needs --step <positive>");
  auto space = hlskit::sample_graph(graph, opt.step);
  emit(opt, hlskit::io::dump(hlskit::io::to_json(space)));
  return kOk;
}

int run_measure_check(const Options& opt) {
  auto graph = hlskit::io::graph_from_json(hlskit::io::load_json_file(opt.input));
  auto report = hlskit::measure_ball_check(graph);
  emit(opt, hlskit::io::dump(hlskit::io::to_json(report)));
  if (!report.pass) {
    std::cerr << "measure bounds fail: ratio range [" << report.min_ratio
              << ", " << report.max_ratio << "] vs [" << 1 / report.beta
              << ", " << report.beta << "] (worst centers '"
              << report.worst_low.center << "', '" << report.worst_high.center
              << "')\n";
    return kValidationFailure;
  }
  return kOk;
}

hlskit::WarpSequence make_sequence(const Options& opt) {
  hlskit::WarpSequence seq;
  seq.base =
      hlskit::io::complex_from_json(hlskit::io::load_json_file(opt.input));
  if (opt.family == "const") {
    seq.family.kind = hlskit::WarpFamily::Kind::ConstantInverse;
  } else if (opt.family == "subset") {
    seq.family.kind = hlskit::WarpFamily::Kind::LeafSubsetInverse;
    for (const auto& leaf : split_list(opt.leaves))
      seq.family.leaf_subset.insert(leaf);
    if (seq.family.leaf_subset.empty())
      throw hlskit::StructuralError(
          "family 'subset' needs --leaves <comma list>");
  } else {
    throw hlskit::StructuralError("unknown family '" + opt.family +
                                  "' (use const or subset)");
  }
  return seq;
}

int run_converge(const Options& opt) {
  auto seq = make_sequence(opt);
  hlskit::ConvergenceOptions conv;
  conv.vertex_cap = opt.vertex_cap;
  conv.budget = opt.budget;
  conv.seed = opt.seed;
  auto report = hlskit::run_convergence(seq, split_ints(opt.ns), opt.tol, conv);
  if (opt.format == "json")
    emit(opt, hlskit::io::dump(hlskit::io::to_json(report)));
  else
    emit(opt, hlskit::io::to_csv(report));
  return kOk;
}

int run_audit(const Options& opt) {
  auto seq = make_sequence(opt);
  hlskit::ConvergenceOptions conv;
  conv.vertex_cap = opt.vertex_cap;
  conv.budget = opt.budget;
  conv.seed = opt.seed;
  auto report = hlskit::iff_audit(seq, split_doubles(opt.eps_grid),
                                  split_ints(opt.ns), opt.tol, conv);
  if (opt.format == "json")
    emit(opt, hlskit::io::dump(hlskit::io::to_json(report)));
  else
    emit(opt, hlskit::io::to_csv(report));
  if (report.agreement == hlskit::Agreement::Disagree) {
    std::cerr << "audit: condition and convergence verdict disagree beyond "
                 "the tolerance slack\n";
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hausdorff leaf spaces of discretized foliations"};
  app.require_subcommand(1);
  Options opt;

  auto add_io = [&](CLI::App* cmd, bool needs_second = false) {
    cmd->add_option("--input", opt.input, "input file")->required();
    if (needs_second)
      cmd->add_option("--input2", opt.input2, "second input file")->required();
    cmd->add_option("--output", opt.output, "output path (default: stdout)");
    cmd->add_option("--format", opt.format, "json|dot|csv");
    cmd->add_option("--seed", opt.seed, "seed for randomized search");
    cmd->add_option("--tol", opt.tol, "tolerance override");
  };

  auto* validate = app.add_subcommand("validate", "check metric axioms");
  add_io(validate);
  validate->add_option("--mode", opt.mode, "strict|pseudo");

  auto* hls_cmd = app.add_subcommand("hls", "Hausdorff leaf space of a complex");
  add_io(hls_cmd);

  auto* warp_cmd = app.add_subcommand("warp", "scale tangential lengths");
  add_io(warp_cmd);
  warp_cmd->add_option("--warp", opt.warp_file, "leaf -> factor JSON")->required();

  auto* glue_cmd = app.add_subcommand("glue", "glue complexes, graphs, or spaces");
  add_io(glue_cmd, true);
  glue_cmd->add_option("--pairs", opt.pairs, "identified pairs JSON");
  glue_cmd->add_option("--mode", opt.glue_mode, "tangential|transverse");

  auto* collapse_cmd = app.add_subcommand("collapse", "collapse a subset to a point");
  add_io(collapse_cmd);
  collapse_cmd->add_option("--subset", opt.subset, "comma-separated point ids")
      ->required();

  auto* orbit_cmd = app.add_subcommand("orbit", "orbit quotient of a space");
  add_io(orbit_cmd);
  orbit_cmd->add_option("--generators", opt.generators, "generators JSON")
      ->required();

  auto* gh_cmd = app.add_subcommand("gh", "Gromov-Hausdorff distance");
  add_io(gh_cmd, true);
  gh_cmd->add_option("--cap", opt.cap, "exact enumeration cap on |x|*|y|");
  gh_cmd->add_option("--net-size", opt.net_size, "net size for the bound");
  gh_cmd->add_option("--budget", opt.budget, "heuristic iteration budget");

  auto* realize_cmd = app.add_subcommand("realize", "complex whose HLS matches a graph");
  add_io(realize_cmd);
  realize_cmd->add_option("--resolution", opt.resolution, "discretization resolution");

  auto* sample_cmd = app.add_subcommand("sample", "sample a metric graph");
  add_io(sample_cmd);
  sample_cmd->add_option("--step", opt.step, "subdivision step")->required();

  auto* measure_cmd = app.add_subcommand("measure-check", "ball measure bounds");
  add_io(measure_cmd);

  auto* converge_cmd = app.add_subcommand("converge", "warped sequence vs leaf space");
  add_io(converge_cmd);
  converge_cmd->add_option("--family", opt.family, "const|subset");
  converge_cmd->add_option("--leaves", opt.leaves, "leaf subset (family=subset)");
  converge_cmd->add_option("--ns", opt.ns, "comma-separated indices");
  converge_cmd->add_option("--cap", opt.vertex_cap, "vertex cap before subsampling");
  converge_cmd->add_option("--budget", opt.budget, "heuristic budget per row");

  auto* audit_cmd = app.add_subcommand("audit", "density condition vs convergence");
  add_io(audit_cmd);
  audit_cmd->add_option("--family", opt.family, "const|subset");
  audit_cmd->add_option("--leaves", opt.leaves, "leaf subset (family=subset)");
  audit_cmd->add_option("--ns", opt.ns, "comma-separated indices");
  audit_cmd->add_option("--eps-grid", opt.eps_grid, "comma-separated epsilons");
  audit_cmd->add_option("--cap", opt.vertex_cap, "vertex cap before subsampling");
  audit_cmd->add_option("--budget", opt.budget, "heuristic budget per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return kStructuralError;
  }

  try {
    if (validate->parsed()) return run_validate(opt);
    if (hls_cmd->parsed()) return run_hls(opt);
    if (warp_cmd->parsed()) return run_warp(opt);
    if (glue_cmd->parsed()) return run_glue(opt);
    if (collapse_cmd->parsed()) return run_collapse(opt);
    if (orbit_cmd->parsed()) return run_orbit(opt);
    if (gh_cmd->parsed()) return run_gh(opt);
    if (realize_cmd->parsed()) return run_realize(opt);
    if (sample_cmd->parsed()) return run_sample(opt);
    if (measure_cmd->parsed()) return run_measure_check(opt);
    if (converge_cmd->parsed()) return run_converge(opt);
    if (audit_cmd->parsed()) return run_audit(opt);
  } catch (const hlskit::StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStructuralError;
  } catch (const hlskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStructuralError;
  }
  return kStructuralError;
}
