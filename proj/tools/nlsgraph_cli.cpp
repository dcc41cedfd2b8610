// nlsgraph: ground-state and least-action experiments for NLS on metric graphs.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlsgraph/experiments.hpp"
#include "nlsgraph/graph_spec.hpp"

using namespace nlsgraph;

namespace {

struct Common {
  RunConfig cfg;
  double trunc = 0.0;
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--lambda", c.cfg.lambda, "frequency lambda > 0")->check(CLI::PositiveNumber);
  app->add_option("--p", c.cfg.p, "nonlinearity exponent in (2, 6)");
  app->add_option("--h", c.cfg.h, "target mesh step")->check(CLI::PositiveNumber);
  app->add_option("--trunc", c.trunc, "half-line truncation (default 10/sqrt(lambda))")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", c.cfg.seed, "seed for restart perturbations");
  app->add_option("--jobs", c.cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("-o,--output", c.output, "write records here instead of stdout");
}

MetricGraph load_graph(const std::string& arg) {
  if (is_zoo_expression(arg)) return build_zoo(arg);
  if (std::filesystem::exists(arg)) return load_graph_spec(arg);
  throw std::invalid_argument("'" + arg + "' is neither a graph file nor a zoo expression");
}

void check_graph(const MetricGraph& g, bool allow_compact) {
  auto violations = validate_class_g(g, !allow_compact);
  if (violations.empty()) return;
  std::string msg = "graph " + g.name() + " is not admissible:";
  for (const auto& v : violations) msg += "\n  " + v.detail;
  throw std::invalid_argument(msg);
}

template <typename Emit>
void with_output(const Common& c, Emit emit) {
  if (c.output.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(c.output);
  if (!os) throw std::runtime_error("cannot write " + c.output);
  emit(os);
}

void emit_records(const Common& c, const std::vector<ExperimentRecord>& recs) {
  with_output(c, [&](std::ostream& os) {
    if (c.format == "json")
      os << to_json(recs).dump(2) << "\n";
    else
      write_csv(os, recs);
  });
}

ExperimentRecord failure_row(const std::string& graph, const RunConfig& cfg, Tag tag, const std::exception& e) {
  return {graph, cfg.describe(), cfg.lambda, cfg.p, tag, 0.0, 0.0, std::string("failed: ") + e.what()};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(std::stod(item));
      continue;
    }
    // a:b:step
    auto second = item.find(':', colon + 1);
    double a = std::stod(item.substr(0, colon));
    double b = std::stod(item.substr(colon + 1, second - colon - 1));
    double step = second == std::string::npos ? 1.0 : std::stod(item.substr(second + 1));
    if (step <= 0) throw std::invalid_argument("range step must be positive");
    for (double x = a; x <= b + 1e-9 * step; x += step) out.push_back(x);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states and least action solutions of NLS on metric graphs"};
  app.require_subcommand(1);
  // -h would clash with the mesh-step option --h.
  app.set_help_flag("--help", "print help");

  Common common;
  std::string graph_arg, case_arg, out_dir;
  double min_len = 0.0;
  bool allow_compact = false, emit_spec = false;
  std::string lengths = "1:12", lambdas = "1", ps = "4";

  auto* levels = app.add_subcommand("levels", "c estimate, sigma upper bound and their gap");
  add_common(levels, common);
  levels->add_option("--graph", graph_arg, "GraphSpec file or zoo expression")->required();
  levels->add_option("--min-len", min_len, "skip edges shorter than this in the solution scan");
  levels->add_flag("--allow-compact", allow_compact, "accept graphs without half-lines");

  auto* classify = app.add_subcommand("classify", "numerical signature of case A1, A2, B1 or B2");
  add_common(classify, common);
  classify->add_option("--case", case_arg, "A1, A2, B1 or B2")
      ->required()
      ->check(CLI::IsMember({"A1", "A2", "B1", "B2"}));

  auto* multiplicity = app.add_subcommand("multiplicity", "positive solutions localized on long edges");
  add_common(multiplicity, common);
  multiplicity->add_option("--graph", graph_arg, "GraphSpec file or zoo expression")->required();
  multiplicity->add_option("--min-len", min_len, "only edges at least this long");
  multiplicity->add_option("--out-dir", out_dir, "profiles as CSV and SVG");
  multiplicity->add_flag("--allow-compact", allow_compact, "accept graphs without half-lines");

  auto* sweep = app.add_subcommand("sweep", "attainment of the loop level on a line with one loop");
  add_common(sweep, common);
  sweep->add_option("--lengths", lengths, "loop lengths, e.g. 1:12 or 2,4,8 or 1:6:0.5");
  sweep->add_option("--lambdas", lambdas, "list of lambda values");
  sweep->add_option("--ps", ps, "list of p values");

  auto* graph = app.add_subcommand("graph", "validate a graph and report the two-rays condition");
  graph->add_option("--graph", graph_arg, "GraphSpec file or zoo expression")->required();
  graph->add_flag("--emit", emit_spec, "print the GraphSpec text");
  graph->add_flag("--allow-compact", allow_compact, "accept graphs without half-lines");

  CLI11_PARSE(app, argc, argv);
  if (common.trunc > 0.0) common.cfg.trunc = common.trunc;

  try {
    if (*levels) {
      MetricGraph g = load_graph(graph_arg);
      check_graph(g, allow_compact);
      std::vector<ExperimentRecord> recs;
      try {
        recs = cmd_levels(g, common.cfg, min_len).records;
      } catch (const std::exception& e) {
        recs.push_back(failure_row(g.name(), common.cfg, Tag::CEst, e));
      }
      emit_records(common, recs);
    } else if (*classify) {
      auto recs = cmd_classify(case_arg, common.cfg);
      emit_records(common, recs);
      return recs.back().status == "fail" ? 1 : 0;
    } else if (*multiplicity) {
      MetricGraph g = load_graph(graph_arg);
      check_graph(g, allow_compact);
      emit_records(common, cmd_multiplicity(g, common.cfg, min_len, out_dir).records);
    } else if (*sweep) {
      auto rows = cmd_sweep(parse_list(lengths), parse_list(lambdas), parse_list(ps), common.cfg);
      with_output(common, [&](std::ostream& os) {
        if (common.format == "csv") {
          write_csv(os, rows);
          return;
        }
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) {
          arr.push_back({{"lambda", r.lambda}, {"p", r.p}, {"length", r.length}, {"attained", r.attained},
                         {"level", r.level}, {"margin", r.margin}, {"status", r.status}});
        }
        os << arr.dump(2) << "\n";
      });
      for (double l : parse_list(lambdas)) {
        for (double p : parse_list(ps)) {
          auto t = attainment_threshold(rows, l, p);
          std::cerr << "lambda=" << l << " p=" << p << " threshold="
                    << (t ? std::to_string(*t) : std::string("none")) << "\n";
        }
      }
    } else if (*graph) {
      MetricGraph g = load_graph(graph_arg);
      auto violations = validate_class_g(g, !allow_compact);
      std::cout << "graph " << g.name() << ": " << g.vertices().size() << " vertices, "
                << g.edges().size() << " edges, " << g.half_line_count() << " half-lines, bounded length "
                << total_bounded_length(g) << "\n";
      for (const auto& v : violations) std::cout << "violation " << to_string(v.kind) << ": " << v.detail << "\n";
      HReport h = check_assumption_h(g);
      std::cout << "two-rays condition: "
                << (h.status == HStatus::HoldsSufficient ? "holds" : "unknown")
                << (h.reason.empty() ? "" : " (" + h.reason + ")") << "\n";
      if (emit_spec) std::cout << emit_graph_spec(g);
      return violations.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
