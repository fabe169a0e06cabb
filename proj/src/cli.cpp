#include "gridline/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gridline/errors.hpp"
#include "gridline/report.hpp"
#include "gridline/service.hpp"

namespace gridline {

namespace {

using Row = std::vector<std::string>;

std::string fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

std::string percent(double fraction) { return fixed(fraction * 100.0, 2) + "%"; }

void print_table(std::ostream& out, const Row& header, const std::vector<Row>& rows) {
  std::vector<std::size_t> widths(header.size(), 0);
  auto widen = [&](const Row& row) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  };
  widen(header);
  for (const auto& row : rows) widen(row);
  auto print_row = [&](const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i == 0 ? std::left : std::right) << std::setw(static_cast<int>(widths[i])) << row[i];
      out << (i + 1 < row.size() ? "  " : "\n");
    }
  };
  print_row(header);
  std::size_t total = 0;
  for (auto w : widths) total += w + 2;
  out << std::string(total > 2 ? total - 2 : 0, '-') << "\n";
  for (const auto& row : rows) print_row(row);
}

// Global settings shared by every subcommand.
struct Globals {
  std::string network = "bundled:greenline17";
  std::string format = "table";
  std::uint64_t seed = 0;
  bool seed_given = false;

  std::optional<std::uint64_t> seed_or_none() const {
    return seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt;
  }
  bool json() const { return format == "json"; }
};

TransitNetwork load_checked_network(const std::string& reference) {
  TransitNetwork network = load_network(reference);
  std::vector<std::string> problems;
  for (const auto& violation : validate(network)) problems.push_back(violation.message());
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return network;
}

FaultTree load_tree(const std::string& reference, std::optional<double> beta,
                    std::optional<double> calibrate_target) {
  FaultTree tree = load_fault_tree(reference);
  auto problems = validate_fault_tree(tree);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (beta) tree.beta = *beta;
  if (calibrate_target) {
    tree.beta = calibrate_beta(tree, tree.total_elimination_cost(), *calibrate_target).beta;
  }
  return tree;
}

AllocatorChoice make_allocator(const std::string& name, double step) {
  AllocatorChoice choice;
  choice.kind = *allocator_from_string(name);
  choice.greedy_step = step;
  return choice;
}

void metrics_command(const Globals& g, std::ostream& out) {
  const auto network = load_checked_network(g.network);
  const Json payload = metrics_payload(network);
  if (g.json()) {
    out << render(payload);
    return;
  }
  std::vector<Row> rows = {
      {"nodes", std::to_string(network.node_count())},
      {"links", std::to_string(network.link_count())},
      {"total degree", std::to_string(payload["total_degree"].get<int>())},
      {"network degree", std::to_string(payload["network_degree"].get<int>())},
      {"mean degree (degree/links)", fixed(payload["mean_degree_per_link"].get<double>(), 4)},
      {"mean degree (degree/nodes)", fixed(payload["mean_degree_per_node"].get<double>(), 4)},
      {"spectral radius", fixed(payload["spectral_radius"].get<double>(), 4)},
      {"link robustness", percent(payload["link_robustness"].get<double>())},
      {"node robustness", percent(payload["node_robustness"].get<double>())},
      {"blocking nodes", percent(payload["blocking_fraction"].get<double>())},
      {"links that can be removed", std::to_string(payload["removable_links"].get<int>())},
      {"nodes that can be removed", std::to_string(payload["removable_nodes"].get<int>())},
      {"blocking nodes that cannot be removed",
       std::to_string(payload["irremovable_blocking_nodes"].get<int>())},
  };
  print_table(out, {"metric", "value"}, rows);
  out << "\n";

  rows.clear();
  for (const auto& node : network.nodes) {
    auto cell = [&](const char* key) {
      const Json& table = payload[key];
      return table.is_null() ? std::string("-") : fixed(table[node.id].get<double>(), 4);
    };
    rows.push_back({node.id, std::to_string(payload["per_node_degree"][node.id].get<int>()),
                    cell("degree_centrality"), cell("betweenness_centrality"),
                    cell("eigenvector_centrality")});
  }
  print_table(out, {"station", "degree", "degree_c", "betweenness", "eigenvector"}, rows);
}

void risk_command(const Globals& g, const std::optional<std::string>& rank_by, std::ostream& out) {
  const auto network = load_checked_network(g.network);
  if (rank_by) {
    auto key = rank_key_from_string(*rank_by);
    const Json payload = ranking_payload(network, *key);
    if (g.json()) {
      out << render(payload);
      return;
    }
    std::vector<Row> rows;
    for (const auto& item : payload["ranking"]) {
      rows.push_back({item["asset"].get<std::string>(), fixed(item["value"].get<double>(), 4)});
    }
    print_table(out, {"station", *rank_by}, rows);
    return;
  }
  const Json payload = risk_payload(network);
  if (g.json()) {
    out << render(payload);
    return;
  }
  std::vector<Row> rows;
  for (const auto& item : payload["ranking"]) {
    rows.push_back({item["asset"].get<std::string>(), item["kind"].get<std::string>(),
                    fixed(item["risk"].get<double>(), 2)});
  }
  rows.push_back({"TOTAL", "", fixed(payload["total_risk"].get<double>(), 2)});
  print_table(out, {"asset", "kind", "risk"}, rows);
}

void resilience_command(const Globals& g, const ResilienceRequest& base, std::ostream& out) {
  const auto network = load_checked_network(g.network);
  ResilienceRequest request = base;
  request.seed = g.seed_or_none();
  const Json payload = resilience_payload(network, request);
  if (g.json()) {
    out << render(payload);
    return;
  }
  std::vector<Row> rows;
  for (const auto& p : payload["points"]) {
    rows.push_back({"q at gamma " + fixed(p["gamma"].get<double>(), 2), fixed(p["q"].get<double>(), 6)});
  }
  rows.push_back({"intercept b", fixed(payload["b"].get<double>(), 5)});
  rows.push_back({"slope k", fixed(payload["k"].get<double>(), 5)});
  rows.push_back({"spectral radius", fixed(payload["rho"].get<double>(), 4)});
  rows.push_back({"critical vulnerability", payload["gamma_critical"].is_null()
                                                ? std::string("none (k >= 0)")
                                                : percent(payload["gamma_critical"].get<double>())});
  print_table(out, {"resilience", "value"}, rows);
}

void faulttree_command(const Globals& g, const FaultTree& tree, const std::vector<double>& budgets,
                       const AllocatorChoice& allocator, std::ostream& out) {
  const Json payload = budgets.size() == 1 ? allocation_payload(tree, budgets.front(), allocator)
                                           : sweep_payload(tree, budgets, allocator);
  if (g.json()) {
    out << render(payload);
    return;
  }
  Row header{"budget", "vulnerability", "risk"};
  for (const auto& leaf : tree.leaves) header.push_back(leaf.label);
  std::vector<Row> rows;
  const Json points = payload.is_array() ? payload : Json::array({payload});
  for (const auto& p : points) {
    Row row{fixed(p["budget"].get<double>(), 2), percent(p["vulnerability"].get<double>()),
            fixed(p["risk"].get<double>(), 2)};
    for (const auto& leaf : tree.leaves) row.push_back(fixed(p["allocation"][leaf.label].get<double>(), 3));
    rows.push_back(std::move(row));
  }
  out << "beta = " << fixed(*tree.beta, 4) << ", allocator = " << to_string(allocator.kind) << "\n";
  print_table(out, header, rows);
}

void attack_command(const Globals& g, const AttackScenario& scenario, std::ostream& out) {
  const auto network = load_checked_network(g.network);
  const Json payload = attack_payload(network, scenario, g.seed_or_none());
  if (g.json()) {
    out << render(payload);
    return;
  }
  const Json& impact = payload["impact"];
  std::string removed;
  for (const auto& id : payload["removed_nodes"]) {
    removed += (removed.empty() ? "" : ", ") + id.get<std::string>();
  }
  std::vector<Row> rows = {
      {"scenario", scenario.name},
      {"removed stations", removed.empty() ? "-" : removed},
      {"components", std::to_string(impact["components_before"].get<int>()) + " -> " +
                         std::to_string(impact["components_after"].get<int>())},
      {"largest component", std::to_string(impact["largest_component_before"].get<int>()) + " -> " +
                                std::to_string(impact["largest_component_after"].get<int>())},
      {"disconnected terminus pairs", std::to_string(impact["disconnected_terminus_pairs"].get<int>())},
      {"total risk", fixed(impact["risk_before"].get<double>(), 2) + " -> " +
                         fixed(impact["risk_after"].get<double>(), 2)},
      {"spectral radius", fixed(impact["spectral_radius_before"].get<double>(), 4) + " -> " +
                              fixed(impact["spectral_radius_after"].get<double>(), 4)},
  };
  print_table(out, {"impact", "value"}, rows);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gridline: risk and resilience analysis for transit networks"};
  app.name("gridline");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--network", g.network, "Network file path or bundled:<name>")
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for randomized analyses");

  auto* metrics = app.add_subcommand("metrics", "Degree, spectral, centrality and robustness metrics");

  auto* risk = app.add_subcommand("risk", "Per-asset and total risk");
  std::string rank_by;
  auto* rank_opt = risk->add_option("--rank-by", rank_by, "Rank stations by this key instead")
                       ->check(CLI::IsMember({"risk", "degree", "betweenness"}));

  auto* resilience = app.add_subcommand("resilience", "Resiliency line fit and critical vulnerability");
  std::vector<std::string> point_texts;
  double rho = 0.0;
  std::string estimate;
  ResilienceRequest resilience_request;
  resilience->add_option("--point", point_texts, "Calibration point gamma:q (repeatable)");
  auto* rho_opt = resilience->add_option("--rho", rho, "Spectral radius (default: computed)");
  auto* estimate_opt =
      resilience->add_option("--estimate", estimate, "Estimate q by Monte Carlo at these gammas (a,b,..)");
  resilience->add_option("--trials", resilience_request.trials, "Monte Carlo trials per gamma")
      ->capture_default_str();

  auto* faulttree = app.add_subcommand("faulttree", "Fault-tree budget allocation");
  std::string tree_ref = "bundled:greenline-hubs";
  double budget = 0.0;
  std::string budgets_text;
  std::string allocator_name = "proportional";
  double step = 0.01;
  double beta = 0.0;
  double target = 0.0;
  auto add_tree_options = [&](CLI::App* cmd) {
    cmd->add_option("--tree", tree_ref, "Fault tree file path or bundled:<name>")->capture_default_str();
    cmd->add_option("--allocator", allocator_name, "Budget allocator")
        ->check(CLI::IsMember({"proportional", "greedy"}))
        ->capture_default_str();
    cmd->add_option("--step", step, "Greedy allocation step")->capture_default_str();
  };
  add_tree_options(faulttree);
  auto* budget_opt = faulttree->add_option("--budget", budget, "Single budget to evaluate");
  auto* budgets_opt = faulttree->add_option("--budgets", budgets_text, "Budget sweep a,b,c");
  budget_opt->excludes(budgets_opt);
  auto* beta_opt = faulttree->add_option("--beta", beta, "Decay rate override");
  auto* target_opt = faulttree->add_option(
      "--calibrate-target", target, "Calibrate beta so the full budget reaches this vulnerability");
  beta_opt->excludes(target_opt);

  auto* attack = app.add_subcommand("attack", "Apply an attack scenario and report its impact");
  std::string preset_name, scenario_path, metric_name = "degree";
  int top_k = 0;
  auto* preset_opt = attack->add_option("--preset", preset_name, "kenmore-random|kenmore-targeted|kenmore-combined");
  auto* scenario_opt = attack->add_option("--scenario", scenario_path, "Scenario JSON file");
  auto* targeted_opt = attack->add_option("--targeted", top_k, "Remove the top-k stations by --metric");
  attack->add_option("--metric", metric_name, "Metric for --targeted")
      ->check(CLI::IsMember({"degree", "betweenness", "risk"}))
      ->capture_default_str();
  preset_opt->excludes(scenario_opt)->excludes(targeted_opt);
  scenario_opt->excludes(targeted_opt);

  auto* roi_cmd = app.add_subcommand("roi", "Return on investment");
  double risk_initial = 0.0, risk_final = 0.0, expenditure = 0.0;
  std::string roi_budgets, svg_path;
  auto* ri_opt = roi_cmd->add_option("--risk-initial", risk_initial, "Initial risk");
  auto* rf_opt = roi_cmd->add_option("--risk-final", risk_final, "Final risk");
  auto* ex_opt = roi_cmd->add_option("--expenditure", expenditure, "Expenditure");
  auto* curve_opt = roi_cmd->add_option("--budgets", roi_budgets, "ROI curve over fault-tree budgets a,b,c");
  roi_cmd->add_option("--svg", svg_path, "Also write the ROI curve as SVG to this path");
  add_tree_options(roi_cmd);
  ri_opt->needs(rf_opt)->needs(ex_opt)->excludes(curve_opt);

  auto* serve = app.add_subcommand("serve", "Run the JSON-over-HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string ui_dir;
  serve->add_option("--port", port, "Port (GRIDLINE_PORT overrides)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  auto* ui_opt = serve->add_option("--ui-dir", ui_dir, "Static UI bundle served at /ui");
  serve->add_option("--tree", tree_ref, "Fault tree for allocation endpoints")->capture_default_str();

  std::vector<std::string> storage;
  storage.push_back("gridline");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (metrics->parsed()) {
      metrics_command(g, out);
    } else if (risk->parsed()) {
      risk_command(g, rank_opt->count() ? std::optional<std::string>(rank_by) : std::nullopt, out);
    } else if (resilience->parsed()) {
      if (!point_texts.empty()) {
        resilience_request.points.clear();
        for (const auto& text : point_texts) {
          for (const auto& p : parse_calibration_points(text)) resilience_request.points.push_back(p);
        }
      }
      if (rho_opt->count()) resilience_request.rho = rho;
      if (estimate_opt->count()) resilience_request.estimate_gammas = parse_number_list(estimate);
      resilience_command(g, resilience_request, out);
    } else if (faulttree->parsed()) {
      const FaultTree tree = load_tree(tree_ref, beta_opt->count() ? std::optional(beta) : std::nullopt,
                                       target_opt->count() ? std::optional(target) : std::nullopt);
      std::vector<double> budgets;
      if (budget_opt->count()) {
        budgets = {budget};
      } else if (budgets_opt->count()) {
        budgets = parse_number_list(budgets_text);
      } else {
        const Money full = tree.total_elimination_cost();
        budgets = {0.0, full / 2.0, full};
      }
      faulttree_command(g, tree, budgets, make_allocator(allocator_name, step), out);
    } else if (attack->parsed()) {
      AttackScenario scenario;
      if (preset_opt->count()) {
        scenario = preset(preset_name);
      } else if (scenario_opt->count()) {
        scenario = parse_scenario(read_text_file(scenario_path));
      } else if (targeted_opt->count()) {
        scenario = targeted_attack(load_checked_network(g.network), top_k,
                                   *target_metric_from_string(metric_name));
      } else {
        throw DomainError("attack needs one of --preset, --scenario or --targeted");
      }
      attack_command(g, scenario, out);
    } else if (roi_cmd->parsed()) {
      if (ri_opt->count()) {
        const Json payload = roi_payload(risk_initial, risk_final, expenditure);
        if (g.json()) {
          out << render(payload);
        } else {
          print_table(out, {"expenditure", "roi"},
                      {{fixed(expenditure, 2), fixed(payload["roi"].get<double>(), 3)}});
        }
      } else if (curve_opt->count()) {
        const FaultTree tree = load_tree(tree_ref, std::nullopt, std::nullopt);
        const auto allocator = make_allocator(allocator_name, step);
        const auto budgets = parse_number_list(roi_budgets);
        if (!svg_path.empty()) {
          std::ofstream svg(svg_path);
          if (!svg) throw DomainError("cannot write " + svg_path);
          svg << render_roi_svg(tree_roi_curve(tree, budgets, allocator));
        }
        const Json payload = roi_curve_payload(tree, budgets, allocator);
        if (g.json()) {
          out << render(payload);
        } else {
          std::vector<Row> rows;
          for (const auto& p : payload) {
            rows.push_back({fixed(p["expenditure"].get<double>(), 2), fixed(p["roi"].get<double>(), 4)});
          }
          print_table(out, {"expenditure", "roi"}, rows);
        }
      } else {
        throw DomainError("roi needs --risk-initial/--risk-final/--expenditure or --budgets");
      }
    } else if (serve->parsed()) {
      Service service(load_checked_network(g.network), load_tree(tree_ref, std::nullopt, std::nullopt));
      const int bound = resolve_port(port);
      out << "gridline service listening on http://" << host << ":" << bound << std::endl;
      if (!service.listen(host, bound, ui_opt->count() ? std::optional(ui_dir) : std::nullopt)) {
        err << "error: could not listen on " << host << ":" << bound << "\n";
        return 1;
      }
    }
  } catch (const ValidationError& e) {
    err << "validation failed:\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gridline
