#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rankopt/harness/scenario.hpp"
#include "rankopt/harness/workload.hpp"

namespace {

using namespace rankopt;

int cmd_gen_data(uint64_t seed, const CatalogSpec& spec, const std::string& out) {
  const Database db = generate_database(seed, spec);
  db.save(out);
  std::cout << "wrote " << db.table_count() << " tables x " << spec.rows_per_table
            << " rows to " << out << "\n";
  return 0;
}

int cmd_gen_workload(const std::string& catalog_path, const std::string& templates_path,
                     int count, uint64_t seed, const std::string& out) {
  const Database db = Database::load(catalog_path);
  const Catalog catalog = db.catalog();
  std::vector<Query> templates = templates_path.empty() ? default_templates(catalog)
                                                        : load_workload(templates_path);
  const auto workload = generate_workload(templates, count, seed, catalog);
  save_workload(workload, out);
  std::cout << "wrote " << workload.size() << " queries to " << out << "\n";
  return 0;
}

int cmd_pretrain(const std::string& catalog_path, int plans, uint64_t seed, int epochs,
                 double learning_rate, uint64_t model_seed, const std::string& out) {
  const Database db = Database::load(catalog_path);
  const Catalog catalog = db.catalog();
  const CostModel cost_model;
  PretrainConfig config;
  if (epochs > 0) config.epochs = epochs;
  if (learning_rate > 0) config.learning_rate = learning_rate;
  ComparatorModel model = ComparatorModel::random_initialized(catalog, model_seed);
  model = pretrain(std::move(model), catalog, cost_model, plans, seed, config);
  model.save(out);
  std::cout << "wrote checkpoint to " << out << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const Config raw = Config::parse_file(config_path);
  const ScenarioConfig config = ScenarioConfig::from_config(raw);
  const ScenarioResult result = run_scenario(config);
  emit_report(result.report, out_dir);
  std::cout << "scenario " << config.scenario << ": " << result.report.rows.size()
            << " queries, learned total " << result.report.total_learned() << ", native total "
            << result.report.total_native() << ", fastest total "
            << result.report.total_fastest() << "\n"
            << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  std::ifstream in(dir + "/summary.txt");
  check(in.good(), "no summary.txt under '" + dir + "'");
  std::cout << in.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rankopt: a desk-scale learning-to-rank query optimizer laboratory"};
  app.require_subcommand(1);

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "generate a synthetic catalog fixture");
  uint64_t gd_seed = 1;
  CatalogSpec gd_spec;
  std::string gd_out = "catalog.txt";
  gen_data->add_option("--seed", gd_seed, "generator seed");
  gen_data->add_option("--tables", gd_spec.num_tables, "number of tables");
  gen_data->add_option("--rows", gd_spec.rows_per_table, "rows per table");
  gen_data->add_option("--join-domain", gd_spec.join_domain, "join key domain size");
  gen_data->add_option("--filter-domain", gd_spec.filter_domain, "filter column domain size");
  gen_data->add_option("--correlation", gd_spec.correlation, "join-key skew in [0,1]");
  gen_data->add_option("--out", gd_out, "output fixture path");

  // gen-workload
  auto* gen_wl = app.add_subcommand("gen-workload", "generate a query workload");
  std::string gw_catalog, gw_templates, gw_out = "workload.txt";
  int gw_count = 100;
  uint64_t gw_seed = 1;
  gen_wl->add_option("--catalog", gw_catalog, "catalog fixture path")->required();
  gen_wl->add_option("--templates", gw_templates, "template file (default: built-in family)");
  gen_wl->add_option("--count", gw_count, "number of queries");
  gen_wl->add_option("--seed", gw_seed, "generator seed");
  gen_wl->add_option("--out", gw_out, "output workload path");

  // pretrain
  auto* pre = app.add_subcommand("pretrain", "pre-train a comparator checkpoint");
  std::string pt_catalog, pt_out = "model.ckpt";
  int pt_plans = 1500, pt_epochs = 0;
  double pt_lr = 0.0;
  uint64_t pt_seed = 11, pt_model_seed = 7;
  pre->add_option("--catalog", pt_catalog, "catalog fixture path")->required();
  pre->add_option("--plans", pt_plans, "synthetic corpus size");
  pre->add_option("--seed", pt_seed, "corpus seed");
  pre->add_option("--model-seed", pt_model_seed, "weight initialization seed");
  pre->add_option("--epochs", pt_epochs, "override training epochs");
  pre->add_option("--lr", pt_lr, "override learning rate");
  pre->add_option("--out", pt_out, "checkpoint path");

  // run
  auto* run = app.add_subcommand("run", "run an evaluation scenario");
  std::string run_config, run_out = "report";
  run->add_option("--config", run_config, "scenario config file")->required();
  run->add_option("--out", run_out, "report output directory");
  std::string run_scenario_override, run_strategy_override;
  double run_alpha = 0, run_delta = 0;
  int run_max_candidates = 0;
  run->add_option("--scenario", run_scenario_override, "override the config's scenario");
  run->add_option("--strategy", run_strategy_override,
                  "override the exploration strategy (heuristic|bruteforce|random)");
  run->add_option("--alpha", run_alpha, "override alpha");
  run->add_option("--delta", run_delta, "override delta");
  run->add_option("--max-candidates", run_max_candidates, "override the candidate cap");

  // report
  auto* rep = app.add_subcommand("report", "print the summary of an emitted report");
  std::string rep_dir = "report";
  rep->add_option("--dir", rep_dir, "report directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_data->parsed()) {
      return cmd_gen_data(gd_seed, gd_spec, gd_out);
    }
    if (gen_wl->parsed()) {
      return cmd_gen_workload(gw_catalog, gw_templates, gw_count, gw_seed, gw_out);
    }
    if (pre->parsed()) {
      return cmd_pretrain(pt_catalog, pt_plans, pt_seed, pt_epochs, pt_lr, pt_model_seed, pt_out);
    }
    if (run->parsed()) {
      if (!run_scenario_override.empty() || !run_strategy_override.empty() || run_alpha > 0 ||
          run_delta > 0 || run_max_candidates > 0) {
        Config raw = Config::parse_file(run_config);
        if (!run_scenario_override.empty()) raw.set("scenario", run_scenario_override);
        if (!run_strategy_override.empty()) raw.set("strategy", run_strategy_override);
        if (run_alpha > 0) raw.set("alpha", std::to_string(run_alpha));
        if (run_delta > 0) raw.set("delta", std::to_string(run_delta));
        if (run_max_candidates > 0) raw.set("max_candidates", std::to_string(run_max_candidates));
        const ScenarioConfig config = ScenarioConfig::from_config(raw);
        const ScenarioResult result = run_scenario(config);
        emit_report(result.report, run_out);
        std::cout << "scenario " << config.scenario << ": " << result.report.rows.size()
                  << " queries, learned total " << result.report.total_learned()
                  << ", native total " << result.report.total_native() << "\n"
                  << "report written to " << run_out << "\n";
        return 0;
      }
      return cmd_run(run_config, run_out);
    }
    if (rep->parsed()) {
      return cmd_report(rep_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
