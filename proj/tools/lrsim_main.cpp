#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrsim/error.hpp"
#include "lrsim/report.hpp"
#include "lrsim/scenario.hpp"
#include "lrsim/simulation.hpp"
#include "lrsim/trace_io.hpp"

namespace {

lrsim::TraceFormat parse_trace_format(const std::string& name) {
  return name == "csv" ? lrsim::TraceFormat::Csv : lrsim::TraceFormat::JsonLines;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            std::optional<double> horizon, const std::string& out_path,
            const std::string& format, bool with_report) {
  lrsim::ScenarioConfig cfg = lrsim::load_scenario_file(scenario_path);
  if (seed) cfg.seed = *seed;
  if (horizon) cfg.horizon_hours = *horizon;

  lrsim::Simulation sim(std::move(cfg));
  lrsim::RunResult res = sim.run();

  if (out_path.empty()) {
    std::cout << lrsim::emit_trace(res.trace, parse_trace_format(format));
  } else {
    lrsim::write_trace_file(res.trace, out_path, parse_trace_format(format));
  }
  if (with_report) std::cerr << lrsim::render_report(res.metrics);
  return 0;
}

int cmd_plan(double distance, double speed, const lrsim::BreakPolicy& breaks) {
  const lrsim::TripPlan plan = lrsim::plan_trip_time(distance, speed, breaks);
  std::printf("driving_hours %.2f\n", plan.driving_hours);
  std::printf("driving_days %.2f\n", plan.driving_days);
  std::printf("total_hours %.2f\n", plan.total_hours);
  std::printf("total_days %.2f\n", plan.total_days);
  return 0;
}

int cmd_report(const std::string& trace_path, const std::string& format) {
  const lrsim::Trace trace = lrsim::read_trace_file(trace_path);
  const auto metrics = lrsim::metrics_from_trace(trace);
  if (format == "csv")
    std::cout << lrsim::render_report_csv(metrics);
  else
    std::cout << lrsim::render_report(metrics);
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const lrsim::ScenarioConfig cfg = lrsim::load_scenario_file(scenario_path);
  const lrsim::Route route = cfg.route.make_route();
  std::printf("ok: %zu checkpoint(s), %.1f km, %zu vehicle(s), seed %llu\n",
              route.checkpoints().size(), route.length_km(), cfg.vehicles.size(),
              static_cast<unsigned long long>(cfg.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-route vehicle transport monitoring and support simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::string out_path;
  std::string trace_format = "jsonl";
  bool with_report = false;

  CLI::App* run = app.add_subcommand("run", "Execute a scenario and emit the event trace");
  run->add_option("--scenario", scenario_path, "Scenario config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--horizon", horizon, "Override the horizon (hours)");
  run->add_option("--out", out_path, "Trace output path (default: stdout)");
  run->add_option("--format", trace_format, "Trace format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  run->add_flag("--report", with_report, "Also print the metrics report to stderr");

  double distance = 0.0;
  double speed = 0.0;
  lrsim::BreakPolicy breaks;
  breaks.meals_per_day = 3;
  breaks.meal_hours = 0.5;
  breaks.refreshments_per_day = 6;
  breaks.refreshment_hours = 0.25;
  breaks.fuel_stops = 5;
  breaks.fuel_stop_hours = 0.25;

  CLI::App* plan = app.add_subcommand("plan", "Closed-form trip time planner");
  plan->add_option("--distance", distance, "Route length (km)")->required();
  plan->add_option("--speed", speed, "Average speed (km/h)")->required();
  plan->add_option("--meals-per-day", breaks.meals_per_day);
  plan->add_option("--meal-hours", breaks.meal_hours);
  plan->add_option("--refreshments-per-day", breaks.refreshments_per_day);
  plan->add_option("--refreshment-hours", breaks.refreshment_hours);
  plan->add_option("--fuel-stops", breaks.fuel_stops);
  plan->add_option("--fuel-stop-hours", breaks.fuel_stop_hours);

  std::string trace_path;
  std::string report_format = "text";
  CLI::App* report = app.add_subcommand("report", "Trip metrics from a saved trace");
  report->add_option("--trace", trace_path, "JsonLines trace file")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "Report format")
      ->check(CLI::IsMember({"text", "csv"}));

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("--scenario", validate_path, "Scenario config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_path, seed, horizon, out_path, trace_format, with_report);
    if (plan->parsed()) return cmd_plan(distance, speed, breaks);
    if (report->parsed()) return cmd_report(trace_path, report_format);
    if (validate->parsed()) return cmd_validate(validate_path);
  } catch (const lrsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
