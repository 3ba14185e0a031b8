// s3: operator command-line client for the slice service.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "s3/cli_client.hpp"

int main(int argc, char** argv) {
  const char* env_endpoint = std::getenv("S3_ENDPOINT");

  CLI::App app{"s3 - satellite slice operator client"};
  app.require_subcommand(1);

  s3::cli::CliConfig cfg;
  cfg.endpoint = env_endpoint != nullptr ? env_endpoint : "http://127.0.0.1:8080";
  std::string output = "table";
  app.add_option("--endpoint", cfg.endpoint, "service endpoint (S3_ENDPOINT)");
  app.add_option("--tenant", cfg.tenant, "tenant name for permission checks");
  app.add_option("--output", output, "output format")->check(CLI::IsMember({"table", "json"}));

  std::string apply_file, describe_id, scenario_file;
  auto* apply = app.add_subcommand("apply", "submit a slice request file");
  apply->add_option("file", apply_file, "request JSON")->required();
  auto* list = app.add_subcommand("list", "list slices");
  auto* describe = app.add_subcommand("describe", "show one slice");
  describe->add_option("slice_id", describe_id, "slice id")->required();
  auto* scenario = app.add_subcommand("scenario", "run an emulation scenario file");
  scenario->add_option("file", scenario_file, "scenario JSON")->required();
  std::string scenario_csv;
  scenario->add_option("--csv", scenario_csv, "write beam utilization time series as CSV");
  auto* pool = app.add_subcommand("pool", "show pool utilization");
  auto* rules = app.add_subcommand("rules", "export the classifier rule table");

  CLI11_PARSE(app, argc, argv);
  cfg.output = output == "json" ? s3::cli::OutputFormat::Json : s3::cli::OutputFormat::Table;

  s3::cli::Client client(cfg);
  if (apply->parsed()) return s3::cli::cmd_apply(client, apply_file, std::cout, std::cerr);
  if (list->parsed()) return s3::cli::cmd_list(client, std::cout, std::cerr);
  if (describe->parsed()) return s3::cli::cmd_describe(client, describe_id, std::cout, std::cerr);
  if (scenario->parsed())
    return s3::cli::cmd_scenario(client, scenario_file, std::cout, std::cerr, scenario_csv);
  if (pool->parsed()) return s3::cli::cmd_pool(client, std::cout, std::cerr);
  if (rules->parsed()) return s3::cli::cmd_rules(client, std::cout, std::cerr);
  return s3::cli::kExitRejected;
}
