// Command-line runner over the cayley C API.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cayley/cayley.h"

namespace {

struct Options {
  std::string config;
  std::optional<int> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> mode;
  bool print_config = false;
};

int report(cayley_status status, const std::string& subcommand) {
  nlohmann::json j = {{"error", cayley_status_name(status)},
                      {"code", static_cast<int>(status)},
                      {"subcommand", subcommand},
                      {"message", cayley_last_error()}};
  std::cerr << j.dump() << '\n';
  return status == CAYLEY_ERR_INTERNAL ? 70 : 2;
}

int run(const std::string& subcommand, const Options& opt) {
  cayley_config* cfg = nullptr;
  cayley_status st = CAYLEY_OK;
  if (!opt.config.empty()) {
    st = cayley_config_load(opt.config.c_str(), &cfg);
  } else {
    st = cayley_config_preset(opt.preset.value_or(1), &cfg);
  }
  if (st != CAYLEY_OK) return report(st, subcommand);

  const auto apply = [&]() -> cayley_status {
    if (opt.seed && (st = cayley_config_set_seed(cfg, *opt.seed)) != CAYLEY_OK) return st;
    if (opt.out && (st = cayley_config_set_output_dir(cfg, opt.out->c_str())) != CAYLEY_OK) return st;
    if (opt.mode && (st = cayley_config_set_mode(cfg, opt.mode->c_str())) != CAYLEY_OK) return st;
    if (opt.threads) {
      if ((st = cayley_config_set_threads(cfg, *opt.threads)) != CAYLEY_OK) return st;
      cayley_set_threads(*opt.threads);
    }
    if (opt.print_config) {
      char* text = nullptr;
      if ((st = cayley_config_to_json(cfg, &text)) != CAYLEY_OK) return st;
      std::cout << text;
      cayley_string_free(text);
    }
    if ((st = cayley_check_budget(cfg, subcommand.c_str())) != CAYLEY_OK) return st;
    return cayley_run(cfg, subcommand.c_str());
  };
  st = apply();
  cayley_config_free(cfg);
  return st == CAYLEY_OK ? 0 : report(st, subcommand);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-tree Rydberg annealing simulator"};
  app.require_subcommand(1);
  Options opt;

  const char* commands[][2] = {
      {"geometry", "atom coordinates and distance validation"},
      {"phase-diagram", "classical ground-state phases over a (U, Delta_f) grid"},
      {"anneal", "annealing dynamics as JSON lines"},
      {"sample", "sampled bitstring histogram after the anneal"},
      {"neel", "Neel-order time series"},
      {"holo", "weighted Gerchberg-Saxton SLM phase pattern"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* config = sub->add_option("--config", opt.config, "JSON experiment file")->check(CLI::ExistingFile);
    sub->add_option("--preset", opt.preset, "circled parameter point")->check(CLI::Range(1, 5))->excludes(config);
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker thread cap")->check(CLI::NonNegativeNumber);
    sub->add_option("--mode", opt.mode, "coupling mode")->check(CLI::IsMember({"ideal", "full"}));
    sub->add_flag("--print-config", opt.print_config, "echo the effective configuration");
  }

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), opt);
}
