// whguard: train, compare, evaluate and apply malicious-URL classifiers.

#ifdef WHGUARD_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <algorithm>
#include <iostream>
#include <list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whguard/commands.hpp"
#include "whguard/config.hpp"
#include "whguard/error.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::list<std::pair<std::string, std::optional<std::string>>> values;  // stable addresses for CLI11
  std::vector<std::string> overrides;  // --set key=value
  std::vector<std::string> urls;
};

void add_common(CLI::App& cmd, Flags& flags) {
  cmd.add_option("--config", flags.config, "Flat key = value config file");
  static const std::pair<const char*, const char*> kFlags[] = {
      {"data", "Input CSV (url,type) or comparison CSV for report"},
      {"model", "Model artifact path (default <out>/model.json)"},
      {"seed", "Seed for the split and every trainer"},
      {"threshold", "Confidence threshold in [0, 1] for flagging"},
      {"out", "Output directory"},
      {"features", "raw | latent"},
      {"classifier", "mlp | knn | xgb | gb | rf | all"},
      {"urls", "File with one URL per line (predict)"},
      {"safe-list", "Safe-list output path (predict)"},
  };
  for (const auto& [name, help] : kFlags) {
    auto& slot = flags.values.emplace_back(name, std::nullopt);
    cmd.add_option(std::string("--") + name, slot.second, help);
  }
  cmd.add_option("--set", flags.overrides, "Any config key as key=value (repeatable)");
}

whguard::PipelineConfig build_config(const Flags& flags) {
  whguard::PipelineConfig cfg;
  if (flags.config) whguard::apply_config_file(cfg, *flags.config);
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw whguard::Error(whguard::ErrorCode::InvalidConfig, "--set expects key=value, got '" + kv + "'");
    }
    whguard::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [name, value] : flags.values) {
    if (!value) continue;
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    whguard::apply_setting(cfg, key, *value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexical malicious-URL detection: train, compare, evaluate, predict"};
  app.require_subcommand(1);

  Flags flags;
  auto* train = app.add_subcommand("train", "Train one classifier and save a model artifact");
  auto* compare = app.add_subcommand("compare", "Train all classifiers on one split and report accuracies");
  auto* evaluate = app.add_subcommand("evaluate", "Score a labeled CSV with a saved artifact");
  auto* predict = app.add_subcommand("predict", "Classify URLs and write the safe list");
  auto* report = app.add_subcommand("report", "Re-render the accuracy chart from a comparison CSV");
  for (auto* cmd : {train, compare, evaluate, predict, report}) add_common(*cmd, flags);
  predict->add_option("url", flags.urls, "URLs to classify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? whguard::kExitOk : whguard::kExitDataError;
  }

  whguard::PipelineConfig cfg;
  try {
    cfg = build_config(flags);
  } catch (const whguard::Error& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return whguard::kExitDataError;
  }

  if (*train) return whguard::cmd_train(cfg, std::cout, std::cerr);
  if (*compare) return whguard::cmd_compare(cfg, std::cout, std::cerr);
  if (*evaluate) return whguard::cmd_evaluate(cfg, std::cout, std::cerr);
  if (*predict) return whguard::cmd_predict(cfg, flags.urls, std::cout, std::cerr);
  return whguard::cmd_report(cfg, std::cout, std::cerr);
}
