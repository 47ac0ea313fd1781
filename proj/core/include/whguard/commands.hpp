#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "whguard/config.hpp"

namespace whguard {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;      // bad input, config or artifact
inline constexpr int kExitInternalError = 2;  // anything unexpected

// Each command reports failures on err as "error [<stage>]: <Code>: <detail>"
// and returns an exit code instead of throwing.

// Trains one classifier (MLP unless cfg.classifier names another) and writes
// the artifact to cfg.model_path().
int cmd_train(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

// Trains the selected classifiers on one split and writes comparison.csv,
// accuracy.svg and report.txt into cfg.out.
int cmd_compare(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

// Scores a labeled CSV with a saved artifact.
int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

// Prints one "url<TAB>confidence<TAB>safe|flagged" line per URL and writes
// the safe URLs to cfg.safe_list_path(). URLs come from cfg.urls (one per
// line) followed by url_args.
int cmd_predict(const PipelineConfig& cfg, std::span<const std::string> url_args,
                std::ostream& out, std::ostream& err);

// Re-renders accuracy.svg from a comparison CSV (cfg.data, or
// cfg.out/comparison.csv) and prints it next to the reference accuracies.
int cmd_report(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace whguard
