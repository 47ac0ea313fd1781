// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion.
//   whguard_acceptance            criteria 2..11 (1 reported as SKIP unless a dataset is given)
//   whguard_acceptance --only 1   the full-dataset reproduction run; exit 77 when the CSV is missing
#ifdef WHGUARD_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../test_support.hpp"
#include "whguard/artifact.hpp"
#include "whguard/classifiers.hpp"
#include "whguard/commands.hpp"
#include "whguard/config.hpp"
#include "whguard/error.hpp"
#include "whguard/evaluation.hpp"
#include "whguard/pipeline.hpp"

namespace wg = whguard;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kSkipCode = 77;

enum class Outcome { pass, fail, skip };

struct Result {
  Outcome outcome = Outcome::fail;
  std::string detail;
};

Result pass(std::string d) { return {Outcome::pass, std::move(d)}; }
Result fail(std::string d) { return {Outcome::fail, std::move(d)}; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

wg::Matrix random_matrix(wg::Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  wg::Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// ---- 1: full-dataset reproduction ----

std::filesystem::path locate_dataset(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("WHGUARD_KAGGLE_CSV"); env && *env) return env;
  return std::filesystem::path(WHGUARD_SOURCE_DIR) / "data" / "malicious_phishing.csv";
}

Result criterion_1(const std::filesystem::path& dataset) {
  if (!std::filesystem::exists(dataset)) {
    return {Outcome::skip, "dataset not found at " + dataset.string() +
                               " (set WHGUARD_KAGGLE_CSV); nothing measured"};
  }
  wg::PipelineConfig cfg;
  cfg.data = dataset;
  cfg.out = wg::testing::scratch_dir("acceptance_full");
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = wg::cmd_compare(cfg, out, err);
  const double elapsed = seconds_since(t0);
  std::printf("%s", out.str().c_str());
  if (code != 0) return fail("compare exited " + std::to_string(code) + ": " + err.str());
  const auto table = wg::parse_comparison_csv(slurp(cfg.out / "comparison.csv"));
  std::string measured;
  bool ok = elapsed < 15 * 60 && table.rows.size() == 5;
  for (std::size_t i = 0; i < table.rows.size() && i < 5; ++i) {
    const double acc = table.rows[i].accuracy;
    const double ref = wg::kReferenceAccuracies[i];
    const bool row_ok = acc >= 0.90 && std::abs(acc - ref) <= 0.05 && (i != 1 || acc >= 0.95);
    ok = ok && row_ok;
    measured += table.rows[i].classifier + "=" + fmt("%.6f", acc) + "(ref " + fmt("%.6f", ref) +
                (row_ok ? ") " : ", OUT OF BAND) ");
  }
  measured += "time " + fmt("%.1f", elapsed) + " s";
  return ok ? pass(measured) : fail(measured);
}

// ---- 2: recall / FPR recomputable from the printed confusion cells ----

Result criterion_2() {
  wg::PipelineConfig cfg;
  cfg.data = wg::testing::sample_csv();
  cfg.out = wg::testing::scratch_dir("acceptance_c2");
  std::ostringstream out, err;
  if (wg::cmd_compare(cfg, out, err) != 0) return fail("compare failed: " + err.str());
  std::vector<std::string> texts = {slurp(cfg.out / "report.txt")};

  cfg.classifier = wg::ClassifierKind::knn;
  std::ostringstream tout, terr, eout, eerr;
  if (wg::cmd_train(cfg, tout, terr) != 0) return fail("train failed: " + terr.str());
  if (wg::cmd_evaluate(cfg, eout, eerr) != 0) return fail("evaluate failed: " + eerr.str());
  texts.push_back(eout.str());

  const std::regex section(
      R"(truth benign\s+(\d+)\s+(\d+)\s*\ntruth malicious\s+(\d+)\s+(\d+)\s*\n(?:.*\n)*?\s*recall\s+(\S+).*\n\s*false_positive_rate\s+(\S+))");
  std::size_t sections = 0;
  double worst = 0.0;
  for (const auto& text : texts) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), section); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      const double tn = std::stod(m[1]), fp = std::stod(m[2]), fn = std::stod(m[3]), tp = std::stod(m[4]);
      const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      const double fpr = fp + tn > 0 ? fp / (fp + tn) : 0.0;
      worst = std::max({worst, std::abs(recall - std::stod(m[5])), std::abs(fpr - std::stod(m[6]))});
      ++sections;
    }
  }
  const std::string d = std::to_string(sections) + " reports (5 compare + 1 evaluate), max |diff| " +
                        fmt("%.3g", worst);
  return sections == 6 && worst <= 1e-12 ? pass(d) : fail(d);
}

// ---- 3: KNN against all-pairs brute force ----

Result criterion_3() {
  const auto t0 = Clock::now();
  wg::Rng rng(3003);
  std::size_t checks = 0, mismatches = 0;
  for (int ds = 0; ds < 50; ++ds) {
    const std::size_t n = 5 + rng.below(496);
    const std::size_t d = 1 + rng.below(18);
    // alternate tie-heavy grids and continuous data
    const auto x = ds % 2 ? wg::testing::random_grid_matrix(rng, n, d, 3) : random_matrix(rng, n, d, 0, 1);
    const auto y = wg::testing::random_labels(rng, n);
    const auto model = wg::make_knn(x, y, 1);
    for (int q = 0; q < 20; ++q) {
      const auto query = ds % 2 ? wg::testing::random_grid_matrix(rng, 1, d, 3) : random_matrix(rng, 1, d, 0, 1);
      for (std::size_t k : {1u, 3u, 5u}) {
        ++checks;
        if (!(wg::predict_knn(model, query.row(0), k) == wg::oracle::knn_vote(x, y, query.row(0), k))) {
          ++mismatches;
        }
      }
    }
  }
  const double t = seconds_since(t0);
  const std::string d = std::to_string(checks) + " predictions over 50 datasets, " + std::to_string(mismatches) +
                        " mismatches, " + fmt("%.2f", t) + " s";
  return mismatches == 0 && t < 30 ? pass(d) : fail(d);
}

// ---- 4: best_split against exhaustive enumeration ----

Result criterion_4() {
  const auto t0 = Clock::now();
  wg::Rng rng(4004);
  std::size_t checks = 0, mismatches = 0;
  for (int ds = 0; ds < 50; ++ds) {
    const std::size_t n = 2 + rng.below(99);
    const std::size_t d = 1 + rng.below(5);
    const auto x = wg::testing::random_grid_matrix(rng, n, d, 2 + rng.below(6));
    std::vector<std::size_t> rows(n), feats(d);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    for (auto criterion : {wg::SplitCriterion::gini, wg::SplitCriterion::squared_error,
                           wg::SplitCriterion::second_order}) {
      std::vector<double> primary(n), secondary;
      if (criterion == wg::SplitCriterion::gini) {
        for (auto& v : primary) v = static_cast<double>(rng.below(2));
      } else {
        secondary.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          // quarter steps keep many sums exactly tied
          primary[i] = static_cast<double>(rng.below(9)) * 0.25 - 1.0;
          secondary[i] = 0.25;
        }
      }
      const std::size_t min_leaf = 1 + rng.below(3);
      const wg::SplitOptions opts{criterion, min_leaf, 1.0, 0.0};
      const auto got = wg::best_split(x, rows, {primary, secondary}, feats, opts);
      const auto want = wg::oracle::exhaustive_split(x, primary, secondary, criterion, min_leaf, 1.0, 0.0);
      ++checks;
      const bool same = got.has_value() == want.has_value() &&
                        (!got || (got->feature == want->feature && got->threshold == want->threshold &&
                                  std::abs(got->gain - want->gain) <= 1e-9));
      mismatches += !same;
    }
  }
  const double t = seconds_since(t0);
  const std::string d = std::to_string(checks) + " searches (gini, squared error, second order) over 50 datasets, " +
                        std::to_string(mismatches) + " mismatches, " + fmt("%.2f", t) + " s";
  return mismatches == 0 && t < 30 ? pass(d) : fail(d);
}

// ---- 5: gradient checks ----

Result criterion_5() {
  wg::Rng rng(5005);
  double worst = 0.0;
  std::size_t configs = 0, params = 0;
  for (int c = 0; c < 12; ++c) {
    // MLP: relu hidden stack, sigmoid head, cross-entropy
    const std::size_t in = 1 + rng.below(6);
    std::vector<std::size_t> widths;
    std::vector<wg::Activation> acts;
    for (std::size_t l = 0, depth = 1 + rng.below(2); l < depth; ++l) {
      widths.push_back(1 + rng.below(6));
      acts.push_back(wg::Activation::relu);
    }
    widths.push_back(1);
    acts.push_back(wg::Activation::sigmoid);
    auto net = wg::init_network(in, widths, acts, rng);
    for (auto& l : net) {
      for (auto& b : l.biases) b = rng.uniform(-0.3, 0.3);
    }
    const std::size_t rows = 1 + rng.below(8);
    const auto x = random_matrix(rng, rows, in, -1, 1);
    wg::Matrix t(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) t(r, 0) = static_cast<double>(rng.below(2));
    const auto chk = wg::oracle::check_gradients(net, x, t, wg::Loss::binary_cross_entropy, 1e-5);
    worst = std::max(worst, chk.worst_relative_error);
    params += chk.parameters;
    ++configs;
  }
  for (int c = 0; c < 12; ++c) {
    // autoencoder: sigmoid encoder, identity reconstruction, squared error
    const std::size_t d = 2 + rng.below(7);
    wg::TrainConfig cfg = wg::TrainConfig::autoencoder_defaults();
    cfg.hidden_sizes = {1 + rng.below(d)};
    cfg.epochs = rng.below(3);
    cfg.seed = rng.next();
    const std::size_t rows = 2 + rng.below(8);
    const auto x = random_matrix(rng, rows, d, 0, 1);
    const auto ae = wg::train_autoencoder(x, cfg);
    const auto chk = wg::oracle::check_gradients(wg::stacked(ae), x, x, wg::Loss::mean_squared_error, 1e-5);
    worst = std::max(worst, chk.worst_relative_error);
    params += chk.parameters;
    ++configs;
  }
  const std::string d = std::to_string(configs) + " configurations (12 MLP, 12 autoencoder), " +
                        std::to_string(params) + " parameters, worst relative error " + fmt("%.3g", worst);
  return configs >= 20 && worst < 1e-4 ? pass(d) : fail(d);
}

// ---- 6: degenerate forest equals CART ----

Result criterion_6() {
  wg::Rng rng(6006);
  const std::size_t n = 300, d = 6;
  const auto x = random_matrix(rng, n, d, 0, 1);
  std::vector<int> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = (x(r, 0) + 0.5 * x(r, 3) + 0.2 * rng.uniform01()) > 0.8;
  wg::ForestParams fp;
  fp.n_trees = 1;
  fp.bootstrap = false;
  fp.m_features = d;
  const auto forest = wg::train_random_forest(x, y, fp);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const std::vector<double> yd(y.begin(), y.end());
  wg::GrowParams gp;
  gp.max_depth = fp.max_depth;
  wg::Rng unused(0);
  const auto cart = wg::grow_tree(x, rows, {yd, {}}, gp, unused);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_matrix(rng, 1, d, -0.1, 1.1);
    const double leaf = wg::predict_tree(cart, q.row(0));
    const auto p = wg::predict_forest(forest, q.row(0));
    mismatches += !(p.confidence == leaf && p.label == (leaf >= 0.5 ? 1 : 0));
  }
  const std::string detail = "1000 random inputs, " + std::to_string(mismatches) + " mismatches, " +
                             std::to_string(cart.nodes.size()) + " nodes";
  return mismatches == 0 ? pass(detail) : fail(detail);
}

// ---- 7: boosting reduces training log-loss ----

Result criterion_7() {
  wg::PipelineConfig cfg;
  const auto data = wg::prepare_data(wg::load_csv(wg::testing::sample_csv()), cfg);
  const auto& train = data.train;
  const auto loss_of = [&](const wg::BoostedModel& m) {
    std::vector<double> p(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) p[r] = wg::predict_boosted(m, train.features.row(r)).confidence;
    return wg::log_loss(p, train.labels);
  };
  const auto baseline_of = [&](const wg::BoostedModel& m) {
    const std::vector<double> p(train.size(), 1.0 / (1.0 + std::exp(-m.init_score)));
    return wg::log_loss(p, train.labels);
  };
  const auto gb = wg::train_gradient_boosting(train.features, train.labels, {});
  const auto xgb = wg::train_xgb(train.features, train.labels, {});
  const double gb_loss = loss_of(gb), gb_base = baseline_of(gb);
  const double xgb_loss = loss_of(xgb), xgb_base = baseline_of(xgb);
  const std::string d = "gradient boosting " + fmt("%.6f", gb_loss) + " < " + fmt("%.6f", gb_base) + ", xgb " +
                        fmt("%.6f", xgb_loss) + " < " + fmt("%.6f", xgb_base) + " (sample, " +
                        std::to_string(train.size()) + " training rows)";
  return gb_loss < gb_base && xgb_loss < xgb_base ? pass(d) : fail(d);
}

// ---- 8: worked second-order gain ----

Result criterion_8() {
  const double direct = wg::second_order_gain(2.0, 2.0, -2.0, 2.0, 1.0, 0.0);
  // same statistics reached through the split search: rows 0,1 left, 2,3 right
  const wg::Matrix x{{0.0}, {0.0}, {1.0}, {1.0}};
  const std::vector<double> g = {1.0, 1.0, -1.0, -1.0}, h = {1.0, 1.0, 1.0, 1.0};
  const std::vector<std::size_t> rows = {0, 1, 2, 3}, feats = {0};
  const auto split = wg::best_split(x, rows, {g, h}, feats, {wg::SplitCriterion::second_order, 1, 1.0, 0.0});
  const double via_split = split ? split->gain : -1.0;
  const double err = std::max(std::abs(direct - 4.0 / 3.0), std::abs(via_split - 4.0 / 3.0));
  const std::string d = "formula " + fmt("%.17g", direct) + ", split search " + fmt("%.17g", via_split) +
                        ", |err| " + fmt("%.3g", err);
  return err <= 1e-12 ? pass(d) : fail(d);
}

// ---- 9: compare determinism ----

Result criterion_9() {
  std::vector<std::string> csv, svg;
  for (const char* name : {"acceptance_c9a", "acceptance_c9b"}) {
    wg::PipelineConfig cfg;
    cfg.data = wg::testing::sample_csv();
    cfg.out = wg::testing::scratch_dir(name);
    std::ostringstream out, err;
    if (wg::cmd_compare(cfg, out, err) != 0) return fail("compare failed: " + err.str());
    csv.push_back(slurp(cfg.out / "comparison.csv"));
    svg.push_back(slurp(cfg.out / "accuracy.svg"));
  }
  const bool same = csv[0] == csv[1] && svg[0] == svg[1] && !csv[0].empty() && !svg[0].empty();
  const std::string d = std::string("two default compare runs: CSV ") + (csv[0] == csv[1] ? "identical" : "DIFFERENT") +
                        " (" + std::to_string(csv[0].size()) + " B), SVG " +
                        (svg[0] == svg[1] ? "identical" : "DIFFERENT") + " (" + std::to_string(svg[0].size()) + " B)";
  return same ? pass(d) : fail(d);
}

// ---- 10: artifact round trip ----

std::string random_url(wg::Rng& rng) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-._~/?=&%@";
  static const char* schemes[] = {"", "http://", "https://"};
  static const char* words[] = {"login", "secure", "account", "verify", "bank", "free", "paypal", ""};
  std::string u = schemes[rng.below(3)];
  if (rng.below(4) == 0) {
    for (int i = 0; i < 4; ++i) u += std::to_string(rng.below(256)) + (i < 3 ? "." : "");
  } else {
    for (std::uint64_t i = 0, n = 3 + rng.below(15); i < n; ++i) u += alphabet[rng.below(36)];
    u += ".com";
  }
  for (std::uint64_t i = 0, n = rng.below(60); i < n; ++i) u += alphabet[rng.below(alphabet.size())];
  u += words[rng.below(8)];
  return u;
}

Result criterion_10() {
  wg::PipelineConfig cfg;
  const auto data = wg::prepare_data(wg::load_csv(wg::testing::sample_csv()), cfg);
  const auto dir = wg::testing::scratch_dir("acceptance_c10");
  wg::Rng rng(10010);
  std::vector<std::string> urls(1000);
  for (auto& u : urls) u = random_url(rng);
  std::size_t mismatches = 0, artifacts = 0;
  for (const auto kind : wg::kAllClassifiers) {
    auto model = wg::train_classifier(kind, data.train, cfg.classifiers);
    const auto art = wg::make_artifact(data, std::move(model), {42, "sample", data.train.size(), 0, "now"});
    const auto path = dir / (std::string(wg::short_name(kind)) + ".json");
    wg::save_model(art, path);
    const auto back = wg::load_model(path);
    ++artifacts;
    if (!back.encoder || !(*back.encoder == *art.encoder)) ++mismatches;
    for (const auto& u : urls) {
      const auto raw = wg::extract_features(u, art.spec);
      mismatches += wg::transform_features(back, raw) != wg::transform_features(art, raw);
      mismatches += wg::predict_url(back, u) != wg::predict_url(art, u);
    }
  }
  const std::string d = std::to_string(artifacts) + " artifacts with autoencoder, 1000 random URLs each, " +
                        std::to_string(mismatches) + " mismatches (latents and probabilities compared exactly)";
  return artifacts == 5 && mismatches == 0 ? pass(d) : fail(d);
}

// ---- 11: confidence filter properties ----

Result criterion_11() {
  wg::Rng rng(11011);
  std::size_t violations = 0;
  for (int set = 0; set < 1000; ++set) {
    const std::size_t n = rng.below(60);
    std::vector<std::pair<std::string, double>> scored(n);
    for (std::size_t i = 0; i < n; ++i) {
      // a quarter of the scores sit exactly on a threshold grid value
      const double c = rng.below(4) == 0 ? static_cast<double>(rng.below(10)) / 9.0 : rng.uniform01();
      scored[i] = {"u" + std::to_string(i), c};
    }
    std::size_t prev_flagged = n + 1;
    for (int k = 0; k < 10; ++k) {
      const double threshold = static_cast<double>(k) / 9.0;
      const auto r = wg::filter_predictions(scored, threshold);
      if (r.safe.size() + r.flagged.size() != n) ++violations;
      // every input appears exactly once, on the side its confidence demands
      std::size_t s = 0, f = 0;
      for (const auto& [url, conf] : scored) {
        const auto& side = conf >= threshold ? r.flagged : r.safe;
        auto& idx = conf >= threshold ? f : s;
        if (idx >= side.size() || side[idx].url != url || side[idx].confidence != conf) ++violations;
        ++idx;
      }
      if (r.flagged.size() > prev_flagged) ++violations;
      prev_flagged = r.flagged.size();
    }
  }
  const std::string d = "1000 verdict sets x 10 thresholds, " + std::to_string(violations) + " violations";
  return violations == 0 ? pass(d) : fail(d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"whguard acceptance checks"};
  int only = 0;
  std::string dataset;
  app.add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  app.add_option("--dataset", dataset, "labeled URL CSV for criterion 1");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Result()>>> criteria = {
      {1, {"full-dataset accuracy within +-0.05 of the reference table", [&] { return criterion_1(locate_dataset(dataset)); }}},
      {2, {"recall and FPR reported and recomputable from printed cells", criterion_2}},
      {3, {"KNN equals all-pairs brute force", criterion_3}},
      {4, {"best_split equals exhaustive enumeration", criterion_4}},
      {5, {"analytic gradients match central differences", criterion_5}},
      {6, {"single unbagged full-feature forest equals CART", criterion_6}},
      {7, {"boosting lowers training log-loss below the base rate", criterion_7}},
      {8, {"second-order gain worked value 4/3", criterion_8}},
      {9, {"compare outputs byte-identical across runs", criterion_9}},
      {10, {"artifact save/load keeps predictions identical", criterion_10}},
      {11, {"filter conserves inputs and is monotone in threshold", criterion_11}},
  };

  int failures = 0, skips = 0;
  for (const auto& [id, entry] : criteria) {
    if (only != 0 && id != only) continue;
    Result r;
    const auto t0 = Clock::now();
    try {
      r = entry.second();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    const char* tag = r.outcome == Outcome::pass ? "PASS" : r.outcome == Outcome::skip ? "SKIP" : "FAIL";
    std::printf("%s  criterion %2d: %s -- %s [%.2f s]\n", tag, id, entry.first.c_str(), r.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failures += r.outcome == Outcome::fail;
    skips += r.outcome == Outcome::skip;
  }
  if (failures) return 1;
  // a lone skipped criterion is reported to ctest as skipped, never as passed
  if (only != 0 && skips) return kSkipCode;
  return 0;
}
