#include "whguard/artifact.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "whguard/error.hpp"

namespace whguard {
namespace {

using nlohmann::json;

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "relu") return Activation::relu;
  if (s == "identity") return Activation::identity;
  throw Error(ErrorCode::CorruptArtifact, "unknown activation '" + s + "'");
}

json to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::CorruptArtifact, "matrix payload size mismatch");
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

json to_json(const Network& net) {
  json layers = json::array();
  for (const auto& layer : net) {
    layers.push_back({{"weights", to_json(layer.weights)},
                      {"biases", layer.biases},
                      {"activation", activation_name(layer.activation)}});
  }
  return layers;
}

Network network_from_json(const json& j) {
  Network net;
  for (const auto& l : j) {
    LayerParams layer{matrix_from_json(l.at("weights")), l.at("biases").get<std::vector<double>>(),
                      parse_activation(l.at("activation").get<std::string>())};
    if (layer.biases.size() != layer.weights.rows() ||
        (!net.empty() && net.back().output_width() != layer.input_width())) {
      throw Error(ErrorCode::CorruptArtifact, "inconsistent layer shapes");
    }
    net.push_back(std::move(layer));
  }
  if (net.empty()) throw Error(ErrorCode::CorruptArtifact, "network has no layers");
  return net;
}

json to_json(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const auto& t : trees) {
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      value.push_back(n.value);
      left.push_back(n.left);
      right.push_back(n.right);
    }
    out.push_back({{"feature", feature}, {"threshold", threshold}, {"value", value},
                   {"left", left}, {"right", right}});
  }
  return out;
}

std::vector<Tree> trees_from_json(const json& j, std::size_t n_features) {
  std::vector<Tree> trees;
  for (const auto& t : j) {
    const auto feature = t.at("feature").get<std::vector<int>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto value = t.at("value").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<int>>();
    const auto right = t.at("right").get<std::vector<int>>();
    const std::size_t n = feature.size();
    if (n == 0 || threshold.size() != n || value.size() != n || left.size() != n ||
        right.size() != n) {
      throw Error(ErrorCode::CorruptArtifact, "tree arrays differ in length");
    }
    Tree tree;
    for (std::size_t i = 0; i < n; ++i) {
      const bool leaf = feature[i] < 0;
      const auto valid_child = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
      if (!leaf && (static_cast<std::size_t>(feature[i]) >= n_features || !valid_child(left[i]) ||
                    !valid_child(right[i]))) {
        throw Error(ErrorCode::CorruptArtifact, "tree node out of range");
      }
      tree.nodes.push_back({feature[i], threshold[i], value[i], left[i], right[i]});
    }
    trees.push_back(std::move(tree));
  }
  return trees;
}

json classifier_to_json(const ClassifierModel& model) {
  json j;
  j["kind"] = short_name(kind_of(model));
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MlpModel>) {
          j["layers"] = to_json(m.layers);
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          j["k"] = m.default_k;
          j["features"] = to_json(m.stored_features);
          j["labels"] = m.stored_labels;
        } else if constexpr (std::is_same_v<M, ForestModel>) {
          j["n_trees"] = m.params.n_trees;
          j["max_depth"] = m.params.max_depth;
          j["m_features"] = m.params.m_features;
          j["bootstrap"] = m.params.bootstrap;
          j["min_samples_leaf"] = m.params.min_samples_leaf;
          j["seed"] = m.params.seed;
          j["n_features"] = m.n_features;
          j["trees"] = to_json(m.trees);
        } else {
          j["init_score"] = m.init_score;
          j["learning_rate"] = m.learning_rate;
          j["lambda"] = m.lambda;
          j["gamma"] = m.gamma;
          j["n_features"] = m.n_features;
          j["trees"] = to_json(m.trees);
        }
      },
      model);
  return j;
}

ClassifierModel classifier_from_json(const json& j) {
  const auto name = j.at("kind").get<std::string>();
  const auto kind = parse_classifier_kind(name);
  if (!kind) throw Error(ErrorCode::CorruptArtifact, "unknown classifier kind '" + name + "'");
  switch (*kind) {
    case ClassifierKind::mlp:
      return MlpModel{network_from_json(j.at("layers"))};
    case ClassifierKind::knn:
      try {
        return make_knn(matrix_from_json(j.at("features")), j.at("labels").get<std::vector<int>>(),
                        j.at("k").get<std::size_t>());
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptArtifact, e.what());
      }
    case ClassifierKind::random_forest: {
      ForestModel m;
      m.params.n_trees = j.at("n_trees").get<std::size_t>();
      m.params.max_depth = j.at("max_depth").get<std::size_t>();
      m.params.m_features = j.at("m_features").get<std::size_t>();
      m.params.bootstrap = j.at("bootstrap").get<bool>();
      m.params.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
      m.params.seed = j.at("seed").get<std::uint64_t>();
      m.n_features = j.at("n_features").get<std::size_t>();
      m.trees = trees_from_json(j.at("trees"), m.n_features);
      return m;
    }
    case ClassifierKind::xgb:
    case ClassifierKind::gradient_boosting: {
      BoostedModel m;
      m.variant = *kind == ClassifierKind::xgb ? BoostingVariant::xgboost_style
                                               : BoostingVariant::gradient_boosting;
      m.init_score = j.at("init_score").get<double>();
      m.learning_rate = j.at("learning_rate").get<double>();
      m.lambda = j.at("lambda").get<double>();
      m.gamma = j.at("gamma").get<double>();
      m.n_features = j.at("n_features").get<std::size_t>();
      m.trees = trees_from_json(j.at("trees"), m.n_features);
      return m;
    }
  }
  throw Error(ErrorCode::CorruptArtifact, "unknown classifier kind");
}

json payload_json(const ModelArtifact& a) {
  json p;
  p["feature_spec"] = {{"keywords", a.spec.keywords()}, {"feature_names", a.spec.feature_names()}};
  p["bounds"] = {{"lower", a.bounds.lower}, {"upper", a.bounds.upper}};
  p["scaler"] = {{"min", a.scaler.min}, {"max", a.scaler.max}};
  if (a.encoder) {
    p["autoencoder"] = {{"encoder", to_json(a.encoder->encoder)},
                        {"decoder", to_json(a.encoder->decoder)}};
  } else {
    p["autoencoder"] = nullptr;
  }
  p["classifier"] = classifier_to_json(a.classifier);
  p["metadata"] = {{"seed", a.metadata.seed},
                   {"dataset_fingerprint", a.metadata.dataset_fingerprint},
                   {"rows", a.metadata.rows},
                   {"malicious_rows", a.metadata.malicious_rows}};
  return p;
}

ModelArtifact artifact_from_payload(const json& p) {
  const auto spec_json = p.at("feature_spec");
  ModelArtifact a{FeatureSpec(spec_json.at("keywords").get<std::vector<std::string>>()),
                  {},
                  {},
                  std::nullopt,
                  MlpModel{},
                  {}};
  if (spec_json.at("feature_names").get<std::vector<std::string>>() != a.spec.feature_names()) {
    throw Error(ErrorCode::CorruptArtifact, "feature names disagree with keywords");
  }
  a.bounds.lower = p.at("bounds").at("lower").get<std::vector<double>>();
  a.bounds.upper = p.at("bounds").at("upper").get<std::vector<double>>();
  a.scaler.min = p.at("scaler").at("min").get<std::vector<double>>();
  a.scaler.max = p.at("scaler").at("max").get<std::vector<double>>();
  const std::size_t d = a.spec.dimension();
  if (a.bounds.lower.size() != d || a.bounds.upper.size() != d || a.scaler.min.size() != d ||
      a.scaler.max.size() != d) {
    throw Error(ErrorCode::CorruptArtifact, "preprocessing width disagrees with feature spec");
  }
  std::size_t classifier_width = d;
  if (const auto& ae = p.at("autoencoder"); !ae.is_null()) {
    a.encoder = AutoencoderModel{network_from_json(ae.at("encoder")),
                                 network_from_json(ae.at("decoder"))};
    if (a.encoder->input_width() != d) {
      throw Error(ErrorCode::CorruptArtifact, "autoencoder width disagrees with feature spec");
    }
    classifier_width = a.encoder->latent_dim();
  }
  a.classifier = classifier_from_json(p.at("classifier"));
  const std::size_t expected = std::visit(
      [](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MlpModel>) return m.input_width();
        else if constexpr (std::is_same_v<M, KnnModel>) return m.stored_features.cols();
        else return m.n_features;
      },
      a.classifier);
  if (expected != classifier_width) {
    throw Error(ErrorCode::CorruptArtifact, "classifier input width disagrees with preprocessing");
  }
  const auto& meta = p.at("metadata");
  a.metadata.seed = meta.at("seed").get<std::uint64_t>();
  a.metadata.dataset_fingerprint = meta.at("dataset_fingerprint").get<std::string>();
  a.metadata.rows = meta.at("rows").get<std::size_t>();
  a.metadata.malicious_rows = meta.at("malicious_rows").get<std::size_t>();
  return a;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::vector<double> transform_features(const ModelArtifact& artifact, std::span<const double> raw) {
  if (raw.size() != artifact.spec.dimension()) {
    throw Error(ErrorCode::FeatureSpecMismatch,
                "artifact expects " + std::to_string(artifact.spec.dimension()) + " features, got " +
                    std::to_string(raw.size()));
  }
  std::vector<double> row(raw.begin(), raw.end());
  apply_bounds(artifact.bounds, row);
  apply_scaler(artifact.scaler, row);
  if (artifact.encoder) return encode(*artifact.encoder, row);
  return row;
}

Matrix transform_rows(const ModelArtifact& artifact, const Matrix& raw_features) {
  Matrix out;
  for (std::size_t r = 0; r < raw_features.rows(); ++r) {
    out.append_row(transform_features(artifact, raw_features.row(r)));
  }
  return out;
}

double predict_url(const ModelArtifact& artifact, std::string_view url) {
  const auto raw = extract_features(url, artifact.spec);
  return predict_proba(artifact.classifier, transform_features(artifact, raw));
}

std::string serialize_artifact(const ModelArtifact& artifact) {
  const json payload = payload_json(artifact);
  json doc;
  doc["format_version"] = kArtifactFormatVersion;
  doc["created_at"] = artifact.metadata.created_at;
  doc["checksum"] = sha256_hex(payload.dump());
  doc["payload"] = payload;
  return doc.dump() + "\n";
}

ModelArtifact deserialize_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version") ||
        !doc["format_version"].is_number_integer()) {
      throw Error(ErrorCode::CorruptArtifact, "missing format_version");
    }
    const auto version = doc["format_version"].get<long long>();
    if (version != kArtifactFormatVersion) {
      throw Error(ErrorCode::UnsupportedVersion,
                  "format_version " + std::to_string(version) + " (supported: " +
                      std::to_string(kArtifactFormatVersion) + ")");
    }
    const json& payload = doc.at("payload");
    if (doc.at("checksum").get<std::string>() != sha256_hex(payload.dump())) {
      throw Error(ErrorCode::CorruptArtifact, "checksum mismatch");
    }
    ModelArtifact a = artifact_from_payload(payload);
    a.metadata.created_at = doc.value("created_at", std::string{});
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedVersion || e.code() == ErrorCode::CorruptArtifact) throw;
    throw Error(ErrorCode::CorruptArtifact, e.what());
  }
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
  const std::string text = serialize_artifact(artifact);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_artifact(buf.str());
}

}  // namespace whguard
