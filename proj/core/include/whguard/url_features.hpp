#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace whguard {

struct UrlParts {
  std::string scheme;  // lowercased, empty when the URL carries no "://"
  std::string host;    // lowercased
  std::string path;    // starts with '/' when present
  std::string query;   // text after the first '?', without the '?'
  bool host_is_ip = false;

  friend bool operator==(const UrlParts&, const UrlParts&) = default;
};

// Throws Error(EmptyUrl) for empty or whitespace-only input.
UrlParts parse_url(std::string_view raw);

// Four decimal octets in 0..255 separated by dots.
bool is_dotted_quad(std::string_view host) noexcept;

inline constexpr std::array<std::string_view, 12> kLexicalFeatureNames = {
    "url_length",  "host_length", "path_length",    "count_dots",
    "count_hyphens", "count_digits", "count_special", "digit_ratio",
    "path_depth",  "num_subdomains", "has_https",   "host_is_ip",
};

inline constexpr std::array<std::string_view, 6> kDefaultKeywords = {
    "login", "secure", "account", "verify", "bank", "free",
};

// Column layout of a feature vector: the fixed lexical block followed by one
// "kw_<keyword>" flag per keyword, in keyword order.
class FeatureSpec {
 public:
  FeatureSpec();
  // Keywords are lowercased; empty or duplicate keywords throw InvalidArgument.
  explicit FeatureSpec(std::vector<std::string> keywords);

  static FeatureSpec with_extra_keywords(const std::vector<std::string>& extra);

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  std::size_t dimension() const noexcept { return names_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const FeatureSpec& a, const FeatureSpec& b) {
    return a.keywords_ == b.keywords_;
  }

 private:
  std::vector<std::string> keywords_;
  std::vector<std::string> names_;
};

using FeatureVector = std::vector<double>;

FeatureVector extract_features(std::string_view raw, const FeatureSpec& spec);

const std::vector<std::string>& feature_names(const FeatureSpec& spec);

}  // namespace whguard
