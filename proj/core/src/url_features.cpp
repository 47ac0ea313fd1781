#include "whguard/url_features.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "whguard/error.hpp"

namespace whguard {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_special(char c) {
  switch (c) {
    case '@': case '?': case '=': case '&': case '%': case '_': case '~':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_dotted_quad(std::string_view host) noexcept {
  int octets = 0;
  while (true) {
    std::size_t len = 0;
    int value = 0;
    while (len < host.size() && is_digit(host[len])) {
      value = value * 10 + (host[len] - '0');
      if (++len > 3) return false;
    }
    if (len == 0 || value > 255) return false;
    ++octets;
    host.remove_prefix(len);
    if (host.empty()) return octets == 4;
    if (host.front() != '.' || octets == 4) return false;
    host.remove_prefix(1);
  }
}

UrlParts parse_url(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.empty()) {
    throw Error(ErrorCode::EmptyUrl, "URL is empty or whitespace-only");
  }
  UrlParts parts;
  if (const auto sep = s.find("://"); sep != std::string_view::npos) {
    parts.scheme = to_lower(s.substr(0, sep));
    s.remove_prefix(sep + 3);
  }
  const auto host_end = s.find_first_of("/?");
  parts.host = to_lower(s.substr(0, host_end));
  if (host_end != std::string_view::npos) {
    s.remove_prefix(host_end);
    const auto q = s.find('?');
    parts.path = std::string(s.substr(0, q));
    if (q != std::string_view::npos) {
      parts.query = std::string(s.substr(q + 1));
    }
  }
  parts.host_is_ip = is_dotted_quad(parts.host);
  return parts;
}

FeatureSpec::FeatureSpec()
    : FeatureSpec(std::vector<std::string>(kDefaultKeywords.begin(), kDefaultKeywords.end())) {}

FeatureSpec::FeatureSpec(std::vector<std::string> keywords) : keywords_(std::move(keywords)) {
  std::set<std::string, std::less<>> seen;
  names_.assign(kLexicalFeatureNames.begin(), kLexicalFeatureNames.end());
  for (auto& kw : keywords_) {
    kw = to_lower(kw);
    if (kw.empty()) {
      throw Error(ErrorCode::InvalidArgument, "keyword must be non-empty");
    }
    if (!seen.insert(kw).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate keyword '" + kw + "'");
    }
    names_.push_back("kw_" + kw);
  }
}

FeatureSpec FeatureSpec::with_extra_keywords(const std::vector<std::string>& extra) {
  std::vector<std::string> all(kDefaultKeywords.begin(), kDefaultKeywords.end());
  all.insert(all.end(), extra.begin(), extra.end());
  return FeatureSpec(std::move(all));
}

std::optional<std::size_t> FeatureSpec::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

const std::vector<std::string>& feature_names(const FeatureSpec& spec) {
  return spec.feature_names();
}

FeatureVector extract_features(std::string_view raw, const FeatureSpec& spec) {
  const UrlParts parts = parse_url(raw);
  const std::string_view url = trim(raw);

  double dots = 0, hyphens = 0, digits = 0, special = 0;
  for (const char c : url) {
    dots += c == '.';
    hyphens += c == '-';
    digits += is_digit(c);
    special += is_special(c);
  }
  const double host_dots = static_cast<double>(std::count(parts.host.begin(), parts.host.end(), '.'));

  FeatureVector v;
  v.reserve(spec.dimension());
  v.push_back(static_cast<double>(url.size()));
  v.push_back(static_cast<double>(parts.host.size()));
  v.push_back(static_cast<double>(parts.path.size()));
  v.push_back(dots);
  v.push_back(hyphens);
  v.push_back(digits);
  v.push_back(special);
  v.push_back(digits / static_cast<double>(url.size()));
  v.push_back(static_cast<double>(std::count(parts.path.begin(), parts.path.end(), '/')));
  v.push_back(std::max(0.0, host_dots - 1.0));
  v.push_back(parts.scheme == "https" ? 1.0 : 0.0);
  v.push_back(parts.host_is_ip ? 1.0 : 0.0);

  const std::string lowered = to_lower(url);
  for (const auto& kw : spec.keywords()) {
    v.push_back(lowered.find(kw) != std::string::npos ? 1.0 : 0.0);
  }
  return v;
}

}  // namespace whguard
