#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <string>

#include "test_support.hpp"
#include "whguard/error.hpp"
#include "whguard/url_features.hpp"

namespace whguard {
namespace {

double feature(const FeatureVector& v, const FeatureSpec& spec, std::string_view name) {
  return v.at(spec.index_of(name).value());
}

TEST(ParseUrl, SplitsIpHostUrl) {
  const auto parts = parse_url("http://192.168.0.1/login");
  EXPECT_EQ(parts, (UrlParts{"http", "192.168.0.1", "/login", "", true}));
}

TEST(ParseUrl, SchemeAbsentStartsAtHost) {
  EXPECT_EQ(parse_url("example.com"), (UrlParts{"", "example.com", "", "", false}));
}

TEST(ParseUrl, LowercasesSchemeAndHostOnly) {
  const auto parts = parse_url("  HTTPS://WWW.Example.COM/Path/To?Q=AbC  ");
  EXPECT_EQ(parts.scheme, "https");
  EXPECT_EQ(parts.host, "www.example.com");
  EXPECT_EQ(parts.path, "/Path/To");
  EXPECT_EQ(parts.query, "Q=AbC");
}

TEST(ParseUrl, QueryWithoutPath) {
  const auto parts = parse_url("host.org?a=1/2");
  EXPECT_EQ(parts.host, "host.org");
  EXPECT_EQ(parts.path, "");
  EXPECT_EQ(parts.query, "a=1/2");
}

TEST(ParseUrl, EmptyInputIsRejected) {
  for (const char* raw : {"", "   ", "\t\n"}) {
    try {
      parse_url(raw);
      FAIL() << "expected EmptyUrl for '" << raw << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyUrl);
    }
  }
}

TEST(ParseUrl, SegmentsReassembleToInput) {
  Rng rng(11);
  const std::string alphabet = "abcXYZ019./?=&-_%@~";
  for (int i = 0; i < 500; ++i) {
    std::string raw = rng.below(2) ? "http://" : "";
    const auto len = 1 + rng.below(40);
    for (std::uint64_t c = 0; c < len; ++c) raw += alphabet[rng.below(alphabet.size())];
    if (raw.find_first_not_of(" ") == std::string::npos || raw == "http://") continue;
    const auto p = parse_url(raw);
    std::string rebuilt = (p.scheme.empty() ? "" : p.scheme + "://") + p.host + p.path;
    if (raw.find('?', raw.find("://") == std::string::npos ? 0 : raw.find("://") + 3) !=
        std::string::npos) {
      rebuilt += "?" + p.query;
    }
    std::string lowered = raw;
    const auto host_begin = raw.find("://") == std::string::npos ? 0 : raw.find("://") + 3;
    const auto host_end = std::min(raw.find_first_of("/?", host_begin), raw.size());
    std::transform(lowered.begin(), lowered.begin() + static_cast<long>(host_end), lowered.begin(),
                   [](char c) { return static_cast<char>(std::tolower(c)); });
    EXPECT_EQ(rebuilt, lowered) << raw;
  }
}

TEST(DottedQuad, AcceptsOnlyFourOctets) {
  EXPECT_TRUE(is_dotted_quad("0.0.0.0"));
  EXPECT_TRUE(is_dotted_quad("255.255.255.255"));
  EXPECT_FALSE(is_dotted_quad("256.1.1.1"));
  EXPECT_FALSE(is_dotted_quad("1.2.3"));
  EXPECT_FALSE(is_dotted_quad("1.2.3.4.5"));
  EXPECT_FALSE(is_dotted_quad("1.2.3.4:80"));
  EXPECT_FALSE(is_dotted_quad("1..3.4"));
  EXPECT_FALSE(is_dotted_quad("1.2.3.4."));
  EXPECT_FALSE(is_dotted_quad("1234.1.1.1"));
  EXPECT_FALSE(is_dotted_quad("a.b.c.d"));
}

TEST(FeatureSpec, DefaultCatalogHas18Columns) {
  const FeatureSpec spec;
  ASSERT_EQ(feature_names(spec).size(), 18u);
  EXPECT_EQ(spec.index_of("url_length"), 0u);
  EXPECT_EQ(feature_names(spec)[12], "kw_login");
  EXPECT_EQ(feature_names(spec).back(), "kw_free");
}

TEST(FeatureSpec, ExtraKeywordsAppend) {
  const auto spec = FeatureSpec::with_extra_keywords({"paypal", "Update"});
  ASSERT_EQ(feature_names(spec).size(), 20u);
  EXPECT_EQ(feature_names(spec)[19], "kw_update");
}

TEST(FeatureSpec, RejectsDuplicateAndEmptyKeywords) {
  EXPECT_THROW(FeatureSpec::with_extra_keywords({"login"}), Error);
  EXPECT_THROW(FeatureSpec({"a", ""}), Error);
}

TEST(ExtractFeatures, IpLoginUrl) {
  const FeatureSpec spec;
  const auto v = extract_features("http://192.168.0.1/login", spec);
  ASSERT_EQ(v.size(), spec.dimension());
  EXPECT_EQ(feature(v, spec, "url_length"), 24.0);
  EXPECT_EQ(feature(v, spec, "host_is_ip"), 1.0);
  EXPECT_EQ(feature(v, spec, "kw_login"), 1.0);
  EXPECT_EQ(feature(v, spec, "has_https"), 0.0);
  EXPECT_EQ(feature(v, spec, "count_digits"), 8.0);
  EXPECT_EQ(feature(v, spec, "count_dots"), 3.0);
  EXPECT_EQ(feature(v, spec, "path_depth"), 1.0);
  EXPECT_EQ(feature(v, spec, "num_subdomains"), 2.0);
  EXPECT_DOUBLE_EQ(feature(v, spec, "digit_ratio"), 8.0 / 24.0);
}

TEST(ExtractFeatures, HttpsNoDigits) {
  const FeatureSpec spec;
  const auto v = extract_features("https://example.com", spec);
  EXPECT_EQ(feature(v, spec, "has_https"), 1.0);
  EXPECT_EQ(feature(v, spec, "count_digits"), 0.0);
  EXPECT_EQ(feature(v, spec, "kw_login"), 0.0);
  EXPECT_EQ(feature(v, spec, "num_subdomains"), 0.0);
  EXPECT_EQ(feature(v, spec, "path_length"), 0.0);
}

TEST(ExtractFeatures, KeywordsAreCaseInsensitive) {
  const FeatureSpec spec;
  const auto v = extract_features("Example.com/SeCuRe-LOGIN?Bank=Free", spec);
  for (const char* kw : {"kw_secure", "kw_login", "kw_bank", "kw_free"}) {
    EXPECT_EQ(feature(v, spec, kw), 1.0) << kw;
  }
  EXPECT_EQ(feature(v, spec, "kw_account"), 0.0);
}

TEST(ExtractFeatures, SpecialCharactersAndMalformedEscapes) {
  const FeatureSpec spec;
  const auto v = extract_features("a.com/%zz%4?x=1&y=~_@", spec);
  // @ ? = & % _ ~ : two '%', one each of the rest, one extra '='
  EXPECT_EQ(feature(v, spec, "count_special"), 9.0);
  EXPECT_EQ(feature(v, spec, "url_length"), 21.0);
}

TEST(ExtractFeatures, Deterministic) {
  const FeatureSpec spec;
  const std::string u = "https://secure-account.verify.example.net/a/b/c?id=99";
  EXPECT_EQ(extract_features(u, spec), extract_features(u, spec));
}

TEST(ExtractFeatures, PropertiesOverRandomUrls) {
  const FeatureSpec base;
  const auto extended = FeatureSpec::with_extra_keywords({"paypal", "php"});
  Rng rng(99);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyzLOGIN0123456789./-_?=&%@~:";
  for (int i = 0; i < 1000; ++i) {
    std::string u;
    const auto len = 1 + rng.below(120);
    for (std::uint64_t c = 0; c < len; ++c) u += alphabet[rng.below(alphabet.size())];
    const auto v = extract_features(u, base);
    ASSERT_EQ(v.size(), feature_names(base).size());
    EXPECT_EQ(v[0], static_cast<double>(u.size()));  // url_length is the character count
    const double ratio = feature(v, base, "digit_ratio");
    EXPECT_GE(ratio, 0.0);
    EXPECT_LE(ratio, 1.0);
    for (const char* flag : {"has_https", "host_is_ip", "kw_login", "kw_free"}) {
      const double f = feature(v, base, flag);
      EXPECT_TRUE(f == 0.0 || f == 1.0);
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (base.feature_names()[j] == "digit_ratio") continue;
      EXPECT_GE(v[j], 0.0);
      EXPECT_EQ(v[j], std::floor(v[j]));
    }
    // Appending keywords leaves the existing columns untouched.
    const auto w = extract_features(u, extended);
    ASSERT_EQ(w.size(), v.size() + 2);
    EXPECT_TRUE(std::equal(v.begin(), v.end(), w.begin()));
  }
}

}  // namespace
}  // namespace whguard
