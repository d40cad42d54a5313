#ifndef STATIONMATCH_NORMALIZE_H_
#define STATIONMATCH_NORMALIZE_H_

#include <iosfwd>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stationmatch {

struct NormalizationRule {
  std::string pattern;
  std::string replacement;  // may reference groups as \1 .. \9
};

// Ordered regex rewrite rules applied to lowercased labels. After all rules
// ran, whitespace runs are collapsed to one space and the result is trimmed.
//
// Rule files are UTF-8, one "pattern<TAB>replacement" per line; a line
// without a tab has an empty replacement. '#' starts a comment line.
// Patterns use ECMAScript syntax on UTF-8 bytes. Invalid patterns throw
// ConfigError at load time.
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(std::vector<NormalizationRule> rules);

  static Normalizer fromStream(std::istream& in);
  static Normalizer fromFile(const std::string& path);

  std::string operator()(std::string_view label) const;

  const std::vector<NormalizationRule>& rules() const { return _rules; }

 private:
  std::vector<NormalizationRule> _rules;
  std::vector<std::pair<std::regex, std::string>> _compiled;
};

}  // namespace stationmatch

#endif  // STATIONMATCH_NORMALIZE_H_
