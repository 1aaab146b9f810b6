#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddix/corpus.hpp"
#include "ddix/subtype.hpp"

namespace ddix::pksubtype {

class NoTrendMatch : public Error {
 public:
  using Error::Error;
};

class NoParamMatch : public Error {
 public:
  using Error::Error;
};

// Keyword tables, keys lowercase. Files hold one "<keyword>\t<VALUE>" pair
// per line; '#' starts a comment line.
struct Dictionaries {
  std::map<std::string, Trend> trend;
  std::map<std::string, PkParameter> param;

  // The tables shipped with the library.
  static Dictionaries seed();
  static Dictionaries from_text(std::string_view trend_text, std::string_view param_text);
  static Dictionaries load(const std::string& trend_path, const std::string& param_path);
};

std::map<std::string, Trend> parse_trend_dict(std::string_view text);
std::map<std::string, PkParameter> parse_param_dict(std::string_view text);

// First token, left to right, found in the table decides.
std::optional<Trend> find_trend(const std::vector<std::string>& tokens, const Dictionaries& d);
std::optional<PkParameter> find_param(const std::vector<std::string>& tokens,
                                      const Dictionaries& d);
Trend match_trend(const std::vector<std::string>& tokens, const Dictionaries& d);
PkParameter match_param(const std::vector<std::string>& tokens, const Dictionaries& d);

// No label drug in the sentence means the concomitant drug is affected.
// Otherwise the closer of (nearest label drug occurrence, precipitant) to the
// trigger is the affected one, with ties going to the label drug.
PkObject resolve_object(const corpus::Sentence& sentence, const Span& trigger,
                        const Span& precipitant, const std::vector<Span>& label_drug_occurrences);

struct Classification {
  PkSubtype subtype;
  bool trend_defaulted = false;
  bool param_defaulted = false;
  bool low_confidence() const { return trend_defaulted || param_defaulted; }
};

// Total: a missing trend becomes INCREASED and a missing parameter LEVEL.
Classification classify(const corpus::Sentence& sentence, const Span& trigger,
                        const Span& precipitant, const std::vector<Span>& label_drug_occurrences,
                        const Dictionaries& dicts);

// Optional mapping from symbolic codes ("INCREASED AUC OF DRUG") to external
// identifiers, one "<code>\t<external id>" per line.
class CodeTable {
 public:
  CodeTable() = default;
  static CodeTable parse(std::string_view text);
  static CodeTable load(const std::string& path);

  // The external id when mapped, the symbolic code otherwise.
  std::string render(const PkSubtype& subtype) const;
  std::size_t size() const { return codes_.size(); }

 private:
  std::map<PkSubtype, std::string> codes_;
};

// All 20 trend x parameter x object combinations in enum order.
std::vector<PkSubtype> all_subtypes();

}  // namespace ddix::pksubtype
