#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ddix {

enum class Trend { Increased, Decreased };
enum class PkParameter { Auc, Cmax, HalfLife, Level, Tmax };
enum class PkObject { Drug, ConcomitantDrug };

inline constexpr std::array<Trend, 2> kAllTrends = {Trend::Increased, Trend::Decreased};
inline constexpr std::array<PkParameter, 5> kAllPkParameters = {
    PkParameter::Auc, PkParameter::Cmax, PkParameter::HalfLife, PkParameter::Level,
    PkParameter::Tmax};
inline constexpr std::array<PkObject, 2> kAllPkObjects = {PkObject::Drug,
                                                          PkObject::ConcomitantDrug};

std::string_view to_string(Trend trend);
std::string_view to_string(PkParameter parameter);
std::string_view to_string(PkObject object);
std::optional<Trend> parse_trend(std::string_view text);
std::optional<PkParameter> parse_pk_parameter(std::string_view text);
std::optional<PkObject> parse_pk_object(std::string_view text);

// One cell of the trend x parameter x object grid of pharmacokinetic effects.
struct PkSubtype {
  Trend trend = Trend::Increased;
  PkParameter parameter = PkParameter::Level;
  PkObject object = PkObject::Drug;

  // "<TREND> <PARAMETER> OF <OBJECT>", e.g. "DECREASED LEVEL OF CONCOMITANT_DRUG".
  std::string code() const;
  static std::optional<PkSubtype> parse(std::string_view code);

  friend auto operator<=>(const PkSubtype&, const PkSubtype&) = default;
};

}  // namespace ddix
