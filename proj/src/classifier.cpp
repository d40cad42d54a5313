#include "stationmatch/classifier.h"

#include <array>
#include <stdexcept>
#include <string>

namespace stationmatch {

namespace {

constexpr std::array<std::pair<Measure, std::string_view>, 8> kMeasureNames = {{
    {Measure::Position, "P"},
    {Measure::Ed, "ED"},
    {Measure::Ped, "PED"},
    {Measure::Jaro, "J"},
    {Measure::JaroWinkler, "JW"},
    {Measure::Jaccard, "JAC"},
    {Measure::Bts, "BTS"},
    {Measure::Tfidf, "TFIDF"},
}};

}  // namespace

// _____________________________________________________________________________
std::string_view measureName(Measure m) {
  for (const auto& [mm, name] : kMeasureNames) {
    if (mm == m) return name;
  }
  return "?";
}

// _____________________________________________________________________________
std::optional<Measure> parseMeasure(std::string_view name) {
  for (const auto& [m, n] : kMeasureNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

// _____________________________________________________________________________
PairView view(const StationIdentifier& a, const StationIdentifier& b) {
  return {a.label(), a.pos(), b.label(), b.pos()};
}

// _____________________________________________________________________________
double labelScore(Measure m, std::string_view a, std::string_view b,
                  const MeasureContext& ctx) {
  switch (m) {
    case Measure::Ed:
      return edSimilarity(a, b);
    case Measure::Ped:
      return pedSimilarity(a, b);
    case Measure::Jaro:
      return jaro(a, b);
    case Measure::JaroWinkler:
      return jaroWinkler(a, b);
    case Measure::Jaccard:
      return jaccard(a, b);
    case Measure::Bts:
      return bts(a, b, ctx.bts);
    case Measure::Tfidf:
      if (!ctx.tfidf) throw std::logic_error("TFIDF measure needs a model");
      return ctx.tfidf->similarity(a, b);
    case Measure::Position:
      break;
  }
  throw std::invalid_argument("position is not a label measure");
}

// _____________________________________________________________________________
double rescale(double sim, double t) {
  if (!(t > 0 && t < 1)) {
    throw std::invalid_argument("threshold must be in (0, 1), got " +
                                std::to_string(t));
  }
  if (sim > t) return 0.5 + (sim - t) / (2 * (1 - t));
  return sim / (2 * t);
}

// _____________________________________________________________________________
ThresholdedMeasure::ThresholdedMeasure(Measure m, double threshold)
    : _measure(m), _threshold(threshold) {
  if (m == Measure::Position) {
    if (!(threshold > 0)) {
      throw std::invalid_argument("distance threshold must be > 0 meters");
    }
  } else if (!(threshold > 0 && threshold < 1)) {
    throw std::invalid_argument("similarity threshold must be in (0, 1)");
  }
}

// _____________________________________________________________________________
double ThresholdedMeasure::rescaledScore(const PairView& p,
                                         const MeasureContext& ctx) const {
  if (_measure == Measure::Position) {
    return positionSimilarity(p.posA, p.posB, _threshold);
  }
  return rescale(labelScore(_measure, p.labelA, p.labelB, ctx), _threshold);
}

// _____________________________________________________________________________
PairClass classifyPeq(const StationIdentifier& a, const StationIdentifier& b,
                      double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  return pairClassFromBool(geoDistance(a.pos(), b.pos()) < epsilon);
}

// _____________________________________________________________________________
PairClass classifyLeq(const StationIdentifier& a, const StationIdentifier& b) {
  return pairClassFromBool(a.label() == b.label());
}

// _____________________________________________________________________________
PairClass classifyMeasure(const PairView& p, const ThresholdedMeasure& tm,
                          const MeasureContext& ctx) {
  return pairClassFromBool(tm.rescaledScore(p, ctx) > 0.5);
}

// _____________________________________________________________________________
VotingClassifier::VotingClassifier(std::vector<ThresholdedMeasure> members,
                                   VotingMode mode)
    : _members(std::move(members)), _mode(mode) {
  if (_members.empty()) {
    throw std::invalid_argument("voting classifier needs at least one member");
  }
}

// _____________________________________________________________________________
PairClass VotingClassifier::classify(const PairView& p,
                                     const MeasureContext& ctx) const {
  if (_mode == VotingMode::Soft) {
    double sum = 0;
    for (const auto& m : _members) sum += m.rescaledScore(p, ctx);
    return pairClassFromBool(sum > 0.5 * _members.size());
  }
  std::size_t yes = 0;
  for (const auto& m : _members) {
    yes += classifyMeasure(p, m, ctx) == PairClass::Similar;
  }
  return pairClassFromBool(2 * yes > _members.size());
}

}  // namespace stationmatch
