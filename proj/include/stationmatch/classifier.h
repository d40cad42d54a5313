#ifndef STATIONMATCH_CLASSIFIER_H_
#define STATIONMATCH_CLASSIFIER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stationmatch/geo.h"
#include "stationmatch/similarity.h"
#include "stationmatch/station.h"

namespace stationmatch {

enum class Measure {
  Position,
  Ed,
  Ped,
  Jaro,
  JaroWinkler,
  Jaccard,
  Bts,
  Tfidf
};

// "P", "ED", "PED", "J", "JW", "JAC", "BTS", "TFIDF"
std::string_view measureName(Measure m);
std::optional<Measure> parseMeasure(std::string_view name);

// Read-only state some measures need. tfidf must be set to score Tfidf.
struct MeasureContext {
  const TfidfModel* tfidf = nullptr;
  BtsOptions bts;
};

// A pair as seen by the classifiers: labels may already be normalized and
// are therefore allowed to be empty.
struct PairView {
  std::string_view labelA;
  LatLng posA;
  std::string_view labelB;
  LatLng posB;
};

PairView view(const StationIdentifier& a, const StationIdentifier& b);

// Raw label similarity in [0, 1]. Not defined for Position (which needs its
// distance threshold); use positionSimilarity().
double labelScore(Measure m, std::string_view a, std::string_view b,
                  const MeasureContext& ctx);

// Piecewise-linear map with f(0) = 0, f(t) = 0.5, f(1) = 1.
// Requires 0 < t < 1 and 0 <= sim <= 1.
double rescale(double sim, double t);

// A measure paired with its threshold: meters (> 0) for Position, a score in
// (0, 1) for label measures.
class ThresholdedMeasure {
 public:
  ThresholdedMeasure(Measure m, double threshold);

  Measure measure() const { return _measure; }
  double threshold() const { return _threshold; }

  // Score with 0.5 at the threshold: position similarity with d_hat = t, or
  // rescale(labelScore, t).
  double rescaledScore(const PairView& p, const MeasureContext& ctx) const;

 private:
  Measure _measure;
  double _threshold;
};

// Position equivalency: Similar iff distance < epsilon.
PairClass classifyPeq(const StationIdentifier& a, const StationIdentifier& b,
                      double epsilon);

// Label equivalency: Similar iff the labels are byte-equal.
PairClass classifyLeq(const StationIdentifier& a, const StationIdentifier& b);

// Similar iff the rescaled score is > 0.5.
PairClass classifyMeasure(const PairView& p, const ThresholdedMeasure& tm,
                          const MeasureContext& ctx);

enum class VotingMode { Soft, Hard };

class VotingClassifier {
 public:
  VotingClassifier(std::vector<ThresholdedMeasure> members, VotingMode mode);

  const std::vector<ThresholdedMeasure>& members() const { return _members; }
  VotingMode mode() const { return _mode; }

  // Soft: mean rescaled score > 0.5. Hard: strict majority of member
  // decisions; ties resolve to NotSimilar.
  PairClass classify(const PairView& p, const MeasureContext& ctx) const;

 private:
  std::vector<ThresholdedMeasure> _members;
  VotingMode _mode;
};

inline PairClass classifyVoting(const PairView& p, const VotingClassifier& vc,
                                const MeasureContext& ctx) {
  return vc.classify(p, ctx);
}

}  // namespace stationmatch

#endif  // STATIONMATCH_CLASSIFIER_H_
