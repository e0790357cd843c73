#ifndef MTEVAL_SCORE_H_
#define MTEVAL_SCORE_H_

#include <string>
#include <string_view>

namespace mteval {

enum class Level { kSegment, kDocument, kSystem };

std::string_view LevelName(Level level);

struct MetricScore {
  double value = 0.0;  // always within [0, 1]
  std::string config_id;
  Level level = Level::kSegment;
};

}  // namespace mteval

#endif  // MTEVAL_SCORE_H_
