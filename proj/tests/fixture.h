#ifndef MTEVAL_TESTS_FIXTURE_H_
#define MTEVAL_TESTS_FIXTURE_H_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mteval/human.h"

namespace mteval::testing {

// Synthetic evaluation corpus: 2 documents x 10 segments, 4 references,
// three systems and one judge's ratings for every (system, segment).
struct FixturePaths {
  std::filesystem::path manifest;
  std::vector<std::string> system_flags;  // "<id>=<path>"
  std::filesystem::path ratings;
};

inline const std::vector<std::string>& FixtureSystems() {
  static const std::vector<std::string> kSystems = {"गूगल", "बिंग", "ईबीएमटी"};
  return kSystems;
}

inline constexpr int kFixtureDocs = 2;
inline constexpr int kFixtureSegmentsPerDoc = 10;

// Deterministic mixing so fixtures do not depend on library RNG streams.
inline std::uint32_t Mix(std::uint32_t x) {
  x ^= x >> 16;
  x *= 0x7feb352dU;
  x ^= x >> 15;
  x *= 0x846ca68bU;
  x ^= x >> 16;
  return x;
}

inline std::string FixtureWord(int line, int pos) {
  static const std::vector<std::string> kWords = {
      "घर", "यात्रा", "शहर", "मंदिर", "नदी", "किला", "बाजार", "होटल",
      "पर्यटक", "सुंदर", "पुराना", "बड़ा", "है", "में", "का", "की"};
  return kWords[Mix(static_cast<std::uint32_t>(line * 31 + pos)) % kWords.size()];
}

inline std::string Ref(int line, int k) {
  // ref1 has four tokens; later references drop or reorder material.
  std::vector<std::string> t;
  for (int p = 0; p < 4; ++p) t.push_back(FixtureWord(line, p));
  if (k == 2) t.push_back(FixtureWord(line, 7));
  if (k == 3) std::swap(t[0], t[1]);
  if (k == 4) t.insert(t.begin() + 2, FixtureWord(line, 9));
  std::string s;
  for (const auto& w : t) s += (s.empty() ? "" : " ") + w;
  return s + " ।";
}

// `affine`: every hypothesis either equals reference 1 and is rated all 4s,
// or shares no token with any reference and is rated all 0s.
inline FixturePaths WriteFixture(const std::filesystem::path& dir, bool affine) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const int lines = kFixtureDocs * kFixtureSegmentsPerDoc;
  auto write = [&](const std::string& name, const std::vector<std::string>& rows) {
    std::ofstream out(dir / name, std::ios::binary);
    for (const auto& r : rows) out << r << '\n';
    return dir / name;
  };

  std::vector<std::string> manifest;
  for (int d = 0; d < kFixtureDocs; ++d) {
    manifest.push_back("doc" + std::to_string(d + 1) + "\t" +
                       std::to_string(d * kFixtureSegmentsPerDoc + 1) + "\t" +
                       std::to_string((d + 1) * kFixtureSegmentsPerDoc));
  }
  FixturePaths paths;
  paths.manifest = write("manifest.tsv", manifest);

  std::vector<std::string> source;
  for (int i = 0; i < lines; ++i) {
    source.push_back("The tourist visited place number " + std::to_string(i + 1) + ".");
  }
  write("source.txt", source);
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::string> ref;
    for (int i = 0; i < lines; ++i) ref.push_back(Ref(i, k));
    write("ref" + std::to_string(k) + ".txt", ref);
  }

  std::ofstream ratings(dir / "ratings.jsonl", std::ios::binary);
  for (std::size_t s = 0; s < FixtureSystems().size(); ++s) {
    const std::string& sys = FixtureSystems()[s];
    std::vector<std::string> hyps;
    for (int i = 0; i < lines; ++i) {
      const std::uint32_t h = Mix(static_cast<std::uint32_t>(1000 * (s + 1) + i));
      human::RatingRecord rec;
      rec.judge_id = "judge1";
      rec.system_id = sys;
      rec.doc_id = "doc" + std::to_string(i / kFixtureSegmentsPerDoc + 1);
      rec.seg_id = i % kFixtureSegmentsPerDoc + 1;
      rec.timestamp = "2024-01-01T00:00:00Z";
      if (affine) {
        const bool good = (i % 3 == 0) || (h % 2 == 0);
        hyps.push_back(good ? Ref(i, 1)
                            : "zq" + std::to_string(i) + " xv lorem ipsum");
        rec.ratings.assign(10, good ? 4 : 0);
      } else {
        // Keep a prefix of reference 1 and fill the rest with other words.
        const int keep = static_cast<int>(h % 5);
        std::string hyp;
        for (int p = 0; p < 4; ++p) {
          const std::string w = p < keep ? FixtureWord(i, p)
                                         : FixtureWord(i + 3 + static_cast<int>(s), p + 11);
          hyp += (hyp.empty() ? "" : " ") + w;
        }
        if (h % 7 == 0) hyp += " जी";
        hyps.push_back(hyp + " ।");
        for (int c = 0; c < 10; ++c) {
          rec.ratings.push_back(std::min(4, keep + static_cast<int>((h >> (c + 3)) % 2)));
        }
      }
      ratings << human::SerializeRecord(rec) << '\n';
    }
    paths.system_flags.push_back(sys + "=" + write(sys + ".txt", hyps).string());
  }
  paths.ratings = dir / "ratings.jsonl";
  return paths;
}

}  // namespace mteval::testing

#endif  // MTEVAL_TESTS_FIXTURE_H_
