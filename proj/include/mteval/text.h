#ifndef MTEVAL_TEXT_H_
#define MTEVAL_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mteval::text {

// NFC composition, whitespace runs collapsed to one ASCII space, ends trimmed.
std::string Normalize(std::string_view raw);

// Number of Unicode code points in a UTF-8 string.
std::size_t CodePointLength(std::string_view utf8);

bool IsPunctuationToken(std::string_view token);

// Lowercases Latin-script code points only; everything else passes through.
std::string FoldLatinCase(std::string_view token);

class TokenSequence {
 public:
  TokenSequence() = default;
  // Throws EvalError(kInvalidArgument) on an empty token or embedded whitespace.
  explicit TokenSequence(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  std::string Join() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<std::string> tokens_;
};

// Splits normalized text on whitespace; every punctuation code point (Latin
// punctuation, danda, double danda, ...) becomes its own token.
TokenSequence Tokenize(std::string_view normalized);

struct TextOptions {
  bool fold_latin_case = true;
  bool keep_punctuation = true;
};

// Normalize + Tokenize + optional case folding and punctuation removal.
TokenSequence Prepare(std::string_view raw, const TextOptions& options = {});

class SuffixInventory {
 public:
  SuffixInventory() = default;
  // Deduplicates and orders by descending code-point length (stable for ties).
  explicit SuffixInventory(std::vector<std::string> suffixes,
                           std::size_t min_stem_len = 1);

  // One suffix per line; '#' starts a comment line; blank lines ignored.
  static SuffixInventory Parse(std::istream& in, std::size_t min_stem_len = 1);
  static SuffixInventory Load(const std::filesystem::path& path,
                              std::size_t min_stem_len = 1);
  // data/hindi_suffixes.txt from the source tree.
  static SuffixInventory LoadDefault();

  const std::vector<std::string>& suffixes() const { return suffixes_; }
  std::size_t min_stem_len() const { return min_stem_len_; }

 private:
  std::vector<std::string> suffixes_;
  std::size_t min_stem_len_ = 1;
};

std::filesystem::path DefaultSuffixPath();

// Strips the single longest inventory suffix that leaves at least
// min_stem_len code points. One pass, no recursion.
std::string Stem(std::string_view token, const SuffixInventory& inventory);

class SynonymLexicon {
 public:
  // Lines are `id<TAB>token<TAB>token...`.
  static SynonymLexicon Parse(std::istream& in, const TextOptions& options = {});
  static SynonymLexicon Load(const std::filesystem::path& path,
                             const TextOptions& options = {});

  void Add(const std::string& synset_id, const std::string& token);
  const std::set<std::string>* SynsetsOf(const std::string& token) const;
  std::size_t size() const { return membership_.size(); }

 private:
  std::map<std::string, std::set<std::string>> membership_;
};

// True iff a != b and the synset-id sets of a and b intersect.
bool SynonymsMatch(const std::string& a, const std::string& b,
                   const SynonymLexicon& lexicon);

using Phrase = std::vector<std::string>;

class ParaphraseTable {
 public:
  // Lines are `phrase<TAB>phrase`, tokens space-separated inside a phrase.
  static ParaphraseTable Parse(std::istream& in, const TextOptions& options = {});
  static ParaphraseTable Load(const std::filesystem::path& path,
                              const TextOptions& options = {});

  // Registers the pair in both directions. Duplicates are absorbed.
  void Add(const Phrase& a, const Phrase& b);
  const std::set<Phrase>* Equivalents(std::span<const std::string> phrase) const;
  bool Matches(std::span<const std::string> a,
               std::span<const std::string> b) const;
  std::size_t max_phrase_len() const { return max_phrase_len_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<Phrase, std::set<Phrase>> table_;
  std::size_t max_phrase_len_ = 0;
};

}  // namespace mteval::text

#endif  // MTEVAL_TEXT_H_
