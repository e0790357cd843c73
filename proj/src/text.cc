#include "mteval/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mteval/error.h"

namespace mteval::text {
namespace {

// Decodes one code point starting at `pos`, advancing it. Malformed bytes
// decode to a negative value and advance by one byte.
UChar32 NextCodePoint(std::string_view s, std::size_t& pos) {
  UChar32 c;
  int32_t i = static_cast<int32_t>(pos);
  U8_NEXT(s.data(), i, static_cast<int32_t>(s.size()), c);
  pos = static_cast<std::size_t>(i);
  return c;
}

void AppendCodePoint(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

bool IsSpace(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }
bool IsPunct(UChar32 c) { return c >= 0 && u_ispunct(c); }

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string CleanToken(std::string_view raw, const TextOptions& options) {
  std::string token = Normalize(raw);
  return options.fold_latin_case ? FoldLatinCase(token) : token;
}

Phrase ParsePhrase(const std::string& field, const TextOptions& options) {
  Phrase phrase;
  for (const auto& tok : Tokenize(Normalize(field))) {
    phrase.push_back(options.fold_latin_case ? FoldLatinCase(tok) : tok);
  }
  return phrase;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw EvalError(ErrorCode::kIo, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

std::string Normalize(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  std::string composed;
  if (U_SUCCESS(status)) {
    icu::UnicodeString ustr = icu::UnicodeString::fromUTF8(
        icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    icu::UnicodeString out = nfc->normalize(ustr, status);
    if (U_SUCCESS(status)) out.toUTF8String(composed);
  }
  if (U_FAILURE(status)) composed.assign(raw);

  std::string result;
  result.reserve(composed.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < composed.size()) {
    const std::size_t start = pos;
    const UChar32 c = NextCodePoint(composed, pos);
    if (IsSpace(c)) {
      pending_space = !result.empty();
      continue;
    }
    if (pending_space) {
      result.push_back(' ');
      pending_space = false;
    }
    result.append(composed, start, pos - start);
  }
  return result;
}

std::size_t CodePointLength(std::string_view utf8) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    NextCodePoint(utf8, pos);
    ++count;
  }
  return count;
}

bool IsPunctuationToken(std::string_view token) {
  if (token.empty()) return false;
  std::size_t pos = 0;
  while (pos < token.size()) {
    if (!IsPunct(NextCodePoint(token, pos))) return false;
  }
  return true;
}

std::string FoldLatinCase(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  std::size_t pos = 0;
  while (pos < token.size()) {
    const std::size_t start = pos;
    const UChar32 c = NextCodePoint(token, pos);
    UErrorCode status = U_ZERO_ERROR;
    if (c >= 0 && uscript_getScript(c, &status) == USCRIPT_LATIN &&
        U_SUCCESS(status)) {
      AppendCodePoint(out, u_tolower(c));
    } else {
      out.append(token, start, pos - start);
    }
  }
  return out;
}

TokenSequence::TokenSequence(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (const auto& tok : tokens_) {
    if (tok.empty()) {
      throw EvalError(ErrorCode::kInvalidArgument, "empty token");
    }
    std::size_t pos = 0;
    while (pos < tok.size()) {
      if (IsSpace(NextCodePoint(tok, pos))) {
        throw EvalError(ErrorCode::kInvalidArgument,
                        "token contains whitespace: '" + tok + "'");
      }
    }
  }
}

std::string TokenSequence::Join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens_[i];
  }
  return out;
}

TokenSequence Tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t start = pos;
    const UChar32 c = NextCodePoint(normalized, pos);
    if (IsSpace(c)) {
      flush();
    } else if (IsPunct(c)) {
      flush();
      tokens.emplace_back(normalized.substr(start, pos - start));
    } else {
      current.append(normalized, start, pos - start);
    }
  }
  flush();
  return TokenSequence(std::move(tokens));
}

TokenSequence Prepare(std::string_view raw, const TextOptions& options) {
  TokenSequence seq = Tokenize(Normalize(raw));
  if (options.fold_latin_case == false && options.keep_punctuation) return seq;
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (const auto& tok : seq) {
    if (!options.keep_punctuation && IsPunctuationToken(tok)) continue;
    out.push_back(options.fold_latin_case ? FoldLatinCase(tok) : tok);
  }
  return TokenSequence(std::move(out));
}

SuffixInventory::SuffixInventory(std::vector<std::string> suffixes,
                                 std::size_t min_stem_len)
    : min_stem_len_(min_stem_len) {
  for (auto& s : suffixes) {
    if (s.empty()) {
      throw EvalError(ErrorCode::kInvalidArgument, "empty suffix");
    }
    if (std::find(suffixes_.begin(), suffixes_.end(), s) == suffixes_.end()) {
      suffixes_.push_back(std::move(s));
    }
  }
  std::stable_sort(suffixes_.begin(), suffixes_.end(),
                   [](const std::string& a, const std::string& b) {
                     return CodePointLength(a) > CodePointLength(b);
                   });
}

SuffixInventory SuffixInventory::Parse(std::istream& in,
                                       std::size_t min_stem_len) {
  std::vector<std::string> suffixes;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = Trim(line);
    if (s.empty() || s.front() == '#') continue;
    suffixes.push_back(Normalize(s));
  }
  return SuffixInventory(std::move(suffixes), min_stem_len);
}

SuffixInventory SuffixInventory::Load(const std::filesystem::path& path,
                                      std::size_t min_stem_len) {
  auto in = OpenOrThrow(path);
  return Parse(in, min_stem_len);
}

std::filesystem::path DefaultSuffixPath() {
  return std::filesystem::path(MTEVAL_DATA_DIR) / "hindi_suffixes.txt";
}

SuffixInventory SuffixInventory::LoadDefault() {
  return Load(DefaultSuffixPath());
}

std::string Stem(std::string_view token, const SuffixInventory& inventory) {
  const std::size_t token_len = CodePointLength(token);
  for (const auto& suffix : inventory.suffixes()) {
    if (suffix.size() > token.size() || !token.ends_with(suffix)) continue;
    const std::size_t suffix_len = CodePointLength(suffix);
    if (token_len - suffix_len >= inventory.min_stem_len()) {
      return std::string(token.substr(0, token.size() - suffix.size()));
    }
  }
  return std::string(token);
}

SynonymLexicon SynonymLexicon::Parse(std::istream& in,
                                     const TextOptions& options) {
  SynonymLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    const std::string id = Trim(fields[0]);
    if (fields.size() < 2 || id.empty()) {
      throw EvalError(ErrorCode::kParseError,
                      "synonym lexicon line " + std::to_string(line_no) +
                          ": expected id<TAB>token...");
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string token = CleanToken(fields[i], options);
      if (token.empty() || token.find(' ') != std::string::npos) {
        throw EvalError(ErrorCode::kParseError,
                        "synonym lexicon line " + std::to_string(line_no) +
                            ": bad member '" + fields[i] + "'");
      }
      lex.Add(id, token);
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::Load(const std::filesystem::path& path,
                                    const TextOptions& options) {
  auto in = OpenOrThrow(path);
  return Parse(in, options);
}

void SynonymLexicon::Add(const std::string& synset_id,
                         const std::string& token) {
  membership_[token].insert(synset_id);
}

const std::set<std::string>* SynonymLexicon::SynsetsOf(
    const std::string& token) const {
  auto it = membership_.find(token);
  return it == membership_.end() ? nullptr : &it->second;
}

bool SynonymsMatch(const std::string& a, const std::string& b,
                   const SynonymLexicon& lexicon) {
  if (a == b) return false;
  const auto* sa = lexicon.SynsetsOf(a);
  const auto* sb = lexicon.SynsetsOf(b);
  if (sa == nullptr || sb == nullptr) return false;
  auto ia = sa->begin();
  auto ib = sb->begin();
  while (ia != sa->end() && ib != sb->end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

ParaphraseTable ParaphraseTable::Parse(std::istream& in,
                                       const TextOptions& options) {
  ParaphraseTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 2) {
      throw EvalError(ErrorCode::kParseError,
                      "paraphrase table line " + std::to_string(line_no) +
                          ": expected phrase<TAB>phrase");
    }
    Phrase a = ParsePhrase(fields[0], options);
    Phrase b = ParsePhrase(fields[1], options);
    if (a.empty() || b.empty()) {
      throw EvalError(ErrorCode::kParseError,
                      "paraphrase table line " + std::to_string(line_no) +
                          ": empty phrase");
    }
    table.Add(a, b);
  }
  return table;
}

ParaphraseTable ParaphraseTable::Load(const std::filesystem::path& path,
                                      const TextOptions& options) {
  auto in = OpenOrThrow(path);
  return Parse(in, options);
}

void ParaphraseTable::Add(const Phrase& a, const Phrase& b) {
  if (a.empty() || b.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "empty paraphrase phrase");
  }
  table_[a].insert(b);
  table_[b].insert(a);
  max_phrase_len_ = std::max({max_phrase_len_, a.size(), b.size()});
}

const std::set<Phrase>* ParaphraseTable::Equivalents(
    std::span<const std::string> phrase) const {
  auto it = table_.find(Phrase(phrase.begin(), phrase.end()));
  return it == table_.end() ? nullptr : &it->second;
}

bool ParaphraseTable::Matches(std::span<const std::string> a,
                              std::span<const std::string> b) const {
  const auto* eq = Equivalents(a);
  return eq != nullptr && eq->contains(Phrase(b.begin(), b.end()));
}

}  // namespace mteval::text
