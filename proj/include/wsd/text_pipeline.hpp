#ifndef WSD_TEXT_PIPELINE_HPP
#define WSD_TEXT_PIPELINE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "wsd/lexicon.hpp"

namespace wsd {

struct Token {
  std::string surface;
  std::size_t position = 0;
  bool is_punct = false;
  bool operator==(const Token&) const = default;
};

/// Penn subset. DTR is kept as the determiner label instead of DT.
enum class Tag { DTR, NN, NNS, VB, VBD, VBG, IN, JJ, RB, PUNCT };

enum class TokenKind { Content, General, Punct };

struct TaggedToken {
  Token token;
  Tag tag = Tag::NN;
  TokenKind kind = TokenKind::Content;
};

const char* to_string(Tag tag);
const char* to_string(TokenKind kind);

struct SpellCandidate {
  std::string word;
  int distance = 0;
  bool operator==(const SpellCandidate&) const = default;
};

struct SpellSuggestion {
  std::string original;
  std::vector<SpellCandidate> candidates;  // by (distance, general-last, word)
};

/// Splits on whitespace and peels leading/trailing . , ? ! ; : " ' into
/// separate punctuation tokens. Throws EmptySentence on blank input.
std::vector<Token> tokenize(std::string_view sentence);

/// Rule cascade: punctuation, irregular verbs, general words (DTR for
/// articles, IN otherwise), -ing/-ed/-s suffixes, then NN.
std::vector<TaggedToken> tag(const std::vector<Token>& tokens, const Lexicon& lex);

/// Lowercased content words in sentence order.
std::vector<std::string> separate_content(const std::vector<TaggedToken>& tagged);

/// Unrestricted Damerau-Levenshtein distance (adjacent transpositions may
/// be combined with other edits), case-insensitive.
int damerau_levenshtein(std::string_view a, std::string_view b);

/// Vocabulary words within `max_dist` edits, best `k` by distance, then
/// meaning words before general words, then alphabetically.
SpellSuggestion suggest_spellings(std::string_view word, const Lexicon& lex, int max_dist = 2,
                                  int k = 3);

}  // namespace wsd

#endif  // WSD_TEXT_PIPELINE_HPP
