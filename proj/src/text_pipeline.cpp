#include "wsd/text_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <tuple>
#include <cctype>

namespace wsd {

const char* to_string(Tag tag) {
  switch (tag) {
    case Tag::DTR: return "DTR";
    case Tag::NN: return "NN";
    case Tag::NNS: return "NNS";
    case Tag::VB: return "VB";
    case Tag::VBD: return "VBD";
    case Tag::VBG: return "VBG";
    case Tag::IN: return "IN";
    case Tag::JJ: return "JJ";
    case Tag::RB: return "RB";
    case Tag::PUNCT: return "PUNCT";
  }
  return "?";
}

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Content: return "content";
    case TokenKind::General: return "general";
    case TokenKind::Punct: return "punct";
  }
  return "?";
}

namespace {

constexpr std::string_view kPunct = ".,?!;:\"'";

bool is_punct_char(char c) { return kPunct.find(c) != std::string_view::npos; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  auto push = [&](std::string_view s, bool punct) {
    tokens.push_back(Token{std::string(s), tokens.size(), punct});
  };

  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t start = i;
    while (i < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::string_view chunk = sentence.substr(start, i - start);
    if (chunk.empty()) continue;

    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct_char(chunk[lead])) ++lead;
    std::size_t trail = chunk.size();
    while (trail > lead && is_punct_char(chunk[trail - 1])) --trail;

    for (std::size_t p = 0; p < lead; ++p) push(chunk.substr(p, 1), true);
    if (trail > lead) push(chunk.substr(lead, trail - lead), false);
    for (std::size_t p = trail; p < chunk.size(); ++p) push(chunk.substr(p, 1), true);
  }
  if (tokens.empty()) throw Error(ErrorKind::EmptySentence, "sentence is empty");
  return tokens;
}

std::vector<TaggedToken> tag(const std::vector<Token>& tokens, const Lexicon& lex) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    TaggedToken tt{t, Tag::NN, TokenKind::Content};
    if (t.is_punct) {
      tt.tag = Tag::PUNCT;
      tt.kind = TokenKind::Punct;
      out.push_back(std::move(tt));
      continue;
    }
    const std::string w = normalize_word(t.surface);
    const bool general = lex.is_general(w);
    tt.kind = general ? TokenKind::General : TokenKind::Content;

    if (w == "went" || w == "was") {
      tt.tag = Tag::VBD;
    } else if (w == "is") {
      tt.tag = Tag::VB;
    } else if (general) {
      tt.tag = (w == "the" || w == "a" || w == "an") ? Tag::DTR : Tag::IN;
    } else if (ends_with(w, "ing")) {
      tt.tag = Tag::VBG;
    } else if (ends_with(w, "ed")) {
      tt.tag = Tag::VBD;
    } else if (ends_with(w, "s") && !ends_with(w, "ss")) {
      tt.tag = Tag::NNS;
    }
    out.push_back(std::move(tt));
  }
  return out;
}

std::vector<std::string> separate_content(const std::vector<TaggedToken>& tagged) {
  std::vector<std::string> words;
  for (const auto& t : tagged)
    if (t.kind == TokenKind::Content) words.push_back(normalize_word(t.token.surface));
  return words;
}

int damerau_levenshtein(std::string_view a_in, std::string_view b_in) {
  const std::string a = normalize_word(a_in);
  const std::string b = normalize_word(b_in);
  const std::size_t n = a.size(), m = b.size();
  const int inf = static_cast<int>(n + m);

  // Lowrance-Wagner with a sentinel row/column at index 0.
  std::vector<std::vector<int>> d(n + 2, std::vector<int>(m + 2, 0));
  std::array<std::size_t, 256> last_row{};
  d[0][0] = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = static_cast<int>(i);
  }
  for (std::size_t j = 0; j <= m; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = static_cast<int>(j);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_match_col = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t i1 = last_row[static_cast<unsigned char>(b[j - 1])];
      std::size_t j1 = last_match_col;
      int cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_match_col = j;
      }
      d[i + 1][j + 1] = std::min({
          d[i][j] + cost,
          d[i + 1][j] + 1,
          d[i][j + 1] + 1,
          d[i1][j1] + static_cast<int>((i - i1 - 1) + 1 + (j - j1 - 1)),
      });
    }
    last_row[static_cast<unsigned char>(a[i - 1])] = i;
  }
  return d[n + 1][m + 1];
}

SpellSuggestion suggest_spellings(std::string_view word, const Lexicon& lex, int max_dist,
                                  int k) {
  SpellSuggestion s{std::string(word), {}};
  const std::string needle = normalize_word(word);
  for (const std::string& v : lex.vocabulary()) {
    // Length difference is a lower bound on the distance.
    int gap = static_cast<int>(v.size()) - static_cast<int>(needle.size());
    if (std::abs(gap) > max_dist) continue;
    int d = damerau_levenshtein(needle, v);
    if (d <= max_dist) s.candidates.push_back({v, d});
  }
  // Content words outrank function words at equal distance.
  std::sort(s.candidates.begin(), s.candidates.end(), [&lex](const auto& x, const auto& y) {
    const bool gx = lex.is_general(x.word), gy = lex.is_general(y.word);
    return std::tie(x.distance, gx, x.word) < std::tie(y.distance, gy, y.word);
  });
  if (k >= 0 && s.candidates.size() > static_cast<std::size_t>(k))
    s.candidates.resize(static_cast<std::size_t>(k));
  return s;
}

}  // namespace wsd
