#ifndef WSD_DISAMBIGUATOR_HPP
#define WSD_DISAMBIGUATOR_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/lexicon.hpp"
#include "wsd/text_pipeline.hpp"

namespace wsd {

enum class PosSense { Noun, Verb, Adjective, Adverb, Other };

const char* to_string(PosSense sense);
PosSense pos_sense(Tag tag);

/// Three views of the content words of a sentence:
///   c1  word with its coarse part-of-speech sense,
///   c2  word with its candidate domains,
///   c3  distinct field ids across c2, in first-appearance order.
struct CategorySet {
  std::vector<std::pair<std::string, PosSense>> c1;
  std::vector<std::pair<std::string, std::vector<DomainRef>>> c2;
  std::vector<FieldId> c3;
};

struct Match {
  std::string word;
  FieldId field_id = 0;
  bool operator==(const Match&) const = default;
};

struct VoteTally {
  std::map<FieldId, int> counts;
  std::vector<Match> trace;
};

struct Selection {
  std::optional<FieldId> winner;
  int max_count = 0;
  std::vector<FieldId> tied;  // ascending
};

struct Disambiguation {
  std::string sentence;
  std::vector<TaggedToken> tokens;
  std::optional<FieldId> winner;
  int max_count = 0;
  std::vector<FieldId> tied;
  VoteTally tally;
  CategorySet categories;
  std::vector<std::string> unknown_words;

  /// Content words in sentence order (duplicates kept).
  std::vector<std::string> content_words() const;
};

/// `tags` supplies the POS sense of each content word; when it does not
/// line up with `content_words` the sense falls back to the NN reading.
CategorySet build_categories(const std::vector<std::string>& content_words, const Lexicon& lex,
                             const std::vector<TaggedToken>& tags);

/// One vote per (content word occurrence, candidate field).
VoteTally tally_votes(const CategorySet& cats);

/// Maximum count wins; ties go to the lowest field id but are all reported.
Selection select_domain(const VoteTally& tally);

/// tokenize -> tag -> separate_content -> build_categories -> tally -> select.
/// Throws EmptySentence or NoContentWords.
Disambiguation disambiguate_sentence(std::string_view sentence, const Lexicon& lex);

}  // namespace wsd

#endif  // WSD_DISAMBIGUATOR_HPP
