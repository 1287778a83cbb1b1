#include "wsd/disambiguator.hpp"

#include <algorithm>

namespace wsd {

const char* to_string(PosSense sense) {
  switch (sense) {
    case PosSense::Noun: return "noun";
    case PosSense::Verb: return "verb";
    case PosSense::Adjective: return "adjective";
    case PosSense::Adverb: return "adverb";
    case PosSense::Other: return "other";
  }
  return "?";
}

PosSense pos_sense(Tag tag) {
  switch (tag) {
    case Tag::NN:
    case Tag::NNS: return PosSense::Noun;
    case Tag::VB:
    case Tag::VBD:
    case Tag::VBG: return PosSense::Verb;
    case Tag::JJ: return PosSense::Adjective;
    case Tag::RB: return PosSense::Adverb;
    default: return PosSense::Other;
  }
}

std::vector<std::string> Disambiguation::content_words() const {
  std::vector<std::string> words;
  words.reserve(categories.c1.size());
  for (const auto& [w, sense] : categories.c1) words.push_back(w);
  return words;
}

CategorySet build_categories(const std::vector<std::string>& content_words, const Lexicon& lex,
                             const std::vector<TaggedToken>& tags) {
  std::vector<Tag> content_tags;
  for (const auto& t : tags)
    if (t.kind == TokenKind::Content) content_tags.push_back(t.tag);
  const bool aligned = content_tags.size() == content_words.size();

  CategorySet cats;
  for (std::size_t i = 0; i < content_words.size(); ++i) {
    const std::string& w = content_words[i];
    cats.c1.emplace_back(w, pos_sense(aligned ? content_tags[i] : Tag::NN));
    auto domains = lex.lookup_domains(w);
    for (const auto& d : domains)
      if (std::find(cats.c3.begin(), cats.c3.end(), d.field_id) == cats.c3.end())
        cats.c3.push_back(d.field_id);
    cats.c2.emplace_back(w, std::move(domains));
  }
  return cats;
}

VoteTally tally_votes(const CategorySet& cats) {
  VoteTally tally;
  for (const auto& [word, domains] : cats.c2) {
    for (const auto& d : domains) {
      ++tally.counts[d.field_id];
      tally.trace.push_back({word, d.field_id});
    }
  }
  return tally;
}

Selection select_domain(const VoteTally& tally) {
  Selection sel;
  for (const auto& [id, count] : tally.counts) sel.max_count = std::max(sel.max_count, count);
  if (sel.max_count == 0) return sel;
  for (const auto& [id, count] : tally.counts)
    if (count == sel.max_count) sel.tied.push_back(id);
  sel.winner = sel.tied.front();
  return sel;
}

Disambiguation disambiguate_sentence(std::string_view sentence, const Lexicon& lex) {
  Disambiguation result;
  result.sentence = std::string(sentence);
  result.tokens = tag(tokenize(sentence), lex);
  auto content = separate_content(result.tokens);
  if (content.empty())
    throw Error(ErrorKind::NoContentWords, "sentence has no content words");

  result.categories = build_categories(content, lex, result.tokens);
  result.tally = tally_votes(result.categories);
  Selection sel = select_domain(result.tally);
  result.winner = sel.winner;
  result.max_count = sel.max_count;
  result.tied = std::move(sel.tied);
  for (const auto& [word, domains] : result.categories.c2)
    if (domains.empty()) result.unknown_words.push_back(word);
  return result;
}

}  // namespace wsd
