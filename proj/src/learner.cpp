#include "wsd/learner.hpp"

namespace wsd {

const char* to_string(LearningMode mode) {
  switch (mode) {
    case LearningMode::Unsupervised: return "unsupervised";
    case LearningMode::Supervised: return "supervised";
    case LearningMode::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<LearningMode> parse_learning_mode(std::string_view text) {
  for (auto mode : {LearningMode::Unsupervised, LearningMode::Supervised, LearningMode::Hybrid})
    if (iequals(text, to_string(mode))) return mode;
  return std::nullopt;
}

namespace {

LexiconDelta apply_field(const Disambiguation& result, FieldId field, Lexicon& lex) {
  LexiconDelta delta;
  for (const std::string& w : result.content_words())
    if (lex.add_meaning(w, field)) delta.added.push_back({w, field});
  return delta;
}

}  // namespace

LexiconDelta unsupervised_update(const Disambiguation& result, Lexicon& lex) {
  if (!result.winner) throw Error(ErrorKind::NoWinner, "no winning field to learn from");
  return apply_field(result, *result.winner, lex);
}

LexiconDelta supervised_correct(const Disambiguation& result, const Correction& corr,
                                Lexicon& lex) {
  if (corr.confirmed)
    throw Error(ErrorKind::NotACorrection, "confirmation is not a correction");
  if (!corr.chosen_field || !lex.field(*corr.chosen_field))
    throw Error(ErrorKind::UnknownField, "correction needs an existing field");
  return apply_field(result, *corr.chosen_field, lex);
}

HybridOutcome hybrid_step(std::string_view sentence, Lexicon& lex,
                          const ConfirmProvider& confirm) {
  HybridOutcome out;
  out.result = disambiguate_sentence(sentence, lex);
  const Disambiguation& r = out.result;

  if (r.winner && r.tied.size() == 1) {
    out.delta = unsupervised_update(r, lex);
    out.applied_field = r.winner;
    return out;
  }

  out.asked = true;
  ConfirmAnswer answer = confirm(r.sentence, r.winner, r.tied);
  if (answer.confirmed) {
    out.delta = unsupervised_update(r, lex);
    out.applied_field = r.winner;
  } else if (answer.chosen_field) {
    Correction corr{r.sentence, r.winner, false, answer.chosen_field};
    out.delta = supervised_correct(r, corr, lex);
    out.applied_field = answer.chosen_field;
  } else {
    throw Error(ErrorKind::NoWinner, "prediction rejected without a chosen field");
  }
  return out;
}

}  // namespace wsd
