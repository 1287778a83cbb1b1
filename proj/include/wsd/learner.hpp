#ifndef WSD_LEARNER_HPP
#define WSD_LEARNER_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/disambiguator.hpp"
#include "wsd/lexicon.hpp"

namespace wsd {

enum class LearningMode { Unsupervised, Supervised, Hybrid };

const char* to_string(LearningMode mode);
/// Accepts "unsupervised", "supervised", "hybrid" (any case).
std::optional<LearningMode> parse_learning_mode(std::string_view text);

/// A human verdict on a prediction. `chosen_field` is required when the
/// prediction is rejected.
struct Correction {
  std::string sentence;
  std::optional<FieldId> predicted_field;
  bool confirmed = false;
  std::optional<FieldId> chosen_field;
};

/// Rows actually inserted by one update.
struct LexiconDelta {
  std::vector<Match> added;
  bool empty() const { return added.empty(); }
};

/// Answer from whoever confirms a prediction.
struct ConfirmAnswer {
  bool confirmed = false;
  std::optional<FieldId> chosen_field;
};

/// Called with (sentence, predicted field, tied fields). May block.
using ConfirmProvider = std::function<ConfirmAnswer(
    const std::string&, std::optional<FieldId>, const std::vector<FieldId>&)>;

/// Every content word of the sentence gains a row for the winning field.
/// Throws NoWinner when the result has no winner.
LexiconDelta unsupervised_update(const Disambiguation& result, Lexicon& lex);

/// Every content word gains a row for the corrected field. Throws
/// NotACorrection for a confirmation and UnknownField for a bad field.
LexiconDelta supervised_correct(const Disambiguation& result, const Correction& corr,
                                Lexicon& lex);

struct HybridOutcome {
  Disambiguation result;
  LexiconDelta delta;
  bool asked = false;
  std::optional<FieldId> applied_field;
};

/// Auto-accepts a unique maximum; ties and zero-vote sentences go to
/// `confirm`. Throws NoWinner when nothing can be applied.
HybridOutcome hybrid_step(std::string_view sentence, Lexicon& lex, const ConfirmProvider& confirm);

}  // namespace wsd

#endif  // WSD_LEARNER_HPP
