#ifndef WSD_EVAL_HARNESS_HPP
#define WSD_EVAL_HARNESS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsd/learner.hpp"
#include "wsd/lexicon.hpp"

namespace wsd {

struct GoldTarget {
  std::string word;
  std::string gold_field;
};

struct GoldSentence {
  int id = 0;
  std::string text;
  std::vector<GoldTarget> targets;
};

struct Prediction {
  std::string word;
  std::optional<std::string> field;  // field name, none when undecided
};

/// One line of the per-sentence report. accuracy_pct is correct over
/// disambiguated, rounded half-up to two decimals; `undefined` marks the
/// zero-denominator case where the value is reported as 0.
struct EvalRow {
  int sentence_id = 0;
  int targets = 0;
  int disambiguated = 0;
  int correct = 0;
  double accuracy_pct = 0.0;
  bool undefined = false;
};

struct EvalTotals {
  int targets = 0;
  int disambiguated = 0;
  int correct = 0;
  double overall_accuracy_pct = 0.0;
  bool undefined = false;
};

/// Half-up rounding of a percentage to two decimals.
double round_pct(double value);
/// Renders with exactly two decimals ("66.67", "100.00").
std::string format_pct(double value);

/// Throws TargetMismatch when the predicted words differ from the gold
/// target words (compared as lowercase multisets).
EvalRow score_sentence(const std::vector<Prediction>& predictions, const GoldSentence& gold);

/// Column sums plus overall accuracy. Throws Empty for no rows.
EvalTotals aggregate(std::span<const EvalRow> rows);

struct ModeReport {
  LearningMode mode = LearningMode::Hybrid;
  std::vector<EvalRow> rows;
  EvalTotals totals;
  Lexicon final_lexicon;
};

/// The gold field a simulated user would pick for a whole sentence: the
/// most frequent gold field among its targets, earliest on ties.
std::string sentence_gold_field(const GoldSentence& gold);

/// Predictions for every target of `gold` from the current lexicon. A
/// target with no candidate domains is left undecided; any other target
/// takes the sentence winner.
std::vector<Prediction> predict_targets(const GoldSentence& gold, const Lexicon& lex);

/// Sequential replay: score each sentence against the current lexicon,
/// then apply the mode's update before moving to the next sentence.
ModeReport run_mode(const std::vector<GoldSentence>& corpus, const Lexicon& seed,
                    LearningMode mode);

/// Corpus TSV: "sentence_id<TAB>sentence_text<TAB>target_word<TAB>gold_field_name"
/// with a header line. Throws Malformed with the offending line number.
std::vector<GoldSentence> parse_corpus(std::istream& in);
std::vector<GoldSentence> load_corpus(const std::filesystem::path& path);

/// Per-sentence TSV followed by a "Total" line.
void write_report(std::ostream& out, const ModeReport& report);
/// Side-by-side accuracy per mode, one column per report.
void write_comparison(std::ostream& out, std::span<const ModeReport> reports);

}  // namespace wsd

#endif  // WSD_EVAL_HARNESS_HPP
