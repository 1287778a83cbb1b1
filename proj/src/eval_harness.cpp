#include "wsd/eval_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace wsd {

double round_pct(double value) { return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0; }

std::string format_pct(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << round_pct(value);
  return out.str();
}

EvalRow score_sentence(const std::vector<Prediction>& predictions, const GoldSentence& gold) {
  std::vector<std::string> predicted_words, gold_words;
  for (const auto& p : predictions) predicted_words.push_back(normalize_word(p.word));
  for (const auto& t : gold.targets) gold_words.push_back(normalize_word(t.word));
  std::sort(predicted_words.begin(), predicted_words.end());
  std::sort(gold_words.begin(), gold_words.end());
  if (predicted_words != gold_words)
    throw Error(ErrorKind::TargetMismatch, "predictions do not cover the gold targets of sentence " +
                                               std::to_string(gold.id));

  EvalRow row;
  row.sentence_id = gold.id;
  row.targets = static_cast<int>(gold.targets.size());
  // Pair each prediction with an unused gold target of the same word.
  std::vector<bool> used(gold.targets.size(), false);
  for (const auto& p : predictions) {
    if (!p.field) continue;
    ++row.disambiguated;
    for (std::size_t i = 0; i < gold.targets.size(); ++i) {
      if (used[i] || !iequals(gold.targets[i].word, normalize_word(p.word))) continue;
      used[i] = true;
      if (iequals(gold.targets[i].gold_field, *p.field)) ++row.correct;
      break;
    }
  }
  if (row.disambiguated > 0) {
    row.accuracy_pct = round_pct(100.0 * row.correct / row.disambiguated);
  } else {
    row.undefined = true;
  }
  return row;
}

EvalTotals aggregate(std::span<const EvalRow> rows) {
  if (rows.empty()) throw Error(ErrorKind::Empty, "no evaluation rows");
  EvalTotals t;
  for (const auto& r : rows) {
    t.targets += r.targets;
    t.disambiguated += r.disambiguated;
    t.correct += r.correct;
  }
  if (t.disambiguated > 0) {
    t.overall_accuracy_pct = round_pct(100.0 * t.correct / t.disambiguated);
  } else {
    t.undefined = true;
  }
  return t;
}

std::string sentence_gold_field(const GoldSentence& gold) {
  std::vector<std::pair<std::string, int>> counts;  // first-appearance order
  for (const auto& t : gold.targets) {
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& c) { return iequals(c.first, t.gold_field); });
    if (it == counts.end()) {
      counts.emplace_back(t.gold_field, 1);
    } else {
      ++it->second;
    }
  }
  if (counts.empty()) throw Error(ErrorKind::Empty, "sentence has no targets");
  auto best = std::max_element(counts.begin(), counts.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
  return best->first;
}

std::vector<Prediction> predict_targets(const GoldSentence& gold, const Lexicon& lex) {
  Disambiguation r = disambiguate_sentence(gold.text, lex);
  auto content = r.content_words();
  std::vector<Prediction> preds;
  for (const auto& t : gold.targets) {
    std::string w = normalize_word(t.word);
    if (std::find(content.begin(), content.end(), w) == content.end())
      throw Error(ErrorKind::TargetMismatch, "target '" + t.word + "' is not a content word of sentence " +
                                                 std::to_string(gold.id));
    Prediction p{w, std::nullopt};
    if (r.winner && !lex.lookup_domains(w).empty()) p.field = lex.field_name(*r.winner);
    preds.push_back(std::move(p));
  }
  return preds;
}

ModeReport run_mode(const std::vector<GoldSentence>& corpus, const Lexicon& seed,
                    LearningMode mode) {
  if (corpus.empty()) throw Error(ErrorKind::Empty, "corpus is empty");
  ModeReport report;
  report.mode = mode;
  report.final_lexicon = seed;
  Lexicon& lex = report.final_lexicon;

  for (const GoldSentence& gold : corpus) {
    report.rows.push_back(score_sentence(predict_targets(gold, lex), gold));

    const std::string gold_name = sentence_gold_field(gold);
    auto gold_field = lex.find_field(gold_name);
    if (!gold_field) throw Error(ErrorKind::UnknownField, "unknown gold field '" + gold_name + "'");

    // The gold labels stand in for the human.
    auto oracle = [&](const std::string&, std::optional<FieldId> predicted,
                      const std::vector<FieldId>&) {
      if (predicted == gold_field) return ConfirmAnswer{true, std::nullopt};
      return ConfirmAnswer{false, gold_field};
    };

    switch (mode) {
      case LearningMode::Unsupervised: {
        Disambiguation r = disambiguate_sentence(gold.text, lex);
        if (r.winner) unsupervised_update(r, lex);
        break;
      }
      case LearningMode::Supervised: {
        Disambiguation r = disambiguate_sentence(gold.text, lex);
        ConfirmAnswer answer = oracle(r.sentence, r.winner, r.tied);
        if (answer.confirmed) {
          unsupervised_update(r, lex);
        } else {
          supervised_correct(r, Correction{r.sentence, r.winner, false, answer.chosen_field}, lex);
        }
        break;
      }
      case LearningMode::Hybrid:
        hybrid_step(gold.text, lex, oracle);
        break;
    }
  }
  report.totals = aggregate(report.rows);
  return report;
}

namespace {

Error malformed(std::size_t line, const std::string& why) {
  return Error(ErrorKind::Malformed, "corpus line " + std::to_string(line) + ": " + why, line);
}

}  // namespace

std::vector<GoldSentence> parse_corpus(std::istream& in) {
  constexpr std::string_view header = "sentence_id\tsentence_text\ttarget_word\tgold_field_name";
  std::vector<GoldSentence> corpus;
  std::map<int, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != header) throw malformed(line_no, "expected header");
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 4) throw malformed(line_no, "expected 4 tab-separated columns");
    int id = 0;
    auto [ptr, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), id);
    if (ec != std::errc() || ptr != cols[0].data() + cols[0].size() || id < 1)
      throw malformed(line_no, "sentence_id must be a positive integer");
    if (normalize_word(cols[1]).empty()) throw malformed(line_no, "empty sentence text");
    if (normalize_word(cols[2]).empty()) throw malformed(line_no, "empty target word");
    if (normalize_word(cols[3]).empty()) throw malformed(line_no, "empty gold field");

    auto it = index.find(id);
    if (it == index.end()) {
      index[id] = corpus.size();
      corpus.push_back(GoldSentence{id, cols[1], {}});
      it = index.find(id);
    } else if (corpus[it->second].text != cols[1]) {
      throw malformed(line_no, "sentence " + cols[0] + " has conflicting text");
    }
    corpus[it->second].targets.push_back({normalize_word(cols[2]), cols[3]});
  }
  if (line_no == 0) throw malformed(1, "missing header");
  return corpus;
}

std::vector<GoldSentence> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open corpus " + path.string());
  return parse_corpus(in);
}

void write_report(std::ostream& out, const ModeReport& report) {
  out << "sentence\ttarget_word\tdisambiguated\tcorrectly_disambiguated\taccuracy_pct\n";
  for (const auto& r : report.rows) {
    out << r.sentence_id << '\t' << r.targets << '\t' << r.disambiguated << '\t' << r.correct
        << '\t' << format_pct(r.accuracy_pct) << (r.undefined ? "*" : "") << '\n';
  }
  const auto& t = report.totals;
  out << "Total\t" << t.targets << '\t' << t.disambiguated << '\t' << t.correct << '\t'
      << format_pct(t.overall_accuracy_pct) << (t.undefined ? "*" : "") << '\n';
}

void write_comparison(std::ostream& out, std::span<const ModeReport> reports) {
  out << "sentence\ttarget_word";
  for (const auto& rep : reports) out << '\t' << to_string(rep.mode) << "_accuracy_pct";
  out << '\n';
  if (reports.empty()) return;
  const auto& first = reports.front();
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    out << first.rows[i].sentence_id << '\t' << first.rows[i].targets;
    for (const auto& rep : reports) out << '\t' << format_pct(rep.rows.at(i).accuracy_pct);
    out << '\n';
  }
  out << "Total\t" << first.totals.targets;
  for (const auto& rep : reports) out << '\t' << format_pct(rep.totals.overall_accuracy_pct);
  out << '\n';
}

}  // namespace wsd
