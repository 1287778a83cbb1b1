// Acceptance suite. `acceptance` runs every criterion; `acceptance N` runs
// criterion N only. Each criterion prints one [PASS]/[FAIL] line and the
// process exits non-zero if any selected criterion fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "oracles.hpp"
#include "wsd/disambiguator.hpp"
#include "wsd/eval_harness.hpp"
#include "wsd/learner.hpp"
#include "wsd/lexicon.hpp"
#include "wsd/service.hpp"
#include "wsd/text_pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wsd;

namespace {

// Tolerances and budgets.
constexpr double kPctTolerance = 0.01;
constexpr double kSeedBudgetSeconds = 1.0;
constexpr double kPropertyBudgetSeconds = 30.0;
constexpr int kTallyInstances = 500;
constexpr int kSpellPairs = 200;
constexpr int kParallelSessions = 20;

/// Collects failed expectations for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  bool passed() const { return failures_.empty(); }
  int total() const { return total_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  int total_ = 0;
  std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("wsd_acceptance_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

Lexicon play_only_free_time() {
  Lexicon full = Lexicon::seed();
  Lexicon lex;
  for (const auto& [id, f] : full.fields()) lex.add_field(id, f.name);
  for (const auto& [id, g] : full.general_words()) lex.add_general_word(g.surface);
  for (const auto& [id, m] : full.meanings())
    if (m.word != "play" || m.field_id == 12) lex.add_meaning(m.word, m.field_id);
  return lex;
}

/// A row with the given counts, built by scoring synthetic predictions.
EvalRow row_from_counts(int id, int targets, int disambiguated, int correct) {
  GoldSentence gold{id, "", {}};
  std::vector<Prediction> preds;
  for (int i = 0; i < targets; ++i) {
    std::string w = "t" + std::to_string(i);
    gold.targets.push_back({w, "Gold"});
    std::optional<std::string> field;
    if (i < correct) field = "Gold";
    else if (i < disambiguated) field = "Other";
    preds.push_back({w, field});
  }
  return score_sentence(preds, gold);
}

bool near(double a, double b) { return std::abs(a - b) <= kPctTolerance + 1e-9; }

std::string fmt(double v) { return format_pct(v); }

// ---------------------------------------------------------------------------

void criterion_1(Checks& c) {
  struct Case {
    const char* sentence;
    const char* field;
    int max_count;  // 0 means not asserted
  };
  const Case cases[] = {
      {"Play the stock market.", "Commerce", 3},
      {"The play of the imagination.", "Free_time", 2},
      {"Play the drama.", "Entertainment", 0},
      {"The fisherman went to the bank.", "Factotum", 0},
  };
  const Lexicon lex = Lexicon::seed();
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& k : cases) {
    auto r = disambiguate_sentence(k.sentence, lex);
    const std::string got = r.winner ? lex.field_name(*r.winner) : "(none)";
    c.expect(got == k.field, std::string(k.sentence) + " -> " + got + ", expected " + k.field);
    if (k.max_count)
      c.expect(r.max_count == k.max_count, std::string(k.sentence) + " max_count " +
                                               std::to_string(r.max_count) + ", expected " +
                                               std::to_string(k.max_count));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < kSeedBudgetSeconds, "took " + std::to_string(secs) + " s");
}

void criterion_2(Checks& c) {
  struct PrintedRow {
    int targets, disambiguated, correct;
    double accuracy;
  };
  const PrintedRow printed[] = {
      {2, 2, 2, 100},   {3, 3, 2, 66.67}, {1, 1, 1, 100}, {1, 1, 1, 100}, {2, 2, 1, 50},
      {2, 2, 2, 100},   {2, 2, 1, 50},    {1, 1, 1, 100}, {1, 1, 1, 100}, {2, 1, 1, 100},
      {3, 3, 2, 66.67}, {1, 1, 1, 100},   {3, 3, 2, 66.67}, {1, 1, 1, 100}, {2, 1, 1, 50},
  };
  std::vector<EvalRow> rows;
  int id = 0;
  for (const auto& p : printed) {
    rows.push_back(row_from_counts(++id, p.targets, p.disambiguated, p.correct));
    c.expect(near(rows.back().accuracy_pct, p.accuracy),
             "row " + std::to_string(id) + " (" + std::to_string(p.targets) + "," +
                 std::to_string(p.disambiguated) + "," + std::to_string(p.correct) + ") -> " +
                 fmt(rows.back().accuracy_pct) + ", printed " + fmt(p.accuracy));
  }
  auto totals = aggregate(rows);
  c.expect(totals.targets == 27 && totals.disambiguated == 25 && totals.correct == 20,
           "totals " + std::to_string(totals.targets) + "/" + std::to_string(totals.disambiguated) + "/" +
               std::to_string(totals.correct) + ", expected 27/25/20");
  c.expect(format_pct(totals.overall_accuracy_pct) == "80.00",
           "total accuracy " + fmt(totals.overall_accuracy_pct) + ", expected 80.00");
}

void criterion_3(Checks& c) {
  Lexicon lex = play_only_free_time();
  const std::string sentence = "Play the stock market.";
  auto before = disambiguate_sentence(sentence, lex);
  const FieldId commerce = *lex.find_field("Commerce");
  const Correction corr{sentence, before.winner, false, commerce};

  auto delta = supervised_correct(before, corr, lex);
  c.expect(delta.added == std::vector<Match>{{"play", commerce}}, "first correction delta is not {play -> Commerce}");
  auto rerun = disambiguate_sentence(sentence, lex);
  c.expect(rerun.winner == commerce, "re-run winner is not Commerce");

  const Lexicon once = lex;
  auto second = supervised_correct(before, corr, lex);
  c.expect(second.empty(), "second correction added rows");
  c.expect(lex == once, "second correction changed the lexicon");
}

void criterion_4(Checks& c) {
  const Lexicon lex = Lexicon::seed();
  auto pla = suggest_spellings("Pla", lex);
  c.expect(!pla.candidates.empty() && pla.candidates[0] == SpellCandidate{"play", 1},
           "Pla: play is not the first distance-1 candidate");

  auto stk = suggest_spellings("stk", lex);
  bool found = false;
  for (std::size_t i = 0; i < stk.candidates.size() && i < 3; ++i) found |= stk.candidates[i].word == "stock";
  c.expect(found, "stk: stock is not in the top 3");

  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> len(0, 4), letter(0, 3), upper(0, 5);
  auto word = [&] {
    std::string s;
    for (int n = len(rng), k = 0; k < n; ++k) {
      char ch = static_cast<char>('a' + letter(rng));
      s += upper(rng) == 0 ? static_cast<char>(std::toupper(ch)) : ch;
    }
    return s;
  };
  int mismatches = 0;
  for (int i = 0; i < kSpellPairs; ++i) {
    std::string a = word(), b = word();
    if (damerau_levenshtein(a, b) != oracle::bfs_edit_distance(a, b)) {
      if (++mismatches <= 3) c.expect(false, "distance mismatch on '" + a + "' vs '" + b + "'");
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(kSpellPairs) + " pairs disagree");
}

void criterion_5(Checks& c) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(5150);

  // Tally equals an independent nested-loop recount.
  for (int i = 0; i < kTallyInstances; ++i) {
    auto world = oracle::random_world(rng);
    auto [sentence, content] = oracle::random_sentence(rng, world.content_pool);
    auto r = disambiguate_sentence(sentence, world.lex);
    if (r.tally.counts != oracle::recount(world.rows, content)) {
      c.expect(false, "tally differs from recount on '" + sentence + "'");
      break;
    }
  }
  c.expect(true, "tally instances");

  // Save/load round trip and add_meaning idempotence.
  fs::path dir = scratch_dir("roundtrip");
  for (int i = 0; i < 40; ++i) {
    auto world = oracle::random_world(rng);
    Lexicon lex = world.lex;
    world.lex.save(dir);
    c.expect(Lexicon::load(dir) == lex, "round trip changed the lexicon");
    for (const auto& row : world.rows) {
      const Lexicon before = lex;
      if (lex.add_meaning(row.word, row.field_id) || !(lex == before)) {
        c.expect(false, "re-adding (" + row.word + "," + std::to_string(row.field_id) + ") changed the lexicon");
        break;
      }
    }
  }
  fs::remove_all(dir);

  // Learning only adds rows, and a correction never lowers the chosen count.
  for (int i = 0; i < 200; ++i) {
    auto world = oracle::random_world(rng);
    auto [sentence, content] = oracle::random_sentence(rng, world.content_pool);
    Lexicon lex = world.lex;
    auto r = disambiguate_sentence(sentence, lex);
    FieldId f = std::uniform_int_distribution<int>(1, static_cast<int>(lex.fields().size()))(rng);
    const auto rows = lex.meanings();
    const int before = r.tally.counts.count(f) ? r.tally.counts.at(f) : 0;
    auto delta = supervised_correct(r, Correction{sentence, r.winner, false, f}, lex);
    bool kept = lex.meanings().size() == rows.size() + delta.added.size();
    for (const auto& [id, m] : rows) kept = kept && lex.meanings().count(id) && lex.meanings().at(id) == m;
    c.expect(kept, "correction removed or altered rows on '" + sentence + "'");
    auto after = disambiguate_sentence(sentence, lex);
    c.expect(after.tally.counts.at(f) >= before + static_cast<int>(delta.added.size()),
             "corrected count decreased on '" + sentence + "'");
    if (r.winner) {
      Lexicon auto_lex = world.lex;
      unsupervised_update(r, auto_lex);
      bool auto_kept = true;
      for (const auto& [id, m] : rows) auto_kept = auto_kept && auto_lex.meanings().at(id) == m;
      c.expect(auto_kept, "auto-update altered rows on '" + sentence + "'");
    }
  }

  // Accuracy stays within [0, 100].
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvalRow> rows;
    for (int i = 0; i < 5; ++i) {
      int t = std::uniform_int_distribution<int>(1, 4)(rng);
      int d = std::uniform_int_distribution<int>(0, t)(rng);
      int k = std::uniform_int_distribution<int>(0, d)(rng);
      rows.push_back(row_from_counts(i + 1, t, d, k));
      c.expect(rows.back().accuracy_pct >= 0 && rows.back().accuracy_pct <= 100, "row accuracy out of bounds");
    }
    auto t = aggregate(rows);
    c.expect(t.overall_accuracy_pct >= 0 && t.overall_accuracy_pct <= 100, "total accuracy out of bounds");
  }

  // Scores come from the lexicon as it stood before the sentence's update.
  GoldSentence gold{1, "Shares tumble.", {{"shares", "Commerce"}, {"tumble", "Commerce"}}};
  auto sup = run_mode({gold}, Lexicon::seed(), LearningMode::Supervised);
  c.expect(sup.rows.at(0).disambiguated == 0, "prediction saw the post-update lexicon");
  c.expect(sup.final_lexicon.has_meaning("shares", 11), "supervised update was not applied");
  c.expect(score_sentence(predict_targets(gold, sup.final_lexicon), gold).correct == 2,
           "post-update lexicon does not distinguish the ordering");

  const double secs = seconds_since(t0);
  c.expect(secs < kPropertyBudgetSeconds, "property suite took " + std::to_string(secs) + " s");
}

void criterion_6(Checks& c) {
  auto corpus = load_corpus(std::string(WSD_DATA_DIR) + "/desk_corpus.tsv");
  c.expect(corpus.size() == 15, "desk corpus has " + std::to_string(corpus.size()) + " sentences");
  const Lexicon seed = Lexicon::seed();

  struct Pinned {
    LearningMode mode;
    int disambiguated, correct;
    double accuracy;
  };
  const Pinned pinned[] = {{LearningMode::Unsupervised, 22, 12, 54.55},
                           {LearningMode::Supervised, 22, 16, 72.73},
                           {LearningMode::Hybrid, 22, 14, 63.64}};
  double unsup = -1, hybrid = -1;
  for (const auto& p : pinned) {
    auto a = run_mode(corpus, seed, p.mode);
    auto b = run_mode(corpus, seed, p.mode);
    std::ostringstream ra, rb;
    write_report(ra, a);
    write_report(rb, b);
    const std::string name = to_string(p.mode);
    c.expect(ra.str() == rb.str() && a.final_lexicon == b.final_lexicon, name + " is not deterministic");
    c.expect(a.totals.targets == 26 && a.totals.disambiguated == p.disambiguated && a.totals.correct == p.correct,
             name + " totals " + std::to_string(a.totals.disambiguated) + "/" + std::to_string(a.totals.correct));
    c.expect(near(a.totals.overall_accuracy_pct, p.accuracy),
             name + " accuracy " + fmt(a.totals.overall_accuracy_pct) + ", pinned " + fmt(p.accuracy));
    if (p.mode == LearningMode::Unsupervised) unsup = a.totals.overall_accuracy_pct;
    if (p.mode == LearningMode::Hybrid) hybrid = a.totals.overall_accuracy_pct;
  }
  c.expect(hybrid >= unsup, "hybrid " + fmt(hybrid) + " below unsupervised " + fmt(unsup));
}

void criterion_7(Checks& c) {
  fs::path dir = scratch_dir("service");
  Lexicon::seed().save(dir);
  auto body = [](const std::string& s) { return json{{"sentence", s}}.dump(); };
  const std::string confirm = R"({"confirmed": true})";
  const std::string correct = R"({"confirmed": false, "chosen_field_id": 15})";
  {
    // Every transition out of a terminal state is refused.
    Service svc(dir);
    for (const auto& [first, label] : {std::pair{confirm, std::string("Confirmed")}, {correct, "Corrected"}}) {
      auto id = svc.disambiguate(body("Play the stock market.")).body["session_id"].get<std::string>();
      auto pending = svc.sessions("1").body["sessions"][0]["status"];
      c.expect(pending == "Pending", "new session is " + pending.dump());
      auto fb = svc.feedback(id, first);
      c.expect(fb.status == 200 && fb.body["status"] == label, "Pending -> " + label + " refused");
      for (const auto& next : {confirm, correct}) {
        auto again = svc.feedback(id, next);
        c.expect(again.status == 409, label + " accepted a second feedback (" + std::to_string(again.status) + ")");
      }
      c.expect(svc.sessions("1").body["sessions"][0]["status"] == label, label + " did not stick");
    }
    auto id = svc.disambiguate(body("Play the drama.")).body["session_id"].get<std::string>();
    c.expect(svc.feedback(id, R"({"confirmed": false})").status == 400, "correction without a field accepted");
    c.expect(svc.sessions("1").body["sessions"][0]["status"] == "Pending", "bad feedback moved the session");
  }

  // Parallel feedback over HTTP.
  Service svc(dir);
  httplib::Server server;
  svc.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  std::vector<std::string> ids(kParallelSessions);
  std::vector<int> statuses(kParallelSessions, 0);
  {
    httplib::Client cli("127.0.0.1", port);
    for (int i = 0; i < kParallelSessions; ++i) {
      auto res = cli.Post("/disambiguate", body("Term" + std::to_string(i) + " moved the stock market."),
                          "application/json");
      if (res && res->status == 200) ids[i] = json::parse(res->body)["session_id"];
    }
  }
  std::vector<std::thread> workers;
  for (int i = 0; i < kParallelSessions; ++i)
    workers.emplace_back([&, i] {
      httplib::Client cli("127.0.0.1", port);
      cli.set_read_timeout(10, 0);
      auto res = cli.Post("/sessions/" + ids[i] + "/feedback", i % 2 ? confirm : correct, "application/json");
      statuses[i] = res ? res->status : -1;
    });
  for (auto& t : workers) t.join();
  server.stop();
  loop.join();

  int ok = 0;
  for (int s : statuses) ok += s == 200;
  c.expect(ok == kParallelSessions, std::to_string(ok) + " of " + std::to_string(kParallelSessions) + " feedbacks succeeded");
  try {
    Lexicon saved = Lexicon::load(dir);
    c.expect(saved == svc.lexicon_snapshot(), "saved lexicon differs from the served one");
    for (int i = 0; i < kParallelSessions; ++i)
      c.expect(saved.has_meaning("term" + std::to_string(i), i % 2 ? 11 : 15),
               "term" + std::to_string(i) + " update missing");
    c.expect(Service::replay(Lexicon::seed(), svc.log_path()) == saved, "log replay differs from the saved lexicon");
  } catch (const std::exception& e) {
    c.expect(false, std::string("saved lexicon fails to load: ") + e.what());
  }
  fs::remove_all(dir);
}

struct Criterion {
  const char* title;
  std::function<void(Checks&)> run;
};

const Criterion kCriteria[] = {
    {"seed lexicon outcomes", criterion_1},
    {"printed accuracy table arithmetic", criterion_2},
    {"supervised correction loop", criterion_3},
    {"spell suggester", criterion_4},
    {"property suites", criterion_5},
    {"desk corpus replay", criterion_6},
    {"service session contract", criterion_7},
};

bool run_one(int n) {
  const Criterion& k = kCriteria[n - 1];
  Checks c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    k.run(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.2f", seconds_since(t0));
  std::cout << (c.passed() ? "[PASS]" : "[FAIL]") << " C" << n << " " << k.title << " ("
            << c.total() - static_cast<int>(c.failures().size()) << "/" << c.total() << " checks, "
            << elapsed << " s)\n";
  for (const auto& f : c.failures()) std::cout << "       - " << f << '\n';
  return c.passed();
}

}  // namespace

int main(int argc, char** argv) {
  constexpr int count = static_cast<int>(std::size(kCriteria));
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    int n = std::atoi(argv[i]);
    if (n < 1 || n > count) {
      std::cerr << "usage: acceptance [criterion 1-" << count << "]...\n";
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (int n = 1; n <= count; ++n) selected.push_back(n);

  bool all = true;
  for (int n : selected) all = run_one(n) && all;
  return all ? 0 : 1;
}
