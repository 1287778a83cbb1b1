#include "wsd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "wsd/eval_harness.hpp"
#include "wsd/service.hpp"
#include "wsd/text_pipeline.hpp"

namespace wsd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 2;
constexpr int kEnvError = 3;

bool is_environment_error(const Error& e) {
  return e.kind() == ErrorKind::Io || e.kind() == ErrorKind::Malformed ||
         e.kind() == ErrorKind::IntegrityViolation;
}

std::optional<Lexicon> open_lexicon(const CliConfig& config, Console& io) {
  try {
    return Lexicon::load(config.lexicon_path);
  } catch (const Error& e) {
    io.err << "error: cannot load lexicon: " << e.what() << '\n';
    return std::nullopt;
  }
}

// Prompts go to stdout in text mode and stderr in structured mode so the
// JSON document stays clean.
std::ostream& prompt_stream(const CliConfig& config, Console& io) {
  return config.output_format == OutputFormat::Text ? io.out : io.err;
}

std::optional<std::string> read_answer(Console& io) {
  std::string line;
  if (!std::getline(io.in, line)) return std::nullopt;
  return normalize_word(line);
}

/// Y/N question; non-interactive sessions answer yes.
bool ask_yes_no(const std::string& question, std::ostream& prompt, Console& io) {
  prompt << question << '\n';
  if (!io.interactive) return true;
  while (true) {
    auto answer = read_answer(io);
    if (!answer) return true;
    if (*answer == "y" || *answer == "yes") return true;
    if (*answer == "n" || *answer == "no") return false;
    prompt << "Please answer Y or N\n";
  }
}

std::optional<FieldId> ask_field(const Lexicon& lex, std::ostream& prompt, Console& io) {
  if (!io.interactive) return std::nullopt;
  prompt << "Choose the correct field:\n";
  for (const auto& [id, f] : lex.fields()) prompt << "  " << id << ' ' << f.name << '\n';
  while (true) {
    prompt << "Field: " << std::flush;
    std::string line;
    if (!std::getline(io.in, line)) return std::nullopt;
    std::string answer = normalize_word(line);
    if (answer.empty()) continue;
    if (auto id = lex.find_field(answer)) return id;
    if (std::all_of(answer.begin(), answer.end(), ::isdigit)) {
      FieldId id = std::stoi(answer);
      if (lex.field(id)) return id;
    }
    prompt << "Unknown field '" << answer << "'\n";
  }
}

void print_trace(const Disambiguation& r, const Lexicon& lex, std::ostream& out) {
  out << "Sentence: " << r.sentence << '\n';
  out << "Step 1: Separating All Words\n";
  for (const auto& t : r.tokens)
    if (t.kind != TokenKind::Punct) out << "Word: " << t.token.surface << '\n';

  out << "Step 2: Finding Matching Domain\n";
  for (const auto& [word, domains] : r.categories.c2) {
    if (domains.empty()) out << "No match – " << word << '\n';
    for (const auto& d : domains)
      out << "Match – " << word << ": " << word << " clustered under – " << d.name << '\n';
  }

  out << "Step 3: Checking for Best Probable Field\n";
  for (const auto& [id, count] : r.tally.counts)
    out << "Field " << id << " found " << count << " times\n";
  if (!r.winner) {
    out << "No domain found for this sentence\n";
    return;
  }
  out << "Max Value: " << r.max_count << " For field ID: " << *r.winner << '\n';
  if (r.tied.size() > 1) {
    out << "Tied fields:";
    for (FieldId id : r.tied) out << ' ' << lex.field_name(id);
    out << '\n';
  }
  out << "The Domain is " << lex.field_name(*r.winner) << '\n';
}

void print_delta(const LexiconDelta& delta, const Lexicon& lex, std::ostream& out) {
  if (delta.empty()) {
    out << "No new elements; the database already holds these words for this field\n";
    return;
  }
  out << "Words to be updated:\n";
  for (const auto& m : delta.added) out << "  " << m.word << " -> " << lex.field_name(m.field_id) << '\n';
  out << "The new elements with selected domains have been updated...\n";
}

std::string rebuild(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty() && !t.is_punct) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace

std::string cmd_spellcheck_gate(const Lexicon& lex, const std::string& sentence, Console& io) {
  std::vector<Token> tokens = tokenize(sentence);
  std::vector<std::pair<std::size_t, SpellSuggestion>> flagged;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].is_punct || lex.in_vocabulary(tokens[i].surface)) continue;
    auto s = suggest_spellings(tokens[i].surface, lex);
    if (!s.candidates.empty()) flagged.emplace_back(i, std::move(s));
  }
  if (flagged.empty()) return sentence;

  io.out << "Probable Spelling Matches found...\n";
  for (const auto& [i, s] : flagged) {
    io.out << s.original << ':';
    for (const auto& c : s.candidates) io.out << ' ' << c.word;
    io.out << '\n';
  }
  if (!io.interactive) return sentence;

  io.out << "Do you wish to change the input(y/n): " << std::flush;
  auto answer = read_answer(io);
  if (!answer || (*answer != "y" && *answer != "yes")) return sentence;

  bool changed = false;
  for (const auto& [i, s] : flagged) {
    io.out << "Replace '" << s.original << "' with (1-" << s.candidates.size()
           << ", a word, or Enter to keep): " << std::flush;
    std::string line;
    if (!std::getline(io.in, line)) break;
    std::string choice = normalize_word(line);
    if (choice.empty()) continue;
    if (std::all_of(choice.begin(), choice.end(), ::isdigit)) {
      std::size_t n = std::stoul(choice);
      if (n >= 1 && n <= s.candidates.size()) choice = s.candidates[n - 1].word;
    }
    tokens[i].surface = choice;
    changed = true;
  }
  if (!changed) return sentence;
  std::string revised = rebuild(tokens);
  io.out << "Revised sentence: " << revised << '\n';
  return revised;
}

int cmd_disambiguate(const CliConfig& config, std::string sentence, Console& io) {
  if (normalize_word(sentence).empty()) {
    io.err << "error: sentence is empty\n";
    return kUserError;
  }
  auto loaded = open_lexicon(config, io);
  if (!loaded) return kEnvError;
  Lexicon& lex = *loaded;
  const bool text = config.output_format == OutputFormat::Text;
  std::ostream& prompt = prompt_stream(config, io);

  if (config.spellcheck && text) sentence = cmd_spellcheck_gate(lex, sentence, io);

  Disambiguation result;
  try {
    result = disambiguate_sentence(sentence, lex);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }
  if (text) print_trace(result, lex, io.out);

  LexiconDelta delta;
  std::optional<FieldId> applied;
  bool asked = false;
  auto choose = [&](std::optional<FieldId> chosen) {
    if (!chosen) return;
    if (text) {
      io.out << "Step 5: Supervised Learning\n"
             << "Your choice is: " << lex.field_name(*chosen) << '\n'
             << "So the new field of this sentence is set to: " << lex.field_name(*chosen) << '\n';
    }
  };

  try {
    switch (config.mode) {
      case LearningMode::Unsupervised:
        if (result.winner) {
          delta = unsupervised_update(result, lex);
          applied = result.winner;
        }
        break;
      case LearningMode::Supervised: {
        prompt << "Step 4: Checking for Correctness\n";
        asked = true;
        bool yes = result.winner &&
                   ask_yes_no("Is this the type of the sentence at input? Y/N", prompt, io);
        if (yes) {
          delta = unsupervised_update(result, lex);
          applied = result.winner;
        } else if (auto chosen = ask_field(lex, prompt, io)) {
          choose(chosen);
          delta = supervised_correct(result, Correction{result.sentence, result.winner, false, chosen}, lex);
          applied = chosen;
        }
        break;
      }
      case LearningMode::Hybrid: {
        auto confirm = [&](const std::string&, std::optional<FieldId> predicted,
                           const std::vector<FieldId>&) {
          prompt << "Step 4: Checking for Correctness\n";
          if (predicted && ask_yes_no("Is this the type of the sentence at input? Y/N", prompt, io))
            return ConfirmAnswer{true, std::nullopt};
          auto chosen = ask_field(lex, prompt, io);
          choose(chosen);
          return ConfirmAnswer{false, chosen};
        };
        HybridOutcome outcome = hybrid_step(sentence, lex, confirm);
        delta = std::move(outcome.delta);
        applied = outcome.applied_field;
        asked = outcome.asked;
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoWinner) throw;
  }

  if (!delta.empty()) {
    try {
      lex.save(config.lexicon_path);
    } catch (const Error& e) {
      io.err << "error: cannot save lexicon: " << e.what() << '\n';
      return kEnvError;
    }
  }

  if (text) {
    if (applied) {
      print_delta(delta, lex, io.out);
    } else {
      io.out << "Nothing learned from this sentence\n";
    }
  } else {
    json doc = disambiguation_json(result, lex);
    doc["schema_version"] = kSchemaVersion;
    doc["mode"] = to_string(config.mode);
    doc["asked"] = asked;
    doc["applied_field"] = applied ? json(lex.field_name(*applied)) : json(nullptr);
    doc["applied_delta"] = delta_json(delta, lex);
    io.out << doc.dump(2) << '\n';
  }
  return kOk;
}

int cmd_eval(const CliConfig& config, const fs::path& corpus_path, const std::string& modes,
             const fs::path& out_dir, Console& io) {
  std::vector<LearningMode> selected;
  if (iequals(modes, "all")) {
    selected = {LearningMode::Unsupervised, LearningMode::Supervised, LearningMode::Hybrid};
  } else if (auto m = parse_learning_mode(modes)) {
    selected = {*m};
  } else {
    io.err << "error: unknown mode '" << modes << "'\n";
    return kUserError;
  }

  std::vector<GoldSentence> corpus;
  try {
    corpus = load_corpus(corpus_path);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }
  if (corpus.empty()) {
    io.err << "error: corpus has no sentences\n";
    return kUserError;
  }
  auto seed = open_lexicon(config, io);
  if (!seed) return kEnvError;

  std::vector<ModeReport> reports;
  try {
    for (LearningMode m : selected) reports.push_back(run_mode(corpus, *seed, m));
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto write = [&](const fs::path& path, auto&& fn) {
    std::ofstream f(path);
    if (!f) return false;
    fn(f);
    return static_cast<bool>(f);
  };
  for (const auto& rep : reports) {
    fs::path path = out_dir / (std::string("eval_") + to_string(rep.mode) + ".tsv");
    if (!write(path, [&](std::ostream& f) { write_report(f, rep); })) {
      io.err << "error: cannot write " << path.string() << '\n';
      return kEnvError;
    }
  }
  if (reports.size() == 3) {
    fs::path path = out_dir / "eval_comparison.tsv";
    if (!write(path, [&](std::ostream& f) { write_comparison(f, reports); })) {
      io.err << "error: cannot write " << path.string() << '\n';
      return kEnvError;
    }
  }

  if (config.output_format == OutputFormat::Structured) {
    json doc = {{"schema_version", kSchemaVersion}, {"totals", json::array()}};
    for (const auto& rep : reports)
      doc["totals"].push_back({{"mode", to_string(rep.mode)},
                               {"targets", rep.totals.targets},
                               {"disambiguated", rep.totals.disambiguated},
                               {"correct", rep.totals.correct},
                               {"accuracy_pct", round_pct(rep.totals.overall_accuracy_pct)}});
    io.out << doc.dump(2) << '\n';
  } else {
    io.out << "mode\ttargets\tdisambiguated\tcorrect\taccuracy_pct\n";
    for (const auto& rep : reports)
      io.out << to_string(rep.mode) << '\t' << rep.totals.targets << '\t'
             << rep.totals.disambiguated << '\t' << rep.totals.correct << '\t'
             << format_pct(rep.totals.overall_accuracy_pct) << '\n';
  }
  return kOk;
}

int cmd_lexicon(const CliConfig& config, const std::string& action,
                const std::vector<std::string>& args, bool force, Console& io) {
  if (action == "init") {
    if (fs::exists(config.lexicon_path / "fields.tsv") && !force) {
      io.err << "error: " << config.lexicon_path.string()
             << " already holds a lexicon (use --force to overwrite)\n";
      return kUserError;
    }
    Lexicon lex = Lexicon::seed();
    try {
      lex.save(config.lexicon_path);
    } catch (const Error& e) {
      io.err << "error: " << e.what() << '\n';
      return kEnvError;
    }
    io.out << "Initialized " << config.lexicon_path.string() << ": " << lex.fields().size()
           << " fields, " << lex.general_words().size() << " general words, "
           << lex.meanings().size() << " meanings\n";
    return kOk;
  }

  auto loaded = open_lexicon(config, io);
  if (!loaded) return kEnvError;
  Lexicon& lex = *loaded;

  if (action == "add") {
    if (args.size() != 2) {
      io.err << "error: lexicon add needs <word> <field>\n";
      return kUserError;
    }
    bool added = false;
    try {
      added = lex.add_meaning(args[0], args[1]);
      if (added) lex.save(config.lexicon_path);
    } catch (const Error& e) {
      io.err << "error: " << e.what() << '\n';
      return e.kind() == ErrorKind::Io ? kEnvError : kUserError;
    }
    const std::string row = "(" + normalize_word(args[0]) + ", " +
                            lex.field_name(*lex.find_field(args[1])) + ")";
    io.out << (added ? "Added " + row : "No change: " + row + " already present") << '\n';
    return kOk;
  }

  if (action == "list") {
    if (config.output_format == OutputFormat::Structured) {
      json doc = {{"schema_version", kSchemaVersion}, {"fields", json::array()}};
      for (const auto& [id, f] : lex.fields())
        doc["fields"].push_back({{"field_id", id}, {"name", f.name}, {"meanings", lex.meaning_count(id)}});
      io.out << doc.dump(2) << '\n';
    } else {
      io.out << lex.fields().size() << " fields\n";
      io.out << "field_id\tname\tmeanings\n";
      for (const auto& [id, f] : lex.fields())
        io.out << id << '\t' << f.name << '\t' << lex.meaning_count(id) << '\n';
    }
    return kOk;
  }

  io.err << "error: unknown lexicon action '" << action << "'\n";
  return kUserError;
}

int run_cli(const std::vector<std::string>& args, Console& io) {
  CLI::App app{"Domain-vote word ambiguity removal"};
  app.require_subcommand(1);

  std::string lexicon_path = "lexicon";
  std::string mode_text = "hybrid";
  bool no_spellcheck = false;
  std::string format_text = "text";
  app.add_option("--lexicon", lexicon_path, "Lexicon directory");
  app.add_option("--mode", mode_text, "Learning mode")
      ->check(CLI::IsMember({"unsupervised", "supervised", "hybrid"}, CLI::ignore_case));
  app.add_flag("--no-spellcheck", no_spellcheck, "Skip the spelling gate");
  app.add_option("--format", format_text, "Output format")
      ->check(CLI::IsMember({"text", "structured"}, CLI::ignore_case));

  auto* dis = app.add_subcommand("disambiguate", "Find the domain of a sentence and learn from it");
  std::vector<std::string> words;
  dis->add_option("sentence", words, "Sentence (quoted or as separate words)")->required();

  auto* eval = app.add_subcommand("eval", "Replay a gold corpus under one or all learning modes");
  std::string corpus, eval_mode, out_dir = ".";
  eval->add_option("--corpus", corpus, "Corpus TSV")->required();
  eval->add_option("--mode", eval_mode, "unsupervised|supervised|hybrid|all");
  eval->add_option("--out", out_dir, "Directory for report TSVs");

  auto* lexicon = app.add_subcommand("lexicon", "Manage the lexicon");
  lexicon->require_subcommand(1);
  bool force = false;
  auto* init = lexicon->add_subcommand("init", "Write the seed lexicon");
  init->add_flag("--force", force, "Overwrite an existing lexicon");
  auto* add = lexicon->add_subcommand("add", "Add a word-field row");
  std::vector<std::string> add_args;
  add->add_option("args", add_args, "<word> <field>")->expected(2)->required();
  auto* list = lexicon->add_subcommand("list", "List fields with meaning counts");

  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      io.out << app.help();
      return kOk;
    }
    io.err << "error: " << e.what() << '\n';
    return kUserError;
  }

  CliConfig config;
  config.lexicon_path = lexicon_path;
  config.mode = *parse_learning_mode(mode_text);
  config.spellcheck = !no_spellcheck;
  config.output_format = iequals(format_text, "structured") ? OutputFormat::Structured : OutputFormat::Text;

  try {
    if (*dis) {
      std::string sentence;
      for (const auto& w : words) sentence += (sentence.empty() ? "" : " ") + w;
      return cmd_disambiguate(config, sentence, io);
    }
    if (*eval) return cmd_eval(config, corpus, eval_mode.empty() ? mode_text : eval_mode, out_dir, io);
    if (*lexicon) {
      if (*init) return cmd_lexicon(config, "init", {}, force, io);
      if (*add) return cmd_lexicon(config, "add", add_args, force, io);
      if (*list) return cmd_lexicon(config, "list", {}, force, io);
    }
    if (*serve) {
      try {
        Lexicon::load(config.lexicon_path);
      } catch (const Error& e) {
        io.err << "error: cannot load lexicon: " << e.what() << '\n';
        return kEnvError;
      }
      return run_server(config.lexicon_path, host, port);
    }
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return is_environment_error(e) ? kEnvError : kUserError;
  }
  return kUserError;
}

}  // namespace wsd
