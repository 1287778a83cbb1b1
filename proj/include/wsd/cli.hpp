#ifndef WSD_CLI_HPP
#define WSD_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsd/learner.hpp"
#include "wsd/lexicon.hpp"

namespace wsd {

enum class OutputFormat { Text, Structured };

struct CliConfig {
  std::filesystem::path lexicon_path = "lexicon";
  LearningMode mode = LearningMode::Hybrid;
  bool spellcheck = true;
  OutputFormat output_format = OutputFormat::Text;
};

/// Terminal I/O for one command. With `interactive` false every prompt is
/// skipped and answered with its default (accept).
struct Console {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool interactive = false;
};

/// Exit codes: 0 ok, 2 user/input error, 3 environment error.
int cmd_disambiguate(const CliConfig& config, std::string sentence, Console& io);

/// Returns the sentence to disambiguate, revised if the user accepted
/// replacements.
std::string cmd_spellcheck_gate(const Lexicon& lex, const std::string& sentence, Console& io);

int cmd_eval(const CliConfig& config, const std::filesystem::path& corpus_path,
             const std::string& modes, const std::filesystem::path& out_dir, Console& io);

int cmd_lexicon(const CliConfig& config, const std::string& action,
                const std::vector<std::string>& args, bool force, Console& io);

/// Parses `args` (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, Console& io);

}  // namespace wsd

#endif  // WSD_CLI_HPP
