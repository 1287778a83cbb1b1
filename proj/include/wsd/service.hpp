#ifndef WSD_SERVICE_HPP
#define WSD_SERVICE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsd/disambiguator.hpp"
#include "wsd/learner.hpp"
#include "wsd/lexicon.hpp"
#include "wsd/text_pipeline.hpp"

namespace httplib {
class Server;
}

namespace wsd {

inline constexpr int kSchemaVersion = 1;

enum class SessionStatus { Pending, Confirmed, Corrected };

const char* to_string(SessionStatus status);

struct SessionRecord {
  std::string session_id;
  std::uint64_t seq = 0;
  std::string sentence;
  nlohmann::json result;  // disambiguation summary as served
  std::optional<FieldId> predicted_field;
  SessionStatus status = SessionStatus::Pending;
  std::optional<LexiconDelta> applied_delta;
  std::optional<FieldId> chosen_field;
  std::string timestamp;
};

/// JSON shape shared by the HTTP API and the CLI's structured output.
nlohmann::json disambiguation_json(const Disambiguation& result, const Lexicon& lex);
nlohmann::json delta_json(const LexiconDelta& delta, const Lexicon& lex);
nlohmann::json suggestion_json(const SpellSuggestion& suggestion);

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// Human-in-the-loop session protocol over a lexicon directory.
///
/// A POST to /disambiguate opens a Pending session; a single feedback call
/// moves it to Confirmed or Corrected and applies the matching update.
/// Lexicon writes are serialized behind one writer lock, and every session
/// event is appended to sessions.jsonl beside the lexicon files.
class Service {
 public:
  explicit Service(std::filesystem::path lexicon_dir);

  Response disambiguate(const std::string& body);
  Response feedback(const std::string& session_id, const std::string& body);
  Response fields() const;
  Response suggestions(const std::optional<std::string>& word,
                       const std::optional<std::string>& max_dist,
                       const std::optional<std::string>& k) const;
  Response sessions(const std::optional<std::string>& limit) const;

  /// Registers the routes on `server`.
  void mount(httplib::Server& server);

  Lexicon lexicon_snapshot() const;
  std::filesystem::path log_path() const { return dir_ / "sessions.jsonl"; }

  /// Applies every recorded delta in `log` to `base`, in log order.
  static Lexicon replay(Lexicon base, const std::filesystem::path& log);

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex lex_mutex_;
  Lexicon lex_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, SessionRecord> sessions_;
  std::uint64_t next_seq_ = 1;
  std::mt19937_64 rng_;

  void load_log();
  void append_log(const nlohmann::json& event);
  nlohmann::json session_json(const SessionRecord& s) const;
};

/// Blocks serving the API on `host:port` until the process is stopped.
int run_server(const std::filesystem::path& lexicon_dir, const std::string& host, int port);

}  // namespace wsd

#endif  // WSD_SERVICE_HPP
