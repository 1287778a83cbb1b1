#include "wsd/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "httplib.h"

namespace wsd {

using nlohmann::json;

const char* to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Pending: return "Pending";
    case SessionStatus::Confirmed: return "Confirmed";
    case SessionStatus::Corrected: return "Corrected";
  }
  return "?";
}

namespace {

std::optional<SessionStatus> parse_status(const std::string& s) {
  for (auto st : {SessionStatus::Pending, SessionStatus::Confirmed, SessionStatus::Corrected})
    if (s == to_string(st)) return st;
  return std::nullopt;
}

json field_ref(FieldId id, const Lexicon& lex) {
  const Field* f = lex.field(id);
  return {{"field_id", id}, {"field", f ? json(f->name) : json(nullptr)}};
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Response error(int status, const std::string& message) {
  return {status, {{"schema_version", kSchemaVersion}, {"error", message}}};
}

std::optional<int> parse_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

json disambiguation_json(const Disambiguation& r, const Lexicon& lex) {
  json tokens = json::array();
  for (const auto& t : r.tokens)
    tokens.push_back({{"surface", t.token.surface},
                      {"position", t.token.position},
                      {"tag", to_string(t.tag)},
                      {"kind", to_string(t.kind)}});

  json matches = json::array();
  for (const auto& m : r.tally.trace) {
    json entry = field_ref(m.field_id, lex);
    entry["word"] = m.word;
    matches.push_back(std::move(entry));
  }

  std::vector<std::pair<FieldId, int>> ranked(r.tally.counts.begin(), r.tally.counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  json counts = json::array();
  for (const auto& [id, count] : ranked) {
    json entry = field_ref(id, lex);
    entry["count"] = count;
    counts.push_back(std::move(entry));
  }

  json tied = json::array();
  for (FieldId id : r.tied) tied.push_back(field_ref(id, lex));

  json c1 = json::array();
  for (const auto& [w, sense] : r.categories.c1) c1.push_back({{"word", w}, {"sense", to_string(sense)}});

  return {
      {"sentence", r.sentence},
      {"tokens", std::move(tokens)},
      {"content_words", r.content_words()},
      {"senses", std::move(c1)},
      {"matches", std::move(matches)},
      {"counts", std::move(counts)},
      {"winner", r.winner ? json(lex.field_name(*r.winner)) : json(nullptr)},
      {"winner_field_id", r.winner ? json(*r.winner) : json(nullptr)},
      {"max_count", r.max_count},
      {"tied", std::move(tied)},
      {"unknown_words", r.unknown_words},
  };
}

json delta_json(const LexiconDelta& delta, const Lexicon& lex) {
  json out = json::array();
  for (const auto& m : delta.added) {
    json entry = field_ref(m.field_id, lex);
    entry["word"] = m.word;
    out.push_back(std::move(entry));
  }
  return out;
}

json suggestion_json(const SpellSuggestion& s) {
  json candidates = json::array();
  for (const auto& c : s.candidates) candidates.push_back({{"word", c.word}, {"distance", c.distance}});
  return {{"original", s.original}, {"candidates", std::move(candidates)}};
}

// ---------------------------------------------------------------------------

Service::Service(std::filesystem::path lexicon_dir)
    : dir_(std::move(lexicon_dir)), lex_(Lexicon::load(dir_)), rng_(std::random_device{}()) {
  load_log();
}

void Service::load_log() {
  std::ifstream in(log_path());
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json ev = json::parse(line, nullptr, false);
    if (ev.is_discarded() || !ev.is_object())
      throw Error(ErrorKind::Malformed, "sessions.jsonl: bad event", line_no);
    const std::string id = ev.value("session_id", "");
    const std::string kind = ev.value("event", "");
    if (kind == "session") {
      SessionRecord s;
      s.session_id = id;
      s.seq = ev.value("seq", std::uint64_t{0});
      s.sentence = ev.value("sentence", "");
      s.result = ev.value("result", json::object());
      if (ev.contains("predicted_field_id") && ev["predicted_field_id"].is_number_integer())
        s.predicted_field = ev["predicted_field_id"].get<FieldId>();
      s.timestamp = ev.value("timestamp", "");
      next_seq_ = std::max(next_seq_, s.seq + 1);
      sessions_[id] = std::move(s);
    } else if (kind == "feedback") {
      auto it = sessions_.find(id);
      if (it == sessions_.end())
        throw Error(ErrorKind::Malformed, "sessions.jsonl: feedback for unknown session", line_no);
      auto status = parse_status(ev.value("status", ""));
      if (!status || *status == SessionStatus::Pending)
        throw Error(ErrorKind::Malformed, "sessions.jsonl: bad status", line_no);
      it->second.status = *status;
      LexiconDelta delta;
      for (const auto& row : ev.value("applied_delta", json::array()))
        delta.added.push_back({row.at("word").get<std::string>(), row.at("field_id").get<FieldId>()});
      it->second.applied_delta = std::move(delta);
      if (ev.contains("chosen_field_id") && ev["chosen_field_id"].is_number_integer())
        it->second.chosen_field = ev["chosen_field_id"].get<FieldId>();
    }
  }
}

void Service::append_log(const json& event) {
  std::ofstream out(log_path(), std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot append to " + log_path().string());
  out << event.dump() << '\n';
}

Lexicon Service::replay(Lexicon base, const std::filesystem::path& log) {
  std::ifstream in(log);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + log.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json ev = json::parse(line);
    if (ev.value("event", "") != "feedback") continue;
    for (const auto& row : ev.value("applied_delta", json::array()))
      base.add_meaning(row.at("word").get<std::string>(), row.at("field_id").get<FieldId>());
  }
  return base;
}

Lexicon Service::lexicon_snapshot() const {
  std::shared_lock lock(lex_mutex_);
  return lex_;
}

json Service::session_json(const SessionRecord& s) const {
  json out = {
      {"session_id", s.session_id},
      {"sentence", s.sentence},
      {"result", s.result},
      {"status", to_string(s.status)},
      {"applied_delta", s.applied_delta ? delta_json(*s.applied_delta, lex_) : json(nullptr)},
      {"chosen_field_id", s.chosen_field ? json(*s.chosen_field) : json(nullptr)},
      {"timestamp", s.timestamp},
  };
  return out;
}

Response Service::disambiguate(const std::string& body) {
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object() || !req.contains("sentence") ||
      !req["sentence"].is_string())
    return error(400, "body must be a JSON object with a string 'sentence'");
  const std::string sentence = req["sentence"].get<std::string>();

  json result;
  std::optional<FieldId> winner;
  try {
    std::shared_lock lock(lex_mutex_);
    Disambiguation r = disambiguate_sentence(sentence, lex_);
    result = disambiguation_json(r, lex_);
    winner = r.winner;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptySentence) return error(400, e.what());
    if (e.kind() == ErrorKind::NoContentWords) return error(422, e.what());
    throw;
  }

  std::lock_guard lock(sessions_mutex_);
  SessionRecord s;
  do {
    std::ostringstream id;
    id << std::hex << std::setw(16) << std::setfill('0') << rng_();
    s.session_id = id.str();
  } while (sessions_.count(s.session_id));
  s.seq = next_seq_++;
  s.sentence = sentence;
  s.result = result;
  s.predicted_field = winner;
  s.timestamp = utc_timestamp();
  append_log({{"event", "session"},
              {"session_id", s.session_id},
              {"seq", s.seq},
              {"sentence", s.sentence},
              {"result", s.result},
              {"predicted_field_id", winner ? json(*winner) : json(nullptr)},
              {"timestamp", s.timestamp}});

  json body_out = result;
  body_out["schema_version"] = kSchemaVersion;
  body_out["session_id"] = s.session_id;
  sessions_.emplace(s.session_id, std::move(s));
  return {200, std::move(body_out)};
}

Response Service::feedback(const std::string& session_id, const std::string& body) {
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object() || !req.contains("confirmed") ||
      !req["confirmed"].is_boolean())
    return error(400, "body must be a JSON object with a boolean 'confirmed'");
  const bool confirmed = req["confirmed"].get<bool>();
  std::optional<FieldId> chosen;
  if (req.contains("chosen_field_id") && !req["chosen_field_id"].is_null()) {
    if (!req["chosen_field_id"].is_number_integer()) return error(400, "chosen_field_id must be an integer");
    chosen = req["chosen_field_id"].get<FieldId>();
  }

  // Single writer: the whole check-update-persist sequence runs under the
  // exclusive lexicon lock, so concurrent feedback never interleaves.
  std::unique_lock lex_lock(lex_mutex_);
  std::unique_lock sess_lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return error(404, "unknown session");
  SessionRecord& s = it->second;
  if (s.status != SessionStatus::Pending)
    return error(409, std::string("session already ") + to_string(s.status));
  if (!confirmed) {
    if (!chosen) return error(400, "chosen_field_id is required when confirmed is false");
    if (!lex_.field(*chosen)) return error(400, "unknown chosen_field_id");
  } else if (!s.predicted_field) {
    return error(422, "prediction has no winner; reject it with a chosen_field_id");
  }
  sess_lock.unlock();

  Disambiguation r = disambiguate_sentence(s.sentence, lex_);
  r.winner = s.predicted_field;
  Lexicon updated = lex_;
  LexiconDelta delta = confirmed
                           ? unsupervised_update(r, updated)
                           : supervised_correct(r, Correction{s.sentence, s.predicted_field, false, chosen}, updated);
  updated.save(dir_);
  lex_ = std::move(updated);

  const SessionStatus status = confirmed ? SessionStatus::Confirmed : SessionStatus::Corrected;
  Disambiguation rerun = disambiguate_sentence(s.sentence, lex_);
  json delta_out = delta_json(delta, lex_);

  sess_lock.lock();
  append_log({{"event", "feedback"},
              {"session_id", session_id},
              {"status", to_string(status)},
              {"chosen_field_id", confirmed ? json(nullptr) : json(*chosen)},
              {"applied_delta", delta_out},
              {"timestamp", utc_timestamp()}});
  s.status = status;
  s.applied_delta = delta;
  if (!confirmed) s.chosen_field = chosen;

  return {200,
          {{"schema_version", kSchemaVersion},
           {"session_id", session_id},
           {"status", to_string(status)},
           {"applied_delta", std::move(delta_out)},
           {"new_winner", rerun.winner ? json(lex_.field_name(*rerun.winner)) : json(nullptr)},
           {"new_winner_field_id", rerun.winner ? json(*rerun.winner) : json(nullptr)}}};
}

Response Service::fields() const {
  std::shared_lock lock(lex_mutex_);
  json list = json::array();
  for (const auto& [id, f] : lex_.fields())
    list.push_back({{"field_id", id}, {"name", f.name}, {"meanings", lex_.meaning_count(id)}});
  return {200, {{"schema_version", kSchemaVersion}, {"fields", std::move(list)}}};
}

Response Service::suggestions(const std::optional<std::string>& word,
                              const std::optional<std::string>& max_dist,
                              const std::optional<std::string>& k) const {
  if (!word || normalize_word(*word).empty()) return error(400, "query parameter 'word' is required");
  int dist = 2, count = 3;
  if (max_dist) {
    auto v = parse_int(*max_dist);
    if (!v || *v < 0) return error(400, "max_dist must be a non-negative integer");
    dist = *v;
  }
  if (k) {
    auto v = parse_int(*k);
    if (!v || *v < 0) return error(400, "k must be a non-negative integer");
    count = *v;
  }
  std::shared_lock lock(lex_mutex_);
  json body = suggestion_json(suggest_spellings(*word, lex_, dist, count));
  body["schema_version"] = kSchemaVersion;
  body["in_vocabulary"] = lex_.in_vocabulary(*word);
  return {200, std::move(body)};
}

Response Service::sessions(const std::optional<std::string>& limit) const {
  std::size_t n = 20;
  if (limit) {
    auto v = parse_int(*limit);
    if (!v || *v < 0) return error(400, "limit must be a non-negative integer");
    n = static_cast<std::size_t>(*v);
  }
  std::shared_lock lex_lock(lex_mutex_);
  std::lock_guard lock(sessions_mutex_);
  std::vector<const SessionRecord*> ordered;
  for (const auto& [id, s] : sessions_) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SessionRecord* a, const SessionRecord* b) { return a->seq > b->seq; });
  json list = json::array();
  for (std::size_t i = 0; i < ordered.size() && i < n; ++i) list.push_back(session_json(*ordered[i]));
  return {200, {{"schema_version", kSchemaVersion}, {"sessions", std::move(list)}}};
}

void Service::mount(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto param = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
  };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/disambiguate", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, disambiguate(req.body));
  });
  server.Post(R"(/sessions/([^/]+)/feedback)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, feedback(req.matches[1].str(), req.body));
              });
  server.Get("/fields", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, fields());
  });
  server.Get("/suggestions", [this, reply, param](const httplib::Request& req, httplib::Response& res) {
    reply(res, suggestions(param(req, "word"), param(req, "max_dist"), param(req, "k")));
  });
  server.Get("/sessions", [this, reply, param](const httplib::Request& req, httplib::Response& res) {
    reply(res, sessions(param(req, "limit")));
  });
  server.set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, error(500, what));
      });
}

int run_server(const std::filesystem::path& lexicon_dir, const std::string& host, int port) {
  Service service(lexicon_dir);
  httplib::Server server;
  service.mount(server);
  std::cerr << "serving " << lexicon_dir.string() << " on " << host << ":" << port << '\n';
  return server.listen(host, port) ? 0 : 3;
}

}  // namespace wsd
