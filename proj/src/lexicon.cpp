#include "wsd/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wsd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::EmptyWord: return "EmptyWord";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::IntegrityViolation: return "IntegrityViolation";
    case ErrorKind::EmptySentence: return "EmptySentence";
    case ErrorKind::NoContentWords: return "NoContentWords";
    case ErrorKind::NoWinner: return "NoWinner";
    case ErrorKind::NotACorrection: return "NotACorrection";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::Empty: return "Empty";
  }
  return "Unknown";
}

std::string normalize_word(std::string_view word) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!word.empty() && is_space(word.front())) word.remove_prefix(1);
  while (!word.empty() && is_space(word.back())) word.remove_suffix(1);
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string valid_word(std::string_view raw) {
  std::string word = normalize_word(raw);
  if (word.empty()) throw Error(ErrorKind::EmptyWord, "word is empty");
  if (has_space(word))
    throw Error(ErrorKind::IntegrityViolation, "word '" + word + "' contains whitespace");
  return word;
}

}  // namespace

Lexicon Lexicon::seed() {
  Lexicon lex;
  const char* table_fields[] = {"Computer", "Sports",  "Medical",   "Engineering",
                                "Factotum", "History", "Geography", "Games",
                                "Law",      "Biomedical"};
  for (const char* name : table_fields) lex.add_field(name);
  // Domains only named in the worked examples.
  for (const char* name :
       {"Commerce", "Free_time", "Entertainment", "Profession", "Economy", "Nature"})
    lex.add_field(name);

  lex.next_general_id_ = 70;
  for (const char* w : {"is", "the", "was", "that", "on", "of", "for", "where", "how",
                        "when", "a", "an", "to", "in", "at", "by", "with", "and", "or",
                        "it", "he", "she", "they", "we", "you", "i"})
    lex.add_general_word(w);

  lex.next_meaning_id_ = 441;
  for (const char* w : {"diving", "racing", "athletics", "wrestling", "boxing", "fencing",
                        "archery", "fishing", "hunting", "bowling"})
    lex.add_meaning(w, "Sports");

  const std::pair<const char*, const char*> rows[] = {
      {"play", "Commerce"},      {"play", "Free_time"},  {"play", "Entertainment"},
      {"stock", "Commerce"},     {"market", "Commerce"}, {"imagination", "Free_time"},
      {"drama", "Entertainment"}, {"fisherman", "Profession"}, {"went", "Factotum"},
      {"bank", "Factotum"},      {"bank", "Economy"},    {"bank", "Nature"},
  };
  for (const auto& [w, f] : rows) lex.add_meaning(w, f);
  return lex;
}

FieldId Lexicon::add_field(std::string_view name) {
  FieldId id = next_field_id_;
  add_field(id, name);
  return id;
}

void Lexicon::add_field(FieldId id, std::string_view raw_name) {
  std::string name(raw_name);
  if (name.empty() || has_space(name))
    throw Error(ErrorKind::IntegrityViolation, "invalid field name '" + name + "'");
  if (id < 1) throw Error(ErrorKind::IntegrityViolation, "field id must be positive");
  if (fields_.count(id))
    throw Error(ErrorKind::IntegrityViolation, "duplicate field id " + std::to_string(id));
  if (find_field(name))
    throw Error(ErrorKind::IntegrityViolation, "duplicate field name '" + name + "'");
  fields_.emplace(id, Field{id, name});
  next_field_id_ = std::max(next_field_id_, id + 1);
}

bool Lexicon::add_general_word(std::string_view raw) {
  std::string word = valid_word(raw);
  if (general_index_.count(word)) return false;
  int id = next_general_id_++;
  general_.emplace(id, GeneralWord{id, word});
  general_index_.insert(word);
  return true;
}

bool Lexicon::add_meaning(std::string_view word, std::string_view field_name) {
  auto id = find_field(field_name);
  if (!id) throw Error(ErrorKind::UnknownField, "unknown field '" + std::string(field_name) + "'");
  return add_meaning(word, *id);
}

bool Lexicon::add_meaning(std::string_view raw, FieldId field_id) {
  if (!fields_.count(field_id))
    throw Error(ErrorKind::UnknownField, "unknown field id " + std::to_string(field_id));
  std::string word = valid_word(raw);
  if (has_meaning(word, field_id)) return false;
  insert_meaning_row(Meaning{next_meaning_id_++, std::move(word), field_id});
  return true;
}

void Lexicon::insert_meaning_row(const Meaning& m) {
  meanings_.emplace(m.id, m);
  by_word_[m.word].insert(m.field_id);
}

std::vector<DomainRef> Lexicon::lookup_domains(std::string_view raw) const {
  std::vector<DomainRef> out;
  auto it = by_word_.find(normalize_word(raw));
  if (it == by_word_.end()) return out;
  for (FieldId id : it->second) out.push_back({id, fields_.at(id).name});
  return out;
}

bool Lexicon::is_general(std::string_view word) const {
  return general_index_.count(normalize_word(word)) > 0;
}

bool Lexicon::has_meaning(std::string_view word, FieldId field_id) const {
  auto it = by_word_.find(normalize_word(word));
  return it != by_word_.end() && it->second.count(field_id) > 0;
}

std::optional<FieldId> Lexicon::find_field(std::string_view name) const {
  for (const auto& [id, f] : fields_)
    if (iequals(f.name, name)) return id;
  return std::nullopt;
}

const Field* Lexicon::field(FieldId id) const {
  auto it = fields_.find(id);
  return it == fields_.end() ? nullptr : &it->second;
}

const std::string& Lexicon::field_name(FieldId id) const {
  const Field* f = field(id);
  if (!f) throw Error(ErrorKind::UnknownField, "unknown field id " + std::to_string(id));
  return f->name;
}

std::size_t Lexicon::meaning_count(FieldId id) const {
  return static_cast<std::size_t>(std::count_if(
      meanings_.begin(), meanings_.end(),
      [id](const auto& kv) { return kv.second.field_id == id; }));
}

std::vector<std::string> Lexicon::vocabulary() const {
  std::set<std::string> words(general_index_.begin(), general_index_.end());
  for (const auto& [w, ids] : by_word_) words.insert(w);
  return {words.begin(), words.end()};
}

bool Lexicon::in_vocabulary(std::string_view raw) const {
  std::string w = normalize_word(raw);
  return general_index_.count(w) > 0 || by_word_.count(w) > 0;
}

bool Lexicon::operator==(const Lexicon& other) const {
  return fields_ == other.fields_ && general_ == other.general_ &&
         meanings_ == other.meanings_ && next_field_id_ == other.next_field_id_ &&
         next_general_id_ == other.next_general_id_ &&
         next_meaning_id_ == other.next_meaning_id_;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

namespace fs = std::filesystem;

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot replace " + path.string() + ": " + ec.message());
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

struct TsvFile {
  std::string name;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, cols)
};

TsvFile read_tsv(const fs::path& path, const std::string& header, std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  TsvFile file{path.filename().string(), {}};
  std::string line;
  std::size_t line_no = 0;
  auto malformed = [&](const std::string& why) {
    return Error(ErrorKind::Malformed, file.name + ":" + std::to_string(line_no) + ": " + why,
                 line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw malformed("CRLF line ending");
    if (line_no == 1) {
      if (line != header) throw malformed("expected header '" + header + "'");
      continue;
    }
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != columns)
      throw malformed("expected " + std::to_string(columns) + " columns, got " +
                      std::to_string(cols.size()));
    file.rows.emplace_back(line_no, std::move(cols));
  }
  if (line_no == 0) throw malformed("missing header");
  return file;
}

int parse_id(const std::string& text, const TsvFile& file, std::size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorKind::Malformed,
                file.name + ":" + std::to_string(line_no) + ": not an integer '" + text + "'",
                line_no);
  return value;
}

Error integrity(const TsvFile& file, std::size_t line_no, const std::string& why) {
  return Error(ErrorKind::IntegrityViolation,
               file.name + ":" + std::to_string(line_no) + ": " + why, line_no);
}

}  // namespace

void Lexicon::save(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream fields, general, meanings, counters;
  fields << "field_id\tname\n";
  for (const auto& [id, f] : fields_) fields << id << '\t' << f.name << '\n';
  general << "id\tword\n";
  for (const auto& [id, g] : general_) general << id << '\t' << g.surface << '\n';
  meanings << "id\tword\tfield_id\n";
  for (const auto& [id, m] : meanings_) meanings << id << '\t' << m.word << '\t' << m.field_id << '\n';
  counters << "table\tnext_id\n"
           << "fields\t" << next_field_id_ << '\n'
           << "general\t" << next_general_id_ << '\n'
           << "meanings\t" << next_meaning_id_ << '\n';

  write_atomically(dir / "fields.tsv", fields.str());
  write_atomically(dir / "general.tsv", general.str());
  write_atomically(dir / "meanings.tsv", meanings.str());
  write_atomically(dir / "counters.tsv", counters.str());
}

Lexicon Lexicon::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "no lexicon directory " + dir.string());
  Lexicon lex;

  auto fields = read_tsv(dir / "fields.tsv", "field_id\tname", 2);
  for (const auto& [line, cols] : fields.rows) {
    int id = parse_id(cols[0], fields, line);
    try {
      lex.add_field(id, cols[1]);
    } catch (const Error& e) {
      throw integrity(fields, line, e.what());
    }
  }

  auto general = read_tsv(dir / "general.tsv", "id\tword", 2);
  for (const auto& [line, cols] : general.rows) {
    int id = parse_id(cols[0], general, line);
    const std::string& w = cols[1];
    if (id < 1 || lex.general_.count(id)) throw integrity(general, line, "bad or duplicate id");
    if (w.empty() || w != normalize_word(w) || has_space(w))
      throw integrity(general, line, "word must be non-empty lowercase");
    if (lex.general_index_.count(w)) throw integrity(general, line, "duplicate word '" + w + "'");
    lex.general_.emplace(id, GeneralWord{id, w});
    lex.general_index_.insert(w);
  }

  auto meanings = read_tsv(dir / "meanings.tsv", "id\tword\tfield_id", 3);
  for (const auto& [line, cols] : meanings.rows) {
    int id = parse_id(cols[0], meanings, line);
    const std::string& w = cols[1];
    int field_id = parse_id(cols[2], meanings, line);
    if (id < 1 || lex.meanings_.count(id)) throw integrity(meanings, line, "bad or duplicate id");
    if (w.empty() || w != normalize_word(w) || has_space(w))
      throw integrity(meanings, line, "word must be non-empty lowercase");
    if (!lex.fields_.count(field_id))
      throw integrity(meanings, line, "field_id " + std::to_string(field_id) + " does not exist");
    if (lex.has_meaning(w, field_id))
      throw integrity(meanings, line, "duplicate meaning (" + w + ", " + cols[2] + ")");
    lex.insert_meaning_row(Meaning{id, w, field_id});
  }

  auto counters = read_tsv(dir / "counters.tsv", "table\tnext_id", 2);
  std::map<std::string, int> next;
  for (const auto& [line, cols] : counters.rows) {
    if (next.count(cols[0])) throw integrity(counters, line, "duplicate counter " + cols[0]);
    next[cols[0]] = parse_id(cols[1], counters, line);
  }
  auto counter = [&](const char* table, const auto& rows, int& slot) {
    auto it = next.find(table);
    if (it == next.end())
      throw Error(ErrorKind::IntegrityViolation, std::string("counters.tsv: missing ") + table);
    int floor = rows.empty() ? 1 : rows.rbegin()->first + 1;
    if (it->second < floor)
      throw Error(ErrorKind::IntegrityViolation,
                  std::string("counters.tsv: ") + table + " counter below existing ids");
    slot = it->second;
  };
  counter("fields", lex.fields_, lex.next_field_id_);
  counter("general", lex.general_, lex.next_general_id_);
  counter("meanings", lex.meanings_, lex.next_meaning_id_);
  return lex;
}

}  // namespace wsd
