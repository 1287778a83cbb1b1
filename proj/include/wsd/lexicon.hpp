#ifndef WSD_LEXICON_HPP
#define WSD_LEXICON_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/error.hpp"

namespace wsd {

using FieldId = int;

/// A semantic domain ("field"), e.g. (2, Sports).
struct Field {
  FieldId id = 0;
  std::string name;
  bool operator==(const Field&) const = default;
};

/// Closed-class function word excluded from voting.
struct GeneralWord {
  int id = 0;
  std::string surface;
  bool operator==(const GeneralWord&) const = default;
};

/// One (word, field) membership row.
struct Meaning {
  int id = 0;
  std::string word;
  FieldId field_id = 0;
  bool operator==(const Meaning&) const = default;
};

struct DomainRef {
  FieldId field_id = 0;
  std::string name;
  bool operator==(const DomainRef&) const = default;
};

/// Lowercases ASCII and trims surrounding whitespace.
std::string normalize_word(std::string_view word);

/// Case-insensitive ASCII comparison.
bool iequals(std::string_view a, std::string_view b);

/// The three-table lexicon: fields, general words and meanings.
///
/// Every mutation keeps the tables referentially consistent: meanings
/// always point at an existing field, (word, field) pairs are unique and
/// field names are unique ignoring case. Ids come from per-table counters
/// that only ever grow.
class Lexicon {
 public:
  Lexicon() = default;

  /// Seed knowledge: Table-1 fields, example domains, function words and
  /// the worked-example meaning rows.
  static Lexicon seed();

  /// Adds a field with the next free id. Throws IntegrityViolation on a
  /// duplicate or empty name.
  FieldId add_field(std::string_view name);
  /// Adds a field with an explicit id; the counter is advanced past it.
  void add_field(FieldId id, std::string_view name);

  /// Returns true when the word was inserted, false when already present.
  bool add_general_word(std::string_view word);

  /// Inserts (word, field) unless present. Returns whether a row was added.
  /// Throws UnknownField or EmptyWord.
  bool add_meaning(std::string_view word, std::string_view field_name);
  bool add_meaning(std::string_view word, FieldId field_id);

  /// Domains for a word, ascending by field id; empty for unknown words.
  std::vector<DomainRef> lookup_domains(std::string_view word) const;
  bool is_general(std::string_view word) const;
  bool has_meaning(std::string_view word, FieldId field_id) const;

  std::optional<FieldId> find_field(std::string_view name) const;
  const Field* field(FieldId id) const;
  /// Field name for an id; throws UnknownField when absent.
  const std::string& field_name(FieldId id) const;

  const std::map<FieldId, Field>& fields() const { return fields_; }
  const std::map<int, GeneralWord>& general_words() const { return general_; }
  const std::map<int, Meaning>& meanings() const { return meanings_; }

  /// Number of meaning rows pointing at a field.
  std::size_t meaning_count(FieldId id) const;

  /// Distinct meaning words plus general words, sorted.
  std::vector<std::string> vocabulary() const;
  bool in_vocabulary(std::string_view word) const;

  int next_field_id() const { return next_field_id_; }
  int next_general_id() const { return next_general_id_; }
  int next_meaning_id() const { return next_meaning_id_; }

  /// Writes fields.tsv, general.tsv, meanings.tsv and counters.tsv into
  /// `dir`, creating it if needed. Each file is replaced atomically.
  void save(const std::filesystem::path& dir) const;
  /// Throws Io, Malformed (with line) or IntegrityViolation.
  static Lexicon load(const std::filesystem::path& dir);

  bool operator==(const Lexicon& other) const;

 private:
  std::map<FieldId, Field> fields_;
  std::map<int, GeneralWord> general_;
  std::map<int, Meaning> meanings_;

  // Secondary indexes, rebuilt from the tables on load.
  std::map<std::string, std::set<FieldId>, std::less<>> by_word_;
  std::set<std::string, std::less<>> general_index_;

  int next_field_id_ = 1;
  int next_general_id_ = 1;
  int next_meaning_id_ = 1;

  void insert_meaning_row(const Meaning& m);
};

}  // namespace wsd

#endif  // WSD_LEXICON_HPP
