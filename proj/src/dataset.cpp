#include "transkb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace transkb {

namespace {

// Strips a trailing '\r' so CRLF files parse the same as LF files.
void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

real parse_real(const std::string& token, const std::string& source, std::int64_t line_no) {
  double value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(source, line_no, "non-numeric value '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(source, line_no, "non-finite value '" + token + "'");
  }
  return static_cast<real>(value);
}

}  // namespace

std::vector<Triple> parse_triples(std::istream& in, Vocabulary& vocab,
                                  const std::string& source_name) {
  std::vector<Triple> triples;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(source_name, line_no,
                       "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    for (const std::string& f : fields) {
      if (f.empty()) throw ParseError(source_name, line_no, "empty field");
    }
    Triple t;
    t.head = vocab.add_entity(fields[0]);
    t.relation = vocab.add_relation(fields[1]);
    t.tail = vocab.add_entity(fields[2]);
    triples.push_back(t);
  }
  return triples;
}

DescriptionParse parse_descriptions(std::istream& in, const Vocabulary& vocab,
                                    DescriptionMode mode, const std::string& source_name) {
  DescriptionParse result;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(source_name, line_no, "missing tab separator");
    }
    std::string name = line.substr(0, tab);
    if (name.empty()) throw ParseError(source_name, line_no, "empty entity field");
    std::optional<EntityId> id = vocab.entity_id(name);
    if (!id) {
      if (mode == DescriptionMode::strict) {
        throw ParseError(source_name, line_no, "unknown entity '" + name + "'");
      }
      ++result.skipped;
      continue;
    }
    std::string text = line.substr(tab + 1);
    auto [it, inserted] = result.text.insert_or_assign(*id, std::move(text));
    (void)it;
    if (!inserted) ++result.overwritten;
  }
  return result;
}

std::optional<std::int64_t> WordVectorTable::lookup(const std::string& word) const {
  auto it = index.find(word);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

WordVectorTable parse_word_vectors(std::istream& in, std::int64_t expected_dim,
                                   const std::string& source_name) {
  if (expected_dim < 1) {
    throw ConfigError("word vector dimension must be >= 1, got " + std::to_string(expected_dim));
  }
  WordVectorTable table;
  table.dim = expected_dim;
  std::vector<real> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<real> row;
    std::string token;
    while (fields >> token) {
      row.push_back(parse_real(token, source_name, line_no));
    }
    if (static_cast<std::int64_t>(row.size()) != expected_dim) {
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(expected_dim) + " values for word '" + word +
                           "', got " + std::to_string(row.size()));
    }
    if (table.index.contains(word)) {
      ++table.duplicates;
      continue;
    }
    table.index.emplace(word, static_cast<std::int64_t>(table.words.size()));
    table.words.push_back(word);
    rows.insert(rows.end(), row.begin(), row.end());
  }
  if (table.words.empty()) {
    throw ParseError(source_name, line_no, "no word vectors found");
  }
  table.vectors =
      Tensor::from_data({static_cast<std::int64_t>(table.words.size()), expected_dim},
                        std::move(rows));
  return table;
}

std::unordered_set<EntityId> Dataset::train_entities() const {
  std::unordered_set<EntityId> seen;
  for (const Triple& t : train) {
    seen.insert(t.head);
    seen.insert(t.tail);
  }
  return seen;
}

std::vector<EntityId> Dataset::train_entities_sorted() const {
  std::unordered_set<EntityId> seen = train_entities();
  std::vector<EntityId> ids(seen.begin(), seen.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<EntityId> Dataset::entities_missing_descriptions() const {
  std::unordered_set<EntityId> all;
  for (const std::vector<Triple>* split : {&train, &valid, &test}) {
    for (const Triple& t : *split) {
      all.insert(t.head);
      all.insert(t.tail);
    }
  }
  std::vector<EntityId> missing;
  for (EntityId id : all) {
    auto it = descriptions.find(id);
    if (it == descriptions.end() || it->second.empty()) missing.push_back(id);
  }
  std::sort(missing.begin(), missing.end());
  return missing;
}

namespace {

SplitCounts count_split(const std::vector<Triple>& triples,
                        const std::unordered_set<EntityId>& seen) {
  SplitCounts counts;
  for (const Triple& t : triples) {
    int unseen = (seen.contains(t.head) ? 0 : 1) + (seen.contains(t.tail) ? 0 : 1);
    if (unseen == 0) {
      ++counts.both_seen;
    } else if (unseen == 1) {
      ++counts.one_unseen;
    } else {
      ++counts.both_unseen;
    }
  }
  return counts;
}

}  // namespace

SplitReport validate_unseen_split(const Dataset& dataset) {
  std::unordered_set<EntityId> seen = dataset.train_entities();
  SplitReport report;
  report.valid = count_split(dataset.valid, seen);
  report.test = count_split(dataset.test, seen);
  report.concept_learning_valid =
      report.valid.one_unseen == static_cast<std::int64_t>(dataset.valid.size()) &&
      report.test.one_unseen == static_cast<std::int64_t>(dataset.test.size());
  return report;
}

std::string vocabulary_to_text(const Vocabulary& vocab) {
  std::ostringstream os;
  os << "entities " << vocab.entity_count() << "\n";
  for (const std::string& name : vocab.entity_names()) os << name << "\n";
  os << "relations " << vocab.relation_count() << "\n";
  for (const std::string& name : vocab.relation_names()) os << name << "\n";
  return os.str();
}

Vocabulary vocabulary_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  std::int64_t count = 0;
  Vocabulary vocab;
  std::string line;

  auto read_block = [&](const std::string& expected, auto add) {
    if (!(is >> tag >> count) || tag != expected) {
      throw ParseError("<vocabulary>", 0, "expected '" + expected + " <count>' header");
    }
    std::getline(is, line);  // consume rest of the header line
    for (std::int64_t i = 0; i < count; ++i) {
      if (!std::getline(is, line)) {
        throw ParseError("<vocabulary>", i, "truncated " + expected + " block");
      }
      add(line);
    }
  };

  read_block("entities", [&](const std::string& name) { vocab.add_entity(name); });
  read_block("relations", [&](const std::string& name) { vocab.add_relation(name); });
  return vocab;
}

}  // namespace transkb
