#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "transkb/dataset.hpp"

#include "support/synthetic.hpp"

using namespace transkb;

TEST_SUITE_BEGIN("dataset");

TEST_CASE("triples parse into ids assigned in encounter order") {
  std::istringstream in(
      "alice\tknows\tbob\n"
      "bob\tknows\tcarol\n"
      "\n"
      "alice\temploys\tcarol\r\n");
  Vocabulary vocab;
  std::vector<Triple> triples = parse_triples(in, vocab, "people.tsv");

  REQUIRE(triples.size() == 3);
  CHECK(vocab.entity_count() == 3);
  CHECK(vocab.relation_count() == 2);
  CHECK(vocab.entity_name(0) == "alice");
  CHECK(vocab.entity_name(1) == "bob");
  CHECK(vocab.entity_name(2) == "carol");
  CHECK(vocab.relation_name(0) == "knows");
  CHECK(vocab.relation_name(1) == "employs");
  CHECK(triples[0] == Triple{0, 0, 1});
  CHECK(triples[1] == Triple{1, 0, 2});
  CHECK(triples[2] == Triple{0, 1, 2});  // CRLF line parses like LF
}

TEST_CASE("names repeat ids across splits through a shared vocabulary") {
  Vocabulary vocab;
  std::istringstream train("a\tr\tb\n");
  std::istringstream valid("b\tr\tc\n");
  parse_triples(train, vocab);
  std::vector<Triple> v = parse_triples(valid, vocab);
  CHECK(v[0].head == 1);  // same id as train's "b"
  CHECK(v[0].tail == 2);
}

TEST_CASE("malformed triple lines carry file and line position") {
  Vocabulary vocab;
  std::istringstream two_fields("a\tr\tb\na\tr\n");
  CHECK_THROWS_WITH_AS(parse_triples(two_fields, vocab, "bad.tsv"),
                       "bad.tsv:2: expected 3 tab-separated fields, got 2", ParseError);

  std::istringstream four_fields("a\tr\tb\tx\n");
  CHECK_THROWS_WITH_AS(parse_triples(four_fields, vocab, "bad.tsv"),
                       "bad.tsv:1: expected 3 tab-separated fields, got 4", ParseError);

  std::istringstream blank_field("a\t\tb\n");
  CHECK_THROWS_WITH_AS(parse_triples(blank_field, vocab, "bad.tsv"),
                       "bad.tsv:1: empty field", ParseError);
}

TEST_CASE("descriptions attach to known entities and keep tabs in the text") {
  Vocabulary vocab;
  std::istringstream triples("a\tr\tb\n");
  parse_triples(triples, vocab);

  std::istringstream in(
      "a\tfirst letter\n"
      "b\tsecond\tletter\n"
      "a\toverwritten text\n");
  DescriptionParse parsed = parse_descriptions(in, vocab, DescriptionMode::strict);
  CHECK(parsed.skipped == 0);
  CHECK(parsed.overwritten == 1);
  CHECK(parsed.text.at(0) == "overwritten text");  // last write wins
  CHECK(parsed.text.at(1) == "second\tletter");    // only the first tab separates
}

TEST_CASE("strict description parsing rejects unknown entities; lenient counts them") {
  Vocabulary vocab;
  std::istringstream triples("a\tr\tb\n");
  parse_triples(triples, vocab);

  std::istringstream strict_in("ghost\tno such entity\n");
  CHECK_THROWS_WITH_AS(parse_descriptions(strict_in, vocab, DescriptionMode::strict, "d.tsv"),
                       "d.tsv:1: unknown entity 'ghost'", ParseError);

  std::istringstream lenient_in(
      "ghost\tno such entity\n"
      "a\tkept\n");
  DescriptionParse parsed = parse_descriptions(lenient_in, vocab, DescriptionMode::lenient);
  CHECK(parsed.skipped == 1);
  CHECK(parsed.text.size() == 1);
  CHECK(parsed.text.at(0) == "kept");
}

TEST_CASE("word vectors parse space-separated rows into a dense table") {
  std::istringstream in(
      "red 1 0 0.5\n"
      "blue 0 1 -0.25\n"
      "red 9 9 9\n");
  WordVectorTable table = parse_word_vectors(in, 3, "wv.txt");
  CHECK(table.size() == 2);
  CHECK(table.dim == 3);
  CHECK(table.duplicates == 1);  // first definition of "red" wins
  CHECK(table.lookup("red") == 0);
  CHECK(table.lookup("blue") == 1);
  CHECK_FALSE(table.lookup("green").has_value());
  CHECK(table.vectors.at(0, 2) == real(0.5));
  CHECK(table.vectors.at(1, 2) == real(-0.25));
}

TEST_CASE("word vector rows must match the declared dimension and be numeric") {
  std::istringstream short_row("red 1 0\n");
  CHECK_THROWS_WITH_AS(parse_word_vectors(short_row, 3, "wv.txt"),
                       "wv.txt:1: expected 3 values for word 'red', got 2", ParseError);

  std::istringstream garbage("red 1 x 3\n");
  CHECK_THROWS_WITH_AS(parse_word_vectors(garbage, 3, "wv.txt"),
                       "wv.txt:1: non-numeric value 'x'", ParseError);

  std::istringstream infinite("red 1 inf 3\n");
  CHECK_THROWS_AS(parse_word_vectors(infinite, 3, "wv.txt"), ParseError);

  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(parse_word_vectors(empty, 3, "wv.txt"), ParseError);

  std::istringstream fine("red 1 2 3\n");
  CHECK_THROWS_AS(parse_word_vectors(fine, 0, "wv.txt"), ConfigError);
}

TEST_CASE("training entity sets drive the split report") {
  Dataset data;
  EntityId a = data.vocab.add_entity("a");
  EntityId b = data.vocab.add_entity("b");
  EntityId c = data.vocab.add_entity("c");
  EntityId d = data.vocab.add_entity("d");
  RelationId r = data.vocab.add_relation("r");
  data.train = {{a, r, b}};
  data.valid = {{a, r, c}};           // c unseen: exactly one side
  data.test = {{c, r, d}, {a, r, b}};  // both unseen / both seen

  CHECK(data.train_entities_sorted() == std::vector<EntityId>{a, b});

  SplitReport report = validate_unseen_split(data);
  CHECK(report.valid.one_unseen == 1);
  CHECK(report.valid.both_seen == 0);
  CHECK(report.test.both_unseen == 1);
  CHECK(report.test.both_seen == 1);
  CHECK(report.test.total() == 2);
  CHECK_FALSE(report.concept_learning_valid);

  data.test = {{a, r, c}};
  CHECK(validate_unseen_split(data).concept_learning_valid);
}

TEST_CASE("every triple lands in exactly one split-report bucket") {
  Dataset data = testkit::make_ring({.entities = 30, .valid_every = 5, .test_every = 7});
  SplitReport report = validate_unseen_split(data);
  CHECK(report.valid.total() == static_cast<std::int64_t>(data.valid.size()));
  CHECK(report.test.total() == static_cast<std::int64_t>(data.test.size()));

  // With validation triples spaced five apart and no test split, every entity
  // still appears in training, so nothing counts as unseen.
  Dataset valid_only = testkit::make_ring({.entities = 30, .valid_every = 5, .test_every = 0});
  SplitReport covered = validate_unseen_split(valid_only);
  CHECK(covered.valid.both_seen == covered.valid.total());
  CHECK(covered.valid.total() == 6);
}

TEST_CASE("entities missing descriptions are reported in id order") {
  Dataset data;
  EntityId a = data.vocab.add_entity("a");
  EntityId b = data.vocab.add_entity("b");
  EntityId c = data.vocab.add_entity("c");
  RelationId r = data.vocab.add_relation("r");
  data.train = {{a, r, b}, {b, r, c}};
  data.descriptions[b] = "described";
  data.descriptions[c] = "";  // empty counts as missing
  CHECK(data.entities_missing_descriptions() == std::vector<EntityId>{a, c});
}

TEST_CASE("vocabulary text round-trips and rejects truncation") {
  Vocabulary vocab;
  vocab.add_entity("alice");
  vocab.add_entity("bob");
  vocab.add_relation("knows");

  std::string text = vocabulary_to_text(vocab);
  CHECK(text == "entities 2\nalice\nbob\nrelations 1\nknows\n");
  CHECK(vocabulary_from_text(text) == vocab);

  CHECK_THROWS_AS(vocabulary_from_text("entities 5\nalice\n"), ParseError);
  CHECK_THROWS_AS(vocabulary_from_text("relations 0\n"), ParseError);
}

TEST_SUITE_END();
