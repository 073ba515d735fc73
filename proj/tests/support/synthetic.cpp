#include "support/synthetic.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "transkb/featurize.hpp"
#include "transkb/rng.hpp"

namespace transkb::testkit {

namespace {

std::string padded(const char* prefix, std::int64_t value, int width) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%0*lld", prefix, width, static_cast<long long>(value));
  return buf;
}

}  // namespace

Dataset make_ring(const RingSpec& spec) {
  Dataset data;
  for (std::int64_t i = 0; i < spec.entities; ++i) {
    data.vocab.add_entity(padded("e", i, 3));
  }
  RelationId next = data.vocab.add_relation("next");
  for (std::int64_t i = 0; i < spec.entities; ++i) {
    Triple fact{i, next, (i + 1) % spec.entities};
    if (spec.valid_every > 0 && i % spec.valid_every == 0) {
      data.valid.push_back(fact);
    } else if (spec.test_every > 0 && i % spec.test_every == 1) {
      data.test.push_back(fact);
    } else {
      data.train.push_back(fact);
    }
  }
  return data;
}

Dataset make_nameable(const NameableSpec& spec) {
  Dataset data;
  std::vector<EntityId> item_ids, category_ids;
  for (std::int64_t i = 0; i < spec.items; ++i) {
    item_ids.push_back(data.vocab.add_entity(padded("item", i, 3)));
  }
  for (std::int64_t g = 0; g < spec.categories; ++g) {
    category_ids.push_back(data.vocab.add_entity(padded("cat", g, 2)));
  }
  RelationId in_group = data.vocab.add_relation("in_group");

  for (std::int64_t g = 0; g < spec.categories; ++g) {
    data.descriptions[category_ids[static_cast<std::size_t>(g)]] =
        "the " + padded("group", g, 2) + " collection";
  }
  std::int64_t first_heldout = spec.items - spec.holdout_items;
  for (std::int64_t i = 0; i < spec.items; ++i) {
    std::int64_t g = i % spec.categories;
    data.descriptions[item_ids[static_cast<std::size_t>(i)]] =
        "object " + padded("thing", i, 3) + " from the " + padded("group", g, 2) +
        " collection";
    Triple fact{item_ids[static_cast<std::size_t>(i)], in_group,
                category_ids[static_cast<std::size_t>(g)]};
    if (i >= first_heldout) {
      data.test.push_back(fact);
    } else {
      data.train.push_back(fact);
    }
  }
  return data;
}

KbFiles write_kb(const Dataset& data, const std::filesystem::path& dir, bool with_descriptions,
                 std::int64_t word_dim) {
  std::filesystem::create_directories(dir);
  KbFiles files;

  auto write_split = [&](const std::vector<Triple>& triples, const char* name) {
    if (triples.empty()) return std::string();
    std::filesystem::path path = dir / name;
    std::ofstream out(path);
    for (const Triple& t : triples) {
      out << data.vocab.entity_name(t.head) << '\t' << data.vocab.relation_name(t.relation)
          << '\t' << data.vocab.entity_name(t.tail) << '\n';
    }
    return path.string();
  };
  files.train = write_split(data.train, "train.tsv");
  files.valid = write_split(data.valid, "valid.tsv");
  files.test = write_split(data.test, "test.tsv");

  if (with_descriptions) {
    std::filesystem::path path = dir / "descriptions.tsv";
    std::ofstream out(path);
    // Id order keeps the file (and everything derived from it) deterministic.
    std::map<EntityId, std::string> ordered(data.descriptions.begin(), data.descriptions.end());
    for (const auto& [id, text] : ordered) {
      out << data.vocab.entity_name(id) << '\t' << text << '\n';
    }
    files.descriptions = path.string();
  }

  if (word_dim > 0) {
    std::set<std::string> words;
    for (const auto& [id, text] : data.descriptions) {
      for (const std::string& token : tokenize(text)) words.insert(token);
    }
    std::filesystem::path path = dir / "wordvec.txt";
    std::ofstream out(path);
    char buf[64];
    for (const std::string& word : words) {
      Rng rng(substream_seed(0x5eedf00d, word));
      std::vector<real> v(static_cast<std::size_t>(word_dim));
      for (real& x : v) x = rng.uniform(-1.0, 1.0);
      real norm = l2_norm(v);
      out << word;
      for (real x : v) {
        std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(x / norm));
        out << ' ' << buf;
      }
      out << '\n';
    }
    files.word_vectors = path.string();
  }
  return files;
}

}  // namespace transkb::testkit
