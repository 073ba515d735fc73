#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "transkb/encoders.hpp"
#include "transkb/featurize.hpp"
#include "transkb/trainer.hpp"
#include "transkb/transe.hpp"
#include "transkb/vocabulary.hpp"

namespace transkb {

// Checksum used by the checkpoint trailer (reflected, polynomial 0xEDB88320).
std::uint32_t crc32_bytes(const void* data, std::size_t size);

// A trained model as persisted to disk. `mode` selects which parts are live:
//   baseline  — store (entity + relation tables)
//   joint_mlp — relations, ngrams, mlp
//   joint_cnn — relations, words, cnn
struct Model {
  std::string mode = "baseline";
  TrainConfig config;
  Vocabulary vocab;
  std::string rng_state;  // opaque generator state captured at save time

  EmbeddingStore store;

  Parameter relations;
  NgramVocabulary ngrams;
  std::vector<std::string> words;  // word-table rows, unknown row excluded
  std::unique_ptr<MlpEncoder> mlp;
  std::unique_ptr<CnnEncoder> cnn;

  bool is_joint() const { return mode != "baseline"; }
  Encoder& encoder();
  const Encoder& encoder() const;
};

// Binary container: magic "TKB1", little-endian header length, a text header
// (config lines and name sections), the tensors, and a trailing crc32 of all
// preceding bytes. Files are written to a sibling temp path and renamed into
// place, so a crash never leaves a half-written checkpoint behind. The
// stored precision must match the build's; there is no implicit conversion.
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

std::string cnn_stack_to_text(const std::vector<CnnLayerSpec>& stack);
std::vector<CnnLayerSpec> cnn_stack_from_text(const std::string& text);

}  // namespace transkb
