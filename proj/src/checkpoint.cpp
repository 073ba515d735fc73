#include "transkb/checkpoint.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace transkb {

namespace {

constexpr char kMagic[4] = {'T', 'K', 'B', '1'};

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

}  // namespace

std::uint32_t crc32_bytes(const void* data, std::size_t size) {
  static const std::array<std::uint32_t, 256> table = make_crc_table();
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i) crc = table[(crc ^ p[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

Encoder& Model::encoder() {
  if (mlp) return *mlp;
  if (cnn) return *cnn;
  throw StateError("model has no encoder (mode " + mode + ")");
}

const Encoder& Model::encoder() const {
  if (mlp) return *mlp;
  if (cnn) return *cnn;
  throw StateError("model has no encoder (mode " + mode + ")");
}

std::string cnn_stack_to_text(const std::vector<CnnLayerSpec>& stack) {
  std::ostringstream out;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (i) out << ',';
    const CnnLayerSpec& layer = stack[i];
    if (layer.kind == CnnLayerSpec::Kind::conv) {
      out << "conv:" << layer.channels << ':' << layer.kh << ':' << layer.kw << ':'
          << layer.stride;
    } else {
      out << "pool:" << layer.kw << ':' << layer.stride;
    }
  }
  return out.str();
}

namespace {

std::vector<std::int64_t> split_ints(const std::string& item, std::size_t expected,
                                     const std::string& what) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= item.size()) {
    std::size_t next = item.find(':', pos);
    std::string field =
        next == std::string::npos ? item.substr(pos) : item.substr(pos, next - pos);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ConfigError("bad integer '" + field + "' in " + what);
    }
    out.push_back(value);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.size() != expected) {
    throw ConfigError(what + " expects " + std::to_string(expected) + " integers, got " +
                      std::to_string(out.size()));
  }
  return out;
}

}  // namespace

std::vector<CnnLayerSpec> cnn_stack_from_text(const std::string& text) {
  std::vector<CnnLayerSpec> stack;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    std::string item =
        next == std::string::npos ? text.substr(pos) : text.substr(pos, next - pos);
    if (item.rfind("conv:", 0) == 0) {
      std::vector<std::int64_t> v = split_ints(item.substr(5), 4, "conv layer spec");
      stack.push_back(CnnLayerSpec::conv(v[0], v[1], v[2], v[3]));
    } else if (item.rfind("pool:", 0) == 0) {
      std::vector<std::int64_t> v = split_ints(item.substr(5), 2, "pool layer spec");
      stack.push_back(CnnLayerSpec::pool(v[0], v[1]));
    } else {
      throw ConfigError("bad layer spec '" + item + "' (expected conv:... or pool:...)");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (stack.empty()) throw ConfigError("empty layer stack");
  return stack;
}

namespace {

std::string format_real(real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(v));
  return buf;
}

real parse_real_field(const std::string& text, const std::string& key) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw StateError("checkpoint field " + key + " has bad number '" + text + "'");
  }
  return static_cast<real>(v);
}

std::int64_t parse_int_field(const std::string& text, const std::string& key) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw StateError("checkpoint field " + key + " has bad integer '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64_field(const std::string& text, const std::string& key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw StateError("checkpoint field " + key + " has bad integer '" + text + "'");
  }
  return v;
}

bool parse_bool_field(const std::string& text, const std::string& key) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw StateError("checkpoint field " + key + " must be true or false, got '" + text + "'");
}

class ByteWriter {
 public:
  void raw(const void* data, std::size_t size) {
    buf_.append(static_cast<const char*>(data), size);
  }
  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    raw(b, 4);
  }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    raw(b, 8);
  }
  void reals(std::span<const real> values) {
    for (real v : values) {
      if constexpr (sizeof(real) == 8) {
        u64(std::bit_cast<std::uint64_t>(static_cast<double>(v)));
      } else {
        u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  const std::string& buffer() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& buf) : buf_(buf) {}

  void raw(void* out, std::size_t size) {
    if (pos_ + size > buf_.size()) throw IntegrityError("truncated checkpoint");
    std::memcpy(out, buf_.data() + pos_, size);
    pos_ += size;
  }
  std::string bytes(std::size_t size) {
    if (pos_ + size > buf_.size()) throw IntegrityError("truncated checkpoint");
    std::string out = buf_.substr(pos_, size);
    pos_ += size;
    return out;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    raw(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    raw(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  real next_real() {
    if constexpr (sizeof(real) == 8) {
      return static_cast<real>(std::bit_cast<double>(u64()));
    } else {
      return static_cast<real>(std::bit_cast<float>(u32()));
    }
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  const std::string& buf_;
  std::size_t pos_ = 0;
};

void append_kv(std::string& header, const std::string& key, const std::string& value) {
  header += key;
  header += '=';
  header += value;
  header += '\n';
}

std::string build_header(const Model& model) {
  std::string h;
  append_kv(h, "version", "1");
  append_kv(h, "precision", kPrecisionName);
  append_kv(h, "mode", model.mode);
  append_kv(h, "dim", std::to_string(model.config.dim));
  append_kv(h, "distance", distance_name(model.config.distance));
  append_kv(h, "gamma", format_real(model.config.gamma));
  append_kv(h, "lr", format_real(model.config.lr));
  append_kv(h, "momentum", format_real(model.config.momentum));
  append_kv(h, "batch_size", std::to_string(model.config.batch_size));
  append_kv(h, "epochs", std::to_string(model.config.epochs));
  append_kv(h, "seed", std::to_string(model.config.seed));
  append_kv(h, "filtered_negatives", model.config.filtered_negatives ? "true" : "false");
  append_kv(h, "renormalize_relations", model.config.renormalize_relations ? "true" : "false");
  append_kv(h, "eval_every", std::to_string(model.config.eval_every));
  append_kv(h, "early_stopping", model.config.early_stopping ? "true" : "false");
  append_kv(h, "patience", std::to_string(model.config.patience));
  append_kv(h, "rng_state", model.rng_state);
  append_kv(h, "entity_count", std::to_string(model.vocab.entity_count()));
  append_kv(h, "relation_count", std::to_string(model.vocab.relation_count()));
  if (model.mode == "joint_mlp") {
    append_kv(h, "ngram_count", std::to_string(model.ngrams.size()));
  }
  if (model.mode == "joint_cnn") {
    append_kv(h, "word_count", std::to_string(model.words.size()));
  }

  h += "[entities]\n";
  for (const std::string& name : model.vocab.entity_names()) h += name + "\n";
  h += "[relations]\n";
  for (const std::string& name : model.vocab.relation_names()) h += name + "\n";
  if (model.mode == "joint_mlp") {
    h += "[ngram_vocab]\n";
    h += model.ngrams.to_text();
  }
  if (model.mode == "joint_cnn") {
    h += "[words]\n";
    for (const std::string& word : model.words) h += word + "\n";
  }
  if (model.mode == "joint_mlp") {
    h += "[encoder]\n";
    const MlpConfig& c = model.mlp->config();
    append_kv(h, "kind", "mlp");
    append_kv(h, "hidden_dim", std::to_string(c.hidden_dim));
    append_kv(h, "output_dim", std::to_string(c.output_dim));
    append_kv(h, "normalize_output", c.normalize_output ? "true" : "false");
  } else if (model.mode == "joint_cnn") {
    h += "[encoder]\n";
    const CnnConfig& c = model.cnn->config();
    append_kv(h, "kind", "cnn");
    append_kv(h, "word_dim", std::to_string(c.word_dim));
    append_kv(h, "seq_len", std::to_string(c.seq_len));
    append_kv(h, "dense_dim", std::to_string(c.dense_dim));
    append_kv(h, "output_dim", std::to_string(c.output_dim));
    append_kv(h, "normalize_output", c.normalize_output ? "true" : "false");
    append_kv(h, "stack", cnn_stack_to_text(c.stack));
  }
  h += "[end]\n";
  return h;
}

std::vector<std::pair<std::string, const Tensor*>> collect_tensors(const Model& model) {
  std::vector<std::pair<std::string, const Tensor*>> tensors;
  if (model.mode == "baseline") {
    tensors.emplace_back("entities", &model.store.entities);
    tensors.emplace_back("relations", &model.store.relations);
    return tensors;
  }
  tensors.emplace_back("relations", &model.relations.value);
  const Encoder& enc = model.encoder();
  for (const Parameter* p : const_cast<Encoder&>(enc).parameters()) {
    tensors.emplace_back(p->name, &p->value);
  }
  return tensors;
}

void validate_for_save(const Model& model) {
  if (model.mode == "baseline") {
    if (model.store.entity_count() != model.vocab.entity_count() ||
        model.store.relation_count() != model.vocab.relation_count()) {
      throw StateError("store tables do not match the vocabulary");
    }
    return;
  }
  if (model.mode == "joint_mlp") {
    if (!model.mlp) throw StateError("joint_mlp model has no encoder");
    if (model.ngrams.size() != model.mlp->config().input_dim) {
      throw StateError("ngram vocabulary size does not match encoder input width");
    }
  } else if (model.mode == "joint_cnn") {
    if (!model.cnn) throw StateError("joint_cnn model has no encoder");
    if (static_cast<std::int64_t>(model.words.size()) != model.cnn->config().word_count) {
      throw StateError("word list does not match encoder word table");
    }
  } else {
    throw StateError("unknown model mode '" + model.mode + "'");
  }
  if (model.relations.value.rank() != 2 ||
      model.relations.value.dim(0) != model.vocab.relation_count()) {
    throw StateError("relation table does not match the vocabulary");
  }
}

// Lines of the header, consumed front to back.
class HeaderReader {
 public:
  explicit HeaderReader(const std::string& text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        lines_.push_back(text.substr(pos));
        break;
      }
      lines_.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }

  bool done() const { return next_ >= lines_.size(); }
  const std::string& peek() const {
    if (done()) throw IntegrityError("checkpoint header ended unexpectedly");
    return lines_[next_];
  }
  std::string take() {
    std::string line = peek();
    ++next_;
    return line;
  }
  void expect(const std::string& marker) {
    if (take() != marker) {
      throw IntegrityError("checkpoint header missing " + marker + " section");
    }
  }

 private:
  std::vector<std::string> lines_;
  std::size_t next_ = 0;
};

std::unordered_map<std::string, std::string> parse_kv_block(HeaderReader& reader) {
  std::unordered_map<std::string, std::string> kv;
  while (!reader.done() && !reader.peek().starts_with('[')) {
    std::string line = reader.take();
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw IntegrityError("checkpoint header line without '=': " + line);
    }
    if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second) {
      throw IntegrityError("duplicate checkpoint field '" + line.substr(0, eq) + "'");
    }
  }
  return kv;
}

class FieldSet {
 public:
  explicit FieldSet(std::unordered_map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::string get(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw StateError("checkpoint is missing field '" + key + "'");
    std::string value = it->second;
    kv_.erase(it);
    return value;
  }
  std::string get_or(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::string value = it->second;
    kv_.erase(it);
    return value;
  }
  void finish() const {
    if (!kv_.empty()) {
      throw StateError("checkpoint has unrecognized field '" + kv_.begin()->first + "'");
    }
  }

 private:
  std::unordered_map<std::string, std::string> kv_;
};

}  // namespace

void save_model(const std::string& path, const Model& model) {
  validate_for_save(model);
  std::string header = build_header(model);
  std::vector<std::pair<std::string, const Tensor*>> tensors = collect_tensors(model);

  ByteWriter out;
  out.raw(kMagic, 4);
  out.u64(header.size());
  out.raw(header.data(), header.size());
  out.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    out.u32(static_cast<std::uint32_t>(name.size()));
    out.raw(name.data(), name.size());
    out.u32(static_cast<std::uint32_t>(tensor->rank()));
    for (std::int64_t d : tensor->shape()) out.u64(static_cast<std::uint64_t>(d));
    out.reals(tensor->values());
  }
  std::uint32_t crc = crc32_bytes(out.buffer().data(), out.buffer().size());

  std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + temp.string() + " for writing");
    file.write(out.buffer().data(), static_cast<std::streamsize>(out.buffer().size()));
    char trailer[4];
    for (int i = 0; i < 4; ++i) trailer[i] = static_cast<char>((crc >> (8 * i)) & 0xFF);
    file.write(trailer, 4);
    if (!file) {
      throw IoError("failed while writing " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw IoError("cannot move checkpoint into place at " + path + ": " + ec.message());
  }
}

Model load_model(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path);
  std::ostringstream content;
  content << file.rdbuf();
  std::string buf = content.str();

  if (buf.size() < 4 + 8 + 4 + 4) throw IntegrityError("truncated checkpoint");
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) {
    stored_crc |= static_cast<std::uint32_t>(
                      static_cast<unsigned char>(buf[buf.size() - 4 + static_cast<std::size_t>(i)]))
                  << (8 * i);
  }
  std::uint32_t actual_crc = crc32_bytes(buf.data(), buf.size() - 4);
  if (stored_crc != actual_crc) {
    throw IntegrityError("checkpoint checksum mismatch: file is corrupt");
  }
  buf.resize(buf.size() - 4);

  ByteReader in(buf);
  std::string magic = in.bytes(4);
  if (magic.substr(0, 3) != "TKB") {
    throw IntegrityError("not a checkpoint file (bad magic)");
  }
  if (magic != std::string(kMagic, 4)) {
    throw StateError("unsupported checkpoint version '" + magic + "'; this build reads TKB1");
  }
  std::uint64_t header_len = in.u64();
  std::string header_text = in.bytes(static_cast<std::size_t>(header_len));

  HeaderReader header(header_text);
  FieldSet fields(parse_kv_block(header));

  Model model;
  std::string version = fields.get("version");
  if (version != "1") {
    throw StateError("unsupported checkpoint version '" + version + "'");
  }
  std::string precision = fields.get("precision");
  if (precision != kPrecisionName) {
    throw StateError("checkpoint precision " + precision + " does not match this build (" +
                     kPrecisionName + "); refusing to convert");
  }
  model.mode = fields.get("mode");
  if (model.mode != "baseline" && model.mode != "joint_mlp" && model.mode != "joint_cnn") {
    throw StateError("unknown model mode '" + model.mode + "'");
  }
  model.config.dim = parse_int_field(fields.get("dim"), "dim");
  model.config.distance = distance_from_name(fields.get("distance"));
  model.config.gamma = parse_real_field(fields.get("gamma"), "gamma");
  model.config.lr = parse_real_field(fields.get("lr"), "lr");
  model.config.momentum = parse_real_field(fields.get("momentum"), "momentum");
  model.config.batch_size = parse_int_field(fields.get("batch_size"), "batch_size");
  model.config.epochs = parse_int_field(fields.get("epochs"), "epochs");
  model.config.seed = parse_u64_field(fields.get("seed"), "seed");
  model.config.filtered_negatives =
      parse_bool_field(fields.get("filtered_negatives"), "filtered_negatives");
  model.config.renormalize_relations =
      parse_bool_field(fields.get("renormalize_relations"), "renormalize_relations");
  model.config.eval_every = parse_int_field(fields.get("eval_every"), "eval_every");
  model.config.early_stopping = parse_bool_field(fields.get("early_stopping"), "early_stopping");
  model.config.patience = parse_int_field(fields.get("patience"), "patience");
  model.rng_state = fields.get("rng_state");
  std::int64_t entity_count = parse_int_field(fields.get("entity_count"), "entity_count");
  std::int64_t relation_count = parse_int_field(fields.get("relation_count"), "relation_count");
  std::int64_t ngram_count = 0;
  std::int64_t word_count = 0;
  if (model.mode == "joint_mlp") {
    ngram_count = parse_int_field(fields.get("ngram_count"), "ngram_count");
  }
  if (model.mode == "joint_cnn") {
    word_count = parse_int_field(fields.get("word_count"), "word_count");
  }
  fields.finish();

  header.expect("[entities]");
  for (std::int64_t i = 0; i < entity_count; ++i) model.vocab.add_entity(header.take());
  if (model.vocab.entity_count() != entity_count) {
    throw IntegrityError("checkpoint entity names are not unique");
  }
  header.expect("[relations]");
  for (std::int64_t i = 0; i < relation_count; ++i) model.vocab.add_relation(header.take());
  if (model.vocab.relation_count() != relation_count) {
    throw IntegrityError("checkpoint relation names are not unique");
  }
  if (model.mode == "joint_mlp") {
    header.expect("[ngram_vocab]");
    std::string block;
    for (std::int64_t i = 0; i < ngram_count; ++i) block += header.take() + "\n";
    model.ngrams = NgramVocabulary::from_text(block);
  }
  if (model.mode == "joint_cnn") {
    header.expect("[words]");
    for (std::int64_t i = 0; i < word_count; ++i) model.words.push_back(header.take());
  }
  if (model.mode != "baseline") {
    header.expect("[encoder]");
    FieldSet enc(parse_kv_block(header));
    std::string kind = enc.get("kind");
    if (model.mode == "joint_mlp") {
      if (kind != "mlp") throw StateError("joint_mlp checkpoint stores encoder kind " + kind);
      MlpConfig c;
      c.input_dim = model.ngrams.size();
      c.hidden_dim = parse_int_field(enc.get("hidden_dim"), "hidden_dim");
      c.output_dim = parse_int_field(enc.get("output_dim"), "output_dim");
      c.normalize_output = parse_bool_field(enc.get("normalize_output"), "normalize_output");
      model.mlp = std::make_unique<MlpEncoder>(c);
    } else {
      if (kind != "cnn") throw StateError("joint_cnn checkpoint stores encoder kind " + kind);
      CnnConfig c;
      c.word_dim = parse_int_field(enc.get("word_dim"), "word_dim");
      c.word_count = word_count;
      c.seq_len = parse_int_field(enc.get("seq_len"), "seq_len");
      c.dense_dim = parse_int_field(enc.get("dense_dim"), "dense_dim");
      c.output_dim = parse_int_field(enc.get("output_dim"), "output_dim");
      c.normalize_output = parse_bool_field(enc.get("normalize_output"), "normalize_output");
      c.stack = cnn_stack_from_text(enc.get("stack"));
      model.cnn = std::make_unique<CnnEncoder>(c);
    }
    enc.finish();
  }
  header.expect("[end]");

  std::uint32_t tensor_count = in.u32();
  std::unordered_map<std::string, Tensor> tensors;
  for (std::uint32_t t = 0; t < tensor_count; ++t) {
    std::uint32_t name_len = in.u32();
    std::string name = in.bytes(name_len);
    std::uint32_t ndim = in.u32();
    std::vector<std::int64_t> shape(ndim);
    std::int64_t numel = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      shape[d] = static_cast<std::int64_t>(in.u64());
      if (shape[d] < 0) throw IntegrityError("negative tensor dimension in checkpoint");
      numel *= shape[d];
    }
    if (static_cast<std::uint64_t>(numel) * sizeof(real) > in.remaining()) {
      throw IntegrityError("truncated checkpoint");
    }
    std::vector<real> data(static_cast<std::size_t>(numel));
    for (real& v : data) v = in.next_real();
    if (!tensors.emplace(name, Tensor::from_data(std::move(shape), std::move(data))).second) {
      throw IntegrityError("duplicate tensor '" + name + "' in checkpoint");
    }
  }
  if (in.remaining() != 0) throw IntegrityError("trailing bytes after checkpoint tensors");

  auto take_tensor = [&](const std::string& name, const std::vector<std::int64_t>& shape) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw IntegrityError("checkpoint is missing tensor '" + name + "'");
    Tensor tensor = std::move(it->second);
    tensors.erase(it);
    if (tensor.shape() != shape) {
      throw IntegrityError("tensor '" + name + "' has shape " + tensor.shape_string() +
                           ", expected " + Tensor(shape).shape_string());
    }
    return tensor;
  };

  if (model.mode == "baseline") {
    model.store.entities = take_tensor("entities", {entity_count, model.config.dim});
    model.store.relations = take_tensor("relations", {relation_count, model.config.dim});
    model.store.distance = model.config.distance;
  } else {
    Encoder& enc = model.encoder();
    model.relations = Parameter(
        take_tensor("relations", {relation_count, enc.output_dim()}), "relations");
    for (Parameter* p : enc.parameters()) {
      p->value = take_tensor(p->name, p->value.shape());
      p->zero_grad();
    }
  }
  if (!tensors.empty()) {
    throw IntegrityError("checkpoint has unexpected tensor '" + tensors.begin()->first + "'");
  }
  return model;
}

}  // namespace transkb
