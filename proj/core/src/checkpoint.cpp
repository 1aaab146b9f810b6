#include <json.hpp>

#include "ddix/tagger.hpp"

namespace ddix::tagger {

namespace {

using nlohmann::json;

constexpr int kCheckpointVersion = 1;
constexpr const char* kFormat = "ddix-tagger";

json config_json(const TaggerConfig& c) {
  return {
      {"early_stopping_patience", c.early_stopping_patience},
      {"decoder_output_size", c.decoder_output_size},
      {"encoder_output_size", c.encoder_output_size},
      {"beam_size", c.beam_size},
      {"encoder_filter_size", c.encoder_filter_size},
      {"dropout_rate", c.dropout_rate},
      {"batch_size", c.batch_size},
      {"conv_layers", c.conv_layers},
      {"word_dim", c.word_dim},
      {"shape_dim", c.shape_dim},
      {"position_dim", c.position_dim},
      {"char_dim", c.char_dim},
      {"label_dim", c.label_dim},
      {"gru_hidden", c.gru_hidden},
      {"position_buckets", c.position_buckets},
      {"use_chars", c.use_chars},
      {"adadelta_rho", c.adadelta_rho},
      {"adadelta_epsilon", c.adadelta_epsilon},
      {"max_epochs", c.max_epochs},
      {"rng_seed", c.rng_seed},
  };
}

TaggerConfig config_from_json(const json& j) {
  TaggerConfig c;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) throw Error(std::string("checkpoint: config lacks ") + key);
    field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  get("early_stopping_patience", c.early_stopping_patience);
  get("decoder_output_size", c.decoder_output_size);
  get("encoder_output_size", c.encoder_output_size);
  get("beam_size", c.beam_size);
  get("encoder_filter_size", c.encoder_filter_size);
  get("dropout_rate", c.dropout_rate);
  get("batch_size", c.batch_size);
  get("conv_layers", c.conv_layers);
  get("word_dim", c.word_dim);
  get("shape_dim", c.shape_dim);
  get("position_dim", c.position_dim);
  get("char_dim", c.char_dim);
  get("label_dim", c.label_dim);
  get("gru_hidden", c.gru_hidden);
  get("position_buckets", c.position_buckets);
  get("use_chars", c.use_chars);
  get("adadelta_rho", c.adadelta_rho);
  get("adadelta_epsilon", c.adadelta_epsilon);
  get("max_epochs", c.max_epochs);
  get("rng_seed", c.rng_seed);
  return c;
}

}  // namespace

std::string save_checkpoint(const TaggerModel& model, std::string_view vocab_ref) {
  json tensors = json::object();
  for (const auto& [name, m] : model.params().tensors()) {
    std::vector<double> data(m->data(), m->data() + m->size());  // column-major
    tensors[name] = {{"rows", m->rows()}, {"cols", m->cols()}, {"data", std::move(data)}};
  }
  json doc = {
      {"format", kFormat},
      {"version", kCheckpointVersion},
      {"scheme", std::string(codec::to_string(model.scheme().variant()))},
      {"config", config_json(model.config())},
      {"vocab", std::string(vocab_ref)},
      {"tensors", std::move(tensors)},
  };
  return doc.dump() + "\n";
}

Checkpoint load_checkpoint(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what(), 0, 0);
  }
  try {
    if (doc.value("format", "") != kFormat) throw Error("checkpoint: not a ddix tagger file");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw Error("checkpoint: unsupported version " + std::to_string(version));
    }
    auto variant = codec::parse_variant(doc.at("scheme").get<std::string>());
    if (!variant) throw Error("checkpoint: unknown tag scheme");
    TaggerConfig config = config_from_json(doc.at("config"));

    const json& tensors = doc.at("tensors");
    ParamBlocks blocks;
    auto read = [&](const std::string& name) {
      if (!tensors.contains(name)) throw Error("checkpoint: missing tensor " + name);
      const json& t = tensors.at(name);
      const auto rows = t.at("rows").get<Eigen::Index>();
      const auto cols = t.at("cols").get<Eigen::Index>();
      const auto data = t.at("data").get<std::vector<double>>();
      if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw Error("checkpoint: tensor " + name + " has inconsistent size");
      }
      return Matrix(Eigen::Map<const Matrix>(data.data(), rows, cols));
    };
    blocks.conv_w.resize(config.conv_layers);
    blocks.conv_b.resize(config.conv_layers);
    for (auto& [name, m] : blocks.tensors()) *m = read(name);
    if (tensors.size() != blocks.tensors().size()) {
      throw Error("checkpoint: unexpected extra tensors");
    }
    return {TaggerModel::from_parts(config, *variant, std::move(blocks)),
            doc.value("vocab", std::string{})};
  } catch (const json::exception& e) {
    throw Error(std::string("checkpoint: malformed field: ") + e.what());
  }
}

}  // namespace ddix::tagger
