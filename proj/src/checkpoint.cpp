#include "headsum/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "headsum/errors.h"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace headsum {

using nlohmann::json;

namespace {

json config_to_json(const ModelConfig& c) {
  return json{{"d", c.d},
              {"heads", c.heads},
              {"layers", c.layers},
              {"vocabSize", c.vocab_size},
              {"maxPositions", c.max_positions},
              {"lnEpsilon", c.ln_epsilon},
              {"seed", c.seed}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.d = j.at("d").get<int>();
  c.heads = j.at("heads").get<int>();
  c.layers = j.at("layers").get<int>();
  c.vocab_size = j.at("vocabSize").get<int>();
  c.max_positions = j.at("maxPositions").get<int>();
  c.ln_epsilon = j.at("lnEpsilon").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in, const char* what) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw DataError(std::string("checkpoint truncated: missing ") + what);
  }
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Parameters& params,
                     const std::string& vocab_ref) {
  json directory = json::array();
  auto& p = const_cast<Parameters&>(params);
  visit_tensors(p, [&directory](const std::string& name, Eigen::MatrixXd& t) {
    directory.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}});
  });
  json header{{"config", config_to_json(params.config)},
              {"vocabRef", vocab_ref},
              {"tensors", directory}};
  const std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kCheckpointMagic, 8);
  write_u32(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(header_bytes.size()));
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));

  std::vector<float> buffer;
  visit_tensors(p, [&out, &buffer](const std::string&, Eigen::MatrixXd& t) {
    buffer.resize(static_cast<std::size_t>(t.size()));
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        buffer[i++] = static_cast<float>(t(r, c));
      }
    }
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(buffer.size() * sizeof(float)));
  });
  if (!out) throw DataError("write failed for checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);

  char magic[8] = {};
  if (!in.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw DataError("not a checkpoint file: " + path);
  }
  const std::uint32_t version = read_u32(in, "version");
  if (version != kCheckpointVersion) {
    throw ConfigError("checkpoint incompatible: version " + std::to_string(version) +
                      ", expected " + std::to_string(kCheckpointVersion));
  }
  const std::uint32_t header_len = read_u32(in, "header length");
  std::string header_bytes(header_len, '\0');
  if (!in.read(header_bytes.data(), header_len)) {
    throw DataError("checkpoint truncated: missing header");
  }
  json header = json::parse(header_bytes, nullptr, false);
  if (header.is_discarded()) throw DataError("checkpoint header is not valid JSON");

  Checkpoint ckpt;
  ckpt.params = make_parameters(config_from_json(header.at("config")));
  ckpt.vocab_ref = header.value("vocabRef", "");

  std::unordered_map<std::string, Eigen::MatrixXd*> expected;
  visit_tensors(ckpt.params, [&expected](const std::string& name, Eigen::MatrixXd& t) {
    expected[name] = &t;
  });

  std::vector<float> buffer;
  for (const auto& entry : header.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    auto it = expected.find(name);
    if (it == expected.end()) {
      throw ConfigError("checkpoint incompatible: unexpected tensor " + name);
    }
    Eigen::MatrixXd& t = *it->second;
    if (t.rows() != rows || t.cols() != cols) {
      throw ConfigError("checkpoint incompatible: tensor " + name + " is " +
                        std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
                        std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
    }
    buffer.resize(static_cast<std::size_t>(rows * cols));
    if (!in.read(reinterpret_cast<char*>(buffer.data()),
                 static_cast<std::streamsize>(buffer.size() * sizeof(float)))) {
      throw DataError("checkpoint truncated: tensor " + name + " incomplete");
    }
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        t(r, c) = static_cast<double>(buffer[i++]);
      }
    }
    expected.erase(it);
  }
  if (!expected.empty()) {
    throw DataError("checkpoint truncated: tensor " + expected.begin()->first + " missing");
  }
  return ckpt;
}

Checkpoint load_checkpoint_expecting(const std::string& path, const ModelConfig& expected) {
  Checkpoint ckpt = load_checkpoint(path);
  if (!ckpt.params.config.compatible_with(expected)) {
    throw ConfigError("checkpoint incompatible: config mismatch in " + path);
  }
  return ckpt;
}

}  // namespace headsum
