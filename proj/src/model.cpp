#include "headsum/model.h"

#include <cmath>

#include "headsum/errors.h"
#include "headsum/rng.h"

namespace headsum {

void ModelConfig::validate() const {
  if (d < 1) throw ConfigError("model d must be >= 1");
  if (heads < 1) throw ConfigError("model heads must be >= 1");
  if (d % heads != 0) {
    throw ConfigError("model d (" + std::to_string(d) + ") must be divisible by heads (" +
                      std::to_string(heads) + ")");
  }
  if (layers < 1) throw ConfigError("model layers must be >= 1");
  if (vocab_size < 1) throw ConfigError("model vocab_size must be >= 1");
  if (max_positions < 1) throw ConfigError("model max_positions must be >= 1");
  if (!(ln_epsilon > 0.0)) throw ConfigError("model ln_epsilon must be positive");
}

bool ModelConfig::compatible_with(const ModelConfig& other) const {
  return d == other.d && heads == other.heads && layers == other.layers &&
         vocab_size == other.vocab_size && max_positions == other.max_positions &&
         ln_epsilon == other.ln_epsilon;
}

Parameters make_parameters(const ModelConfig& config) {
  config.validate();
  const int d = config.d;
  const int hd = config.head_dim();

  Parameters p;
  p.config = config;
  p.word_emb = Eigen::MatrixXd::Zero(config.vocab_size, d);
  p.pos_emb = Eigen::MatrixXd::Zero(config.max_positions, d);
  p.seg_emb = Eigen::MatrixXd::Zero(2, d);
  p.layers.resize(static_cast<std::size_t>(config.layers));
  for (auto& layer : p.layers) {
    layer.wq.assign(static_cast<std::size_t>(config.heads), Eigen::MatrixXd::Zero(hd, hd));
    layer.wk.assign(static_cast<std::size_t>(config.heads), Eigen::MatrixXd::Zero(hd, hd));
    layer.wv.assign(static_cast<std::size_t>(config.heads), Eigen::MatrixXd::Zero(hd, hd));
    layer.w0 = Eigen::MatrixXd::Zero(d, d);
    layer.ln1_gain = Eigen::MatrixXd::Zero(d, 1);
    layer.ln1_bias = Eigen::MatrixXd::Zero(d, 1);
    layer.ffn_w1 = Eigen::MatrixXd::Zero(d, d);
    layer.ffn_b1 = Eigen::MatrixXd::Zero(d, 1);
    layer.ffn_w2 = Eigen::MatrixXd::Zero(d, d);
    layer.ffn_b2 = Eigen::MatrixXd::Zero(d, 1);
    layer.ln2_gain = Eigen::MatrixXd::Zero(d, 1);
    layer.ln2_bias = Eigen::MatrixXd::Zero(d, 1);
  }
  p.head_w = Eigen::MatrixXd::Zero(d, 1);
  p.head_b = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

namespace {

void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& g) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng::uniform(g, -0.05, 0.05);
    }
  }
}

}  // namespace

Parameters init_parameters(const ModelConfig& config) {
  Parameters p = make_parameters(config);
  std::mt19937_64 g(config.seed);

  fill_uniform(p.word_emb, g);
  fill_uniform(p.pos_emb, g);
  fill_uniform(p.seg_emb, g);
  for (auto& layer : p.layers) {
    for (auto& w : layer.wq) fill_uniform(w, g);
    for (auto& w : layer.wk) fill_uniform(w, g);
    for (auto& w : layer.wv) fill_uniform(w, g);
    fill_uniform(layer.w0, g);
    layer.ln1_gain.setOnes();
    fill_uniform(layer.ffn_w1, g);
    fill_uniform(layer.ffn_w2, g);
    layer.ln2_gain.setOnes();
  }
  fill_uniform(p.head_w, g);

  quantize_f32(p);
  return p;
}

Parameters zeros_like(const Parameters& src) {
  return make_parameters(src.config);
}

void quantize_f32(Parameters& params) {
  visit_tensors(params, [](const std::string&, Eigen::MatrixXd& t) {
    double* data = t.data();
    const Eigen::Index n = t.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      data[i] = static_cast<double>(static_cast<float>(data[i]));
    }
  });
}

bool all_finite(const Parameters& params) {
  bool ok = true;
  visit_tensors(const_cast<Parameters&>(params),
                [&ok](const std::string&, Eigen::MatrixXd& t) {
                  if (!t.allFinite()) ok = false;
                });
  return ok;
}

}  // namespace headsum
