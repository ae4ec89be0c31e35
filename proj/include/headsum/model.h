#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace headsum {

struct ModelConfig {
  int d = 64;
  int heads = 8;
  int layers = 2;
  int vocab_size = 0;
  int max_positions = 512;
  double ln_epsilon = 1e-5;
  std::uint64_t seed = 0;

  int head_dim() const { return d / heads; }
  void validate() const;

  // Shape and forward-behavior compatibility; seed is excluded.
  bool compatible_with(const ModelConfig& other) const;
};

// Per-head projections act on the width d/m slice of each state, so every
// Wq/Wk/Wv is (d/m)x(d/m). Vectors are stored as n x 1 matrices so that one
// registry covers every tensor uniformly.
struct LayerParams {
  std::vector<Eigen::MatrixXd> wq, wk, wv;
  Eigen::MatrixXd w0;
  Eigen::MatrixXd ln1_gain, ln1_bias;
  Eigen::MatrixXd ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  Eigen::MatrixXd ln2_gain, ln2_bias;
};

struct Parameters {
  ModelConfig config;
  Eigen::MatrixXd word_emb;  // vocab_size x d
  Eigen::MatrixXd pos_emb;   // max_positions x d
  Eigen::MatrixXd seg_emb;   // 2 x d
  std::vector<LayerParams> layers;
  Eigen::MatrixXd head_w;  // d x 1
  Eigen::MatrixXd head_b;  // 1 x 1
};

// Enumerates every tensor with its stable name, in checkpoint order.
template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
  fn("word_emb", p.word_emb);
  fn("pos_emb", p.pos_emb);
  fn("seg_emb", p.seg_emb);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    for (std::size_t h = 0; h < layer.wq.size(); ++h) {
      const std::string suffix = std::to_string(h);
      fn(prefix + "wq" + suffix, layer.wq[h]);
      fn(prefix + "wk" + suffix, layer.wk[h]);
      fn(prefix + "wv" + suffix, layer.wv[h]);
    }
    fn(prefix + "w0", layer.w0);
    fn(prefix + "ln1.gain", layer.ln1_gain);
    fn(prefix + "ln1.bias", layer.ln1_bias);
    fn(prefix + "ffn.w1", layer.ffn_w1);
    fn(prefix + "ffn.b1", layer.ffn_b1);
    fn(prefix + "ffn.w2", layer.ffn_w2);
    fn(prefix + "ffn.b2", layer.ffn_b2);
    fn(prefix + "ln2.gain", layer.ln2_gain);
    fn(prefix + "ln2.bias", layer.ln2_bias);
  }
  fn("head.w", p.head_w);
  fn("head.b", p.head_b);
}

// Allocates all tensors at their configured shapes, zero-filled.
Parameters make_parameters(const ModelConfig& config);

// Seeded random initialization: weight matrices and embeddings uniform in
// (-0.05, 0.05), biases zero, layer-norm gains one. Values are snapped to the
// f32 grid so checkpoints round-trip bitwise.
Parameters init_parameters(const ModelConfig& config);

// Same shapes as src, all zeros. Used for gradients and optimizer moments.
Parameters zeros_like(const Parameters& src);

// Rounds every coefficient to the nearest single-precision value while
// keeping double storage for computation.
void quantize_f32(Parameters& params);

bool all_finite(const Parameters& params);

}  // namespace headsum
