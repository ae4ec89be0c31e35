#pragma once

#include <vector>

#include <Eigen/Dense>

#include "headsum/corpus.h"
#include "headsum/model.h"
#include "headsum/tokens.h"

namespace headsum {

/// Flattened encoder input: one row per occupied position.
struct TokenizedInput {
  std::vector<TokenId> tokens;
  std::vector<int> positions;      // 0-based row into pos_emb
  std::vector<int> seg_rows;       // 0 for odd sentences, 1 for even
  std::vector<int> cls_positions;  // stream index of each sentence start
};

/// Body sentences concatenated, positions 0..T-1, segment row from the
/// 1-based sentence parity.
TokenizedInput body_input(const Document& doc);

/// Headline as its own sequence: positions restart at 0, segment row 0.
/// Truncated to max_positions when over-long.
TokenizedInput headline_input(const Document& doc, int max_positions);

/// z_t = word_emb[token_t] + pos_emb[t] + seg_emb[parity]. Rows are states.
Eigen::MatrixXd embed(const TokenizedInput& input, const Parameters& params);

/// Everything the backward pass needs from one encoder layer.
struct LayerCache {
  Eigen::MatrixXd x;                        // layer input, T x d
  std::vector<Eigen::MatrixXd> q, k, v, a;  // per head; a rows are softmaxed
  Eigen::MatrixXd concat;                   // heads side by side, T x d
  Eigen::MatrixXd ln1_y;                    // normalized rows, pre gain/bias
  Eigen::VectorXd ln1_s;                    // per-row sqrt(var + eps)
  Eigen::MatrixXd ln1_out;
  Eigen::MatrixXd ffn_h;  // inner linear output
  Eigen::MatrixXd ffn_g;  // outer linear output, pre ReLU
  Eigen::MatrixXd ln2_y;
  Eigen::VectorXd ln2_s;
  Eigen::MatrixXd ln2_out;  // layer output
};

struct ForwardCache {
  TokenizedInput input;
  Eigen::MatrixXd z0;  // embedding output
  std::vector<LayerCache> layers;
  std::vector<double> logits;  // one per sentence
  std::vector<double> probs;
};

/// Runs the stacked encoder layers over embedded states. Each layer:
/// per-head slice attention, concat + output projection, residual + LN,
/// position-wise ReLU(W2(W1 z + b1) + b2), residual + LN.
Eigen::MatrixXd encode_states(const TokenizedInput& input, const Parameters& params,
                              ForwardCache* cache = nullptr);

struct EncodedDocument {
  Eigen::MatrixXd token_states;  // T x d
  std::vector<int> cls_positions;
  Eigen::MatrixXd cls_states;      // sentence count x d
  Eigen::VectorXd headline_state;  // size 0 until encode_headline ran
};

EncodedDocument encode(const Document& doc, const Parameters& params);

/// sigmoid(head_w . cls_state + head_b) per sentence.
std::vector<double> selection_scores(const EncodedDocument& enc, const Parameters& params);

/// Mean over sentences of -[y log p + (1-y) log(1-p)], probabilities
/// clamped to [1e-7, 1 - 1e-7].
double bce_loss(const std::vector<double>& scores, const std::vector<int>& labels);

/// Headline through the same embed + encode stack as its own sequence;
/// returns the state at the headline-start marker.
Eigen::VectorXd encode_headline(const Document& doc, const Parameters& params);

/// Loss of one document against binary per-sentence labels.
double document_loss(const Document& doc, const std::vector<int>& labels,
                     const Parameters& params);

/// Backpropagates the document loss, accumulating into grads (same shapes
/// as params, caller zeroes). Returns the loss.
double document_loss_gradients(const Document& doc, const std::vector<int>& labels,
                               const Parameters& params, Parameters& grads);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline constexpr double kProbEpsilon = 1e-7;

}  // namespace headsum
