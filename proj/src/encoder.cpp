#include "headsum/encoder.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "headsum/errors.h"

namespace headsum {

TokenizedInput body_input(const Document& doc) {
  TokenizedInput input;
  int position = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const int seg_row = (s % 2 == 0) ? 0 : 1;  // sentence s+1: odd -> row 0
    input.cls_positions.push_back(position);
    for (TokenId id : doc.sentences[s].ids) {
      input.tokens.push_back(id);
      input.positions.push_back(position);
      input.seg_rows.push_back(seg_row);
      ++position;
    }
  }
  return input;
}

TokenizedInput headline_input(const Document& doc, int max_positions) {
  TokenizedInput input;
  std::size_t keep = doc.headline.ids.size();
  if (static_cast<int>(keep) > max_positions) {
    keep = static_cast<std::size_t>(max_positions);
    std::fprintf(stderr, "warning: headline of %s truncated to %d positions\n",
                 doc.id.c_str(), max_positions);
  }
  input.cls_positions.push_back(0);
  for (std::size_t t = 0; t < keep; ++t) {
    input.tokens.push_back(doc.headline.ids[t]);
    input.positions.push_back(static_cast<int>(t));
    input.seg_rows.push_back(0);
  }
  return input;
}

Eigen::MatrixXd embed(const TokenizedInput& input, const Parameters& params) {
  const ModelConfig& cfg = params.config;
  const auto t_count = static_cast<Eigen::Index>(input.tokens.size());
  if (t_count == 0) throw std::invalid_argument("embed: empty input");

  Eigen::MatrixXd z(t_count, cfg.d);
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const TokenId tok = input.tokens[static_cast<std::size_t>(t)];
    const int pos = input.positions[static_cast<std::size_t>(t)];
    const int seg = input.seg_rows[static_cast<std::size_t>(t)];
    if (tok < 0 || tok >= cfg.vocab_size) {
      throw DataError("embed: token id " + std::to_string(tok) + " outside vocabulary");
    }
    if (pos < 0 || pos >= cfg.max_positions) {
      throw DataError("embed: position " + std::to_string(pos) +
                      " exceeds max_positions " + std::to_string(cfg.max_positions));
    }
    z.row(t) = params.word_emb.row(tok) + params.pos_emb.row(pos) + params.seg_emb.row(seg);
  }
  return z;
}

namespace {

void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double mx = m.row(r).maxCoeff();
    Eigen::ArrayXXd e = (m.row(r).array() - mx).exp();
    m.row(r) = (e / e.sum()).matrix();
  }
}

void layer_norm_rows(const Eigen::MatrixXd& x, double eps, Eigen::MatrixXd& y,
                     Eigen::VectorXd& s) {
  const auto d = static_cast<double>(x.cols());
  y.resize(x.rows(), x.cols());
  s.resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().sum() / d;
    s(r) = std::sqrt(var + eps);
    y.row(r) = ((x.row(r).array() - mu) / s(r)).matrix();
  }
}

Eigen::MatrixXd apply_gain_bias(const Eigen::MatrixXd& y, const Eigen::MatrixXd& gain,
                                const Eigen::MatrixXd& bias) {
  Eigen::MatrixXd out(y.rows(), y.cols());
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    out.col(c).array() = y.col(c).array() * gain(c, 0) + bias(c, 0);
  }
  return out;
}

// dx for y = (x - mu)/s per row.
Eigen::MatrixXd ln_input_grad(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& y,
                              const Eigen::VectorXd& s) {
  Eigen::MatrixXd dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const double mean_dy = dy.row(r).mean();
    const double mean_dyy = (dy.row(r).array() * y.row(r).array()).mean();
    dx.row(r) =
        ((dy.row(r).array() - mean_dy - y.row(r).array() * mean_dyy) / s(r)).matrix();
  }
  return dx;
}

// dS for A = softmax_rows(S).
Eigen::MatrixXd softmax_rows_grad(const Eigen::MatrixXd& da, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd ds(da.rows(), da.cols());
  for (Eigen::Index r = 0; r < da.rows(); ++r) {
    const double dot = (da.row(r).array() * a.row(r).array()).sum();
    ds.row(r) = (a.row(r).array() * (da.row(r).array() - dot)).matrix();
  }
  return ds;
}

void layer_forward(const Eigen::MatrixXd& x, const LayerParams& w, const ModelConfig& cfg,
                   LayerCache& cache) {
  const int hd = cfg.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  const auto heads = static_cast<std::size_t>(cfg.heads);

  cache.x = x;
  cache.q.resize(heads);
  cache.k.resize(heads);
  cache.v.resize(heads);
  cache.a.resize(heads);
  cache.concat.resize(x.rows(), cfg.d);
  for (std::size_t h = 0; h < heads; ++h) {
    const auto offset = static_cast<Eigen::Index>(h) * hd;
    const Eigen::MatrixXd xh = x.middleCols(offset, hd);
    cache.q[h] = xh * w.wq[h].transpose();
    cache.k[h] = xh * w.wk[h].transpose();
    cache.v[h] = xh * w.wv[h].transpose();
    Eigen::MatrixXd scores = cache.q[h] * cache.k[h].transpose() * scale;
    softmax_rows(scores);
    cache.a[h] = std::move(scores);
    cache.concat.middleCols(offset, hd) = cache.a[h] * cache.v[h];
  }

  const Eigen::MatrixXd attn = cache.concat * w.w0.transpose();
  const Eigen::MatrixXd r1 = x + attn;
  layer_norm_rows(r1, cfg.ln_epsilon, cache.ln1_y, cache.ln1_s);
  cache.ln1_out = apply_gain_bias(cache.ln1_y, w.ln1_gain, w.ln1_bias);

  cache.ffn_h = cache.ln1_out * w.ffn_w1.transpose();
  cache.ffn_h.rowwise() += w.ffn_b1.col(0).transpose();
  cache.ffn_g = cache.ffn_h * w.ffn_w2.transpose();
  cache.ffn_g.rowwise() += w.ffn_b2.col(0).transpose();
  const Eigen::MatrixXd r2 = cache.ln1_out + cache.ffn_g.cwiseMax(0.0);
  layer_norm_rows(r2, cfg.ln_epsilon, cache.ln2_y, cache.ln2_s);
  cache.ln2_out = apply_gain_bias(cache.ln2_y, w.ln2_gain, w.ln2_bias);
}

// Returns the gradient w.r.t. the layer input, accumulating weight
// gradients into gw.
Eigen::MatrixXd layer_backward(const Eigen::MatrixXd& dout, const LayerParams& w,
                               const ModelConfig& cfg, const LayerCache& cache,
                               LayerParams& gw) {
  const int hd = cfg.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

  Eigen::MatrixXd dy2(dout.rows(), dout.cols());
  for (Eigen::Index c = 0; c < dout.cols(); ++c) {
    gw.ln2_gain(c, 0) += (dout.col(c).array() * cache.ln2_y.col(c).array()).sum();
    gw.ln2_bias(c, 0) += dout.col(c).sum();
    dy2.col(c) = dout.col(c) * w.ln2_gain(c, 0);
  }
  const Eigen::MatrixXd dr2 = ln_input_grad(dy2, cache.ln2_y, cache.ln2_s);

  Eigen::MatrixXd dln1_out = dr2;
  const Eigen::MatrixXd dg =
      (cache.ffn_g.array() > 0.0).select(dr2, Eigen::MatrixXd::Zero(dr2.rows(), dr2.cols()));

  const Eigen::MatrixXd dh = dg * w.ffn_w2;
  gw.ffn_w2 += dg.transpose() * cache.ffn_h;
  gw.ffn_b2.col(0) += dg.colwise().sum().transpose();

  dln1_out += dh * w.ffn_w1;
  gw.ffn_w1 += dh.transpose() * cache.ln1_out;
  gw.ffn_b1.col(0) += dh.colwise().sum().transpose();

  Eigen::MatrixXd dy1(dln1_out.rows(), dln1_out.cols());
  for (Eigen::Index c = 0; c < dln1_out.cols(); ++c) {
    gw.ln1_gain(c, 0) += (dln1_out.col(c).array() * cache.ln1_y.col(c).array()).sum();
    gw.ln1_bias(c, 0) += dln1_out.col(c).sum();
    dy1.col(c) = dln1_out.col(c) * w.ln1_gain(c, 0);
  }
  const Eigen::MatrixXd dr1 = ln_input_grad(dy1, cache.ln1_y, cache.ln1_s);

  Eigen::MatrixXd dx = dr1;
  const Eigen::MatrixXd dconcat = dr1 * w.w0;
  gw.w0 += dr1.transpose() * cache.concat;

  for (std::size_t h = 0; h < cache.q.size(); ++h) {
    const auto offset = static_cast<Eigen::Index>(h) * hd;
    const Eigen::MatrixXd xh = cache.x.middleCols(offset, hd);
    const Eigen::MatrixXd doh = dconcat.middleCols(offset, hd);
    const Eigen::MatrixXd da = doh * cache.v[h].transpose();
    const Eigen::MatrixXd dv = cache.a[h].transpose() * doh;
    const Eigen::MatrixXd ds = softmax_rows_grad(da, cache.a[h]);
    const Eigen::MatrixXd dq = ds * cache.k[h] * scale;
    const Eigen::MatrixXd dk = ds.transpose() * cache.q[h] * scale;

    dx.middleCols(offset, hd) += dq * w.wq[h] + dk * w.wk[h] + dv * w.wv[h];
    gw.wq[h] += dq.transpose() * xh;
    gw.wk[h] += dk.transpose() * xh;
    gw.wv[h] += dv.transpose() * xh;
  }
  return dx;
}

}  // namespace

Eigen::MatrixXd encode_states(const TokenizedInput& input, const Parameters& params,
                              ForwardCache* cache) {
  const ModelConfig& cfg = params.config;
  ForwardCache local;
  local.input = input;
  local.z0 = embed(input, params);
  local.layers.resize(static_cast<std::size_t>(cfg.layers));

  const Eigen::MatrixXd* x = &local.z0;
  for (int l = 0; l < cfg.layers; ++l) {
    LayerCache& lc = local.layers[static_cast<std::size_t>(l)];
    layer_forward(*x, params.layers[static_cast<std::size_t>(l)], cfg, lc);
    if (!lc.ln2_out.allFinite()) {
      throw NumericError("non-finite encoder state in layer " + std::to_string(l));
    }
    x = &lc.ln2_out;
  }

  Eigen::MatrixXd out = *x;
  if (cache) *cache = std::move(local);
  return out;
}

EncodedDocument encode(const Document& doc, const Parameters& params) {
  EncodedDocument enc;
  const TokenizedInput input = body_input(doc);
  enc.token_states = encode_states(input, params);
  enc.cls_positions = input.cls_positions;
  enc.cls_states.resize(static_cast<Eigen::Index>(input.cls_positions.size()),
                        params.config.d);
  for (std::size_t i = 0; i < input.cls_positions.size(); ++i) {
    enc.cls_states.row(static_cast<Eigen::Index>(i)) =
        enc.token_states.row(input.cls_positions[i]);
  }
  return enc;
}

std::vector<double> selection_scores(const EncodedDocument& enc, const Parameters& params) {
  std::vector<double> scores;
  scores.reserve(static_cast<std::size_t>(enc.cls_states.rows()));
  for (Eigen::Index i = 0; i < enc.cls_states.rows(); ++i) {
    const double logit = enc.cls_states.row(i).dot(params.head_w.col(0)) + params.head_b(0, 0);
    scores.push_back(sigmoid(logit));
  }
  return scores;
}

double bce_loss(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("bce_loss: " + std::to_string(scores.size()) +
                                " scores vs " + std::to_string(labels.size()) + " labels");
  }
  if (scores.empty()) throw std::invalid_argument("bce_loss: empty inputs");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::min(std::max(scores[i], kProbEpsilon), 1.0 - kProbEpsilon);
    total += labels[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(scores.size());
}

Eigen::VectorXd encode_headline(const Document& doc, const Parameters& params) {
  const TokenizedInput input = headline_input(doc, params.config.max_positions);
  const Eigen::MatrixXd states = encode_states(input, params);
  return states.row(0).transpose();
}

double document_loss(const Document& doc, const std::vector<int>& labels,
                     const Parameters& params) {
  const EncodedDocument enc = encode(doc, params);
  return bce_loss(selection_scores(enc, params), labels);
}

double document_loss_gradients(const Document& doc, const std::vector<int>& labels,
                               const Parameters& params, Parameters& grads) {
  const ModelConfig& cfg = params.config;
  ForwardCache cache;
  const Eigen::MatrixXd states = encode_states(body_input(doc), params, &cache);
  const std::size_t n_sentences = cache.input.cls_positions.size();
  if (labels.size() != n_sentences) {
    throw std::invalid_argument("document_loss_gradients: " + std::to_string(labels.size()) +
                                " labels vs " + std::to_string(n_sentences) + " sentences");
  }

  double loss = 0.0;
  Eigen::MatrixXd dstates = Eigen::MatrixXd::Zero(states.rows(), states.cols());
  for (std::size_t i = 0; i < n_sentences; ++i) {
    const Eigen::Index pos = cache.input.cls_positions[i];
    const double logit = states.row(pos).dot(params.head_w.col(0)) + params.head_b(0, 0);
    const double rho = sigmoid(logit);
    const double p = std::min(std::max(rho, kProbEpsilon), 1.0 - kProbEpsilon);
    loss += labels[i] ? -std::log(p) : -std::log(1.0 - p);

    double dlogit = 0.0;
    if (rho > kProbEpsilon && rho < 1.0 - kProbEpsilon) {
      dlogit = (rho - static_cast<double>(labels[i])) / static_cast<double>(n_sentences);
    }
    dstates.row(pos) += dlogit * params.head_w.col(0).transpose();
    grads.head_w.col(0) += dlogit * states.row(pos).transpose();
    grads.head_b(0, 0) += dlogit;
  }
  loss /= static_cast<double>(n_sentences);

  Eigen::MatrixXd dx = std::move(dstates);
  for (int l = cfg.layers - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    dx = layer_backward(dx, params.layers[li], cfg, cache.layers[li], grads.layers[li]);
  }

  for (std::size_t t = 0; t < cache.input.tokens.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    grads.word_emb.row(cache.input.tokens[t]) += dx.row(row);
    grads.pos_emb.row(cache.input.positions[t]) += dx.row(row);
    grads.seg_emb.row(cache.input.seg_rows[t]) += dx.row(row);
  }
  return loss;
}

}  // namespace headsum
