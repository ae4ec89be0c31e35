#include "headsum/trainer.h"

#include <cmath>
#include <unordered_map>

#include "headsum/errors.h"

namespace headsum {

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("train epochs must be >= 0");
  if (learning_rate < 0.0) throw ConfigError("train learning_rate must be >= 0");
  if (beta1 < 0.0 || beta1 >= 1.0) throw ConfigError("train beta1 must be in [0, 1)");
  if (beta2 < 0.0 || beta2 >= 1.0) throw ConfigError("train beta2 must be in [0, 1)");
  if (!(adam_epsilon > 0.0)) throw ConfigError("train adam_epsilon must be positive");
}

namespace {

std::vector<Eigen::MatrixXd*> registry(Parameters& p) {
  std::vector<Eigen::MatrixXd*> out;
  visit_tensors(p, [&out](const std::string&, Eigen::MatrixXd& t) { out.push_back(&t); });
  return out;
}

}  // namespace

Parameters train(const std::vector<Document>& docs,
                 const std::vector<ExtractiveLabels>& labels, const ModelConfig& config,
                 const TrainConfig& train_config, TrainReport* report,
                 const EpochCallback& on_epoch) {
  config.validate();
  train_config.validate();

  std::unordered_map<std::string, const ExtractiveLabels*> by_id;
  for (const auto& l : labels) by_id[l.document_id] = &l;

  struct Example {
    const Document* doc;
    std::vector<int> mask;
  };
  std::vector<Example> examples;
  TrainReport local_report;
  for (const auto& doc : docs) {
    auto it = by_id.find(doc.id);
    if (it == by_id.end()) {
      throw DataError("train: no labels for document " + doc.id);
    }
    if (it->second->indices.empty()) {
      local_report.excluded.emplace_back(doc.id, "empty oracle label set");
      continue;
    }
    examples.push_back({&doc, label_mask(*it->second, doc.sentences.size())});
  }
  local_report.documents_trained = static_cast<int>(examples.size());

  Parameters params = init_parameters(config);
  Parameters grads = zeros_like(params);
  Parameters moment1 = zeros_like(params);
  Parameters moment2 = zeros_like(params);
  const auto thetas = registry(params);
  const auto gs = registry(grads);
  const auto ms = registry(moment1);
  const auto vs = registry(moment2);
  long step = 0;

  for (int epoch = 0; epoch < train_config.epochs && !examples.empty(); ++epoch) {
    double epoch_loss = 0.0;
    for (const auto& ex : examples) {
      for (auto* g : gs) g->setZero();
      const double loss = document_loss_gradients(*ex.doc, ex.mask, params, grads);
      if (!std::isfinite(loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                           ", document " + ex.doc->id);
      }
      epoch_loss += loss;

      ++step;
      const double bc1 = 1.0 - std::pow(train_config.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(train_config.beta2, static_cast<double>(step));
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        Eigen::MatrixXd& m = *ms[i];
        Eigen::MatrixXd& v = *vs[i];
        const Eigen::MatrixXd& g = *gs[i];
        m = train_config.beta1 * m + (1.0 - train_config.beta1) * g;
        v = train_config.beta2 * v + (1.0 - train_config.beta2) * g.cwiseProduct(g);
        thetas[i]->array() -= train_config.learning_rate * (m.array() / bc1) /
                              ((v.array() / bc2).sqrt() + train_config.adam_epsilon);
      }
      quantize_f32(params);
    }
    epoch_loss /= static_cast<double>(examples.size());
    local_report.epoch_losses.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }

  if (!all_finite(params)) throw NumericError("train: non-finite parameters after training");
  if (report) *report = std::move(local_report);
  return params;
}

}  // namespace headsum
