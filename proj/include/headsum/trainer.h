#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "headsum/corpus.h"
#include "headsum/encoder.h"
#include "headsum/model.h"
#include "headsum/oracle.h"

namespace headsum {

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
};

struct TrainReport {
  std::vector<double> epoch_losses;  // mean document loss per epoch
  std::vector<std::pair<std::string, std::string>> excluded;  // id, diagnostic
  int documents_trained = 0;
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

/// Adaptive-moment gradient descent on mean document BCE, one document per
/// update step, document order as given. Documents whose labels are empty
/// are excluded and recorded. Parameters stay on the f32 grid after every
/// step, so checkpoints round-trip bitwise. Deterministic for a fixed
/// config seed.
Parameters train(const std::vector<Document>& docs,
                 const std::vector<ExtractiveLabels>& labels, const ModelConfig& config,
                 const TrainConfig& train_config, TrainReport* report = nullptr,
                 const EpochCallback& on_epoch = nullptr);

}  // namespace headsum
