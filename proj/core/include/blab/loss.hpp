#pragma once

#include <functional>
#include <string>

#include "blab/distributions.hpp"
#include "blab/networks.hpp"

namespace blab {

// Pointwise penalty R(prediction, label), zero exactly when the two agree.
// Penalties may return +infinity for hopeless predictions; empirical_loss
// propagates that honestly.
struct LocalLoss {
  std::string name;
  std::function<double(double, double)> penalty;
};

const LocalLoss& zero_one_loss();
const LocalLoss& squared_loss();
// -log(1 - |v - w|), capped at 100 so a full miss stays finite
const LocalLoss& capped_log_loss();
const LocalLoss& loss_by_name(const std::string& name);

using Classifier = std::function<double(const Point&)>;

// Wraps a net's forward pass; the net is copied into the closure.
Classifier classifier(const ThresholdNet& net);

// Mean pointwise penalty over the dataset.
double empirical_loss(const Dataset& data, const Classifier& h, const LocalLoss& loss);

// Zero 0-1 loss cannot be beaten, so attaining it certifies empirical risk
// minimisation without searching any competitor class.
bool is_erm_minimiser(const Classifier& h, const Dataset& data);

}  // namespace blab
