#include "blab/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace blab {

namespace {
constexpr double kLogLossCap = 100.0;
}

const LocalLoss& zero_one_loss() {
  static const LocalLoss loss{"zero_one",
                              [](double v, double w) { return v == w ? 0.0 : 1.0; }};
  return loss;
}

const LocalLoss& squared_loss() {
  static const LocalLoss loss{"squared", [](double v, double w) {
                                const double d = v - w;
                                return d * d;
                              }};
  return loss;
}

const LocalLoss& capped_log_loss() {
  static const LocalLoss loss{"capped_log", [](double v, double w) {
                                const double d = std::fabs(v - w);
                                if (d == 0.0) return 0.0;
                                if (d >= 1.0) return kLogLossCap;
                                return std::min(-std::log1p(-d), kLogLossCap);
                              }};
  return loss;
}

const LocalLoss& loss_by_name(const std::string& name) {
  if (name == "zero_one") return zero_one_loss();
  if (name == "squared") return squared_loss();
  if (name == "capped_log") return capped_log_loss();
  throw std::invalid_argument("unknown loss '" + name +
                              "' (expected zero_one, squared or capped_log)");
}

Classifier classifier(const ThresholdNet& net) {
  return [net](const Point& x) { return net.forward(x); };
}

double empirical_loss(const Dataset& data, const Classifier& h, const LocalLoss& loss) {
  if (data.empty()) throw std::invalid_argument("empirical loss of an empty dataset");
  double total = 0.0;
  for (const auto& p : data) total += loss.penalty(h(p.x), static_cast<double>(p.label));
  return total / static_cast<double>(data.size());
}

bool is_erm_minimiser(const Classifier& h, const Dataset& data) {
  return empirical_loss(data, h, zero_one_loss()) == 0.0;
}

}  // namespace blab
