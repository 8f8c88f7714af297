#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/rng.hpp"

namespace blab {

// Hidden-unit nonlinearities. Each one is constant at plateau() for
// arguments at or below theta and strictly increasing just above it; the
// classifiers below only use those two facts. The plateau branch returns
// the exact same double every time, which the bit-level boundary behavior
// of the box nets depends on.
enum class ActivationFamily { Relu, LeakyReluDifference, PiecewiseLinearSigmoid };

struct ActivationSpec {
  ActivationFamily family = ActivationFamily::Relu;
  double theta = 0.0;   // plateau edge
  double slope = 0.25;  // LeakyReluDifference: first-segment slope, in (0, 1)
  double shift = 1.0;   // LeakyReluDifference: length of the shallow segment
  double theta1 = 1.0;  // PiecewiseLinearSigmoid: upper knee, > theta

  void validate() const;
  double eval(double u) const;
  double plateau() const;  // the constant value taken at and below theta
};

std::string activation_family_name(ActivationFamily f);
ActivationFamily activation_family_from_name(const std::string& name);

struct Layer {
  std::vector<std::vector<double>> weights;  // [out][in]
  std::vector<double> biases;                // [out]
};

enum class OutputRule { Sign, Identity };

// A fully connected feed-forward net. Hidden layers apply the activation;
// the final layer is affine, and forward() then either thresholds at zero
// (Sign: >= 0 maps to 1, < 0 to 0) or returns the value as is (Identity).
struct ThresholdNet {
  std::vector<Layer> layers;
  ActivationSpec activation;
  OutputRule output_rule = OutputRule::Sign;

  // For box classifiers: the coordinate magnitude at which the decision
  // boundary sits. Carried as metadata so tools working with a serialized
  // net can recognize boundary points without reverse-engineering weights.
  std::optional<double> box_boundary;

  int input_dim() const;
  std::vector<int> architecture() const;  // [n, N1, ..., 1]
  void validate() const;

  double output_argument(const Point& x) const;  // final affine value
  double forward(const Point& x) const;
};

// All weights, then all biases, layer by layer: the flat parameter vector.
std::vector<double> flatten_parameters(const ThresholdNet& net);

// Max absolute difference over aligned parameters; architectures must match.
double parameter_inf_distance(const ThresholdNet& a, const ThresholdNet& b);

// The two-layer box classifier: 2n hidden units test x_i > boundary and
// -x_i > boundary with gain kappa, and the output adds up how far the
// hidden values sit above the plateau, negated. The biases are chosen so
// that a point with every |x_i| == boundary (bitwise) lands exactly on the
// plateau edge, making the output argument exactly 0.0 there; forward()
// therefore returns 1 on the closed cube and 0 strictly outside.
ThresholdNet build_box_net(int n, double kappa, const ActivationSpec& act, double boundary);

// boundary 1/sqrt(n): fits the base distribution but flips under tiny noise
ThresholdNet build_unstable_net(int n, double kappa, const ActivationSpec& act);

// boundary (1 + eps/2)/sqrt(n): same cube family, widened by the margin
ThresholdNet build_robust_net(int n, double eps, double kappa, const ActivationSpec& act);

// Relu box net with gain beta and identity output: 0 on the unit-scale
// cube, negative outside, with Lipschitz constant proportional to beta.
ThresholdNet build_regularized_net(int n, double beta);

// Re-expresses a two-layer box classifier over a deeper architecture with
// pointwise identical labels: one carry unit per extra layer forwards the
// "still on the plateau" state, and padding units idle at the plateau.
// architecture is [n, N1, ..., 1] with N1 >= 2n; all hidden widths >= 1.
ThresholdNet depth_extend(const ThresholdNet& net, const std::vector<int>& architecture);

// Largest |f(x) - f(y)| / |x - y| over random pairs drawn uniformly from
// the box [-half_side, half_side]^n. Meant for Identity nets.
double lipschitz_estimate(const ThresholdNet& net, double half_side, std::size_t pairs,
                          Rng& rng);

// JSON envelope {architecture, activation, layers, output_rule} plus the
// optional box_boundary; doubles survive the round trip bit for bit.
std::string net_to_json(const ThresholdNet& net);
ThresholdNet net_from_json(const std::string& text);

}  // namespace blab
