#include "blab/networks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "json_util.hpp"

namespace blab {

using nlohmann::json;

void ActivationSpec::validate() const {
  if (!std::isfinite(theta)) throw std::invalid_argument("activation theta must be finite");
  switch (family) {
    case ActivationFamily::Relu:
      return;
    case ActivationFamily::LeakyReluDifference:
      if (!(slope > 0.0) || !(slope < 1.0))
        throw std::invalid_argument("leaky slope must lie in (0, 1)");
      if (!(shift > 0.0) || !std::isfinite(shift))
        throw std::invalid_argument("leaky shift must be positive");
      return;
    case ActivationFamily::PiecewiseLinearSigmoid:
      if (!(theta1 > theta) || !std::isfinite(theta1))
        throw std::invalid_argument("sigmoid knee theta1 must exceed theta");
      return;
  }
  throw std::invalid_argument("unknown activation family");
}

double ActivationSpec::plateau() const {
  // + 0.0 normalizes a negative zero so the plateau constant is unique
  switch (family) {
    case ActivationFamily::Relu:
    case ActivationFamily::LeakyReluDifference:
      return theta + 0.0;
    case ActivationFamily::PiecewiseLinearSigmoid:
      return 0.0;
  }
  throw std::invalid_argument("unknown activation family");
}

double ActivationSpec::eval(double u) const {
  switch (family) {
    case ActivationFamily::Relu:
      return u <= theta ? theta + 0.0 : u;
    case ActivationFamily::LeakyReluDifference: {
      if (u <= theta) return theta + 0.0;
      const double d = u - theta;
      if (d <= shift) return theta + slope * d;
      return theta + slope * shift + (d - shift);
    }
    case ActivationFamily::PiecewiseLinearSigmoid: {
      if (u <= theta) return 0.0;
      if (u >= theta1) return 1.0;
      return (u - theta) / (theta1 - theta);
    }
  }
  throw std::invalid_argument("unknown activation family");
}

std::string activation_family_name(ActivationFamily f) {
  switch (f) {
    case ActivationFamily::Relu: return "relu";
    case ActivationFamily::LeakyReluDifference: return "leaky_relu_difference";
    case ActivationFamily::PiecewiseLinearSigmoid: return "piecewise_linear_sigmoid";
  }
  throw std::invalid_argument("unknown activation family");
}

ActivationFamily activation_family_from_name(const std::string& name) {
  if (name == "relu") return ActivationFamily::Relu;
  if (name == "leaky_relu_difference") return ActivationFamily::LeakyReluDifference;
  if (name == "piecewise_linear_sigmoid") return ActivationFamily::PiecewiseLinearSigmoid;
  throw std::invalid_argument("unknown activation family '" + name + "'");
}

// ---- net plumbing ----------------------------------------------------------

int ThresholdNet::input_dim() const {
  if (layers.empty() || layers.front().weights.empty())
    throw std::invalid_argument("network has no layers");
  return static_cast<int>(layers.front().weights.front().size());
}

std::vector<int> ThresholdNet::architecture() const {
  std::vector<int> arch{input_dim()};
  for (const auto& l : layers) arch.push_back(static_cast<int>(l.biases.size()));
  return arch;
}

void ThresholdNet::validate() const {
  if (layers.empty()) throw std::invalid_argument("network has no layers");
  activation.validate();
  std::size_t width = static_cast<std::size_t>(input_dim());
  if (width < 2) throw std::invalid_argument("network input dimension must be at least 2");
  for (const auto& l : layers) {
    if (l.weights.empty() || l.weights.size() != l.biases.size())
      throw std::invalid_argument("layer weight rows and biases disagree");
    for (const auto& row : l.weights)
      if (row.size() != width)
        throw std::invalid_argument("layer weight row width does not match previous layer");
    width = l.biases.size();
  }
  if (width != 1) throw std::invalid_argument("final layer must have exactly one unit");
}

double ThresholdNet::output_argument(const Point& x) const {
  if (x.size() != static_cast<std::size_t>(input_dim()))
    throw std::invalid_argument("input dimension mismatch: expected " +
                                std::to_string(input_dim()) + ", got " +
                                std::to_string(x.size()));
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const Layer& l = layers[li];
    const bool hidden = li + 1 < layers.size();
    next.assign(l.biases.size(), 0.0);
    for (std::size_t o = 0; o < l.biases.size(); ++o) {
      const auto& row = l.weights[o];
      double acc = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * cur[k];
      acc += l.biases[o];
      next[o] = hidden ? activation.eval(acc) : acc;
    }
    cur.swap(next);
  }
  return cur[0];
}

double ThresholdNet::forward(const Point& x) const {
  const double v = output_argument(x);
  if (output_rule == OutputRule::Identity) return v;
  return v >= 0.0 ? 1.0 : 0.0;
}

std::vector<double> flatten_parameters(const ThresholdNet& net) {
  std::vector<double> out;
  for (const auto& l : net.layers) {
    for (const auto& row : l.weights) out.insert(out.end(), row.begin(), row.end());
    out.insert(out.end(), l.biases.begin(), l.biases.end());
  }
  return out;
}

double parameter_inf_distance(const ThresholdNet& a, const ThresholdNet& b) {
  if (a.architecture() != b.architecture())
    throw std::invalid_argument("parameter distance requires matching architectures");
  const auto pa = flatten_parameters(a);
  const auto pb = flatten_parameters(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::fabs(pa[i] - pb[i]));
  return m;
}

// ---- construction ------------------------------------------------------------

namespace {

// Largest bias such that fl(anchor + bias) <= theta. A unit whose incoming
// value is exactly `anchor` then lands on the plateau, while anything
// meaningfully above `anchor` clears theta. Converges in a step or two:
// theta - anchor is already within an ulp of the right value.
double plateau_bias(double anchor, double theta) {
  double bias = theta - anchor;
  while (anchor + bias > theta)
    bias = std::nextafter(bias, -std::numeric_limits<double>::infinity());
  for (;;) {
    const double up = std::nextafter(bias, std::numeric_limits<double>::infinity());
    if (anchor + up <= theta)
      bias = up;
    else
      break;
  }
  return bias;
}

// The left-to-right sum of `count` copies of value, matching the exact
// accumulation order of output_argument. Rounding in this fold must agree
// bit for bit with the forward pass, which is why it is not count * value.
double folded_sum(double value, int count) {
  double acc = 0.0;
  for (int i = 0; i < count; ++i) acc += value;
  return acc;
}

}  // namespace

ThresholdNet build_box_net(int n, double kappa, const ActivationSpec& act, double boundary) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("gain kappa must be positive and finite");
  if (!(boundary > 0.0) || !std::isfinite(boundary))
    throw std::invalid_argument("boundary must be positive and finite");
  act.validate();

  const std::size_t un = static_cast<std::size_t>(n);
  const double bias1 = plateau_bias(kappa * boundary, act.theta);

  ThresholdNet net;
  net.activation = act;
  net.output_rule = OutputRule::Sign;
  net.box_boundary = boundary;

  Layer l1;
  l1.weights.assign(2 * un, std::vector<double>(un, 0.0));
  l1.biases.assign(2 * un, bias1);
  for (std::size_t i = 0; i < un; ++i) {
    l1.weights[i][i] = kappa;        // fires when x_i > boundary
    l1.weights[un + i][i] = -kappa;  // fires when -x_i > boundary
  }

  Layer l2;
  l2.weights.assign(1, std::vector<double>(2 * un, -1.0));
  l2.biases.assign(1, folded_sum(act.plateau(), 2 * n));

  net.layers = {std::move(l1), std::move(l2)};
  return net;
}

ThresholdNet build_unstable_net(int n, double kappa, const ActivationSpec& act) {
  return build_box_net(n, kappa, act, cube_half_side(n, 1.0));
}

ThresholdNet build_robust_net(int n, double eps, double kappa, const ActivationSpec& act) {
  return build_box_net(n, kappa, act, cube_half_side(n, robust_scale(eps)));
}

ThresholdNet build_regularized_net(int n, double beta) {
  ThresholdNet net = build_box_net(n, beta, ActivationSpec{}, cube_half_side(n, 1.0));
  net.output_rule = OutputRule::Identity;
  return net;
}

ThresholdNet depth_extend(const ThresholdNet& net, const std::vector<int>& architecture) {
  net.validate();
  if (net.output_rule != OutputRule::Sign || net.layers.size() != 2 || !net.box_boundary)
    throw std::invalid_argument("depth_extend requires a two-layer box classifier");
  for (double w : net.layers[1].weights[0])
    if (w != -1.0)
      throw std::invalid_argument("depth_extend requires a two-layer box classifier");

  const int n = net.input_dim();
  const int hidden = static_cast<int>(net.layers[0].biases.size());
  if (architecture.size() < 3)
    throw std::invalid_argument("extended architecture needs at least one hidden layer");
  if (architecture.front() != n)
    throw std::invalid_argument("extended architecture must keep the input dimension");
  if (architecture.back() != 1)
    throw std::invalid_argument("extended architecture must end in one unit");
  if (architecture[1] < hidden)
    throw std::invalid_argument("first hidden layer cannot shrink below " +
                                std::to_string(hidden) + " units");
  for (std::size_t i = 1; i + 1 < architecture.size(); ++i)
    if (architecture[i] < 1) throw std::invalid_argument("hidden widths must be positive");

  const double theta = net.activation.theta;
  const double plateau = net.activation.plateau();
  const double all_sum = net.layers[1].biases[0];  // hidden fold when fully on the plateau

  ThresholdNet out;
  out.activation = net.activation;
  out.output_rule = OutputRule::Sign;
  out.box_boundary = net.box_boundary;

  // layer 1: the original detectors, padded with units idling at the plateau
  const std::size_t n1 = static_cast<std::size_t>(architecture[1]);
  Layer l1;
  l1.weights.assign(n1, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  l1.biases.assign(n1, theta);
  for (std::size_t o = 0; o < static_cast<std::size_t>(hidden); ++o) {
    l1.weights[o] = net.layers[0].weights[o];
    l1.biases[o] = net.layers[0].biases[o];
  }
  out.layers.push_back(std::move(l1));

  if (architecture.size() == 3) {
    // same depth, padded width: keep the original readout
    Layer l2;
    l2.weights.assign(1, std::vector<double>(n1, 0.0));
    for (std::size_t k = 0; k < static_cast<std::size_t>(hidden); ++k) l2.weights[0][k] = -1.0;
    l2.biases.assign(1, all_sum);
    out.layers.push_back(std::move(l2));
    return out;
  }

  // layer 2: carry unit: plateau exactly when the detector fold equals the
  // all-plateau value, above theta as soon as any detector fires
  {
    const std::size_t n2 = static_cast<std::size_t>(architecture[2]);
    Layer l2;
    l2.weights.assign(n2, std::vector<double>(n1, 0.0));
    l2.biases.assign(n2, theta);
    for (std::size_t k = 0; k < static_cast<std::size_t>(hidden); ++k) l2.weights[0][k] = 1.0;
    l2.biases[0] = plateau_bias(all_sum, theta);
    out.layers.push_back(std::move(l2));
  }

  // middle layers: forward the carry through the plateau
  for (std::size_t i = 3; i + 1 < architecture.size(); ++i) {
    const std::size_t ni = static_cast<std::size_t>(architecture[i]);
    const std::size_t prev = static_cast<std::size_t>(architecture[i - 1]);
    Layer l;
    l.weights.assign(ni, std::vector<double>(prev, 0.0));
    l.biases.assign(ni, theta);
    l.weights[0][0] = 1.0;
    l.biases[0] = plateau_bias(plateau, theta);
    out.layers.push_back(std::move(l));
  }

  // readout: carry at the plateau means inside, so the argument is exactly 0
  {
    const std::size_t prev = static_cast<std::size_t>(architecture[architecture.size() - 2]);
    Layer lo;
    lo.weights.assign(1, std::vector<double>(prev, 0.0));
    lo.weights[0][0] = -1.0;
    lo.biases.assign(1, plateau);
    out.layers.push_back(std::move(lo));
  }
  return out;
}

double lipschitz_estimate(const ThresholdNet& net, double half_side, std::size_t pairs,
                          Rng& rng) {
  if (!(half_side > 0.0)) throw std::invalid_argument("half_side must be positive");
  const std::size_t n = static_cast<std::size_t>(net.input_dim());
  double best = 0.0;
  Point x(n), y(n);
  for (std::size_t i = 0; i < pairs; ++i) {
    for (std::size_t j = 0; j < n; ++j) x[j] = half_side * (2.0 * rng.unit() - 1.0);
    for (std::size_t j = 0; j < n; ++j) y[j] = half_side * (2.0 * rng.unit() - 1.0);
    const double d = distance(x, y);
    if (d == 0.0) continue;
    best = std::max(best, std::fabs(net.forward(x) - net.forward(y)) / d);
  }
  return best;
}

// ---- serialization -----------------------------------------------------------

std::string net_to_json(const ThresholdNet& net) {
  net.validate();
  json layers = json::array();
  for (const auto& l : net.layers) layers.push_back({{"weights", l.weights}, {"biases", l.biases}});
  json env{{"architecture", net.architecture()},
           {"activation", detail::activation_obj(net.activation)},
           {"layers", layers},
           {"output_rule", net.output_rule == OutputRule::Sign ? "sign" : "identity"}};
  if (net.box_boundary) env["box_boundary"] = *net.box_boundary;
  return env.dump(2) + "\n";
}

ThresholdNet net_from_json(const std::string& text) {
  try {
    const json env = json::parse(text);
    ThresholdNet net;
    net.activation = detail::activation_from_obj(env.at("activation"));
    const std::string rule = env.at("output_rule").get<std::string>();
    if (rule == "sign")
      net.output_rule = OutputRule::Sign;
    else if (rule == "identity")
      net.output_rule = OutputRule::Identity;
    else
      throw std::runtime_error("network json: unknown output rule '" + rule + "'");
    for (const auto& l : env.at("layers")) {
      Layer layer;
      layer.weights = l.at("weights").get<std::vector<std::vector<double>>>();
      layer.biases = l.at("biases").get<std::vector<double>>();
      net.layers.push_back(std::move(layer));
    }
    if (env.contains("box_boundary")) net.box_boundary = env.at("box_boundary").get<double>();
    net.validate();
    const auto declared = env.at("architecture").get<std::vector<int>>();
    if (declared != net.architecture())
      throw std::runtime_error("network json: declared architecture disagrees with layers");
    return net;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("network json: ") + e.what());
  }
}

}  // namespace blab
