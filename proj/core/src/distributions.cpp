#include "blab/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "blab/errors.hpp"
#include "json_util.hpp"

namespace blab {

using nlohmann::json;

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::ScaledCube: return "scaled_cube";
    case Variant::ShiftedVertices: return "shifted_vertices";
  }
  throw std::invalid_argument("unknown variant value");
}

Variant variant_from_name(const std::string& name) {
  if (name == "base") return Variant::Base;
  if (name == "scaled_cube") return Variant::ScaledCube;
  if (name == "shifted_vertices") return Variant::ShiftedVertices;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected base, scaled_cube or shifted_vertices)");
}

double default_eps(int n) {
  const double half_gap = 0.5 * (std::sqrt(static_cast<double>(n)) - 1.0);
  return std::min(half_gap, 0.5);
}

double default_delta(int n, double eps) { return cube_half_side(n, eps); }

double DistributionSpec::scale_factor() const { return robust_scale(eps); }

double DistributionSpec::vertex_scale(std::uint64_t index) const {
  switch (variant) {
    case Variant::Base: return 1.0;
    case Variant::ScaledCube: return scale_factor();
    case Variant::ShiftedVertices: {
      const std::uint64_t count = std::uint64_t{1} << n;
      return index >= count - shifted_count ? scale_factor() : 1.0;
    }
  }
  throw std::invalid_argument("unknown variant value");
}

double DistributionSpec::sphere_radius() const {
  return variant == Variant::ScaledCube ? scale_factor() : 1.0;
}

double DistributionSpec::slice_inner() const {
  if (variant == Variant::ScaledCube) {
    const double rho = scale_factor();
    const double room = std::sqrt(static_cast<double>(n)) / rho - 1.0;
    const double eps_tilde = std::min(eps, room) / 2.0;
    return cube_half_side(n, rho * (1.0 + eps_tilde));
  }
  return cube_half_side(n, 1.0 + eps);
}

double DistributionSpec::slice_cap() const { return 1.0; }

void DistributionSpec::validate() const {
  if (n < 2 || n > kMaxIndexDim)
    throw std::invalid_argument("dimension must lie in [2, 63], got " + std::to_string(n));
  const double eps_max = std::sqrt(static_cast<double>(n)) - 1.0;
  if (!(eps > 0.0) || !(eps < eps_max))
    throw std::invalid_argument("eps must lie in (0, sqrt(n) - 1) = (0, " +
                                std::to_string(eps_max) + "), got " + std::to_string(eps));
  const double delta_max = default_delta(n, eps);
  if (!(delta > 0.0) || delta > delta_max)
    throw std::invalid_argument("delta must lie in (0, eps/sqrt(n)] = (0, " +
                                std::to_string(delta_max) + "], got " + std::to_string(delta));
  if (variant == Variant::ShiftedVertices) {
    const std::uint64_t count = std::uint64_t{1} << n;
    if (shifted_count > count)
      throw std::invalid_argument("shifted_count exceeds the vertex count 2^n");
  } else if (shifted_count != 0) {
    throw std::invalid_argument("shifted_count requires the shifted_vertices variant");
  }

  const double radius = sphere_radius();
  const double inner = slice_inner();
  const double cap = slice_cap();
  if (inner >= std::min(radius, cap) || cap < cube_half_side(n, radius))
    throw infeasible_spec("label-0 slice is empty for these parameters");

  if (!masses.empty()) {
    double total = 0.0;
    for (const auto& pm : masses) {
      if (pm.x.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("point mass has wrong dimension");
      if (!(pm.weight > 0.0)) throw std::invalid_argument("point mass weights must be positive");
      if (std::fabs(norm(pm.x) - radius) > 1e-9)
        throw std::invalid_argument("point mass does not lie on the sphere of radius " +
                                    std::to_string(radius));
      const double m = linf_norm(pm.x);
      if (!(m > inner) || !(m <= cap))
        throw std::invalid_argument("point mass lies outside the off-cube slice");
      total += pm.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::invalid_argument("point mass weights must sum to 1");
  }
}

namespace {

LabeledPoint sample_one_unchecked(const DistributionSpec& spec, Rng& rng) {
  if (rng.unit() < 0.5) {
    const std::uint64_t idx = rng.index_bits(spec.n);
    return {cube_vertex({spec.n, idx}, spec.vertex_scale(idx)), 1};
  }
  if (!spec.masses.empty()) {
    const double v = rng.unit();
    double cum = 0.0;
    for (const auto& pm : spec.masses) {
      cum += pm.weight;
      if (v < cum) return {pm.x, 0};
    }
    return {spec.masses.back().x, 0};
  }
  return {sample_sphere_slice(spec.n, spec.sphere_radius(), spec.slice_inner(), spec.slice_cap(),
                              rng),
          0};
}

}  // namespace

LabeledPoint sample_one(const DistributionSpec& spec, Rng& rng) {
  spec.validate();
  return sample_one_unchecked(spec, rng);
}

Dataset sample_dataset(const DistributionSpec& spec, std::size_t count, Rng& rng) {
  spec.validate();
  Dataset out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one_unchecked(spec, rng));
  return out;
}

DatasetSplit split_dataset(const Dataset& data, std::size_t r, std::size_t s) {
  if (r + s != data.size())
    throw std::invalid_argument("split sizes r + s = " + std::to_string(r + s) +
                                " do not cover the dataset of size " + std::to_string(data.size()));
  DatasetSplit out;
  out.train.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(r));
  out.validation.assign(data.begin() + static_cast<std::ptrdiff_t>(r), data.end());
  return out;
}

SeparationAudit separation_audit(const Dataset& data, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& a : data) {
    if (a.label != 1) continue;
    for (const auto& b : data) {
      if (b.label != 0) continue;
      min_d = std::min(min_d, distance(a.x, b.x));
    }
  }
  return {min_d, delta, min_d > delta};
}

// ---- CSV -------------------------------------------------------------------

void write_dataset_csv(std::ostream& os, const Dataset& data, const std::string& comment) {
  if (data.empty()) throw std::invalid_argument("cannot serialize an empty dataset");
  if (!comment.empty()) os << "# " << comment << "\n";
  const std::size_t n = data.front().x.size();
  for (std::size_t i = 1; i <= n; ++i) os << "x" << i << ",";
  os << "label\n";
  char buf[40];
  for (const auto& p : data) {
    if (p.x.size() != n) throw std::invalid_argument("dataset rows have mixed dimensions");
    for (double v : p.x) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf << ",";
    }
    os << p.label << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void csv_error(std::size_t lineno, const std::string& what) {
  throw std::runtime_error("dataset csv, line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

Dataset read_dataset_csv(std::istream& is) {
  Dataset out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool header_done = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_csv_line(line);
    if (!header_done) {
      if (cells.size() < 3 || cells.back() != "label")
        csv_error(lineno, "expected header x1,...,xn,label");
      for (std::size_t i = 0; i + 1 < cells.size(); ++i)
        if (cells[i] != "x" + std::to_string(i + 1))
          csv_error(lineno, "unexpected header column '" + cells[i] + "'");
      n = cells.size() - 1;
      header_done = true;
      continue;
    }
    if (cells.size() != n + 1)
      csv_error(lineno, "expected " + std::to_string(n + 1) + " columns, got " +
                            std::to_string(cells.size()));
    LabeledPoint p;
    p.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const char* s = cells[i].c_str();
      char* end = nullptr;
      p.x[i] = std::strtod(s, &end);
      if (end == s || *end != '\0') csv_error(lineno, "bad number '" + cells[i] + "'");
    }
    if (cells[n] == "0")
      p.label = 0;
    else if (cells[n] == "1")
      p.label = 1;
    else
      csv_error(lineno, "label must be 0 or 1, got '" + cells[n] + "'");
    out.push_back(std::move(p));
  }
  if (!header_done) throw std::runtime_error("dataset csv: missing header");
  return out;
}

// ---- JSON ------------------------------------------------------------------

std::string dataset_to_json(const DistributionSpec& spec, std::uint64_t seed,
                            const Dataset& data) {
  json pts = json::array();
  for (const auto& p : data) pts.push_back({{"x", p.x}, {"label", p.label}});
  const json env{{"spec", detail::spec_obj(spec)}, {"seed", seed}, {"points", pts}};
  return env.dump(2) + "\n";
}

DatasetEnvelope dataset_from_json(const std::string& text) {
  try {
    const json env = json::parse(text);
    DatasetEnvelope out;
    out.spec = detail::spec_from_obj(env.at("spec"));
    out.seed = env.at("seed").get<std::uint64_t>();
    for (const auto& p : env.at("points")) {
      LabeledPoint lp;
      lp.x = p.at("x").get<Point>();
      lp.label = p.at("label").get<int>();
      if (lp.label != 0 && lp.label != 1)
        throw std::runtime_error("dataset json: label must be 0 or 1");
      out.points.push_back(std::move(lp));
    }
    out.spec.validate();
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("dataset json: ") + e.what());
  }
}

}  // namespace blab
