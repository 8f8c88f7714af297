#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/rng.hpp"

namespace blab {

// The three families of hard distributions. All of them put half the mass
// uniformly on the 2^n vertices of a cube inscribed in a sphere (label 1)
// and half on a slice of that sphere strictly outside a slightly larger
// cube (label 0).
//
//  Base            vertices of the unit-sphere cube; off-cube slice of the
//                  unit sphere
//  ScaledCube      everything pushed out by the factor 1 + eps/2 and capped
//                  by the unit box, so the robust classifier fits it with
//                  zero loss while the sphere radius exceeds 1
//  ShiftedVertices the Base picture except the trailing `shifted_count`
//                  vertices move outward by 1 + eps/2, planting rare points
//                  that sit exactly on the robust decision boundary
enum class Variant { Base, ScaledCube, ShiftedVertices };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Optional replacement of the uniform label-0 slice measure by finitely
// many atoms. Each atom must lie in the slice the variant prescribes.
struct PointMass {
  Point x;
  double weight = 0.0;
};

struct DistributionSpec {
  int n = 8;
  double eps = 0.5;
  double delta = 0.0;
  Variant variant = Variant::Base;
  std::uint64_t shifted_count = 0;   // ShiftedVertices only
  std::vector<PointMass> masses;     // empty: uniform over the off-cube slice

  // Throws std::invalid_argument on out-of-range parameters and
  // infeasible_spec when the label-0 support is empty.
  void validate() const;

  double scale_factor() const;                      // fl(1 + eps/2)
  double vertex_scale(std::uint64_t index) const;   // cube scale of vertex `index`
  double sphere_radius() const;                     // radius carrying the label-0 slice
  double slice_inner() const;                       // slice: linf in (inner, cap]
  double slice_cap() const;
};

// Default knobs: eps = min((sqrt(n) - 1)/2, 1/2) and delta = fl(eps/sqrt(n)),
// the largest separation margin the construction certifies.
double default_eps(int n);
double default_delta(int n, double eps);

struct LabeledPoint {
  Point x;
  int label = 0;
};
using Dataset = std::vector<LabeledPoint>;

// One draw: a fair label coin, then a uniform vertex index or an off-cube
// slice point. Vertex coordinates are produced by cube_vertex, so they carry
// the exact canonical values.
LabeledPoint sample_one(const DistributionSpec& spec, Rng& rng);
Dataset sample_dataset(const DistributionSpec& spec, std::size_t count, Rng& rng);

struct DatasetSplit {
  Dataset train;
  Dataset validation;
};

// First r points train, next s validate; r + s must cover the dataset
// exactly.
DatasetSplit split_dataset(const Dataset& data, std::size_t r, std::size_t s);

struct SeparationAudit {
  double min_cross_distance = 0.0;  // +inf when a class is absent
  double threshold = 0.0;
  bool pass = false;
};

// Smallest distance between opposite-label points, compared against delta.
SeparationAudit separation_audit(const Dataset& data, double delta);

// ---- serialization ---------------------------------------------------------

// CSV with header x1,...,xn,label and 17 significant digits per coordinate,
// enough to reproduce every double exactly. A non-empty comment is written
// first as a single '#' line.
void write_dataset_csv(std::ostream& os, const Dataset& data, const std::string& comment = "");

// Reads the format write_dataset_csv emits; leading '#' lines are skipped.
// Throws std::runtime_error naming the offending line on malformed input.
Dataset read_dataset_csv(std::istream& is);

// JSON envelope {"spec": ..., "seed": ..., "points": ...}; doubles survive
// the round trip bit for bit.
std::string dataset_to_json(const DistributionSpec& spec, std::uint64_t seed,
                            const Dataset& data);

struct DatasetEnvelope {
  DistributionSpec spec;
  std::uint64_t seed = 0;
  Dataset points;
};

DatasetEnvelope dataset_from_json(const std::string& text);

}  // namespace blab
