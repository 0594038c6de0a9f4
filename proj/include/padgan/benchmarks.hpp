#ifndef PADGAN_BENCHMARKS_HPP
#define PADGAN_BENCHMARKS_HPP

#include <string>

#include "padgan/linalg.hpp"
#include "padgan/rng.hpp"

namespace padgan {

enum class BenchmarkId { Kno1, Vlmop2 };

BenchmarkId benchmark_from_name(const std::string& name);
std::string benchmark_name(BenchmarkId id);

// Eight Gaussian clusters evenly spaced around a circle inside [-0.5, 0.5]^2.
struct ClusterDataSpec {
  int n_points = 10000;
  int n_clusters = 8;
  double circle_radius = 0.35;
  double cluster_std = 0.04;
  double box_low = -0.5;
  double box_high = 0.5;
  std::uint64_t seed = 0;
};

// Cluster centers, one row per cluster, at angles 2*pi*k / n_clusters.
Matrix cluster_centers(const ClusterDataSpec& spec);

// Round-robin cluster assignment; each point is redrawn until inside the box.
Matrix make_cluster_data(const ClusterDataSpec& spec);

// Modified KNO1 in normalized coordinates x' in [-0.5, 0.5]^2. Throws
// SingularInput on the pole x1 + x2 = 0 (x1' + x2' = -1).
Vector kno1(const Vector& x_prime);

// Modified VLMOP2 on [-0.5, 0.5]^2; two Gaussian bumps, outputs in (0, 1].
Vector vlmop2(const Vector& x);

Vector evaluate_benchmark(BenchmarkId id, const Vector& x);

// Central finite-difference Jacobian (2x2), rows per objective.
Matrix estimator_jacobian(BenchmarkId id, const Vector& x, double h);

// Perpendicular distance to the known Pareto line:
// |x1' + x2' - 0.4705| / sqrt(2) for KNO1, |x1 - x2| / sqrt(2) for VLMOP2.
double pareto_line_distance(BenchmarkId id, const Vector& x);

// Designs that land exactly on the KNO1 pole are nudged by this much before
// evaluation in the training / optimization plumbing.
Vector nudge_off_singularity(BenchmarkId id, Vector x);

}  // namespace padgan

#endif
