#include "padgan/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace padgan {

namespace {
constexpr double kKno1ParetoSum = 0.4705;  // x1' + x2' on the front line
constexpr double kSingularityNudge = 1e-9;
}  // namespace

BenchmarkId benchmark_from_name(const std::string& name) {
  if (name == "kno1") return BenchmarkId::Kno1;
  if (name == "vlmop2") return BenchmarkId::Vlmop2;
  throw Error("unknown benchmark '" + name + "' (expected kno1 or vlmop2)");
}

std::string benchmark_name(BenchmarkId id) {
  return id == BenchmarkId::Kno1 ? "kno1" : "vlmop2";
}

Matrix cluster_centers(const ClusterDataSpec& spec) {
  Matrix centers(spec.n_clusters, 2);
  for (int k = 0; k < spec.n_clusters; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / spec.n_clusters;
    centers(k, 0) = spec.circle_radius * std::cos(angle);
    centers(k, 1) = spec.circle_radius * std::sin(angle);
  }
  return centers;
}

Matrix make_cluster_data(const ClusterDataSpec& spec) {
  if (spec.n_points < spec.n_clusters)
    throw DimensionMismatch("make_cluster_data: n_points < n_clusters");
  const Matrix centers = cluster_centers(spec);
  Rng rng(spec.seed);
  Matrix data(spec.n_points, 2);
  for (int i = 0; i < spec.n_points; ++i) {
    const int c = i % spec.n_clusters;
    double x, y;
    do {
      x = centers(c, 0) + spec.cluster_std * rng.normal();
      y = centers(c, 1) + spec.cluster_std * rng.normal();
    } while (x < spec.box_low || x > spec.box_high || y < spec.box_low || y > spec.box_high);
    data(i, 0) = x;
    data(i, 1) = y;
  }
  return data;
}

Vector kno1(const Vector& x_prime) {
  if (x_prime.size() != 2) throw DimensionMismatch("kno1: expected a 2-vector");
  const double x1 = 3.0 * (x_prime(0) + 0.5);
  const double x2 = 3.0 * (x_prime(1) + 0.5);
  const double s = x1 + x2;
  if (s == 0.0) throw SingularInput("kno1: singular at x1 + x2 = 0");
  const double r = 9.0 - (3.0 * std::sin(5.0 / (2.0 * s * s)) + 3.0 * std::sin(4.0 * s) +
                          5.0 * std::sin(2.0 * s + 2.0));
  const double phi = std::numbers::pi * (x1 - x2 + 3.0) / 12.0;
  Vector f(2);
  f(0) = r / 20.0 * std::cos(phi);
  f(1) = r / 20.0 * std::sin(phi);
  return f;
}

Vector vlmop2(const Vector& x) {
  if (x.size() != 2) throw DimensionMismatch("vlmop2: expected a 2-vector");
  const double c = 1.0 / std::sqrt(2.0);
  Vector f(2);
  f(0) = std::exp(-(x(0) - c) * (x(0) - c) - (x(1) - c) * (x(1) - c));
  f(1) = std::exp(-(x(0) + c) * (x(0) + c) - (x(1) + c) * (x(1) + c));
  return f;
}

Vector evaluate_benchmark(BenchmarkId id, const Vector& x) {
  return id == BenchmarkId::Kno1 ? kno1(x) : vlmop2(x);
}

Matrix estimator_jacobian(BenchmarkId id, const Vector& x, double h) {
  if (!(h > 0.0)) throw DimensionMismatch("estimator_jacobian: h must be > 0");
  if (x.size() != 2) throw DimensionMismatch("estimator_jacobian: expected a 2-vector");
  if (id == BenchmarkId::Kno1 && std::abs(x(0) + x(1) + 1.0) <= 2.0 * h)
    throw SingularInput("estimator_jacobian: too close to the kno1 pole");
  Matrix jac(2, 2);
  for (int d = 0; d < 2; ++d) {
    Vector up = x, down = x;
    up(d) += h;
    down(d) -= h;
    const Vector f_up = evaluate_benchmark(id, up);
    const Vector f_down = evaluate_benchmark(id, down);
    jac.col(d) = (f_up - f_down) / (2.0 * h);
  }
  return jac;
}

double pareto_line_distance(BenchmarkId id, const Vector& x) {
  if (x.size() != 2) throw DimensionMismatch("pareto_line_distance: expected a 2-vector");
  const double sqrt2 = std::sqrt(2.0);
  if (id == BenchmarkId::Kno1) return std::abs(x(0) + x(1) - kKno1ParetoSum) / sqrt2;
  return std::abs(x(0) - x(1)) / sqrt2;
}

Vector nudge_off_singularity(BenchmarkId id, Vector x) {
  if (id == BenchmarkId::Kno1 && x(0) + x(1) == -1.0) x(0) += kSingularityNudge;
  return x;
}

}  // namespace padgan
