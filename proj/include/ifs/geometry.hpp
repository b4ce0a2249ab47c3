#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ifs {

// Ambient spaces are Euclidean boxes in dimension 1..4.
inline constexpr int kMaxDim = 4;

struct Point {
  std::array<double, kMaxDim> x{};
  int dim = 1;

  double& operator[](int i) { return x[static_cast<size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<size_t>(i)]; }
};

Point make_point(std::initializer_list<double> coords);
Point make_point(const std::vector<double>& coords);

double dist(const Point& a, const Point& b);
double dist_sq(const Point& a, const Point& b);
bool points_equal(const Point& a, const Point& b);
bool point_less(const Point& a, const Point& b);  // lexicographic
void sort_points(std::vector<Point>& pts);

// Contracting affine map x -> L x + t.  Maps built through the similarity
// factories have L = ratio * O with O orthogonal, so they scale every
// distance by exactly `ratio`.  Products of two systems yield block-conformal
// L (orthogonal blocks with their own scales); `ratio` then is the exact
// Lipschitz constant, which is what the covering estimates need.
struct Similarity {
  int dim = 1;
  double ratio = 0.5;
  std::array<double, kMaxDim * kMaxDim> linear{};  // row-major dim x dim
  Point translation;
  bool exact_similarity = true;  // L = ratio * orthogonal

  // d=1 map x -> ratio*sign*x + t
  static Similarity line(double ratio, int sign, double translate);
  // d=2 map with rotation angle (radians) and optional reflection about x-axis
  // applied before the rotation
  static Similarity planar(double ratio, double angle, bool reflect, double tx,
                           double ty);
  // general dimension with explicit orthogonal part (validated to 1e-12)
  static Similarity from_orthogonal(int dim, double ratio,
                                    const std::vector<double>& ortho_row_major,
                                    const Point& translate);
  // axis-conformal contraction given by its full linear part; requires
  // L^T L diagonal so the operator norm is the max column norm
  static Similarity from_linear(int dim,
                                const std::vector<double>& linear_row_major,
                                const Point& translate);
  static Similarity identity(int dim);

  double linear_at(int r, int c) const {
    return linear[static_cast<size_t>(r * kMaxDim + c)];
  }
};

Point apply(const Similarity& f, const Point& p);
Similarity compose(const Similarity& f, const Similarity& g);  // f after g
// inverse image under the (invertible) linear part: solves f(y) = p
Point apply_inverse(const Similarity& f, const Point& p);
// block-diagonal embedding: h(x,y) = (f(x), g(y)), contraction max of ratios
Similarity product_map(const Similarity& f, const Similarity& g);

struct AmbientBox {
  Point lo, hi;

  int dim() const { return lo.dim; }
  double diameter() const;
  Point center() const;
  Point corner(unsigned mask) const;  // bit i selects hi on axis i
  bool contains(const Point& p, double tol = 0.0) const;
};

AmbientBox make_box(const Point& lo, const Point& hi);
bool maps_into(const Similarity& f, const AmbientBox& box, double tol = 1e-9);
AmbientBox box_union(const AmbientBox& a, const AmbientBox& b);
AmbientBox box_product(const AmbientBox& a, const AmbientBox& b);

// Closed condensation primitives with analytically known dimensions.
enum class ShapeKind { Empty, PointList, Segment, Circle, Disk, Box, Union };

struct CondensationSet {
  ShapeKind kind = ShapeKind::Empty;
  int dim = 1;
  std::vector<Point> points;            // PointList
  Point a, b;                           // Segment endpoints / Box lo, hi
  Point center;                         // Circle, Disk
  double radius = 0.0;                  // Circle, Disk
  std::vector<CondensationSet> parts;   // Union

  double hausdorff_dim = 0.0;
  double lower_box_dim = 0.0;
  double upper_box_dim = 0.0;
  bool is_empty = true;

  static CondensationSet empty(int dim);
  static CondensationSet point_list(std::vector<Point> pts);
  static CondensationSet segment(const Point& a, const Point& b);
  static CondensationSet circle(const Point& center, double radius);
  static CondensationSet disk(const Point& center, double radius);
  static CondensationSet box(const Point& lo, const Point& hi);
  static CondensationSet union_of(std::vector<CondensationSet> parts);

  bool inside(const AmbientBox& box, double tol = 1e-9) const;
};

// Finite stand-in for a compact set: the true set and the cloud are within
// `resolution` of each other in Hausdorff distance.
struct PointCloud {
  std::vector<Point> points;
  double resolution = 0.0;

  bool empty_set() const { return points.empty(); }
  int dim() const { return points.empty() ? 0 : points.front().dim; }
};

// Mesh a condensation primitive; every emitted point lies on the set.
PointCloud discretize(const CondensationSet& c, double eps);

// Exact nearest-neighbour queries over a fixed cloud via a uniform grid.
class GridIndex {
 public:
  explicit GridIndex(const std::vector<Point>& pts);

  double nearest_distance(const Point& q) const;
  size_t size() const { return pts_.size(); }

 private:
  std::vector<Point> pts_;
  int dim_ = 1;
  double cell_ = 1.0;
  Point origin_;
  std::array<int, kMaxDim> cells_per_axis_{};
  std::vector<std::vector<uint32_t>> buckets_;
  int max_ring_ = 0;

  size_t bucket_of(const std::array<int, kMaxDim>& c) const;
  std::array<int, kMaxDim> cell_of(const Point& p) const;
  double brute_force(const Point& q) const;
};

double directed_hausdorff(const PointCloud& from, const PointCloud& to);
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

}  // namespace ifs
