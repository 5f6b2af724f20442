#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rcip/types.hpp"

namespace rcip::geom {

/// A singular point of the problem: the parameter value where it sits and
/// whether the boundary continues on both sides (interior corner) or only
/// one (open-arc endpoint).
struct SingularPoint {
  double param = 0.0;
  bool one_sided = false;
};

/// Parameterized boundary. Evaluation is by signed parameter offset t from a
/// given singular point, which keeps deep dyadic levels free of cancellation
/// (|t| can be as small as 1e-160).
class Contour {
 public:
  virtual ~Contour() = default;

  virtual Complex z(int gamma, double t) const = 0;
  virtual Complex zp(int gamma, double t) const = 0;
  virtual Complex zpp(int gamma, double t) const = 0;

  virtual bool closed() const = 0;
  virtual const std::vector<SingularPoint>& singular_points() const = 0;

  /// Outward unit normal, nu = -i z'/|z'|.
  Complex normal(int gamma, double t) const {
    const Complex d = zp(gamma, t);
    return Complex(0, -1) * d / std::abs(d);
  }
};

/// The one-corner family r(s) = sin(pi s) (cos((s-1/2)theta), sin((s-1/2)theta)),
/// s in [0,1], closed, corner of opening angle theta at the origin (s=0).
/// theta = pi degenerates to a circle of circumference pi.
class OneCornerContour final : public Contour {
 public:
  explicit OneCornerContour(double theta);

  Complex z(int gamma, double t) const override;
  Complex zp(int gamma, double t) const override;
  Complex zpp(int gamma, double t) const override;
  bool closed() const override { return true; }
  const std::vector<SingularPoint>& singular_points() const override {
    return gammas_;
  }
  double theta() const { return theta_; }

 private:
  double theta_;
  std::vector<SingularPoint> gammas_;
};

/// The open arc [-1/2, 1/2] on the real axis, parameterized by arc length
/// (s in [0,1], x = s - 1/2). Both endpoints are one-sided singular points;
/// gamma 0 is x=-1/2, gamma 1 is x=+1/2. Offsets t measure distance from the
/// endpoint into the arc.
class SegmentContour final : public Contour {
 public:
  SegmentContour();

  Complex z(int gamma, double t) const override;
  Complex zp(int gamma, double t) const override;
  Complex zpp(int gamma, double t) const override;
  bool closed() const override { return false; }
  const std::vector<SingularPoint>& singular_points() const override {
    return gammas_;
  }

 private:
  std::vector<SingularPoint> gammas_;
};

/// Composite 16-point Gauss-Legendre mesh. Node coordinates are stored as
/// (gamma index, offset) pairs so that evaluation near singular points stays
/// exact; for nodes far from every gamma the nearest one is used.
struct Mesh {
  const Contour* contour = nullptr;
  int npan = 0;
  std::vector<double> breakpoints;        // parameter values, size npan+1
  std::vector<int> node_gamma;            // per node
  RVector node_offset;                    // per node, offset from node_gamma
  std::vector<Complex> znodes, zpnodes, zppnodes, normals;
  RVector weights;                        // parameter-space GL weights
  RVector speeds;                         // |z'|
  std::vector<int> panel_of_node;
  /// Panels forming Gamma* for each singular point, in ascending-offset
  /// order (through the corner for two-sided points).
  std::vector<std::vector<int>> star_panels;

  int size() const { return static_cast<int>(node_offset.size()); }
  /// Global node indices of the Gamma* block of singular point j, ordered by
  /// ascending offset (canonical local order).
  std::vector<int> star_nodes(int j) const;
};

/// Equal-parameter-length coarse mesh with every singular point at a panel
/// breakpoint. npan >= 4 required for closed contours (Gamma* needs 4 panels),
/// npan >= 4 for the segment (two 2-panel stars must not overlap).
Mesh build_coarse_mesh(const Contour& c, int npan);

/// Local type-b grid on Gamma_i* around one singular point, translated so the
/// singular point sits at the origin. Two-sided: 6 panels / 96 nodes covering
/// offsets [-2h, 2h]; one-sided: 3 panels / 48 nodes covering [0, 2h];
/// h = 1/(npan 2^(n_sub - level)). Nodes ascend in offset. The companion
/// type-c grid (4 resp. 2 panels on the same span) is included.
struct LocalGrid {
  int gamma = 0;
  int level = 0;
  double h = 0.0;
  bool one_sided = false;
  RVector t;                              // b-grid offsets
  std::vector<Complex> znodes, zpnodes, zppnodes, normals;
  RVector weights, speeds;
  std::vector<std::pair<double, double>> panels;   // b-grid panel offset spans
  RVector tc;                             // c-grid offsets
  std::vector<std::pair<double, double>> cpanels;

  int size() const { return static_cast<int>(t.size()); }
  int csize() const { return static_cast<int>(tc.size()); }
};

LocalGrid local_type_b_grid(const Contour& c, int gamma, int level, int n_sub,
                            int npan);

/// Index sets of the recursion blocks, 0-based. Two-sided: starL = 16..79,
/// circL = {0..15, 80..95}, starS = 16..47, circS = {0..15, 48..63}.
/// One-sided: starL = 0..31, circL = 32..47, starS = 0..15, circS = 16..31.
struct IndexSets {
  std::vector<int> starL, circL, starS, circS;
  int nb = 0;    // b-grid size (96 or 48)
  int nc = 0;    // c-grid size (64 or 32)
};

IndexSets index_sets(bool one_sided);

} // namespace rcip::geom
