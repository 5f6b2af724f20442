#include "rcip/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "rcip/gauss.hpp"

namespace rcip::geom {

OneCornerContour::OneCornerContour(double theta) : theta_(theta) {
  if (!(theta > 0.0 && theta <= kPi))
    throw std::invalid_argument("OneCornerContour: theta must be in (0, pi]");
  gammas_ = {SingularPoint{0.0, false}};
}

// z(s) = sin(pi s) e^{i (s-1/2) theta}; the mirror symmetry z(1-s) = conj(z(s))
// gives cancellation-free values for offsets on the s -> 1 side.
Complex OneCornerContour::z(int, double t) const {
  const double a = std::abs(t);
  const Complex v =
      std::sin(kPi * a) * std::exp(Complex(0, (a - 0.5) * theta_));
  return t >= 0 ? v : std::conj(v);
}

Complex OneCornerContour::zp(int, double t) const {
  const double a = std::abs(t);
  const Complex v = std::exp(Complex(0, (a - 0.5) * theta_)) *
                    Complex(kPi * std::cos(kPi * a), theta_ * std::sin(kPi * a));
  return t >= 0 ? v : -std::conj(v);
}

Complex OneCornerContour::zpp(int, double t) const {
  const double a = std::abs(t);
  const Complex v = std::exp(Complex(0, (a - 0.5) * theta_)) *
                    Complex(-(kPi * kPi + theta_ * theta_) * std::sin(kPi * a),
                            2.0 * theta_ * kPi * std::cos(kPi * a));
  return t >= 0 ? v : std::conj(v);
}

SegmentContour::SegmentContour() {
  gammas_ = {SingularPoint{0.0, true}, SingularPoint{1.0, true}};
}

Complex SegmentContour::z(int gamma, double t) const {
  // gamma 0: x = -1/2 + t ; gamma 1: x = 1/2 - t
  return gamma == 0 ? Complex(-0.5 + t, 0.0) : Complex(0.5 - t, 0.0);
}

Complex SegmentContour::zp(int gamma, double) const {
  return gamma == 0 ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
}

Complex SegmentContour::zpp(int, double) const { return Complex(0.0, 0.0); }

std::vector<int> Mesh::star_nodes(int j) const {
  // ascending offset within each panel; far-end panels store offsets in
  // descending node order, so they are reversed here
  std::vector<int> idx;
  for (int p : star_panels[j]) {
    const bool reversed = node_offset[p * 16] > node_offset[p * 16 + 15];
    for (int q = 0; q < 16; ++q)
      idx.push_back(p * 16 + (reversed ? 15 - q : q));
  }
  return idx;
}

Mesh build_coarse_mesh(const Contour& c, int npan) {
  const auto& gammas = c.singular_points();
  if (npan < 4)
    throw std::invalid_argument("build_coarse_mesh: npan must be >= 4");
  for (const auto& g : gammas) {
    const double frac = g.param * npan;
    if (std::abs(frac - std::round(frac)) > 1e-12)
      throw std::invalid_argument(
          "build_coarse_mesh: singular point not at a panel breakpoint");
  }

  Mesh m;
  m.contour = &c;
  m.npan = npan;
  m.breakpoints.resize(npan + 1);
  for (int j = 0; j <= npan; ++j) m.breakpoints[j] = double(j) / npan;

  const auto& rule = gl16();
  const int n = npan * 16;
  m.node_gamma.resize(n);
  m.node_offset.resize(n);
  m.znodes.resize(n);
  m.zpnodes.resize(n);
  m.zppnodes.resize(n);
  m.normals.resize(n);
  m.weights.resize(n);
  m.speeds.resize(n);
  m.panel_of_node.resize(n);

  // nearest singular point per parameter value, measured along the contour
  auto nearest_gamma = [&](double s) {
    int best = 0;
    double bestd = 1e300;
    for (size_t j = 0; j < gammas.size(); ++j) {
      double d = s - gammas[j].param;
      if (c.closed()) {
        if (d > 0.5) d -= 1.0;
        if (d < -0.5) d += 1.0;
      }
      if (std::abs(d) < bestd) {
        bestd = std::abs(d);
        best = static_cast<int>(j);
      }
    }
    return best;
  };

  for (int p = 0; p < npan; ++p) {
    const double a = m.breakpoints[p], b = m.breakpoints[p + 1];
    const int g = nearest_gamma(0.5 * (a + b));
    const double gp = gammas[g].param;
    // panel endpoints as offsets from gamma g (exact: breakpoints and gp are
    // small rationals)
    double oa = a - gp, ob = b - gp;
    if (c.closed()) {
      if (0.5 * (oa + ob) > 0.5) { oa -= 1.0; ob -= 1.0; }
      if (0.5 * (oa + ob) < -0.5) { oa += 1.0; ob += 1.0; }
    }
    // offsets measure distance into the arc at a far-end singular point, so
    // they descend along the contour direction there
    const bool reversed = gammas[g].one_sided && gp > 0.5;
    for (int q = 0; q < 16; ++q) {
      const int i = p * 16 + q;
      double t = 0.5 * (oa + ob) + 0.5 * (ob - oa) * rule.nodes[q];
      if (reversed) t = -t;
      m.node_gamma[i] = g;
      m.node_offset[i] = t;
      m.weights[i] = 0.5 * std::abs(ob - oa) * rule.weights[q];
      m.znodes[i] = c.z(g, t);
      m.zpnodes[i] = c.zp(g, t);
      m.zppnodes[i] = c.zpp(g, t);
      m.normals[i] = c.normal(g, t);
      m.speeds[i] = std::abs(m.zpnodes[i]);
      m.panel_of_node[i] = p;
    }
  }

  // Gamma*: four panels around an interior singular point, two panels at a
  // one-sided endpoint, listed in ascending-offset order.
  m.star_panels.resize(gammas.size());
  for (size_t j = 0; j < gammas.size(); ++j) {
    const int pg = static_cast<int>(std::round(gammas[j].param * npan));
    if (gammas[j].one_sided) {
      if (pg == 0)
        m.star_panels[j] = {0, 1};
      else
        m.star_panels[j] = {npan - 1, npan - 2};
    } else {
      auto wrap = [&](int p) { return (p % npan + npan) % npan; };
      m.star_panels[j] = {wrap(pg - 2), wrap(pg - 1), wrap(pg), wrap(pg + 1)};
    }
  }
  // two-panel stars of distinct endpoints must not overlap
  if (!c.closed() && npan < 4)
    throw std::invalid_argument("build_coarse_mesh: npan too small");
  return m;
}

LocalGrid local_type_b_grid(const Contour& c, int gamma, int level, int n_sub,
                            int npan) {
  if (level < 1 || level > n_sub)
    throw std::invalid_argument("local_type_b_grid: level out of range");
  const auto& rule = gl16();
  const bool one_sided = c.singular_points()[gamma].one_sided;
  const double h = 1.0 / (double(npan) * std::pow(2.0, double(n_sub - level)));

  LocalGrid g;
  g.gamma = gamma;
  g.level = level;
  g.h = h;
  g.one_sided = one_sided;

  // positive-side panels (ascending): [0,h/2], [h/2,h], [h,2h]
  const std::vector<std::pair<double, double>> pos = {
      {0.0, 0.5 * h}, {0.5 * h, h}, {h, 2.0 * h}};
  const std::vector<std::pair<double, double>> cpos = {{0.0, h}, {h, 2.0 * h}};

  std::vector<std::pair<double, double>> panels, cpanels;
  if (!one_sided) {
    for (auto it = pos.rbegin(); it != pos.rend(); ++it)
      panels.push_back({-it->second, -it->first});
    for (auto it = cpos.rbegin(); it != cpos.rend(); ++it)
      cpanels.push_back({-it->second, -it->first});
  }
  panels.insert(panels.end(), pos.begin(), pos.end());
  cpanels.insert(cpanels.end(), cpos.begin(), cpos.end());
  g.panels = panels;
  g.cpanels = cpanels;

  const int nb = static_cast<int>(panels.size()) * 16;
  g.t.resize(nb);
  g.weights.resize(nb);
  g.znodes.resize(nb);
  g.zpnodes.resize(nb);
  g.zppnodes.resize(nb);
  g.normals.resize(nb);
  g.speeds.resize(nb);
  for (size_t p = 0; p < panels.size(); ++p) {
    const double a = panels[p].first, b = panels[p].second;
    for (int q = 0; q < 16; ++q) {
      const int i = static_cast<int>(p) * 16 + q;
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
      g.t[i] = t;
      g.weights[i] = 0.5 * (b - a) * rule.weights[q];
      g.znodes[i] = c.z(gamma, t);
      g.zpnodes[i] = c.zp(gamma, t);
      g.zppnodes[i] = c.zpp(gamma, t);
      g.normals[i] = c.normal(gamma, t);
      g.speeds[i] = std::abs(g.zpnodes[i]);
    }
  }
  const int nc = static_cast<int>(cpanels.size()) * 16;
  g.tc.resize(nc);
  for (size_t p = 0; p < cpanels.size(); ++p) {
    const double a = cpanels[p].first, b = cpanels[p].second;
    for (int q = 0; q < 16; ++q)
      g.tc[static_cast<int>(p) * 16 + q] =
          0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
  }
  return g;
}

IndexSets index_sets(bool one_sided) {
  IndexSets s;
  if (one_sided) {
    s.nb = 48;
    s.nc = 32;
    for (int i = 0; i < 32; ++i) s.starL.push_back(i);
    for (int i = 32; i < 48; ++i) s.circL.push_back(i);
    for (int i = 0; i < 16; ++i) s.starS.push_back(i);
    for (int i = 16; i < 32; ++i) s.circS.push_back(i);
  } else {
    s.nb = 96;
    s.nc = 64;
    for (int i = 16; i < 80; ++i) s.starL.push_back(i);
    for (int i = 0; i < 16; ++i) s.circL.push_back(i);
    for (int i = 80; i < 96; ++i) s.circL.push_back(i);
    for (int i = 16; i < 48; ++i) s.starS.push_back(i);
    for (int i = 0; i < 16; ++i) s.circS.push_back(i);
    for (int i = 48; i < 64; ++i) s.circS.push_back(i);
  }
  return s;
}

} // namespace rcip::geom
