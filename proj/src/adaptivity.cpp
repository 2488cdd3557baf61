#include "wingcrack/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "wingcrack/p2.hpp"

namespace wingcrack {

namespace {

std::array<double, 4> components(const Stress& s) { return {s.xx, s.yy, s.xy, s.zz}; }
Stress from_components(const std::array<double, 4>& c) { return {c[0], c[1], c[2], c[3]}; }

}  // namespace

std::vector<Stress> recover_stress(const Mesh& mesh, const GaussStresses& sigma_h) {
  // least-squares map from 7 Gauss values to a linear field in (xi, eta), evaluated at the 6 nodes
  Eigen::Matrix<double, 7, 3> P;
  for (int q = 0; q < 7; ++q) P.row(q) << 1.0, p2::kGauss7[static_cast<std::size_t>(q)].xi, p2::kGauss7[static_cast<std::size_t>(q)].eta;
  Eigen::Matrix<double, 6, 3> Pn;
  for (int i = 0; i < 6; ++i) Pn.row(i) << 1.0, p2::kNodes[static_cast<std::size_t>(i)][0], p2::kNodes[static_cast<std::size_t>(i)][1];
  const Eigen::Matrix<double, 6, 7> fit = Pn * (P.transpose() * P).inverse() * P.transpose();

  std::vector<std::array<double, 4>> acc(mesh.nodes.size(), {0.0, 0.0, 0.0, 0.0});
  std::vector<double> wsum(mesh.nodes.size(), 0.0);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto x = mesh.element_points(static_cast<int>(e));
    double area = 0.0;
    for (const p2::QuadPoint& q : p2::kGauss7) area += q.weight * p2::jacobian(x, q.xi, q.eta).det();
    Eigen::Matrix<double, 7, 4> g;
    for (int q = 0; q < 7; ++q) {
      const auto c = components(sigma_h[e][static_cast<std::size_t>(q)]);
      for (int k = 0; k < 4; ++k) g(q, k) = c[static_cast<std::size_t>(k)];
    }
    const Eigen::Matrix<double, 6, 4> nodal = fit * g;
    for (int i = 0; i < 6; ++i) {
      const auto n = static_cast<std::size_t>(mesh.elements[e].nodes[static_cast<std::size_t>(i)]);
      for (int k = 0; k < 4; ++k) acc[n][static_cast<std::size_t>(k)] += area * nodal(i, k);
      wsum[n] += area;
    }
  }
  std::vector<Stress> out(mesh.nodes.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (wsum[n] <= 0.0) continue;
    auto c = acc[n];
    for (double& v : c) v /= wsum[n];
    out[n] = from_components(c);
  }
  return out;
}

ErrorField zz_error(const Mesh& mesh, const Material& material, const GaussStresses& sigma_h,
                    const std::vector<Stress>& sigma_star) {
  const Eigen::Matrix3d S = material.elasticity().inverse();
  ErrorField err;
  err.eta_e.resize(mesh.elements.size());
  double total = 0.0, star = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto x = mesh.element_points(static_cast<int>(e));
    double ee = 0.0;
    for (std::size_t q = 0; q < p2::kGauss7.size(); ++q) {
      const p2::QuadPoint& qp = p2::kGauss7[q];
      const auto N = p2::shape(qp.xi, qp.eta);
      Eigen::Vector3d s_star = Eigen::Vector3d::Zero();
      for (int i = 0; i < 6; ++i) {
        const Stress& s = sigma_star[static_cast<std::size_t>(mesh.elements[e].nodes[static_cast<std::size_t>(i)])];
        s_star += N[static_cast<std::size_t>(i)] * Eigen::Vector3d(s.xx, s.yy, s.xy);
      }
      const Stress& h = sigma_h[e][q];
      const Eigen::Vector3d d = s_star - Eigen::Vector3d(h.xx, h.yy, h.xy);
      const double w = qp.weight * p2::jacobian(x, qp.xi, qp.eta).det();
      ee += w * d.dot(S * d);
      star += w * s_star.dot(S * s_star);
    }
    err.eta_e[e] = std::sqrt(std::max(ee, 0.0));
    total += std::max(ee, 0.0);
  }
  err.eta = std::sqrt(total);
  err.recovered_norm = std::sqrt(std::max(star, 0.0));
  return err;
}

std::vector<int> mark_elements(const ErrorField& err, double theta) {
  const std::size_t n = err.eta_e.size();
  double total = 0.0;
  for (double v : err.eta_e) total += v * v;
  if (!(total > 0.0)) return {};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return err.eta_e[static_cast<std::size_t>(a)] > err.eta_e[static_cast<std::size_t>(b)];
  });
  const double target = theta * theta * total * (1.0 - 1e-12);
  std::vector<int> marked;
  double acc = 0.0;
  for (int e : order) {
    if (acc >= target) break;
    marked.push_back(e);
    acc += err.eta_e[static_cast<std::size_t>(e)] * err.eta_e[static_cast<std::size_t>(e)];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

Mesh remesh_after_growth(const Mesh& mesh, const Geometry& geometry, std::span<const GrownTip> grown,
                         const SizeField& size, double cavity_factor) {
  bool any = false;
  for (const GrownTip& g : grown) any = any || distance(g.from, g.to) > 0.0;
  if (!any) return mesh;
  RemeshRequest req;
  for (const Point& p : corner_positions(mesh)) {
    bool keep = true;
    for (const GrownTip& g : grown) {
      const double da = distance(g.from, g.to);
      if (da > 0.0 && point_segment_distance(p, g.from, g.to) < cavity_factor * da) keep = false;
    }
    if (keep) req.seeds.push_back(p);
  }
  for (const TipRosette& t : mesh.tips) {
    const bool moved = std::any_of(grown.begin(), grown.end(), [&](const GrownTip& g) { return g.tip == t.tip; });
    if (!moved) req.rosettes[t.tip] = {t.radius, t.sectors};
  }
  MeshOptions options = mesh.options;
  options.size = size;
  return build_mesh(geometry, options, req);
}

}  // namespace wingcrack
