#include "wingcrack/lefm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wingcrack/error.hpp"

namespace wingcrack {

std::pair<double, double> extract_sif(const Mesh& mesh, const Material& material, const DisplacementField& u,
                                      TipRef tip) {
  const TipRosette* ro = mesh.find_tip(tip);
  if (!ro) throw FractureMechanicsError("tip " + to_string(tip) + " has no rosette");
  const auto& st = mesh.stations.at(static_cast<std::size_t>(tip.fracture));
  if (st.size() < 3) throw FractureMechanicsError("tip " + to_string(tip) + " has too few face stations");
  const bool b_end = tip.end == TipEnd::B;
  const std::size_t n = st.size();
  const FaceStation& s_tip = b_end ? st[n - 1] : st[0];
  const FaceStation& s_quarter = b_end ? st[n - 2] : st[1];
  const FaceStation& s_corner = b_end ? st[n - 3] : st[2];
  if (s_tip.plus != ro->node || mesh.kinds[static_cast<std::size_t>(s_quarter.plus)] != NodeKind::QuarterPoint)
    throw FractureMechanicsError("tip " + to_string(tip) + " has no quarter-point faces");

  const Point x_tip = mesh.nodes[static_cast<std::size_t>(ro->node)];
  const Point x_corner = mesh.nodes[static_cast<std::size_t>(s_corner.plus)];
  const double L = distance(x_tip, x_corner);
  const Vec2 t = mesh.geometry.fractures[static_cast<std::size_t>(tip.fracture)].tip_tangent(tip.end);
  const Vec2 nrm = perp(t);
  // the face on the +n side of the tip frame is the plus face for end B and the minus face for end A
  auto jump = [&](const FaceStation& s) {
    const Vec2 d = u.at(s.plus) - u.at(s.minus);
    return b_end ? d : -1.0 * d;
  };
  const Vec2 dq = jump(s_quarter), dc = jump(s_corner);
  const double c = material.shear_modulus() / (material.kappa() + 1.0) * std::sqrt(2.0 * std::numbers::pi / L);
  const double scale = std::max(norm(dq), norm(dc));
  if (std::min(dot(dq, nrm), dot(dc, nrm)) < -1e-3 * scale)
    throw FractureMechanicsError("crack faces interpenetrate behind tip " + to_string(tip));
  // an opening profile that pinches toward the tip means the faces there are in contact
  const double k1 = c * (4.0 * dot(dq, nrm) - dot(dc, nrm));
  return {std::max(k1, 0.0), c * (4.0 * dot(dq, t) - dot(dc, t))};
}

double tangential_stress_factor(double K_I, double K_II, double theta) {
  const double h = std::cos(0.5 * theta);
  return h * (K_I * h * h - 1.5 * K_II * std::sin(theta));
}

namespace {

void check_mode_one(double K_I, double K_II) {
  if (K_I < -0.02 * (std::abs(K_I) + std::abs(K_II)))
    throw FractureMechanicsError("negative K_I (" + std::to_string(K_I) + "): crack faces interpenetrate");
}

}  // namespace

double kink_angle(double K_I, double K_II) {
  if (K_I == 0.0 && K_II == 0.0) throw FractureMechanicsError("kink angle undefined for zero stress intensity");
  check_mode_one(K_I, K_II);
  if (K_II == 0.0) return 0.0;
  return 2.0 * std::atan((K_I - std::sqrt(K_I * K_I + 8.0 * K_II * K_II)) / (4.0 * K_II));
}

double equivalent_k(double K_I, double K_II, double theta0) {
  return std::max(0.0, tangential_stress_factor(K_I, K_II, theta0));
}

bool propagation_check(const SifResult& sif, const Material& material) { return sif.K_eq >= material.K_Ic; }

SifResult evaluate_tip(const Mesh& mesh, const Material& material, const DisplacementField& u, TipRef tip) {
  SifResult r;
  r.tip = tip;
  r.position = mesh.geometry.fractures.at(static_cast<std::size_t>(tip.fracture)).tip(tip.end);
  std::tie(r.K_I, r.K_II) = extract_sif(mesh, material, u, tip);
  if (std::max(std::abs(r.K_I), std::abs(r.K_II)) <= 1e-12 * material.K_Ic) return r;
  r.theta0 = kink_angle(r.K_I, r.K_II);
  r.K_eq = equivalent_k(r.K_I, r.K_II, r.theta0);
  r.propagates = propagation_check(r, material);
  return r;
}

namespace {

struct Hit {
  double dist = std::numeric_limits<double>::infinity();
  Point point;
  int fracture = -1;  // -1 for the domain boundary
  int segment = -1;
};

}  // namespace

GrowthResult grow_tip(const Geometry& geometry, TipRef tip, double theta0, double da, double snap_factor) {
  if (tip.fracture < 0 || static_cast<std::size_t>(tip.fracture) >= geometry.fractures.size())
    throw FractureMechanicsError("unknown tip " + to_string(tip));
  const FracturePolyline& fr = geometry.fractures[static_cast<std::size_t>(tip.fracture)];
  if (!fr.tip_active(tip.end)) throw FractureMechanicsError("tip " + to_string(tip) + " is not active");
  if (!(da > 0.0) || !std::isfinite(da) || !std::isfinite(theta0))
    throw FractureMechanicsError("growth increment must be positive and finite");

  const Point p = fr.tip(tip.end);
  const Vec2 dir = rotate(fr.tip_tangent(tip.end), theta0);
  const double reach = da * (1.0 + std::max(snap_factor, 0.0));
  const Point far = p + reach * dir;
  const double eps = 1e-12 * da;

  Hit best;
  auto consider = [&](Point a, Point b, int fracture, int segment) {
    const auto h = intersect_segments(p, far, a, b);
    if (!h) return;
    const double d = h->t * reach;
    if (d <= eps || d >= best.dist) return;
    best = {d, h->point, fracture, segment};
  };
  for (std::size_t j = 0; j < geometry.fractures.size(); ++j) {
    const auto& v = geometry.fractures[j].vertices;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      if (static_cast<int>(j) == tip.fracture) {
        const bool adjacent = tip.end == TipEnd::B ? k + 2 == v.size() : k == 0;
        if (adjacent) continue;
      }
      consider(v[k], v[k + 1], static_cast<int>(j), static_cast<int>(k));
    }
  }
  const auto& poly = geometry.domain.polygon;
  for (std::size_t k = 0; k < poly.size(); ++k) consider(poly[k], poly[(k + 1) % poly.size()], -1, static_cast<int>(k));

  GrowthResult out;
  out.geometry = geometry;
  FracturePolyline& g = out.geometry.fractures[static_cast<std::size_t>(tip.fracture)];
  Point q = p + da * dir;
  if (std::isfinite(best.dist)) {
    if (best.fracture == tip.fracture) throw FractureMechanicsError("growth of tip " + to_string(tip) + " re-enters its own fracture");
    q = best.point;
    const double snap = 0.1 * da;
    if (best.fracture >= 0) {
      auto& host = out.geometry.fractures[static_cast<std::size_t>(best.fracture)];
      const auto k = static_cast<std::size_t>(best.segment);
      if (distance(q, host.vertices[k]) <= snap) {
        q = host.vertices[k];
      } else if (distance(q, host.vertices[k + 1]) <= snap) {
        q = host.vertices[k + 1];
      } else {
        host.vertices.insert(host.vertices.begin() + static_cast<std::ptrdiff_t>(k + 1), q);
      }
      if (q == host.vertices.front()) host.tip_a_active = false;
      if (q == host.vertices.back()) host.tip_b_active = false;
      out.hit_fracture = best.fracture;
    } else {
      const auto k = static_cast<std::size_t>(best.segment);
      if (distance(q, poly[k]) <= snap)
        q = poly[k];
      else if (distance(q, poly[(k + 1) % poly.size()]) <= snap)
        q = poly[(k + 1) % poly.size()];
      out.hit_boundary = true;
    }
    g.set_tip_active(tip.end, false);
    out.deactivated = true;
  }
  out.da = distance(p, q);
  out.new_tip = q;
  if (out.da > eps) {
    if (tip.end == TipEnd::B)
      g.vertices.push_back(q);
    else
      g.vertices.insert(g.vertices.begin(), q);
  }
  return out;
}

std::vector<double> multi_tip_increments(std::span<const SifResult> sifs, const GrowthIncrement& inc) {
  double kmax = 0.0;
  for (const SifResult& s : sifs)
    if (s.propagates) kmax = std::max(kmax, s.K_eq);
  std::vector<double> da(sifs.size(), 0.0);
  if (kmax <= 0.0) return da;
  for (std::size_t i = 0; i < sifs.size(); ++i)
    if (sifs[i].propagates) da[i] = inc.da_max * std::pow(sifs[i].K_eq / kmax, inc.exponent_gamma);
  return da;
}

}  // namespace wingcrack
