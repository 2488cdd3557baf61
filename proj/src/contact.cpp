#include "wingcrack/contact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "wingcrack/error.hpp"
#include "wingcrack/p2.hpp"

namespace wingcrack {

const char* to_string(ContactStatus status) {
  switch (status) {
    case ContactStatus::Open: return "open";
    case ContactStatus::Stick: return "stick";
    case ContactStatus::Slip: return "slip";
  }
  return "?";
}

ActiveSetConfig default_active_set(const Material& material, const SizeField& size) {
  ActiveSetConfig cfg;
  cfg.c_n = cfg.c_t = material.youngs_E / size.h_tip;
  return cfg;
}

bool KktResiduals::within(const ActiveSetConfig& cfg) const {
  return max_penetration <= cfg.tol_g && max_negative_pressure <= cfg.tol_lambda &&
         max_complementarity <= cfg.tol_c && max_friction_violation <= cfg.tol_lambda &&
         max_stick_slip <= cfg.tol_g && max_slip_law <= cfg.tol_lambda && max_open_multiplier <= cfg.tol_lambda;
}

std::string KktResiduals::describe() const {
  std::ostringstream os;
  os << "penetration " << max_penetration << ", negative pressure " << max_negative_pressure
     << ", complementarity " << max_complementarity << ", friction " << max_friction_violation << ", stick slip "
     << max_stick_slip << ", slip law " << max_slip_law << ", open multiplier " << max_open_multiplier;
  return os.str();
}

std::size_t ContactState::count(ContactStatus s) const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

std::vector<ContactPair> build_contact_pairs(const Mesh& mesh, ContactWeighting weighting) {
  std::vector<ContactPair> pairs;
  std::vector<std::vector<const FacePair*>> faces(mesh.stations.size());
  for (const FacePair& fp : mesh.fracture_face_pairs) faces[static_cast<std::size_t>(fp.fracture)].push_back(&fp);

  for (std::size_t f = 0; f < mesh.stations.size(); ++f) {
    const auto& st = mesh.stations[f];
    const auto& fl = faces[f];
    if (fl.empty()) continue;
    if (st.size() != 2 * fl.size() + 1) throw ContactError("fracture faces and stations do not match");
    std::vector<double> weight(st.size(), 0.0);
    std::vector<Vec2> nsum(st.size(), Vec2{0.0, 0.0});
    for (std::size_t k = 0; k < fl.size(); ++k) {
      const FacePair& fp = *fl[k];
      const std::array<Point, 3> x{mesh.nodes[static_cast<std::size_t>(fp.plus[0])],
                                   mesh.nodes[static_cast<std::size_t>(fp.plus[1])],
                                   mesh.nodes[static_cast<std::size_t>(fp.plus[2])]};
      const Vec2 n = perp(normalized(x[2] - x[0]));
      std::array<double, 3> w{};
      if (weighting == ContactWeighting::Consistent) {
        for (const auto& [s, qw] : p2::kLine3) {
          const auto N = p2::line_shape(s);
          const double jw = qw * p2::line_metric(x, s);
          for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i)] += jw * N[static_cast<std::size_t>(i)];
        }
      } else {
        const double l0 = distance(x[0], x[1]), l1 = distance(x[1], x[2]);
        w = {0.5 * l0, 0.5 * (l0 + l1), 0.5 * l1};
      }
      for (int i = 0; i < 3; ++i) {
        weight[2 * k + static_cast<std::size_t>(i)] += w[static_cast<std::size_t>(i)];
        nsum[2 * k + static_cast<std::size_t>(i)] = nsum[2 * k + static_cast<std::size_t>(i)] + (distance(x[0], x[2]) * n);
      }
    }
    auto paired = [&](std::size_t i) { return st[i].plus != st[i].minus && !st[i].junction; };
    // weight on unpaired stations moves to the nearest paired station
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (paired(i) || weight[i] == 0.0) continue;
      std::size_t best = st.size();
      double best_d = 0.0;
      for (std::size_t j = 0; j < st.size(); ++j) {
        if (!paired(j)) continue;
        const double d = std::abs(st[j].arc - st[i].arc);
        if (best == st.size() || d < best_d) {
          best = j;
          best_d = d;
        }
      }
      if (best < st.size()) weight[best] += weight[i];
      weight[i] = 0.0;
    }
    const FracturePolyline& fr = mesh.geometry.fractures[f];
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (!paired(i)) continue;
      ContactPair p;
      p.plus_node = st[i].plus;
      p.minus_node = st[i].minus;
      p.normal = normalized(nsum[i]);
      p.tangent = perp(p.normal);
      p.initial_gap = std::max(
          0.0, dot(mesh.nodes[static_cast<std::size_t>(p.plus_node)] - mesh.nodes[static_cast<std::size_t>(p.minus_node)], p.normal));
      p.weight = weight[i];
      p.fracture = static_cast<int>(f);
      p.arc = st[i].arc;
      p.friction_mu = fr.friction_mu;
      p.cohesion_c = fr.cohesion_c;
      pairs.push_back(p);
    }
  }
  return pairs;
}

void measure_jumps(std::span<const ContactPair> pairs, const DisplacementField& u, std::vector<double>& gap,
                   std::vector<double>& slip) {
  gap.resize(pairs.size());
  slip.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec2 d = u.at(pairs[i].plus_node) - u.at(pairs[i].minus_node);
    gap[i] = pairs[i].initial_gap + dot(d, pairs[i].normal);
    slip[i] = dot(d, pairs[i].tangent);
  }
}

KktResiduals kkt_residuals(const ContactState& s, std::span<const ContactPair> pairs, double tol_g) {
  KktResiduals r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double ln = s.lambda_n[i], lt = s.lambda_t[i], g = s.gap[i], sl = s.slip[i];
    const double bound = pairs[i].friction_mu * ln + pairs[i].cohesion_c;
    r.max_penetration = std::max(r.max_penetration, -g);
    r.max_negative_pressure = std::max(r.max_negative_pressure, -ln);
    r.max_complementarity = std::max(r.max_complementarity, std::abs(ln * g));
    r.max_friction_violation = std::max(r.max_friction_violation, std::abs(lt) - bound);
    switch (s.status[i]) {
      case ContactStatus::Open:
        r.max_open_multiplier = std::max({r.max_open_multiplier, std::abs(ln), std::abs(lt)});
        break;
      case ContactStatus::Stick:
        r.max_stick_slip = std::max(r.max_stick_slip, std::abs(sl));
        break;
      case ContactStatus::Slip:
        if (std::abs(sl) > tol_g) r.max_slip_law = std::max(r.max_slip_law, std::abs(lt + std::copysign(bound, sl)));
        break;
    }
  }
  r.max_penetration = std::max(r.max_penetration, 0.0);
  r.max_negative_pressure = std::max(r.max_negative_pressure, 0.0);
  r.max_friction_violation = std::max(r.max_friction_violation, 0.0);
  return r;
}

namespace {

/// Reduced-space constraint vectors and their K^-1 images, computed on demand.
class Delassus {
 public:
  Delassus(const FactorizedSystem& factor, std::span<const ContactPair> pairs) : factor_(factor), pairs_(pairs) {}

  /// Column k = 2 i (normal) or 2 i + 1 (tangential) of pair i.
  Eigen::VectorXd constraint(int k) const {
    const LinearSystem& sys = factor_.system();
    const ContactPair& p = pairs_[static_cast<std::size_t>(k / 2)];
    const Vec2 d = k % 2 == 0 ? p.normal : p.tangent;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.free_dofs.size()));
    auto put = [&](int node, double sign) {
      const int fx = sys.free_index[static_cast<std::size_t>(2 * node)];
      const int fy = sys.free_index[static_cast<std::size_t>(2 * node + 1)];
      if (fx >= 0) c[fx] += sign * d.x;
      if (fy >= 0) c[fy] += sign * d.y;
    };
    put(p.plus_node, 1.0);
    put(p.minus_node, -1.0);
    return c;
  }

  const Eigen::VectorXd& image(int k) {
    auto it = z_.find(k);
    if (it == z_.end()) it = z_.emplace(k, factor_.solve(constraint(k))).first;
    return it->second;
  }

 private:
  const FactorizedSystem& factor_;
  std::span<const ContactPair> pairs_;
  std::map<int, Eigen::VectorXd> z_;
};

struct Classified {
  std::vector<ContactStatus> status;
  std::vector<int> direction;  // sign of the Coulomb traction on Slip pairs
  bool operator==(const Classified&) const = default;
  bool operator<(const Classified& o) const {
    return std::tie(status, direction) < std::tie(o.status, o.direction);
  }
};

Classified classify(std::span<const ContactPair> pairs, const std::vector<double>& ln, const std::vector<double>& lt,
                    const std::vector<double>& gap, const std::vector<double>& slip, const ActiveSetConfig& cfg) {
  Classified c;
  c.status.resize(pairs.size());
  c.direction.assign(pairs.size(), 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double hn = ln[i] - cfg.c_n * gap[i];
    const double ht = lt[i] - cfg.c_t * slip[i];
    if (hn <= 0.0) {
      c.status[i] = ContactStatus::Open;
      continue;
    }
    const double bound = pairs[i].friction_mu * hn + pairs[i].cohesion_c;
    if (bound > 0.0 && std::abs(ht) <= bound) {
      c.status[i] = ContactStatus::Stick;
    } else {
      c.status[i] = ContactStatus::Slip;
      // frictionless pairs slide freely in either direction
      if (bound > 0.0) c.direction[i] = ht > 0.0 ? 1 : -1;
    }
  }
  return c;
}

}  // namespace

ContactSolution solve_contact(const FactorizedSystem& factor, std::span<const ContactPair> pairs,
                              const ActiveSetConfig& cfg) {
  if (!(cfg.c_n > 0.0 && cfg.c_t > 0.0)) throw ContactError("active-set scalings c_n and c_t must be positive");
  const LinearSystem& sys = factor.system();
  const std::size_t m = pairs.size();
  const Eigen::VectorXd u0 = factor.solve(sys.rhs);
  ContactSolution out{expand(sys, u0), {}};
  ContactState& st = out.state;
  std::vector<double> gap0, slip0;
  measure_jumps(pairs, out.u, gap0, slip0);
  st.lambda_n.assign(m, 0.0);
  st.lambda_t.assign(m, 0.0);
  st.gap = gap0;
  st.slip = slip0;
  st.status.assign(m, ContactStatus::Open);
  if (m == 0) return out;

  Delassus del(factor, pairs);
  Classified cur = classify(pairs, st.lambda_n, st.lambda_t, st.gap, st.slip, cfg);
  std::set<Classified> seen;
  bool fallback = false;
  Eigen::VectorXd u_free = u0;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    st.iterations = iter;
    // unknowns: lambda_n of closed pairs, then lambda_t of stick pairs
    std::vector<int> closed, stick;
    for (std::size_t i = 0; i < m; ++i) {
      if (cur.status[i] != ContactStatus::Open) closed.push_back(static_cast<int>(i));
      if (cur.status[i] == ContactStatus::Stick) stick.push_back(static_cast<int>(i));
    }
    const int nc = static_cast<int>(closed.size()), ns = static_cast<int>(stick.size());
    // displacement response per unknown; the force on the plus node is w (lambda_n n + lambda_t t)
    Eigen::VectorXd u_const = Eigen::VectorXd::Zero(u0.size());
    std::vector<Eigen::VectorXd> images;
    for (int i : closed) {
      const ContactPair& p = pairs[static_cast<std::size_t>(i)];
      Eigen::VectorXd z = p.weight * del.image(2 * i);
      if (cur.status[static_cast<std::size_t>(i)] == ContactStatus::Slip) {
        const double s = cur.direction[static_cast<std::size_t>(i)];
        z += p.weight * s * p.friction_mu * del.image(2 * i + 1);
        u_const += p.weight * s * p.cohesion_c * del.image(2 * i + 1);
      }
      images.push_back(std::move(z));
    }
    for (int i : stick) images.push_back(pairs[static_cast<std::size_t>(i)].weight * del.image(2 * i + 1));
    const int nu = nc + ns;
    Eigen::MatrixXd A(nu, nu);
    Eigen::VectorXd b(nu);
    std::vector<Eigen::VectorXd> rows;
    for (int i : closed) rows.push_back(del.constraint(2 * i));
    for (int i : stick) rows.push_back(del.constraint(2 * i + 1));
    for (int r = 0; r < nu; ++r) {
      const std::size_t pi = static_cast<std::size_t>(r < nc ? closed[static_cast<std::size_t>(r)] : stick[static_cast<std::size_t>(r - nc)]);
      const double target = r < nc ? -gap0[pi] : -slip0[pi];
      for (int c = 0; c < nu; ++c) A(r, c) = rows[static_cast<std::size_t>(r)].dot(images[static_cast<std::size_t>(c)]);
      b[r] = target - rows[static_cast<std::size_t>(r)].dot(u_const);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nu);
    if (nu > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) throw ContactError("contact constraint system is singular");
      x = lu.solve(b);
    }
    u_free = u0 + u_const;
    for (int c = 0; c < nu; ++c) u_free += x[c] * images[static_cast<std::size_t>(c)];
    out.u = expand(sys, u_free);
    measure_jumps(pairs, out.u, st.gap, st.slip);
    std::fill(st.lambda_n.begin(), st.lambda_n.end(), 0.0);
    std::fill(st.lambda_t.begin(), st.lambda_t.end(), 0.0);
    for (int r = 0; r < nc; ++r) {
      const auto i = static_cast<std::size_t>(closed[static_cast<std::size_t>(r)]);
      st.lambda_n[i] = x[r];
      if (cur.status[i] == ContactStatus::Slip)
        st.lambda_t[i] = cur.direction[i] * (pairs[i].friction_mu * x[r] + pairs[i].cohesion_c);
    }
    for (int r = 0; r < ns; ++r) st.lambda_t[static_cast<std::size_t>(stick[static_cast<std::size_t>(r)])] = x[nc + r];
    st.status = cur.status;
    // closed pairs sit exactly on the constraint; clean round-off so complementarity reads cleanly
    for (int i : closed) st.gap[static_cast<std::size_t>(i)] = std::abs(st.gap[static_cast<std::size_t>(i)]) <= cfg.tol_g ? 0.0 : st.gap[static_cast<std::size_t>(i)];
    for (int i : stick) st.slip[static_cast<std::size_t>(i)] = std::abs(st.slip[static_cast<std::size_t>(i)]) <= cfg.tol_g ? 0.0 : st.slip[static_cast<std::size_t>(i)];
    st.residuals = kkt_residuals(st, pairs, cfg.tol_g);

    Classified next = classify(pairs, st.lambda_n, st.lambda_t, st.gap, st.slip, cfg);
    if (next == cur && st.residuals.within(cfg)) return out;
    seen.insert(cur);
    if (!fallback && seen.count(next)) {
      fallback = true;
      st.cycling_fallback = true;
    }
    if (fallback) {
      // grow the closed set only; release at most one pair per iteration
      Classified grown = cur;
      int release = -1;
      double worst = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const bool was_closed = cur.status[i] != ContactStatus::Open;
        if (!was_closed || next.status[i] != ContactStatus::Open) {
          grown.status[i] = next.status[i];
          grown.direction[i] = next.direction[i];
        } else if (-st.lambda_n[i] > worst) {
          worst = -st.lambda_n[i];
          release = static_cast<int>(i);
        }
      }
      if (grown == cur && release >= 0) {
        grown.status[static_cast<std::size_t>(release)] = ContactStatus::Open;
        grown.direction[static_cast<std::size_t>(release)] = 0;
      }
      next = grown;
    }
    cur = next;
  }
  throw ContactError("active-set iteration did not converge in " + std::to_string(cfg.max_iterations) +
                     " iterations; last residuals: " + st.residuals.describe());
}

ContactSolution solve_contact(const LinearSystem& system, std::span<const ContactPair> pairs,
                              const ActiveSetConfig& cfg, const SolverOptions& solver) {
  const FactorizedSystem factor(system, solver);
  return solve_contact(factor, pairs, cfg);
}

}  // namespace wingcrack
