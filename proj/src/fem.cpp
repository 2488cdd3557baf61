#include "wingcrack/fem.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "wingcrack/error.hpp"
#include "wingcrack/p2.hpp"

namespace wingcrack {

Eigen::Matrix3d Material::elasticity() const {
  const double E = youngs_E, nu = poisson_nu;
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
  if (mode == PlaneMode::PlaneStrain) {
    const double c = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
    D << c * (1.0 - nu), c * nu, 0.0, c * nu, c * (1.0 - nu), 0.0, 0.0, 0.0, c * (1.0 - 2.0 * nu) / 2.0;
  } else {
    const double c = E / (1.0 - nu * nu);
    D << c, c * nu, 0.0, c * nu, c, 0.0, 0.0, 0.0, c * (1.0 - nu) / 2.0;
  }
  return D;
}

void validate_material(const Material& m) {
  if (!(std::isfinite(m.youngs_E) && m.youngs_E > 0.0)) throw Error("youngs_E must be positive");
  if (!(std::isfinite(m.poisson_nu) && m.poisson_nu > 0.0 && m.poisson_nu < 0.5))
    throw Error("poisson_nu must lie in (0, 0.5)");
  if (!(std::isfinite(m.K_Ic) && m.K_Ic > 0.0)) throw Error("K_Ic must be positive");
}

namespace {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat3x12 = Eigen::Matrix<double, 3, 12>;

Mat3x12 strain_matrix(const std::array<std::array<double, 6>, 2>& d) {
  Mat3x12 B = Mat3x12::Zero();
  for (int i = 0; i < 6; ++i) {
    B(0, 2 * i) = d[0][i];
    B(1, 2 * i + 1) = d[1][i];
    B(2, 2 * i) = d[1][i];
    B(2, 2 * i + 1) = d[0][i];
  }
  return B;
}

}  // namespace

Mat12 element_stiffness(const std::array<Point, 6>& x, const Material& material) {
  const Eigen::Matrix3d D = material.elasticity();
  Mat12 K = Mat12::Zero();
  for (const p2::QuadPoint& q : p2::kGauss7) {
    double det = 0.0;
    const auto d = p2::physical_gradients(x, q.xi, q.eta, det);
    if (!(det > 0.0)) throw MeshError("element has a non-positive Jacobian");
    const Mat3x12 B = strain_matrix(d);
    K.noalias() += (q.weight * det) * B.transpose() * D * B;
  }
  return 0.5 * (K + K.transpose());
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

int rigid_null_dimension(const Mesh& mesh, const std::vector<bool>& prescribed) {
  const std::size_t n = mesh.nodes.size();
  UnionFind uf(n);
  std::vector<bool> used(n, false);
  for (const Element& e : mesh.elements) {
    for (int k = 0; k < 6; ++k) {
      used[static_cast<std::size_t>(e.nodes[static_cast<std::size_t>(k)])] = true;
      uf.unite(e.nodes[0], e.nodes[static_cast<std::size_t>(k)]);
    }
  }
  std::map<int, std::vector<int>> components;
  for (std::size_t i = 0; i < n; ++i)
    if (used[i]) components[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
  int null_dim = 0;
  for (const auto& [root, members] : components) {
    Point lo = mesh.nodes[static_cast<std::size_t>(members.front())], hi = lo;
    Point c{0, 0};
    for (int m : members) {
      const Point p = mesh.nodes[static_cast<std::size_t>(m)];
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
      c = c + p;
    }
    c = c / static_cast<double>(members.size());
    const double L = std::max(distance(lo, hi), 1e-300);
    std::vector<std::array<double, 3>> rows;
    for (int m : members) {
      const Point p = (mesh.nodes[static_cast<std::size_t>(m)] - c) / L;
      if (prescribed[static_cast<std::size_t>(2 * m)]) rows.push_back({1.0, 0.0, -p.y});
      if (prescribed[static_cast<std::size_t>(2 * m + 1)]) rows.push_back({0.0, 1.0, p.x});
    }
    int rank = 0;
    if (!rows.empty()) {
      Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), 3);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (int k = 0; k < 3; ++k) A(static_cast<Eigen::Index>(r), k) = rows[r][static_cast<std::size_t>(k)];
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
      qr.setThreshold(1e-9);
      rank = static_cast<int>(qr.rank());
    }
    null_dim += 3 - rank;
  }
  return null_dim;
}

}  // namespace

LinearSystem assemble(const Mesh& mesh, const Material& material, std::span<const BoundaryCondition> bcs,
                      const AssemblyOptions& options) {
  validate_material(material);
  const int n_dofs = static_cast<int>(2 * mesh.nodes.size());
  LinearSystem sys;
  sys.n_dofs = n_dofs;
  sys.f = Eigen::VectorXd::Zero(n_dofs);
  sys.u_prescribed = Eigen::VectorXd::Zero(n_dofs);
  sys.prescribed.assign(static_cast<std::size_t>(n_dofs), false);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.elements.size() * 144);
  const bool has_body = options.body_force.x != 0.0 || options.body_force.y != 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto x = mesh.element_points(static_cast<int>(e));
    const Mat12 Ke = element_stiffness(x, material);
    const auto& nodes = mesh.elements[e].nodes;
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b)
        triplets.emplace_back(2 * nodes[static_cast<std::size_t>(a / 2)] + a % 2,
                              2 * nodes[static_cast<std::size_t>(b / 2)] + b % 2, Ke(a, b));
    if (has_body) {
      for (const p2::QuadPoint& q : p2::kGauss7) {
        const double det = p2::jacobian(x, q.xi, q.eta).det();
        const auto N = p2::shape(q.xi, q.eta);
        for (int i = 0; i < 6; ++i) {
          const double w = q.weight * det * N[static_cast<std::size_t>(i)];
          sys.f[2 * nodes[static_cast<std::size_t>(i)]] += w * options.body_force.x;
          sys.f[2 * nodes[static_cast<std::size_t>(i)] + 1] += w * options.body_force.y;
        }
      }
    }
  }
  sys.K.resize(n_dofs, n_dofs);
  sys.K.setFromTriplets(triplets.begin(), triplets.end());

  const Domain& domain = mesh.geometry.domain;
  auto prescribe = [&](int dof, double value, const std::string& label) {
    const auto d = static_cast<std::size_t>(dof);
    if (sys.prescribed[d] && std::abs(sys.u_prescribed[dof] - value) > 1e-12 * (1.0 + std::abs(value)))
      throw Error("boundary condition '" + label + "' conflicts with another prescribed displacement at node " +
                  std::to_string(dof / 2));
    sys.prescribed[d] = true;
    sys.u_prescribed[dof] = value;
  };
  for (const BoundaryCondition& bc : bcs) {
    bool matched = false;
    for (const BoundaryEdge& be : mesh.boundary_edges) {
      if (be.domain_edge < 0 || static_cast<std::size_t>(be.domain_edge) >= domain.edge_labels.size() ||
          domain.edge_labels[static_cast<std::size_t>(be.domain_edge)] != bc.label)
        continue;
      matched = true;
      if (bc.kind == BcKind::Displacement) {
        for (int n : be.nodes) {
          if (bc.x) prescribe(2 * n, options.load_scale * *bc.x, bc.label);
          if (bc.y) prescribe(2 * n + 1, options.load_scale * *bc.y, bc.label);
        }
      } else {
        const std::array<Point, 3> xe{mesh.nodes[static_cast<std::size_t>(be.nodes[0])],
                                      mesh.nodes[static_cast<std::size_t>(be.nodes[1])],
                                      mesh.nodes[static_cast<std::size_t>(be.nodes[2])]};
        const double tx = options.load_scale * bc.x.value_or(0.0);
        const double ty = options.load_scale * bc.y.value_or(0.0);
        for (const auto& [s, w] : p2::kLine3) {
          const auto N = p2::line_shape(s);
          const double jw = w * p2::line_metric(xe, s);
          for (int i = 0; i < 3; ++i) {
            sys.f[2 * be.nodes[static_cast<std::size_t>(i)]] += jw * N[static_cast<std::size_t>(i)] * tx;
            sys.f[2 * be.nodes[static_cast<std::size_t>(i)] + 1] += jw * N[static_cast<std::size_t>(i)] * ty;
          }
        }
      }
    }
    for (std::size_t v = 0; v < domain.vertex_labels.size() && v < mesh.domain_vertex_nodes.size(); ++v) {
      if (domain.vertex_labels[v] != bc.label) continue;
      matched = true;
      if (bc.kind == BcKind::Traction) throw Error("traction cannot be applied at vertex label '" + bc.label + "'");
      const int n = mesh.domain_vertex_nodes[v];
      if (bc.x) prescribe(2 * n, options.load_scale * *bc.x, bc.label);
      if (bc.y) prescribe(2 * n + 1, options.load_scale * *bc.y, bc.label);
    }
    if (!matched) throw Error("boundary condition label '" + bc.label + "' matches no boundary edge or vertex");
  }
  for (const DofConstraint& c : options.extra_constraints) {
    if (c.dof < 0 || c.dof >= n_dofs) throw Error("constraint DOF out of range");
    prescribe(c.dof, c.value, "extra");
  }

  const int null_dim = rigid_null_dimension(mesh, sys.prescribed);
  if (null_dim > 0)
    throw FloatingStructureError(
        "insufficient constraints: " + std::to_string(null_dim) + " rigid-body mode(s) remain unconstrained", null_dim);

  sys.free_index.assign(static_cast<std::size_t>(n_dofs), -1);
  for (int d = 0; d < n_dofs; ++d) {
    if (!sys.prescribed[static_cast<std::size_t>(d)]) {
      sys.free_index[static_cast<std::size_t>(d)] = static_cast<int>(sys.free_dofs.size());
      sys.free_dofs.push_back(d);
    }
  }
  const int nf = static_cast<int>(sys.free_dofs.size());
  sys.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) sys.rhs[i] = sys.f[sys.free_dofs[static_cast<std::size_t>(i)]];
  std::vector<Eigen::Triplet<double>> reduced;
  reduced.reserve(static_cast<std::size_t>(sys.K.nonZeros()));
  for (int col = 0; col < sys.K.outerSize(); ++col) {
    const int fc = sys.free_index[static_cast<std::size_t>(col)];
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, col); it; ++it) {
      const int fr = sys.free_index[static_cast<std::size_t>(it.row())];
      if (fr < 0) continue;
      if (fc >= 0)
        reduced.emplace_back(fr, fc, it.value());
      else
        sys.rhs[fr] -= it.value() * sys.u_prescribed[col];
    }
  }
  sys.K_ff.resize(nf, nf);
  sys.K_ff.setFromTriplets(reduced.begin(), reduced.end());
  return sys;
}

struct FactorizedSystem::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
};

FactorizedSystem::FactorizedSystem(const LinearSystem& system, SolverOptions options)
    : system_(&system), options_(options), impl_(std::make_unique<Impl>()) {
  if (system.K_ff.rows() == 0) return;
  impl_->ldlt.compute(system.K_ff);
  bool ok = impl_->ldlt.info() == Eigen::Success;
  if (ok) {
    const Eigen::VectorXd& d = impl_->ldlt.vectorD();
    ok = d.minCoeff() > 0.0 && d.allFinite();
  }
  if (!ok) {
    iterative_ = true;
    impl_->cg.setTolerance(options_.tolerance);
    impl_->cg.setMaxIterations(options_.max_iterative_steps);
    impl_->cg.compute(system.K_ff);
    if (impl_->cg.info() != Eigen::Success) throw SolverError("stiffness matrix is not symmetric positive definite");
  }
}

FactorizedSystem::~FactorizedSystem() = default;

Eigen::VectorXd FactorizedSystem::solve(const Eigen::VectorXd& b) const {
  const auto& K = system_->K_ff;
  if (K.rows() == 0) return Eigen::VectorXd::Zero(0);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd x;
  if (!iterative_) {
    x = impl_->ldlt.solve(b);
    for (int pass = 0; pass < 3; ++pass) {
      const Eigen::VectorXd r = b - K * x;
      if (r.norm() <= options_.tolerance * bnorm) return x;
      x += impl_->ldlt.solve(r);
    }
    if ((b - K * x).norm() <= options_.tolerance * bnorm) return x;
    impl_->cg.setTolerance(options_.tolerance);
    impl_->cg.setMaxIterations(options_.max_iterative_steps);
    impl_->cg.compute(K);
    x = impl_->cg.solveWithGuess(b, x);
  } else {
    x = impl_->cg.solve(b);
  }
  const double rel = (b - K * x).norm() / bnorm;
  if (!(rel <= options_.tolerance * 10.0))
    throw SolverError("linear solve stalled at relative residual " + std::to_string(rel));
  return x;
}

Eigen::MatrixXd FactorizedSystem::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(Eigen::VectorXd(b.col(c)));
  return x;
}

DisplacementField expand(const LinearSystem& system, const Eigen::VectorXd& u_free) {
  DisplacementField u{system.u_prescribed};
  for (std::size_t i = 0; i < system.free_dofs.size(); ++i) u.dofs[system.free_dofs[i]] = u_free[static_cast<Eigen::Index>(i)];
  return u;
}

DisplacementField solve(const LinearSystem& system, const SolverOptions& options) {
  const FactorizedSystem factor(system, options);
  return expand(system, factor.solve(system.rhs));
}

Stress stress_at(const Mesh& mesh, const Material& material, const DisplacementField& u, int e, double xi,
                 double eta) {
  const auto x = mesh.element_points(e);
  double det = 0.0;
  const auto d = p2::physical_gradients(x, xi, eta, det);
  Eigen::Matrix<double, 12, 1> ue;
  const auto& nodes = mesh.elements[static_cast<std::size_t>(e)].nodes;
  for (int i = 0; i < 6; ++i) {
    ue[2 * i] = u.dofs[2 * nodes[static_cast<std::size_t>(i)]];
    ue[2 * i + 1] = u.dofs[2 * nodes[static_cast<std::size_t>(i)] + 1];
  }
  const Eigen::Vector3d s = material.elasticity() * (strain_matrix(d) * ue);
  Stress out{s[0], s[1], s[2], 0.0};
  if (material.mode == PlaneMode::PlaneStrain) out.zz = material.poisson_nu * (s[0] + s[1]);
  return out;
}

GaussStresses stress_at_gauss_points(const Mesh& mesh, const Material& material, const DisplacementField& u) {
  GaussStresses out(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    for (std::size_t q = 0; q < p2::kGauss7.size(); ++q)
      out[e][q] = stress_at(mesh, material, u, static_cast<int>(e), p2::kGauss7[q].xi, p2::kGauss7[q].eta);
  return out;
}

}  // namespace wingcrack
