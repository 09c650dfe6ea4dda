#include "sgmix/verify/rank_study.hpp"

#include "sgmix/system/assembly.hpp"

#include <chrono>
#include <cmath>

namespace sgmix {

VertexCensus census(const std::vector<VertexClass>& classes) {
  VertexCensus c;
  for (const auto& v : classes) {
    if (v.kind == VertexKind::Boundary) {
      ++c.boundary;
    } else if (v.kind == VertexKind::Regular) {
      ++c.regular;
    } else if (v.kind == VertexKind::TypeI) {
      ++c.type_one;
    } else {
      ++c.type_two;
    }
  }
  return c;
}

int predicted_deficiency(PairKind pair, const VertexCensus& c) {
  switch (pair) {
    case PairKind::Lagrange: return 3 * c.type_one + c.type_two;
    case PairKind::Hermite: return c.type_one;
    case PairKind::C2: return 0;
  }
  return 0;
}

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::TypeIValue: return "TypeI_value";
    case FunctionalKind::TypeIGradient: return "TypeI_gradient";
    case FunctionalKind::TypeIIAlternating: return "TypeII_alternating";
  }
  return "";
}

double JetFunctional::apply(const std::vector<Eigen::Matrix<double, 3, 2>>& jets) const {
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) v += (weights[i].array() * jets[i].array()).sum();
  return v;
}

JetFunctional jet_functional(const VertexStar& star, FunctionalKind kind, int component) {
  require(star.interior, "vertex functionals need an interior star");
  JetFunctional f;
  f.triangles = star.elements;
  f.weights.assign(star.m(), Eigen::Matrix<double, 3, 2>::Zero());
  switch (kind) {
    case FunctionalKind::TypeIValue:
      require(star.m() == 4, "Type I functionals need four elements");
      require(component == 0 || component == 1, "value functional needs a component");
      for (int e = 0; e < 4; ++e) f.weights[e](0, component) = e % 2 == 0 ? 1.0 : -1.0;
      break;
    case FunctionalKind::TypeIGradient:
      // J_{z,T} : grad v with (grad v)_ij = d_i v_j
      require(star.m() == 4, "Type I functionals need four elements");
      for (int e = 0; e < 4; ++e) {
        const Vec2& tm = star.t[star.ray_minus(e)];
        const Vec2& tp = star.t[star.ray_plus(e)];
        const Mat2 J = tp * star.n[star.ray_minus(e)].transpose() + tm * star.n[star.ray_plus(e)].transpose();
        f.weights[e].bottomRows<2>() = J;
      }
      break;
    case FunctionalKind::TypeIIAlternating: {
      // sum_i (-1)^(i+1) sin(theta_i) v_{E(i)}(z) . n_{i+2} over six sectors
      std::vector<Vec2> n;
      std::vector<double> theta;
      std::vector<int> sector;
      if (star.m() == 6) {
        n = star.n;
        theta = star.theta;
        sector = {0, 1, 2, 3, 4, 5};
      } else {
        const ImagingStar im = imaging_star(star);
        n = im.n;
        theta = im.theta;
        sector = im.sector_element;
      }
      for (int i = 0; i < 6; ++i) {
        const double w = (i % 2 == 0 ? -1.0 : 1.0) * std::sin(theta[i]);
        f.weights[sector[i]].row(0) += w * n[(i + 2) % 6].transpose();
      }
      break;
    }
  }
  return f;
}

std::vector<CokernelFunctional> predicted_functionals(const FESpace& q, const std::vector<VertexClass>& classes,
                                                      PairKind pair) {
  require(q.kind() == SpaceKind::Displacement, "cokernel functionals live on the displacement space");
  std::vector<CokernelFunctional> out;
  auto realize = [&](const JetFunctional& jf, CokernelFunctional f, const Vec2& z) {
    f.coeffs = Vector::Zero(q.base_dim());
    for (std::size_t e = 0; e < jf.triangles.size(); ++e) {
      const int t = jf.triangles[e];
      const Matrix D = q.basis(t).eval(z, 1);
      const auto& dofs = q.element_dofs(t);
      for (int j = 0; j < 2; ++j)
        for (std::size_t a = 0; a < dofs.size(); ++a)
          f.coeffs(q.base_index(j, dofs[a])) += jf.weights[e].col(j).dot(D.col(a).head<3>());
    }
    out.push_back(std::move(f));
  };
  for (const auto& vc : classes) {
    const bool t1 = vc.kind == VertexKind::TypeI;
    const bool t2 = is_type_two(vc.kind);
    if (!t1 && !t2) continue;
    if (pair == PairKind::C2 || (pair == PairKind::Hermite && !t1)) continue;
    const VertexStar star = build_star(q.mesh(), vc.vertex);
    if (t1) {
      if (pair == PairKind::Lagrange) {
        for (int comp = 0; comp < 2; ++comp)
          realize(jet_functional(star, FunctionalKind::TypeIValue, comp),
                  {vc.vertex, FunctionalKind::TypeIValue, comp, {}}, star.z);
      }
      realize(jet_functional(star, FunctionalKind::TypeIGradient), {vc.vertex, FunctionalKind::TypeIGradient, -1, {}},
              star.z);
    } else {
      realize(jet_functional(star, FunctionalKind::TypeIIAlternating),
              {vc.vertex, FunctionalKind::TypeIIAlternating, -1, {}}, star.z);
    }
  }
  return out;
}

nlohmann::json CokernelMatch::to_json() const {
  return {{"measured", measured},         {"predicted", predicted},
          {"max_angle", max_angle},       {"worst_vertex", worst_vertex},
          {"worst_residual", worst_residual}, {"ok", ok}};
}

CokernelMatch cokernel_match(const FESpace& q, const std::vector<CokernelFunctional>& predicted,
                             const RankReport& rank, double angle_tol) {
  require(rank.mode == RankMode::Dense, "cokernel matching needs a dense rank report");
  require(rank.rows == q.dim(), "rank report does not match the displacement space");
  CokernelMatch m;
  m.measured = rank.deficiency;
  m.predicted = static_cast<int>(predicted.size());
  const SpMat Mq = reduced_mass(q);
  const Matrix measured = Mq * rank.left_null;
  Matrix P(q.dim(), predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) P.col(i) = q.N().transpose() * predicted[i].coeffs;

  const Matrix Qm = orthonormal_basis(measured);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const Vector p = P.col(i);
    const double pn = p.norm();
    const double res = pn > 0 ? (p - Qm * (Qm.transpose() * p)).norm() / pn : 1.0;
    if (res > m.worst_residual || m.worst_vertex < 0) {
      m.worst_residual = res;
      m.worst_vertex = predicted[i].vertex;
    }
  }
  if (m.measured == 0 && m.predicted == 0) {
    m.ok = true;
    return m;
  }
  const Matrix Qp = orthonormal_basis(P);
  if (Qp.cols() != Qm.cols() || m.measured != m.predicted) {
    m.max_angle = M_PI / 2;
    m.ok = false;
    return m;
  }
  const Vector ang = principal_angles(measured, P);
  m.max_angle = ang.size() ? ang.maxCoeff() : 0.0;
  m.ok = m.max_angle <= angle_tol;
  return m;
}

nlohmann::json RankStudy::to_json() const {
  nlohmann::json j;
  j["pair"] = to_string(pair);
  j["k"] = k;
  j["sigma_space"] = sigma.to_json();
  j["q_space"] = q.to_json();
  j["census"] = {{"boundary", census.boundary},
                 {"regular", census.regular},
                 {"type_I", census.type_one},
                 {"type_II", census.type_two}};
  j["measured"] = rank.deficiency;
  j["predicted"] = predicted;
  j["rank"] = rank.to_json();
  j["cokernel_match"] = has_match ? match.to_json() : nlohmann::json(nullptr);
  return j;
}

RankStudy rank_deficiency_report(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k, RankMode mode,
                                 double eps_sing) {
  const auto t0 = std::chrono::steady_clock::now();
  RankStudy s;
  s.pair = pair;
  s.k = k;
  const auto classes = classify_vertices(*mesh, eps_sing);
  s.census = census(classes);
  s.predicted = predicted_deficiency(pair, s.census);
  const SpacePair sp = make_pair(mesh, pair, k);
  s.sigma = sp.sigma.report();
  s.q = sp.q.report();
  const SpMat B = assemble_B(sp.sigma, sp.q);
  const bool fits = B.rows() <= 5000 && B.cols() <= 8000;
  if (mode == RankMode::Auto) mode = fits ? RankMode::Dense : RankMode::Sparse;
  if (mode == RankMode::Dense) {
    require(fits, "dense rank mode limited to dim_q <= 5000; use sparse mode");
    s.rank = rank_dense(Matrix(B));
    if (s.rank.trusted && (s.rank.deficiency > 0 || s.predicted > 0)) {
      s.match = cokernel_match(sp.q, predicted_functionals(sp.q, classes, pair), s.rank);
      s.has_match = true;
    }
  } else {
    s.rank = rank_sparse(B);
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace sgmix
