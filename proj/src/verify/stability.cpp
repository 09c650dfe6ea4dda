#include "sgmix/verify/stability.hpp"

#include "sgmix/mesh/generators.hpp"
#include "sgmix/mesh/star.hpp"
#include "sgmix/system/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>

namespace sgmix {

nlohmann::json SurjectivityWitness::to_json() const {
  return {{"pair", to_string(pair)}, {"k", k}, {"samples", samples}, {"max_residual", max_residual}};
}

SurjectivityWitness surjectivity_witness(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k,
                                         int samples, std::uint64_t seed) {
  const SpacePair sp = make_pair(mesh, pair, k);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  const SpMat G = reduced_h1(sp.sigma);
  const SpMat M = reduced_mass(sp.q);
  Eigen::SimplicialLDLT<SpMat> mass(M);
  if (mass.info() != Eigen::Success) throw NumericalError("surjectivity witness: mass matrix factorization failed");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SurjectivityWitness w{pair, k, samples, 0.0};
  const Vector zero = Vector::Zero(sp.sigma.dim());
  const SaddleSolver solver(G, B);
  for (int s = 0; s < samples; ++s) {
    Vector q(sp.q.dim());
    for (int i = 0; i < q.size(); ++i) q(i) = normal(rng);
    const Vector F = M * q;
    const SaddleSolution sol = solver.solve(zero, F, 1e-8);
    const Vector e = mass.solve(Vector(B * sol.sigma)) - q;
    w.max_residual = std::max(w.max_residual, std::sqrt(e.dot(M * e) / q.dot(F)));
  }
  return w;
}

nlohmann::json InfSupStudy::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points)
    pts.push_back({{"delta", p.delta},
                   {"theta_II", p.theta_II},
                   {"beta", p.estimate.beta},
                   {"beta_max", p.estimate.beta_max},
                   {"zero_modes", p.estimate.zero_modes}});
  return {{"points", pts}, {"monotone", monotone}};
}

InfSupStudy infsup_monotonicity(const std::vector<double>& deltas, PairKind pair, int k) {
  InfSupStudy st;
  for (double d : deltas) {
    auto mesh = std::make_shared<const Triangulation>(hexagon_patch(d));
    const SpacePair sp = make_pair(mesh, pair, k);
    const Matrix B(assemble_B(sp.sigma, sp.q));
    const Matrix G(reduced_h1_gram(sp.sigma));
    const Matrix M(reduced_mass(sp.q));
    InfSupPoint p;
    p.delta = d;
    p.theta_II = theta_metrics(build_star(*mesh, 0)).theta_II;
    p.estimate = infsup_estimate(G, M, B);
    st.points.push_back(p);
  }
  st.monotone = true;
  for (std::size_t i = 1; i < st.points.size(); ++i) {
    const bool smaller_delta = st.points[i].delta < st.points[i - 1].delta;
    const bool smaller_beta = st.points[i].estimate.beta < st.points[i - 1].estimate.beta;
    if (smaller_delta != smaller_beta) st.monotone = false;
  }
  return st;
}

}  // namespace sgmix
