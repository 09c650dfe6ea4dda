#pragma once

#include "sgmix/elements/manufactured.hpp"
#include "sgmix/mesh/generators.hpp"
#include "sgmix/mesh/locator.hpp"
#include "sgmix/spaces/field.hpp"
#include "sgmix/system/rank.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sgmix {

struct ConvergenceConfig {
  PairKind pair = PairKind::Lagrange;
  int k = 4;
  MeshKind base = MeshKind::Diagonal;
  std::optional<SplitKind> split;
  double split_ratio = 0.25;
  std::vector<double> hsizes{1.0 / 2, 1.0 / 4, 1.0 / 6, 1.0 / 8};
  Material material;
  std::vector<double> iotas{0.0};
  CaseKind case_kind = CaseKind::InteriorSmooth;
  BubbleTerm bubble = BubbleTerm::Gradient;
  bool check_stability = true;
  // Displacement reference for iota > 0.
  PairKind reference_pair = PairKind::C2;
  int reference_k = 5;
  int reference_n = 32;
  // Optional acceptance bounds checked by acceptance_violations.
  struct Acceptance {
    std::optional<double> min_order_sigma;   // final sigma-order of every iota sequence
    std::optional<double> max_order_sigma;
    std::optional<double> max_order_spread;  // spread of final sigma-orders across iotas
    bool monotone = false;                   // E_sigma_iota strictly decreasing in every sequence
  } acceptance;

  /// Keys: pair, k, base, split, split_ratio, hsizes, lambda, mu, iotas, case,
  /// bubble, check_stability, reference {pair, k, n}, acceptance {min_order_sigma,
  /// max_order_sigma, max_order_spread, monotone}. Unknown keys are rejected.
  static ConvergenceConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct ConvergenceRow {
  PairKind pair = PairKind::Lagrange;
  double hsize = 0.0;
  double iota = 0.0;
  double E_sigma_iota = 0.0;
  double order_sigma = 0.0;  // NaN on the first row of a sequence
  double E_u_L2 = 0.0;
  double order_u = 0.0;
  bool u_exact = true;       // u compared with u0 (iota = 0) or with the reference
  int dim_sigma = 0;
  int dim_u = 0;
  double seconds = 0.0;
};

/// Fine-mesh displacement solutions shared between studies with the same
/// material, case and reference settings.
class ReferenceCache {
 public:
  struct Entry {
    std::shared_ptr<const Triangulation> mesh;
    std::unique_ptr<SpacePair> spaces;
    std::unique_ptr<DiscreteField> u;
    std::unique_ptr<PointLocator> locator;
    double seconds = 0.0;
    Vec2 eval(const Vec2& x) const;
  };

  const Entry& get(const ConvergenceConfig& config, double iota);

 private:
  std::map<std::string, Entry> entries_;
};

struct ConvergenceStudy {
  ConvergenceConfig config;
  std::vector<RankReport> stability;  // one per hsize when checked
  std::vector<ConvergenceRow> rows;   // iota-major, hsize in config order
  nlohmann::json to_json() const;
};

/// Mesh with parent cell size h: base mesh of round(1/h) cells per side, then the split.
Triangulation study_mesh(const ConvergenceConfig& config, double hsize);

/// Throws PreconditionError (with the rank report) if some mesh has a
/// deficient pair and InconclusiveError if the rank is not trusted.
ConvergenceStudy convergence_study(const ConvergenceConfig& config, ReferenceCache* cache = nullptr);

/// Human-readable list of violated acceptance bounds (empty when all hold).
std::vector<std::string> acceptance_violations(const ConvergenceStudy& study);

/// "# " lines with the resolved config, then
/// hsize,iota,E_sigma_iota,order_sigma,E_u_L2,order_u,seconds
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study, bool with_header = true);

struct BoundaryProbeConfig {
  PairKind pair = PairKind::C2;
  int k = 5;
  MeshKind base = MeshKind::Diagonal;
  std::optional<SplitKind> split;
  double split_ratio = 0.25;
  std::vector<int> levels{1, 2, 3, 4};  // base mesh has 2^level cells per side
  Material material{1.0, 0.3};
  std::vector<double> iotas{1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<CaseKind> cases{CaseKind::InteriorSmooth, CaseKind::BoundaryFlux};

  static BoundaryProbeConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct BoundaryProbeRow {
  CaseKind case_kind = CaseKind::InteriorSmooth;
  double iota = 0.0;
  int level = 0;
  double max_dxy = 0.0;  // max over vertices, incident elements and components of |d_xy sigma_h|
};

std::vector<BoundaryProbeRow> boundary_flux_probe(const BoundaryProbeConfig& config);
void write_probe_csv(std::ostream& os, const BoundaryProbeConfig& config, const std::vector<BoundaryProbeRow>& rows);

}  // namespace sgmix
