#include "sgmix/verify/convergence.hpp"

#include "sgmix/system/assembly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace sgmix {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    require(known.count(key) > 0, "unknown " + what + " key '" + key + "'");
  }
}

std::optional<SplitKind> parse_optional_split(const std::string& s) {
  if (s == "none") return std::nullopt;
  return parse_split_kind(s);
}

std::string split_name(const std::optional<SplitKind>& s) { return s ? to_string(*s) : "none"; }

BubbleTerm parse_bubble(const std::string& s) {
  if (s == "gradient") return BubbleTerm::Gradient;
  if (s == "diagonal") return BubbleTerm::Diagonal;
  throw PreconditionError("unknown bubble term '" + s + "'");
}

std::string bubble_name(BubbleTerm b) { return b == BubbleTerm::Gradient ? "gradient" : "diagonal"; }

int cells_for(double h) {
  require(h > 0.0 && h <= 1.0, "hsize must lie in (0, 1]");
  const int n = static_cast<int>(std::lround(1.0 / h));
  require(std::abs(1.0 / n - h) <= 1e-9 * h + 1e-12, "hsize must be 1/n for an integer n");
  return n;
}

double order(double e_prev, double e, double h_prev, double h) {
  if (!(e_prev > 0.0) || !(e > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_prev / e) / std::log(h_prev / h);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

ConvergenceConfig ConvergenceConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"pair", "k", "base", "split", "split_ratio", "hsizes", "lambda", "mu", "iotas", "case", "bubble",
                       "check_stability", "reference", "acceptance"},
                      "study config");
  ConvergenceConfig c;
  try {
    if (j.contains("pair")) c.pair = parse_pair_kind(j.at("pair").get<std::string>());
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("base")) c.base = parse_mesh_kind(j.at("base").get<std::string>());
    if (j.contains("split")) c.split = parse_optional_split(j.at("split").get<std::string>());
    if (j.contains("split_ratio")) c.split_ratio = j.at("split_ratio").get<double>();
    if (j.contains("hsizes")) c.hsizes = j.at("hsizes").get<std::vector<double>>();
    if (j.contains("lambda")) c.material.lambda = j.at("lambda").get<double>();
    if (j.contains("mu")) c.material.mu = j.at("mu").get<double>();
    if (j.contains("iotas")) c.iotas = j.at("iotas").get<std::vector<double>>();
    if (j.contains("case")) c.case_kind = parse_case_kind(j.at("case").get<std::string>());
    if (j.contains("bubble")) c.bubble = parse_bubble(j.at("bubble").get<std::string>());
    if (j.contains("check_stability")) c.check_stability = j.at("check_stability").get<bool>();
    if (j.contains("reference")) {
      const auto& r = j.at("reference");
      reject_unknown_keys(r, {"pair", "k", "n"}, "reference");
      if (r.contains("pair")) c.reference_pair = parse_pair_kind(r.at("pair").get<std::string>());
      if (r.contains("k")) c.reference_k = r.at("k").get<int>();
      if (r.contains("n")) c.reference_n = r.at("n").get<int>();
    }
    if (j.contains("acceptance")) {
      const auto& a = j.at("acceptance");
      reject_unknown_keys(a, {"min_order_sigma", "max_order_sigma", "max_order_spread", "monotone"}, "acceptance");
      if (a.contains("min_order_sigma")) c.acceptance.min_order_sigma = a.at("min_order_sigma").get<double>();
      if (a.contains("max_order_sigma")) c.acceptance.max_order_sigma = a.at("max_order_sigma").get<double>();
      if (a.contains("max_order_spread")) c.acceptance.max_order_spread = a.at("max_order_spread").get<double>();
      if (a.contains("monotone")) c.acceptance.monotone = a.at("monotone").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("study config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json ConvergenceConfig::to_json() const {
  nlohmann::json acc = nlohmann::json::object();
  if (acceptance.min_order_sigma) acc["min_order_sigma"] = *acceptance.min_order_sigma;
  if (acceptance.max_order_sigma) acc["max_order_sigma"] = *acceptance.max_order_sigma;
  if (acceptance.max_order_spread) acc["max_order_spread"] = *acceptance.max_order_spread;
  if (acceptance.monotone) acc["monotone"] = true;
  return {{"pair", to_string(pair)},
          {"k", k},
          {"base", to_string(base)},
          {"split", split_name(split)},
          {"split_ratio", split_ratio},
          {"hsizes", hsizes},
          {"lambda", material.lambda},
          {"mu", material.mu},
          {"iotas", iotas},
          {"case", to_string(case_kind)},
          {"bubble", bubble_name(bubble)},
          {"check_stability", check_stability},
          {"reference", {{"pair", to_string(reference_pair)}, {"k", reference_k}, {"n", reference_n}}},
          {"acceptance", acc}};
}

void ConvergenceConfig::validate() const {
  material.validate();
  require(k >= 2 && k <= 8, "k must lie in [2, 8]");
  require(reference_k >= 2 && reference_k <= 8, "reference k must lie in [2, 8]");
  require(reference_n >= 1, "reference n must be positive");
  require(!hsizes.empty(), "hsizes must not be empty");
  require(!iotas.empty(), "iotas must not be empty");
  for (double h : hsizes) cells_for(h);
  for (double iota : iotas) check_iota(iota);
  require(split_ratio > 0.0 && split_ratio < 0.5, "split_ratio must lie in (0, 1/2)");
  if (case_kind == CaseKind::InteriorSmooth) require(material.lambda > 0.0, "interior_smooth needs lambda > 0");
}

Vec2 ReferenceCache::Entry::eval(const Vec2& x) const {
  const int t = locator->locate(x);
  if (t < 0) throw NumericalError("reference lookup failed outside the mesh");
  const Vector v = u->value(t, x);
  return Vec2(v(0), v(1));
}

const ReferenceCache::Entry& ReferenceCache::get(const ConvergenceConfig& config, double iota) {
  std::ostringstream key;
  key << std::setprecision(17) << to_string(config.reference_pair) << '|' << config.reference_k << '|'
      << config.reference_n << '|' << config.material.lambda << '|' << config.material.mu << '|'
      << to_string(config.case_kind) << '|' << bubble_name(config.bubble) << '|' << iota;
  auto it = entries_.find(key.str());
  if (it != entries_.end()) return it->second;

  const auto t0 = Clock::now();
  Entry e;
  e.mesh = std::make_shared<const Triangulation>(generate_structured(MeshKind::Diagonal, config.reference_n));
  e.spaces = std::make_unique<SpacePair>(make_pair(e.mesh, config.reference_pair, config.reference_k));
  const ManufacturedCase mc(config.case_kind, config.material, config.bubble);
  const SpMat A = assemble_A(e.spaces->sigma, config.material, iota);
  const SpMat B = assemble_B(e.spaces->sigma, e.spaces->q);
  const Vector F = assemble_load(e.spaces->q, [&](const Vec2& x) -> Vector { return mc.f(x); });
  const SaddleSolution sol = solve_saddle(A, B, F, 1e-8);
  e.u = std::make_unique<DiscreteField>(e.spaces->q, sol.u);
  e.locator = std::make_unique<PointLocator>(*e.mesh);
  e.seconds = seconds_since(t0);
  return entries_.emplace(key.str(), std::move(e)).first->second;
}

Triangulation study_mesh(const ConvergenceConfig& config, double hsize) {
  Triangulation base = generate_structured(config.base, cells_for(hsize));
  if (!config.split) return base;
  return split(base, *config.split, config.split_ratio);
}

ConvergenceStudy convergence_study(const ConvergenceConfig& config, ReferenceCache* cache) {
  config.validate();
  ReferenceCache local;
  if (!cache) cache = &local;
  const ManufacturedCase mc(config.case_kind, config.material, config.bubble);

  ConvergenceStudy study;
  study.config = config;
  const std::size_t nh = config.hsizes.size(), ni = config.iotas.size();
  std::vector<ConvergenceRow> grid(nh * ni);

  for (std::size_t ih = 0; ih < nh; ++ih) {
    const double h = config.hsizes[ih];
    auto mesh = std::make_shared<const Triangulation>(study_mesh(config, h));
    const SpacePair sp = make_pair(mesh, config.pair, config.k);
    const SpMat B = assemble_B(sp.sigma, sp.q);
    if (config.check_stability) {
      RankReport r = rank_sparse(B);
      if (!r.trusted) throw InconclusiveError("stability check inconclusive: " + r.to_json().dump());
      if (r.deficiency > 0) throw PreconditionError("pair is not stable on this mesh: " + r.to_json().dump());
      study.stability.push_back(std::move(r));
    }
    const Vector F = assemble_load(sp.q, [&](const Vec2& x) -> Vector { return mc.f(x); });

    for (std::size_t ii = 0; ii < ni; ++ii) {
      const double iota = config.iotas[ii];
      const ReferenceCache::Entry* ref = iota == 0.0 ? nullptr : &cache->get(config, iota);
      const auto t0 = Clock::now();
      const SpMat A = assemble_A(sp.sigma, config.material, iota);
      const SaddleSolution sol = solve_saddle(A, B, F, 1e-8);
      const DiscreteField sigma_h(sp.sigma, sol.sigma);
      const DiscreteField u_h(sp.q, sol.u);

      ConvergenceRow row;
      row.pair = config.pair;
      row.hsize = h;
      row.iota = iota;
      row.dim_sigma = sp.sigma.dim();
      row.dim_u = sp.q.dim();
      row.E_sigma_iota = stress_errors(sigma_h, mc).iota_norm(iota);
      row.u_exact = ref == nullptr;
      if (row.u_exact) {
        row.E_u_L2 = displacement_l2_error(u_h, [&](int, const Vec2& x) { return mc.u(x); });
      } else {
        row.E_u_L2 = displacement_l2_error(u_h, [&](int, const Vec2& x) { return ref->eval(x); });
      }
      row.seconds = seconds_since(t0);
      grid[ii * nh + ih] = row;
    }
  }
  for (std::size_t ii = 0; ii < ni; ++ii)
    for (std::size_t ih = 0; ih < nh; ++ih) {
      ConvergenceRow& r = grid[ii * nh + ih];
      if (ih == 0) {
        r.order_sigma = r.order_u = std::numeric_limits<double>::quiet_NaN();
      } else {
        const ConvergenceRow& p = grid[ii * nh + ih - 1];
        r.order_sigma = order(p.E_sigma_iota, r.E_sigma_iota, p.hsize, r.hsize);
        r.order_u = order(p.E_u_L2, r.E_u_L2, p.hsize, r.hsize);
      }
    }
  study.rows = std::move(grid);
  return study;
}

std::vector<std::string> acceptance_violations(const ConvergenceStudy& study) {
  const auto& acc = study.config.acceptance;
  const std::size_t nh = study.config.hsizes.size(), ni = study.config.iotas.size();
  std::vector<std::string> out;
  if (study.rows.size() != nh * ni) return {"study has missing rows"};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t ii = 0; ii < ni; ++ii) {
    const ConvergenceRow& last = study.rows[ii * nh + nh - 1];
    std::ostringstream tag;
    tag << "iota=" << last.iota << ": ";
    const double p = last.order_sigma;
    if (!std::isnan(p)) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (acc.min_order_sigma && !(p >= *acc.min_order_sigma))
      out.push_back(tag.str() + "final sigma-order " + format_double(p) + " below " + format_double(*acc.min_order_sigma));
    if (acc.max_order_sigma && !(p <= *acc.max_order_sigma))
      out.push_back(tag.str() + "final sigma-order " + format_double(p) + " above " + format_double(*acc.max_order_sigma));
    if (acc.monotone)
      for (std::size_t ih = 1; ih < nh; ++ih)
        if (!(study.rows[ii * nh + ih].E_sigma_iota < study.rows[ii * nh + ih - 1].E_sigma_iota))
          out.push_back(tag.str() + "E_sigma_iota does not decrease at hsize " +
                        format_double(study.rows[ii * nh + ih].hsize));
  }
  if (acc.max_order_spread && ni > 1 && !(hi - lo <= *acc.max_order_spread))
    out.push_back("final sigma-orders spread " + format_double(hi - lo) + " exceeds " +
                  format_double(*acc.max_order_spread));
  return out;
}

nlohmann::json ConvergenceStudy::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    rows_json.push_back({{"hsize", r.hsize},
                         {"iota", r.iota},
                         {"E_sigma_iota", r.E_sigma_iota},
                         {"order_sigma", num(r.order_sigma)},
                         {"E_u_L2", r.E_u_L2},
                         {"order_u", num(r.order_u)},
                         {"u_reference", r.u_exact ? "exact" : "reference"},
                         {"dim_sigma", r.dim_sigma},
                         {"dim_u", r.dim_u},
                         {"seconds", r.seconds}});
  }
  nlohmann::json stab = nlohmann::json::array();
  for (const auto& s : stability) stab.push_back(s.to_json());
  return {{"config", config.to_json()}, {"stability", stab}, {"rows", rows_json}};
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study, bool with_header) {
  os << "# " << study.config.to_json().dump() << '\n';
  if (with_header) os << "hsize,iota,E_sigma_iota,order_sigma,E_u_L2,order_u,seconds\n";
  for (const auto& r : study.rows) {
    os << format_double(r.hsize) << ',' << format_double(r.iota) << ',' << format_double(r.E_sigma_iota) << ','
       << format_double(r.order_sigma) << ',' << format_double(r.E_u_L2) << ',' << format_double(r.order_u) << ','
       << std::fixed << std::setprecision(3) << r.seconds << std::defaultfloat << '\n';
  }
}

BoundaryProbeConfig BoundaryProbeConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"pair", "k", "base", "split", "split_ratio", "levels", "lambda", "mu", "iotas", "cases"},
                      "probe config");
  BoundaryProbeConfig c;
  try {
    if (j.contains("pair")) c.pair = parse_pair_kind(j.at("pair").get<std::string>());
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("base")) c.base = parse_mesh_kind(j.at("base").get<std::string>());
    if (j.contains("split")) c.split = parse_optional_split(j.at("split").get<std::string>());
    if (j.contains("split_ratio")) c.split_ratio = j.at("split_ratio").get<double>();
    if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<int>>();
    if (j.contains("lambda")) c.material.lambda = j.at("lambda").get<double>();
    if (j.contains("mu")) c.material.mu = j.at("mu").get<double>();
    if (j.contains("iotas")) c.iotas = j.at("iotas").get<std::vector<double>>();
    if (j.contains("cases")) {
      c.cases.clear();
      for (const auto& s : j.at("cases")) c.cases.push_back(parse_case_kind(s.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("probe config: ") + e.what());
  }
  return c;
}

nlohmann::json BoundaryProbeConfig::to_json() const {
  std::vector<std::string> case_names;
  for (CaseKind c : cases) case_names.push_back(to_string(c));
  return {{"pair", to_string(pair)},   {"k", k},
          {"base", to_string(base)},   {"split", split_name(split)},
          {"split_ratio", split_ratio}, {"levels", levels},
          {"lambda", material.lambda}, {"mu", material.mu},
          {"iotas", iotas},            {"cases", case_names}};
}

std::vector<BoundaryProbeRow> boundary_flux_probe(const BoundaryProbeConfig& config) {
  config.material.validate();
  require(!config.levels.empty() && !config.iotas.empty() && !config.cases.empty(), "empty probe config");
  std::vector<BoundaryProbeRow> rows;
  for (CaseKind ck : config.cases) {
    const ManufacturedCase mc(ck, config.material);
    for (double iota : config.iotas) {
      check_iota(iota);
      for (int level : config.levels) {
        require(level >= 0 && level <= 10, "probe level must lie in [0, 10]");
        Triangulation base = generate_structured(config.base, 1 << level);
        auto mesh = std::make_shared<const Triangulation>(
            config.split ? split(base, *config.split, config.split_ratio) : std::move(base));
        const SpacePair sp = make_pair(mesh, config.pair, config.k);
        const SpMat A = assemble_A(sp.sigma, config.material, iota);
        const SpMat B = assemble_B(sp.sigma, sp.q);
        const Vector F = assemble_load(sp.q, [&](const Vec2& x) -> Vector { return mc.f(x); });
        const SaddleSolution sol = solve_saddle(A, B, F, 1e-8);
        const DiscreteField sigma_h(sp.sigma, sol.sigma);
        double mx = 0.0;
        const int dxy = deriv_index(1, 1);
        for (int v = 0; v < mesh->num_vertices(); ++v)
          for (int t : mesh->vertex_triangles(v))
            mx = std::max(mx, sigma_h.eval(t, mesh->vertex(v), 2).row(dxy).cwiseAbs().maxCoeff());
        rows.push_back({ck, iota, level, mx});
      }
    }
  }
  return rows;
}

void write_probe_csv(std::ostream& os, const BoundaryProbeConfig& config, const std::vector<BoundaryProbeRow>& rows) {
  os << "# " << config.to_json().dump() << '\n';
  os << "case,iota,level,hsize,max_dxy_sigma\n";
  for (const auto& r : rows) {
    os << to_string(r.case_kind) << ',' << format_double(r.iota) << ',' << r.level << ','
       << format_double(1.0 / (1 << r.level)) << ',' << format_double(r.max_dxy) << '\n';
  }
}

}  // namespace sgmix
