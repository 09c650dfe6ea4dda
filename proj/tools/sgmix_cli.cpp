#include "sgmix/mesh/generators.hpp"
#include "sgmix/mesh/io.hpp"
#include "sgmix/system/assembly.hpp"
#include "sgmix/verify/audits.hpp"
#include "sgmix/verify/convergence.hpp"
#include "sgmix/verify/rank_study.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;
using namespace sgmix;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kPrecondition = 2, kInconclusive = 3, kViolation = 4 };

json header(const std::string& command, const json& config) {
  return {{"tool", "sgmix"}, {"version", kVersion}, {"command", command}, {"config", config}};
}

/// First comment line of CSV outputs; the resolved config follows on the next one.
std::string tool_line(const std::string& command) {
  return json{{"tool", "sgmix"}, {"version", kVersion}, {"command", command}}.dump();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw PreconditionError("config file '" + path + "': " + e.what());
  }
}

/// Writes to the file, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  require(out.good(), "cannot write '" + path + "'");
  out << text;
}

std::string value_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Feeds config-file values into options not given on the command line.
/// Keys use underscores ("split_ratio" for --split-ratio) or positional names.
void apply_config(CLI::App* app, const json& j) {
  require(j.is_object(), "config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string flag = key;
    for (char& c : flag)
      if (c == '_') c = '-';
    CLI::Option* opt = app->get_option_no_throw("--" + flag);
    if (!opt) opt = app->get_option_no_throw(key);
    require(opt != nullptr && key != "config", "unknown config key '" + key + "' for '" + app->get_name() + "'");
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& v : value) opt->add_result(value_string(v));
    } else {
      opt->add_result(value_string(value));
    }
    opt->run_callback();
  }
}

std::shared_ptr<const Triangulation> load_shared(const std::string& path, std::vector<std::string>* warnings) {
  require(!path.empty(), "a mesh file is required");
  LoadedMesh lm = load_mesh(path);
  for (const auto& w : lm.warnings) std::cerr << "warning: " << w << '\n';
  if (warnings) *warnings = lm.warnings;
  return std::make_shared<const Triangulation>(std::move(lm.mesh));
}

json mesh_report(const Triangulation& mesh, double eps_sing) {
  const auto classes = classify_vertices(mesh, eps_sing);
  const VertexCensus c = census(classes);
  return {{"num_vertices", mesh.num_vertices()},
          {"num_edges", mesh.num_edges()},
          {"num_triangles", mesh.num_triangles()},
          {"census", {{"boundary", c.boundary}, {"regular", c.regular}, {"type_I", c.type_one}, {"type_II", c.type_two}}},
          {"vertices", classification_to_json(classes)}};
}

// ---------------------------------------------------------------- mesh

struct MeshOptions {
  std::string kind = "crisscross";
  int n = 1;
  double delta = 0.0;
  std::string split = "none";
  double split_ratio = 0.25;
  std::string input;
  std::string output;
  std::string report;
  double eps_sing = 1e-10;
  std::string config;
};

Triangulation generate(const MeshOptions& o) {
  if (o.kind == "diagonal" || o.kind == "crisscross") return generate_structured(parse_mesh_kind(o.kind), o.n);
  if (o.kind == "triangle") return single_triangle();
  if (o.kind == "hexagon") return hexagon_patch(o.delta);
  if (o.kind == "hct-patch") return hct_patch();
  if (o.kind == "ms-patch") return ms_patch(o.split_ratio);
  throw PreconditionError("unknown generator '" + o.kind + "'");
}

int write_mesh_outputs(const std::string& command, const Triangulation& mesh, const MeshOptions& o, const json& config) {
  if (!o.output.empty()) {
    json mj = mesh_to_json(mesh);
    mj["header"] = header(command, config);
    emit(o.output, mj.dump(1) + "\n");
  }
  json rep = mesh_report(mesh, o.eps_sing);
  rep["header"] = header(command, config);
  emit(o.report, rep.dump(1) + "\n");
  return kOk;
}

int run_mesh_gen(const MeshOptions& o) {
  require(o.n >= 1, "--n must be positive");
  Triangulation mesh = generate(o);
  if (o.split != "none") mesh = split(mesh, parse_split_kind(o.split), o.split_ratio);
  const json config = {{"kind", o.kind}, {"n", o.n},         {"delta", o.delta},      {"split", o.split},
                       {"split_ratio", o.split_ratio},       {"eps_sing", o.eps_sing}};
  return write_mesh_outputs("mesh gen", mesh, o, config);
}

int run_mesh_split(const MeshOptions& o) {
  const auto mesh = load_shared(o.input, nullptr);
  const Triangulation refined = split(*mesh, parse_split_kind(o.kind), o.split_ratio);
  const json config = {{"mesh", o.input}, {"kind", o.kind}, {"split_ratio", o.split_ratio}, {"eps_sing", o.eps_sing}};
  return write_mesh_outputs("mesh split", refined, o, config);
}

int run_mesh_analyze(const MeshOptions& o) {
  std::vector<std::string> warnings;
  const auto mesh = load_shared(o.input, &warnings);
  json rep = mesh_report(*mesh, o.eps_sing);
  rep["warnings"] = warnings;
  rep["header"] = header("mesh analyze", {{"mesh", o.input}, {"eps_sing", o.eps_sing}});
  emit(o.report.empty() ? o.output : o.report, rep.dump(1) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- rank

struct RankOptions {
  std::string mesh;
  std::string pair = "lagrange";
  int k = 4;
  std::string mode = "auto";
  double eps_sing = 1e-10;
  std::optional<int> expect;
  std::string output;
  std::string config;
};

int run_rank(const RankOptions& o) {
  RankMode mode = RankMode::Auto;
  if (o.mode == "dense") mode = RankMode::Dense;
  else if (o.mode == "sparse") mode = RankMode::Sparse;
  else require(o.mode == "auto", "--mode must be dense, sparse or auto");
  const auto mesh = load_shared(o.mesh, nullptr);
  const RankStudy s = rank_deficiency_report(mesh, parse_pair_kind(o.pair), o.k, mode, o.eps_sing);
  json config = {{"mesh", o.mesh}, {"pair", o.pair}, {"k", o.k}, {"mode", o.mode}, {"eps_sing", o.eps_sing}};
  if (o.expect) config["expect"] = *o.expect;
  json out = s.to_json();
  out["header"] = header("rank", config);
  emit(o.output, out.dump(1) + "\n");
  if (!s.rank.trusted) {
    std::cerr << "error: inconclusive rank (singular-value gap " << s.rank.gap << ")\n";
    return kInconclusive;
  }
  if (s.has_match && !s.match.ok) {
    std::cerr << "error: measured cokernel does not match the predicted functionals\n";
    return kViolation;
  }
  if (o.expect && s.rank.deficiency != *o.expect) {
    std::cerr << "error: deficiency " << s.rank.deficiency << " differs from expected " << *o.expect << '\n';
    return kViolation;
  }
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string mesh;
  std::string base = "diagonal";
  int n = 4;
  std::string split = "none";
  double split_ratio = 0.25;
  std::string pair = "lagrange";
  int k = 4;
  std::string case_name = "interior_smooth";
  std::string bubble = "gradient";
  double lambda = 1e5;
  double mu = 0.3;
  double iota = 0.0;
  double tol = 1e-8;
  bool check_stability = true;
  std::string dump;
  std::string output;
  std::string config;
};

int run_solve(const SolveOptions& o) {
  std::shared_ptr<const Triangulation> mesh;
  if (!o.mesh.empty()) {
    mesh = load_shared(o.mesh, nullptr);
  } else {
    Triangulation m = generate_structured(parse_mesh_kind(o.base), o.n);
    if (o.split != "none") m = split(m, parse_split_kind(o.split), o.split_ratio);
    mesh = std::make_shared<const Triangulation>(std::move(m));
  }
  require(o.bubble == "gradient" || o.bubble == "diagonal", "--bubble must be gradient or diagonal");
  const std::string warning = check_iota(o.iota);
  if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
  const Material mat{o.lambda, o.mu};
  mat.validate();
  const ManufacturedCase mc(parse_case_kind(o.case_name), mat,
                            o.bubble == "gradient" ? BubbleTerm::Gradient : BubbleTerm::Diagonal);

  const auto t0 = std::chrono::steady_clock::now();
  const SpacePair sp = make_pair(mesh, parse_pair_kind(o.pair), o.k);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  json config = {{"pair", o.pair}, {"k", o.k},         {"case", o.case_name}, {"bubble", o.bubble},
                 {"lambda", o.lambda}, {"mu", o.mu},   {"iota", o.iota},      {"tol", o.tol},
                 {"check_stability", o.check_stability}};
  if (o.mesh.empty()) {
    config["base"] = o.base;
    config["n"] = o.n;
    config["split"] = o.split;
    config["split_ratio"] = o.split_ratio;
  } else {
    config["mesh"] = o.mesh;
  }
  json out = {{"header", header("solve", config)}, {"sigma_space", sp.sigma.report().to_json()},
              {"q_space", sp.q.report().to_json()}};
  if (o.check_stability) {
    const RankReport r = rank_sparse(B);
    out["stability"] = r.to_json();
    if (!r.trusted) throw InconclusiveError("stability check inconclusive: " + r.to_json().dump());
    if (r.deficiency > 0) throw PreconditionError("pair is not stable on this mesh: " + r.to_json().dump());
  }
  const SpMat A = assemble_A(sp.sigma, mat, o.iota);
  const Vector F = assemble_load(sp.q, [&](const Vec2& x) -> Vector { return mc.f(x); });
  if (!o.dump.empty()) {
    for (const auto& [suffix, M] : {std::pair<std::string, const SpMat*>{"_A.txt", &A}, {"_B.txt", &B}}) {
      std::ofstream f(o.dump + suffix);
      require(f.good(), "cannot write '" + o.dump + suffix + "'");
      write_coordinate(f, *M);
    }
    std::ofstream f(o.dump + "_F.txt");
    require(f.good(), "cannot write '" + o.dump + "_F.txt'");
    f.precision(17);
    for (Eigen::Index i = 0; i < F.size(); ++i) f << F(i) << '\n';
  }
  const SaddleSolution sol = solve_saddle(A, B, F, o.tol);
  const DiscreteField sigma_h(sp.sigma, sol.sigma);
  const DiscreteField u_h(sp.q, sol.u);
  const StressErrors es = stress_errors(sigma_h, mc);
  out["relative_residual"] = sol.relative_residual;
  out["errors"] = {{"sigma_L2", es.l2},
                   {"sigma_H1_semi", es.h1_semi},
                   {"div_sigma_L2", es.div},
                   {"E_sigma_iota", es.iota_norm(o.iota)},
                   {"u_L2_vs_u0", displacement_l2_error(u_h, [&](int, const Vec2& x) { return mc.u(x); })}};
  out["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(o.output, out.dump(1) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- converge / probe-boundary

/// Options given on the command line override the config file; the merged
/// object goes through the study parser so nested keys stay available.
struct StudyOverrides {
  CLI::App* app = nullptr;
  json values = json::object();
  std::vector<std::function<void()>> setters;

  template <class T>
  CLI::Option* add(const std::string& flag, const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app->add_option(flag, var, help);
    setters.push_back([this, opt, key, &var] {
      if (opt->count() > 0) values[key] = var;
    });
    return opt;
  }

  json merged(const std::string& config_path) {
    json j = config_path.empty() ? json::object() : read_json_file(config_path);
    require(j.is_object(), "config file must hold a JSON object");
    for (auto& s : setters) s();
    for (const auto& [key, value] : values.items()) j[key] = value;
    return j;
  }
};

struct ConvergeOptions {
  std::string config;
  std::string output;
  std::string json_output;
  std::string pair, base, split, case_name, bubble;
  int k = 4;
  double split_ratio = 0.25, lambda = 1e5, mu = 0.3;
  std::vector<double> hsizes, iotas;
  bool check_stability = true;
};

int run_converge(const ConvergeOptions& o, StudyOverrides& ov) {
  const ConvergenceConfig config = ConvergenceConfig::from_json(ov.merged(o.config));
  const ConvergenceStudy study = convergence_study(config);
  std::ostringstream csv;
  csv << "# " << tool_line("converge") << '\n';
  write_convergence_csv(csv, study);
  emit(o.output, csv.str());
  if (!o.json_output.empty()) {
    json j = study.to_json();
    j["header"] = header("converge", config.to_json());
    emit(o.json_output, j.dump(1) + "\n");
  }
  const auto violations = acceptance_violations(study);
  for (const auto& v : violations) std::cerr << "acceptance violation: " << v << '\n';
  return violations.empty() ? kOk : kViolation;
}

struct ProbeOptions {
  std::string config;
  std::string output;
  std::string pair, base, split;
  int k = 5;
  double split_ratio = 0.25, lambda = 1.0, mu = 0.3;
  std::vector<int> levels;
  std::vector<double> iotas;
  std::vector<std::string> cases;
};

int run_probe(const ProbeOptions& o, StudyOverrides& ov) {
  const BoundaryProbeConfig config = BoundaryProbeConfig::from_json(ov.merged(o.config));
  const auto rows = boundary_flux_probe(config);
  std::ostringstream csv;
  csv << "# " << tool_line("probe-boundary") << '\n';
  write_probe_csv(csv, config, rows);
  emit(o.output, csv.str());
  return kOk;
}

// ---------------------------------------------------------------- audit

struct AuditOptions {
  std::vector<std::string> meshes;
  int k = 7;
  std::vector<int> bubble_k{7, 8};
  int samples = 20;
  std::string output;
  std::string config;
};

int run_audit(const AuditOptions& o) {
  std::vector<std::pair<std::string, std::shared_ptr<const Triangulation>>> meshes;
  if (o.meshes.empty()) {
    meshes.emplace_back("diagonal-3", std::make_shared<const Triangulation>(generate_structured(MeshKind::Diagonal, 3)));
    meshes.emplace_back("crisscross-2",
                        std::make_shared<const Triangulation>(generate_structured(MeshKind::Crisscross, 2)));
    meshes.emplace_back("ms-patch", std::make_shared<const Triangulation>(ms_patch()));
  } else {
    for (const auto& path : o.meshes) meshes.emplace_back(path, load_shared(path, nullptr));
  }
  bool ok = true;
  json dims = json::array();
  for (const auto& [name, mesh] : meshes) {
    const DimensionAudit a = dimension_audit(mesh, o.k);
    ok = ok && a.ok;
    json e = a.to_json();
    e["mesh"] = name;
    dims.push_back(e);
  }
  json bubbles = json::array();
  for (int kb : o.bubble_k) {
    const BubbleAudit b = bubble_complex_audit(kb, o.samples);
    ok = ok && b.ok;
    bubbles.push_back(b.to_json());
  }
  const json config = {{"meshes", o.meshes}, {"k", o.k}, {"bubble_k", o.bubble_k}, {"samples", o.samples}};
  const json out = {{"header", header("audit", config)}, {"dimension", dims}, {"bubble", bubbles}, {"ok", ok}};
  emit(o.output, out.dump(1) + "\n");
  if (!ok) std::cerr << "error: audit mismatch\n";
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite elements for stress gradient elasticity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // mesh
  CLI::App* mesh = app.add_subcommand("mesh", "Generate, split and classify meshes");
  mesh->require_subcommand(1);
  MeshOptions gen_o, split_o, analyze_o;
  CLI::App* gen = mesh->add_subcommand("gen", "Generate a mesh");
  gen->add_option("--kind", gen_o.kind, "diagonal, crisscross, triangle, hexagon, hct-patch or ms-patch")
      ->capture_default_str();
  gen->add_option("--n", gen_o.n, "Cells per side for structured meshes")->capture_default_str();
  gen->add_option("--delta", gen_o.delta, "Center shift of the hexagon patch")->capture_default_str();
  gen->add_option("--split", gen_o.split, "none, ms, hct or fishbone")->capture_default_str();
  gen->add_option("--split-ratio", gen_o.split_ratio, "Morgan-Scott interior point ratio")->capture_default_str();
  gen->add_option("--eps-sing", gen_o.eps_sing, "Singularity threshold")->capture_default_str();
  gen->add_option("-o,--output", gen_o.output, "Mesh JSON file");
  gen->add_option("--report", gen_o.report, "Classification report (default stdout)");
  gen->add_option("--config", gen_o.config, "JSON config file");

  CLI::App* spl = mesh->add_subcommand("split", "Refine every triangle of a mesh");
  split_o.kind = "ms";
  spl->add_option("mesh", split_o.input, "Input mesh JSON");
  spl->add_option("--kind", split_o.kind, "ms, hct or fishbone")->capture_default_str();
  spl->add_option("--split-ratio", split_o.split_ratio, "Morgan-Scott interior point ratio")->capture_default_str();
  spl->add_option("--eps-sing", split_o.eps_sing, "Singularity threshold")->capture_default_str();
  spl->add_option("-o,--output", split_o.output, "Refined mesh JSON file");
  spl->add_option("--report", split_o.report, "Classification report (default stdout)");
  spl->add_option("--config", split_o.config, "JSON config file");

  CLI::App* ana = mesh->add_subcommand("analyze", "Classify the vertices of a mesh");
  ana->add_option("mesh", analyze_o.input, "Input mesh JSON");
  ana->add_option("--eps-sing", analyze_o.eps_sing, "Singularity threshold")->capture_default_str();
  ana->add_option("-o,--output,--report", analyze_o.report, "Report file (default stdout)");
  ana->add_option("--config", analyze_o.config, "JSON config file");

  // rank
  RankOptions rank_o;
  CLI::App* rank = app.add_subcommand("rank", "Rank deficiency of the divergence matrix");
  rank->add_option("mesh", rank_o.mesh, "Mesh JSON");
  rank->add_option("--pair", rank_o.pair, "lagrange, hermite or c2")->capture_default_str();
  rank->add_option("--k", rank_o.k, "Stress degree")->capture_default_str();
  rank->add_option("--mode", rank_o.mode, "dense, sparse or auto")->capture_default_str();
  rank->add_option("--eps-sing", rank_o.eps_sing, "Singularity threshold")->capture_default_str();
  rank->add_option("--expect", rank_o.expect, "Expected deficiency (exit 4 on mismatch)");
  rank->add_option("-o,--output", rank_o.output, "Report file (default stdout)");
  rank->add_option("--config", rank_o.config, "JSON config file");

  // solve
  SolveOptions solve_o;
  CLI::App* solve = app.add_subcommand("solve", "Solve a manufactured problem on one mesh");
  solve->add_option("mesh", solve_o.mesh, "Mesh JSON (default: generated unit square mesh)");
  solve->add_option("--base", solve_o.base, "diagonal or crisscross")->capture_default_str();
  solve->add_option("--n", solve_o.n, "Cells per side")->capture_default_str();
  solve->add_option("--split", solve_o.split, "none, ms, hct or fishbone")->capture_default_str();
  solve->add_option("--split-ratio", solve_o.split_ratio, "Morgan-Scott interior point ratio")->capture_default_str();
  solve->add_option("--pair", solve_o.pair, "lagrange, hermite or c2")->capture_default_str();
  solve->add_option("--k", solve_o.k, "Stress degree")->capture_default_str();
  solve->add_option("--case", solve_o.case_name, "interior_smooth or boundary_flux")->capture_default_str();
  solve->add_option("--bubble", solve_o.bubble, "gradient or diagonal")->capture_default_str();
  solve->add_option("--lambda", solve_o.lambda, "Lame lambda")->capture_default_str();
  solve->add_option("--mu", solve_o.mu, "Lame mu")->capture_default_str();
  solve->add_option("--iota", solve_o.iota, "Length scale")->capture_default_str();
  solve->add_option("--tol", solve_o.tol, "Relative residual tolerance")->capture_default_str();
  solve->add_option("--check-stability", solve_o.check_stability, "Sparse rank check before solving")
      ->capture_default_str();
  solve->add_option("--dump", solve_o.dump, "Write A, B and F with this path prefix");
  solve->add_option("-o,--output", solve_o.output, "Report file (default stdout)");
  solve->add_option("--config", solve_o.config, "JSON config file");

  // converge
  ConvergeOptions conv_o;
  StudyOverrides conv_ov;
  CLI::App* conv = app.add_subcommand("converge", "Convergence study over mesh sizes and length scales");
  conv_ov.app = conv;
  conv->add_option("--config", conv_o.config, "Study config JSON");
  conv->add_option("-o,--output", conv_o.output, "CSV file (default stdout)");
  conv->add_option("--json", conv_o.json_output, "Full study JSON with stability reports");
  conv_ov.add("--pair", "pair", conv_o.pair, "lagrange, hermite or c2");
  conv_ov.add("--k", "k", conv_o.k, "Stress degree (default 4)");
  conv_ov.add("--base", "base", conv_o.base, "diagonal or crisscross");
  conv_ov.add("--split", "split", conv_o.split, "none, ms, hct or fishbone");
  conv_ov.add("--split-ratio", "split_ratio", conv_o.split_ratio, "Morgan-Scott interior point ratio");
  conv_ov.add("--hsizes", "hsizes", conv_o.hsizes, "Parent cell sizes 1/n")->delimiter(',');
  conv_ov.add("--lambda", "lambda", conv_o.lambda, "Lame lambda (default 1e5)");
  conv_ov.add("--mu", "mu", conv_o.mu, "Lame mu (default 0.3)");
  conv_ov.add("--iotas", "iotas", conv_o.iotas, "Length scales")->delimiter(',');
  conv_ov.add("--case", "case", conv_o.case_name, "interior_smooth or boundary_flux");
  conv_ov.add("--bubble", "bubble", conv_o.bubble, "gradient or diagonal");
  conv_ov.add("--check-stability", "check_stability", conv_o.check_stability, "Sparse rank check per mesh");

  // probe-boundary
  ProbeOptions probe_o;
  StudyOverrides probe_ov;
  CLI::App* probe = app.add_subcommand("probe-boundary", "Mixed second derivatives of sigma_h at the vertices");
  probe_ov.app = probe;
  probe->add_option("--config", probe_o.config, "Probe config JSON");
  probe->add_option("-o,--output", probe_o.output, "CSV file (default stdout)");
  probe_ov.add("--pair", "pair", probe_o.pair, "lagrange, hermite or c2 (default c2)");
  probe_ov.add("--k", "k", probe_o.k, "Stress degree (default 5)");
  probe_ov.add("--base", "base", probe_o.base, "diagonal or crisscross");
  probe_ov.add("--split", "split", probe_o.split, "none, ms, hct or fishbone");
  probe_ov.add("--split-ratio", "split_ratio", probe_o.split_ratio, "Morgan-Scott interior point ratio");
  probe_ov.add("--levels", "levels", probe_o.levels, "Refinement levels (2^level cells per side)")->delimiter(',');
  probe_ov.add("--lambda", "lambda", probe_o.lambda, "Lame lambda (default 1)");
  probe_ov.add("--mu", "mu", probe_o.mu, "Lame mu (default 0.3)");
  probe_ov.add("--iotas", "iotas", probe_o.iotas, "Length scales")->delimiter(',');
  probe_ov.add("--cases", "cases", probe_o.cases, "interior_smooth, boundary_flux")->delimiter(',');

  // audit
  AuditOptions audit_o;
  CLI::App* audit = app.add_subcommand("audit", "Dimension and bubble complex audits");
  audit->add_option("meshes", audit_o.meshes, "Mesh JSON files (default: three built-in meshes)");
  audit->add_option("--k", audit_o.k, "Stress degree of the dimension audit")->capture_default_str();
  audit->add_option("--bubble-k", audit_o.bubble_k, "Degrees of the bubble audit")->delimiter(',')
      ->capture_default_str();
  audit->add_option("--samples", audit_o.samples, "Random bubbles for the moment check")->capture_default_str();
  audit->add_option("-o,--output", audit_o.output, "Report file (default stdout)");
  audit->add_option("--config", audit_o.config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kPrecondition;
  }

  auto with_config = [](CLI::App* sub, const std::string& path) {
    if (!path.empty()) apply_config(sub, read_json_file(path));
  };

  try {
    if (*mesh) {
      if (*gen) {
        with_config(gen, gen_o.config);
        return run_mesh_gen(gen_o);
      }
      if (*spl) {
        with_config(spl, split_o.config);
        return run_mesh_split(split_o);
      }
      with_config(ana, analyze_o.config);
      return run_mesh_analyze(analyze_o);
    }
    if (*rank) {
      with_config(rank, rank_o.config);
      return run_rank(rank_o);
    }
    if (*solve) {
      with_config(solve, solve_o.config);
      return run_solve(solve_o);
    }
    if (*conv) return run_converge(conv_o, conv_ov);
    if (*probe) return run_probe(probe_o, probe_ov);
    with_config(audit, audit_o.config);
    return run_audit(audit_o);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kInconclusive;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  }
}
