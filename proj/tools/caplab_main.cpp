// caplab: numerical laboratory for capillarity isoperimetric functionals.
// Subcommands: bubble, eval, symmetrize, abp, sweep, lemma1d, factor3.
// Exit codes: 0 ok, 2 theorem-violation candidate (always a bug),
// 3 precondition/gate refusal, 4 I/O or parse failure.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "caplab/abp.hpp"
#include "caplab/config.hpp"
#include "caplab/functionals.hpp"
#include "caplab/harness.hpp"
#include "caplab/io.hpp"
#include "caplab/symmetrize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace caplab;

namespace {

struct Outputs {
  fs::path dir;
  std::vector<fs::path> files;

  fs::path file(const std::string& name) {
    files.push_back(dir / name);
    return files.back();
  }
  void finish(const RunConfig& cfg) {
    std::ofstream cf(dir / "config.kv", std::ios::binary);
    cf << cfg.to_kv();
    cf.close();
    files.push_back(dir / "config.kv");
    write_manifest(dir, files);
  }
};

Outputs make_outputs(const RunConfig& cfg) {
  Outputs o;
  o.dir = cfg.out;
  std::error_code ec;
  fs::create_directories(o.dir, ec);
  if (ec) throw io_error("cannot create output directory " + o.dir.string());
  return o;
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw io_error("cannot write " + p.string());
  out << s;
}

struct LoadedSet {
  bool is_profile = false;
  ProfileSet profile;
  VoxelSet voxel;
};

LoadedSet load_set(const fs::path& path) {
  LoadedSet s;
  if (path.extension() == ".csv") {
    s.is_profile = true;
    s.profile = read_profile_csv(path);
  } else if (path.extension() == ".json") {
    s.voxel = read_voxel(path);
  } else {
    throw io_error("unrecognized set file (expect .csv profile or .json voxel): " +
                   path.string());
  }
  return s;
}

void check_report_invariants(const EvalReport& r, const CapillarityParams& p,
                             double tol) {
  if (r.alpha < -tol || r.alpha > 2.0 + 1e-6)
    throw theorem_violation("alpha outside [0, 2]");
  if (r.deficit < -tol) throw theorem_violation("negative deficit");
  if (r.p_lambda < -tol) throw theorem_violation("negative capillarity perimeter");
  if (projection_bound_slack(r.measures, p.lambda) < -1e-10)
    throw theorem_violation("projection bound violated");
  if (r.measures.wetted_area > r.measures.rel_perimeter + 1e-10)
    throw theorem_violation("wetted area exceeds relative perimeter");
}

int cmd_bubble(const RunConfig& cfg, double volume) {
  auto p = make_params(cfg.lambda, cfg.n);
  const double v = volume > 0.0 ? volume : p.cap_volume;
  // quadrature identity check for the assembled energy
  const Bubble b = make_bubble(p, v);
  const MeasureTriple m = bubble_measures(b);
  const double assembled = capillarity_perimeter(m, p.lambda);
  const double ref = reference_energy(p, v);
  if (std::abs(assembled - ref) > 1e-8 * ref)
    throw theorem_violation("bubble energy identity failed: " +
                            fmt_double(assembled) + " vs " + fmt_double(ref));
  auto out = make_outputs(cfg);
  const ProfileSet prof = sample_bubble_profile(b, cfg.nodes);
  EvalReport rep;
  if (cfg.rep == "voxel") {
    if (cfg.n > 3) throw precondition_error("voxel caps need n <= 3");
    VoxelSet vox = voxelize(prof, cfg.n, cfg.h);
    write_voxel(out.file("bubble.json"), vox);
    rep = evaluate(vox, p);
  } else {
    write_profile_csv(out.file("bubble.csv"), prof);
    rep = evaluate(prof, p);
    check_report_invariants(rep, p, cfg.tol_theorem);
  }
  spit(out.file("bubble_report.json"), eval_report_to_json(rep));
  out.finish(cfg);
  std::cout << "bubble: volume " << fmt_double(v) << ", p_lambda "
            << fmt_double(rep.p_lambda) << ", deficit " << fmt_double(rep.deficit)
            << "\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, const fs::path& in) {
  auto p = make_params(cfg.lambda, cfg.n);
  LoadedSet s = load_set(in);
  SearchOptions opt;
  opt.golden_tol_scales = cfg.tol_search;
  EvalReport rep =
      s.is_profile ? evaluate(s.profile, p) : evaluate(s.voxel, p, opt);
  auto out = make_outputs(cfg);
  spit(out.file("report.json"), eval_report_to_json(rep));
  out.finish(cfg);
  check_report_invariants(rep, p, cfg.tol_theorem);
  std::cout << eval_report_to_json(rep);
  return 0;
}

int cmd_symmetrize(const RunConfig& cfg, const fs::path& in) {
  auto p = make_params(cfg.lambda, cfg.n);
  LoadedSet s = load_set(in);
  PipelineResult res;
  SearchOptions opt;
  opt.golden_tol_scales = cfg.tol_search;
  if (s.is_profile)
    res = run_pipeline(s.profile, p);
  else
    res = run_pipeline(s.voxel, p, opt);
  auto out = make_outputs(cfg);
  spit(out.file("stages.csv"), pipeline_stages_to_csv(res.stages));
  spit(out.file("truncation.json"), truncation_record_to_json(res.truncation));
  write_profile_csv(out.file("final_profile.csv"), res.final_profile);
  out.finish(cfg);
  std::cout << pipeline_stages_to_csv(res.stages);
  for (const auto& note : res.notes) std::cout << "# " << note << "\n";
  return 0;
}

int cmd_abp(const RunConfig& cfg, const fs::path& in) {
  auto p = make_params(cfg.lambda, cfg.n);
  LoadedSet s = load_set(in);
  if (s.is_profile) throw precondition_error("abp needs a voxel set (n = 2)");
  NeumannSolution sol = solve_neumann(s.voxel, p, cfg.tol_solver, 0, cfg.jobs);
  ContactSet contact = lower_contact_set(sol, 2.0, cfg.jobs);
  CoverageReport cov = gradient_coverage(sol, contact, p, cfg.xi_step, cfg.jobs);
  ConjugateGrid cg = restricted_legendre(sol, p, cfg.xi_step, cfg.jobs);
  CouplingField field = k_envelope(cg, s.voxel, cfg.jobs);
  auto [r1, r2] = coupling_residuals(field, cg, s.voxel, p);
  if (r2 < -1e-8) throw theorem_violation("negative boundary residual R2");

  auto out = make_outputs(cfg);
  json j;
  j["covered_fraction"] = cov.covered_fraction;
  j["chain"] = json{{"cap_volume", cov.cap_volume},
                    {"sum_det_contact", cov.sum_det_contact},
                    {"sum_amgm_bound", cov.sum_amgm_bound}};
  j["amgm_min_slack"] = cov.amgm_min_slack;
  j["contact_cells"] = cov.contact_cells;
  j["compat_residual"] = sol.compat_residual;
  j["solve_residual"] = sol.solve_residual;
  j["r1"] = r1;
  j["r2"] = r2;
  j["deficit_voxel"] = deficit(s.voxel, p);
  spit(out.file("abp.json"), j.dump(2) + "\n");

  std::vector<VoxelChannel> channels(3);
  channels[0].name = "u";
  channels[1].name = "grad_x";
  channels[2].name = "grad_y";
  const std::size_t cells = s.voxel.occ.size();
  for (auto& c : channels) c.values.assign(cells, 0.0);
  for (std::size_t i = 0; i < sol.cells.size(); ++i) {
    const auto [x, t] = sol.cells[i];
    const std::size_t k = s.voxel.index(x, 0, t);
    channels[0].values[k] = sol.u[i];
    channels[1].values[k] = sol.grad[i][0];
    channels[2].values[k] = sol.grad[i][1];
  }
  write_voxel(out.file("solution.json"), s.voxel, channels);
  out.finish(cfg);
  std::cout << "abp: coverage " << fmt_double(cov.covered_fraction) << ", r1 "
            << fmt_double(r1) << ", r2 " << fmt_double(r2) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, int mode, double eps0, int levels,
              bool with_abp) {
  auto p = make_params(cfg.lambda, cfg.n);
  PerturbationSpec spec;
  spec.mode = mode;
  spec.nodes = cfg.nodes;
  std::vector<double> schedule;
  for (int k = 0; k < levels; ++k) schedule.push_back(eps0 * std::pow(2.0, -k));
  SweepResolutions res;
  res.nodes = cfg.nodes;
  res.h = cfg.h;
  res.xi_step = cfg.xi_step;
  SweepTable tab = sweep(p, spec, schedule, res, with_abp, cfg.jobs);
  tab.seed = cfg.seed;
  auto out = make_outputs(cfg);
  spit(out.file("sweep.csv"), sweep_to_csv(tab));
  spit(out.file("sweep_meta.json"), sweep_meta_to_json(tab));
  out.finish(cfg);
  std::cout << sweep_to_csv(tab);
  return tab.complete ? 0 : 3;
}

int cmd_lemma1d(const RunConfig& cfg, double l, int trials) {
  auto p = make_params(cfg.lambda, cfg.n);
  const double lv = l > 0.0 ? l : 0.5 * (0.875 * p.r_small + 1.125 * p.r_big);
  FittedConstant fc = lemma1d_check(p, lv, trials, cfg.seed);
  auto out = make_outputs(cfg);
  json j{{"l", lv},
         {"trials", trials},
         {"fitted_max", fc.fitted_max},
         {"heldout_max", fc.heldout_max},
         {"stable", fc.stable}};
  spit(out.file("lemma1d.json"), j.dump(2) + "\n");
  out.finish(cfg);
  std::cout << j.dump(2) << "\n";
  if (!fc.stable) throw theorem_violation("lemma1d: empirical constant unstable");
  return 0;
}

int cmd_factor3(const RunConfig& cfg, int trials) {
  auto p = make_params(cfg.lambda, cfg.n);
  Factor3Record rec = factor3_check(p, trials, cfg.seed, cfg.jobs);
  auto out = make_outputs(cfg);
  json j{{"trials", rec.trials},
         {"max_excess", rec.max_excess},
         {"max_ratio", rec.max_ratio},
         {"pass", rec.pass}};
  spit(out.file("factor3.json"), j.dump(2) + "\n");
  out.finish(cfg);
  std::cout << j.dump(2) << "\n";
  if (!rec.pass) throw theorem_violation("factor3: restricted minimum above 3x bound");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capillarity isoperimetry laboratory"};
  app.set_help_flag("--help", "print help");  // frees -h for the pitch flag
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (flags override)");
  auto* o_lambda = app.add_option("--lambda", cfg.lambda, "adhesion coefficient in (-1,1)");
  auto* o_n = app.add_option("--n", cfg.n, "ambient dimension (>= 2)");
  auto* o_rep = app.add_option("--rep", cfg.rep, "set representation: profile|voxel");
  auto* o_nodes = app.add_option("--nodes", cfg.nodes, "profile node count");
  auto* o_h = app.add_option("--h", cfg.h, "voxel pitch");
  auto* o_xi = app.add_option("--xi-step", cfg.xi_step, "gradient grid pitch");
  auto* o_seed = app.add_option("--seed", cfg.seed, "RNG seed");
  auto* o_jobs = app.add_option("--jobs", cfg.jobs, "worker cap (0 = hardware)");
  auto* o_out = app.add_option("--out", cfg.out, "output directory");
  auto* o_tq = app.add_option("--tol-quadrature", cfg.tol_quadrature, "quadrature tolerance");
  auto* o_ts = app.add_option("--tol-solver", cfg.tol_solver, "linear solver tolerance");
  auto* o_tr = app.add_option("--tol-search", cfg.tol_search, "translation search tolerance");
  auto* o_tt = app.add_option("--tol-theorem", cfg.tol_theorem, "theorem-check tolerance");

  double bubble_volume = 0.0;
  auto* sc_bubble = app.add_subcommand("bubble", "emit the optimal cap and its report");
  sc_bubble->add_option("--volume", bubble_volume, "cap volume (default |cap|)");

  std::string in_path;
  auto* sc_eval = app.add_subcommand("eval", "evaluate all functionals of a set file");
  sc_eval->add_option("--in", in_path, "set file (.csv profile / .json voxel)")
      ->required();
  auto* sc_sym = app.add_subcommand("symmetrize", "run the reduction pipeline");
  sc_sym->add_option("--in", in_path, "set file")->required();
  auto* sc_abp = app.add_subcommand("abp", "Neumann solve, contact set, coupling");
  sc_abp->add_option("--in", in_path, "voxel set file")->required();

  int sweep_mode = 2, sweep_levels = 7;
  double sweep_eps0 = 0.1;
  bool sweep_abp = false;
  auto* sc_sweep = app.add_subcommand("sweep", "perturbation-family sweep");
  sc_sweep->add_option("--mode", sweep_mode, "perturbation mode (>=1; 0 edge bump)");
  sc_sweep->add_option("--eps0", sweep_eps0, "largest amplitude");
  sc_sweep->add_option("--levels", sweep_levels, "halving levels");
  sc_sweep->add_flag("--abp", sweep_abp, "include coupling residuals (n=2)");

  double l1d = 0.0;
  int trials = 10000;
  auto* sc_l1 = app.add_subcommand("lemma1d", "brute-force 1-D set inequality");
  sc_l1->add_option("--l", l1d, "reference length (default mid-range)");
  sc_l1->add_option("--trials", trials, "random sets per batch");

  int f3_trials = 200;
  auto* sc_f3 = app.add_subcommand("factor3", "symmetric-center factor-3 bound");
  sc_f3->add_option("--trials", f3_trials, "random symmetric sets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      const RunConfig flags = cfg;  // values after flag parsing
      cfg = RunConfig::from_kv_file(config_path);
      if (o_lambda->count()) cfg.lambda = flags.lambda;
      if (o_n->count()) cfg.n = flags.n;
      if (o_rep->count()) cfg.rep = flags.rep;
      if (o_nodes->count()) cfg.nodes = flags.nodes;
      if (o_h->count()) cfg.h = flags.h;
      if (o_xi->count()) cfg.xi_step = flags.xi_step;
      if (o_seed->count()) cfg.seed = flags.seed;
      if (o_jobs->count()) cfg.jobs = flags.jobs;
      if (o_out->count()) cfg.out = flags.out;
      if (o_tq->count()) cfg.tol_quadrature = flags.tol_quadrature;
      if (o_ts->count()) cfg.tol_solver = flags.tol_solver;
      if (o_tr->count()) cfg.tol_search = flags.tol_search;
      if (o_tt->count()) cfg.tol_theorem = flags.tol_theorem;
    }
    cfg.validate();
    if (sc_bubble->parsed()) return cmd_bubble(cfg, bubble_volume);
    if (sc_eval->parsed()) return cmd_eval(cfg, in_path);
    if (sc_sym->parsed()) return cmd_symmetrize(cfg, in_path);
    if (sc_abp->parsed()) return cmd_abp(cfg, in_path);
    if (sc_sweep->parsed())
      return cmd_sweep(cfg, sweep_mode, sweep_eps0, sweep_levels, sweep_abp);
    if (sc_l1->parsed()) return cmd_lemma1d(cfg, l1d, trials);
    if (sc_f3->parsed()) return cmd_factor3(cfg, f3_trials);
    std::cerr << "no subcommand\n";
    return 3;
  } catch (const theorem_violation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const error& e) {  // domain/precondition/resource
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
