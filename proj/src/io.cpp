#include "caplab/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace caplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw io_error(where + ": cannot parse number '" + s + "'");
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw io_error("short write to " + path.string());
}

json measures_json(const MeasureTriple& m) {
  return json{{"volume", m.volume},
              {"rel_perimeter", m.rel_perimeter},
              {"wetted_area", m.wetted_area}};
}

}  // namespace

void write_profile_csv(const fs::path& path, const ProfileSet& p) {
  p.validate();
  std::ostringstream ss;
  ss << "t,rho\n";
  for (std::size_t i = 0; i < p.heights.size(); ++i)
    ss << fmt_double(p.heights[i]) << ',' << fmt_double(p.radii[i]) << '\n';
  spit(path, ss.str());
}

ProfileSet read_profile_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw io_error(path.string() + ": empty file");
  if (line == "t,rho\r") line = "t,rho";
  if (line != "t,rho")
    throw io_error(path.string() + ":1: expected header 't,rho'");
  ProfileSet p;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw io_error(path.string() + ":" + std::to_string(lineno) +
                     ": expected 't,rho' pair");
    const std::string where = path.string() + ":" + std::to_string(lineno);
    p.heights.push_back(parse_double(line.substr(0, comma), where));
    p.radii.push_back(parse_double(line.substr(comma + 1), where));
  }
  try {
    p.validate();
  } catch (const domain_error& e) {
    throw io_error(path.string() + ": " + e.what());
  }
  return p;
}

void write_voxel(const fs::path& json_path, const VoxelSet& v,
                 const std::vector<VoxelChannel>& channels) {
  v.validate();
  fs::path bin_path = json_path;
  bin_path.replace_extension(".bin");
  json header;
  header["dim"] = v.dim;
  header["spacing"] = v.spacing;
  header["origin"] = std::vector<double>(v.origin.begin(), v.origin.begin() + v.dim);
  std::vector<int> shape;
  for (int i = 0; i < v.dim; ++i) shape.push_back(v.shape[std::size_t(i)]);
  header["shape"] = shape;
  header["encoding"] = "raw-row-major-u8";
  header["data"] = bin_path.filename().string();
  if (!channels.empty()) {
    json chans = json::array();
    for (const auto& c : channels) {
      if (c.values.size() != v.occ.size())
        throw domain_error("write_voxel: channel size mismatch: " + c.name);
      chans.push_back(json{{"name", c.name}, {"encoding", "raw-float64"}});
    }
    header["channels"] = chans;
  }
  spit(json_path, header.dump(2) + "\n");

  std::string blob(reinterpret_cast<const char*>(v.occ.data()), v.occ.size());
  for (const auto& c : channels)
    blob.append(reinterpret_cast<const char*>(c.values.data()),
                c.values.size() * sizeof(double));
  spit(bin_path, blob);
}

VoxelSet read_voxel(const fs::path& json_path, std::vector<VoxelChannel>* channels) {
  json header;
  try {
    header = json::parse(slurp(json_path));
  } catch (const json::exception& e) {
    throw io_error(json_path.string() + ": " + e.what());
  }
  VoxelSet v;
  try {
    v.dim = header.at("dim").get<int>();
    v.spacing = header.at("spacing").get<double>();
    auto origin = header.at("origin").get<std::vector<double>>();
    auto shape = header.at("shape").get<std::vector<int>>();
    if (header.at("encoding").get<std::string>() != "raw-row-major-u8")
      throw io_error(json_path.string() + ": unsupported encoding");
    if (int(origin.size()) != v.dim || int(shape.size()) != v.dim)
      throw io_error(json_path.string() + ": origin/shape arity mismatch");
    v.origin = {0.0, 0.0, 0.0};
    v.shape = {1, 1, 1};
    for (int i = 0; i < v.dim; ++i) {
      v.origin[std::size_t(i)] = origin[std::size_t(i)];
      v.shape[std::size_t(i)] = shape[std::size_t(i)];
    }
    if (v.dim == 2) v.shape[2] = 1;
    const fs::path bin_path =
        json_path.parent_path() / header.at("data").get<std::string>();
    const std::string blob = slurp(bin_path);
    const std::size_t cells = std::size_t(v.nx()) * v.ny() * v.nt();
    std::size_t expected = cells;
    std::vector<std::string> channel_names;
    if (header.contains("channels")) {
      for (const auto& c : header["channels"]) {
        channel_names.push_back(c.at("name").get<std::string>());
        expected += cells * sizeof(double);
      }
    }
    if (blob.size() != expected)
      throw io_error(bin_path.string() + ": sidecar size " +
                     std::to_string(blob.size()) + ", expected " +
                     std::to_string(expected));
    v.occ.assign(blob.begin(), blob.begin() + std::ptrdiff_t(cells));
    for (auto& b : v.occ)
      if (b > 1) throw io_error(bin_path.string() + ": occupancy bytes must be 0/1");
    if (channels) {
      channels->clear();
      const char* cursor = blob.data() + cells;
      for (const auto& name : channel_names) {
        VoxelChannel ch;
        ch.name = name;
        ch.values.resize(cells);
        std::memcpy(ch.values.data(), cursor, cells * sizeof(double));
        cursor += cells * sizeof(double);
        channels->push_back(std::move(ch));
      }
    }
  } catch (const json::exception& e) {
    throw io_error(json_path.string() + ": " + e.what());
  }
  try {
    v.validate();
  } catch (const domain_error& e) {
    throw io_error(json_path.string() + ": " + e.what());
  }
  return v;
}

std::string eval_report_to_json(const EvalReport& r) {
  json j = measures_json(r.measures);
  j["p_lambda"] = r.p_lambda;
  j["deficit"] = r.deficit;
  j["alpha"] = r.alpha;
  j["alpha_center"] = r.alpha_center;
  j["beta"] = r.beta;
  j["beta_center"] = r.beta_center;
  j["hausdorff"] = r.hausdorff;
  return j.dump(2) + "\n";
}

std::string truncation_record_to_json(const TruncationRecord& rec) {
  json axes = json::array();
  for (const auto& a : rec.axes)
    axes.push_back(json{{"axis", a.axis},
                        {"applied", a.applied},
                        {"tau1", a.tau1},
                        {"tau2", a.tau2},
                        {"note", a.note}});
  json j{{"axes", axes},
         {"sigma", rec.sigma},
         {"pre_volume", rec.pre_volume},
         {"post_volume", rec.post_volume},
         {"pre_deficit", rec.pre_deficit},
         {"post_deficit", rec.post_deficit},
         {"no_op", rec.no_op}};
  return j.dump(2) + "\n";
}

namespace {

std::string csv_cell(double v) { return fmt_double(v); }

double beta_denominator(double defct, int n) {
  const double d = std::max(defct, 0.0);
  return std::max(d, std::pow(d, 1.0 / (2.0 * n)));
}

}  // namespace

std::string sweep_to_csv(const SweepTable& t) {
  std::ostringstream ss;
  ss << "eps,volume,p_lambda,deficit,alpha,beta,hausdorff,r1,r2,deficit_voxel,"
        "alpha_sq_over_deficit,beta_over_maxd\n";
  for (const auto& r : t.rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double aratio = nan, bratio = nan;
    if (r.generated && r.deficit > 1e-11) {
      aratio = r.alpha * r.alpha / r.deficit;
      bratio = r.beta / beta_denominator(r.deficit, t.params.n);
    }
    ss << csv_cell(r.eps) << ',' << csv_cell(r.volume) << ','
       << csv_cell(r.p_lambda) << ',' << csv_cell(r.deficit) << ','
       << csv_cell(r.alpha) << ',' << csv_cell(r.beta) << ','
       << csv_cell(r.hausdorff) << ',' << csv_cell(r.r1) << ','
       << csv_cell(r.r2) << ',' << csv_cell(r.deficit_voxel) << ','
       << csv_cell(aratio) << ',' << csv_cell(bratio) << '\n';
  }
  return ss.str();
}

std::string sweep_meta_to_json(const SweepTable& t) {
  json j;
  j["lambda"] = t.params.lambda;
  j["n"] = t.params.n;
  j["cap_volume"] = t.params.cap_volume;
  j["mode"] = t.spec.mode;
  j["volume_renormalize"] = t.spec.volume_renormalize;
  j["nodes"] = t.res.nodes;
  j["h"] = t.res.h;
  j["xi_step"] = t.res.xi_step;
  j["seed"] = t.seed;
  j["with_abp"] = t.with_abp;
  j["complete"] = t.complete;

  std::vector<double> eps, alpha, defct;
  for (const auto& r : t.rows)
    if (r.generated && r.eps > 0.0 && r.alpha > 0.0 && r.deficit > 0.0) {
      eps.push_back(r.eps);
      alpha.push_back(r.alpha);
      defct.push_back(r.deficit);
    }
  if (eps.size() >= 4) {
    const auto fa = fit_loglog(eps, alpha);
    const auto fd = fit_loglog(eps, defct);
    j["fit_alpha_vs_eps"] = json{{"slope", fa.slope}, {"stderr", fa.stderr_slope}};
    j["fit_deficit_vs_eps"] =
        json{{"slope", fd.slope}, {"stderr", fd.stderr_slope}};
  }
  double amax = 0.0, amin = std::numeric_limits<double>::infinity();
  for (const auto& r : t.rows)
    if (r.generated && r.deficit > 1e-11) {
      const double ratio = r.alpha * r.alpha / r.deficit;
      amax = std::max(amax, ratio);
      amin = std::min(amin, ratio);
    }
  if (amax > 0.0)
    j["alpha_sq_over_deficit"] = json{{"min", amin}, {"max", amax}};
  if (t.with_abp) {
    double r1max = 0.0, r2max = 0.0;
    for (const auto& r : t.rows)
      if (r.generated && std::isfinite(r.r1) && r.deficit_voxel > 0.0) {
        r1max = std::max(r1max, r.r1 / std::sqrt(r.deficit_voxel));
        r2max = std::max(r2max, r.r2 / r.deficit_voxel);
      }
    j["coupling_ratio_max"] = json{{"r1_over_sqrt_d", r1max}, {"r2_over_d", r2max}};
  }
  return j.dump(2) + "\n";
}

std::string pipeline_stages_to_csv(const std::vector<PipelineStage>& stages) {
  std::ostringstream ss;
  ss << "stage,volume,p_lambda,deficit,alpha\n";
  for (const auto& s : stages)
    ss << s.name << ',' << fmt_double(s.volume) << ',' << fmt_double(s.p_lambda)
       << ',' << fmt_double(s.deficit) << ',' << fmt_double(s.alpha) << '\n';
  return ss.str();
}

void write_manifest(const fs::path& out_dir,
                    const std::vector<fs::path>& files) {
  json list = json::array();
  for (const auto& f : files) {
    const std::string blob = slurp(f);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob.data(), blob.size())));
    list.push_back(json{{"path", fs::relative(f, out_dir).string()},
                        {"bytes", blob.size()},
                        {"fnv1a64", std::string(hex)}});
  }
  spit(out_dir / "manifest.json", json{{"files", list}}.dump(2) + "\n");
}

}  // namespace caplab
