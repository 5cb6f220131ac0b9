#include "caplab/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "caplab/common.hpp"

namespace caplab {

void RunConfig::validate() const {
  if (!(lambda > -1.0 && lambda < 1.0))
    throw domain_error("config: lambda must lie in (-1, 1)");
  if (n < 2) throw domain_error("config: n >= 2");
  if (rep != "profile" && rep != "voxel")
    throw domain_error("config: rep must be 'profile' or 'voxel'");
  if (nodes < 2) throw domain_error("config: nodes >= 2");
  for (double t : {h, xi_step, tol_quadrature, tol_solver, tol_search, tol_theorem})
    if (!(t > 0.0)) throw domain_error("config: resolutions and tolerances must be positive");
}

std::string RunConfig::to_kv() const {
  std::ostringstream ss;
  ss << "lambda=" << fmt_double(lambda) << '\n';
  ss << "n=" << n << '\n';
  ss << "rep=" << rep << '\n';
  ss << "nodes=" << nodes << '\n';
  ss << "h=" << fmt_double(h) << '\n';
  ss << "xi_step=" << fmt_double(xi_step) << '\n';
  ss << "seed=" << seed << '\n';
  ss << "jobs=" << jobs << '\n';
  ss << "out=" << out << '\n';
  ss << "tol_quadrature=" << fmt_double(tol_quadrature) << '\n';
  ss << "tol_solver=" << fmt_double(tol_solver) << '\n';
  ss << "tol_search=" << fmt_double(tol_search) << '\n';
  ss << "tol_theorem=" << fmt_double(tol_theorem) << '\n';
  return ss.str();
}

RunConfig RunConfig::from_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config " + path.string());
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error(path.string() + ":" + std::to_string(lineno) +
                     ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
      if (key == "lambda")
        cfg.lambda = std::stod(val);
      else if (key == "n")
        cfg.n = std::stoi(val);
      else if (key == "rep")
        cfg.rep = val;
      else if (key == "nodes")
        cfg.nodes = std::stoi(val);
      else if (key == "h")
        cfg.h = std::stod(val);
      else if (key == "xi_step")
        cfg.xi_step = std::stod(val);
      else if (key == "seed")
        cfg.seed = std::stoull(val);
      else if (key == "jobs")
        cfg.jobs = std::stoi(val);
      else if (key == "out")
        cfg.out = val;
      else if (key == "tol_quadrature")
        cfg.tol_quadrature = std::stod(val);
      else if (key == "tol_solver")
        cfg.tol_solver = std::stod(val);
      else if (key == "tol_search")
        cfg.tol_search = std::stod(val);
      else if (key == "tol_theorem")
        cfg.tol_theorem = std::stod(val);
      else
        throw io_error(path.string() + ":" + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw io_error(path.string() + ":" + std::to_string(lineno) +
                     ": bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace caplab
