#include "magq_cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "magq/bargmann.hpp"
#include "magq/io.hpp"
#include "magq/presets.hpp"
#include "magq/strictq.hpp"

namespace magq::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

template <class T>
T get_as(const Json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const std::exception&) {
    fail("config key '" + key + "' has the wrong type");
  }
}

double get_number(const Json& v, const std::string& key) {
  if (!v.is_number()) fail("config key '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) fail("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) fail("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_list(const Json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) fail("config key '" + key + "' must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_number(e, key));
  return out;
}

void require_object(const Json& v, const std::string& key) {
  if (!v.is_object()) fail("config key '" + key + "' must be an object");
}

void validate(const ExperimentConfig& c) {
  if (c.dim < 1 || c.dim > 3) fail("dim must be 1, 2 or 3");
  for (double h : c.hbar_list)
    if (!(h > 0.0 && h <= 1.0)) fail("hbar values must lie in (0,1]");
  for (std::size_t i = 1; i < c.hbar_list.size(); ++i)
    if (!(c.hbar_list[i] < c.hbar_list[i - 1])) fail("hbar_list must be strictly decreasing");
  for (std::size_t i = 1; i < c.phase_lemma_hbar_list.size(); ++i)
    if (std::abs(c.phase_lemma_hbar_list[i - 1] / c.phase_lemma_hbar_list[i] - 2.0) > 1e-12)
      fail("phase_lemma_hbar_list must halve at every step");
  const auto& g = c.grid;
  if (g.policy != "fixed" && g.policy != "scaled" && g.policy != "sqrt_box")
    fail("grid.policy must be fixed, scaled or sqrt_box");
  if (!(g.box_half_width > 0.0)) fail("grid.box_half_width must be positive");
  if (g.points_per_axis < 4 || g.points_per_axis % 2) fail("grid.points_per_axis must be even and >= 4");
  if (g.m_min < 4 || g.m_min % 2) fail("grid.m_min must be even and >= 4");
  if (!(g.m_times_hbar > 0.0) || !(g.l_times_sqrt_hbar > 0.0)) fail("grid scale factors must be positive");
  if (c.format != "json" && c.format != "csv" && c.format != "both") fail("format must be json, csv or both");
  if (c.quantization != "weyl" && c.quantization != "berezin") fail("quantization must be weyl or berezin");
  if (c.threads < 1) fail("threads must be >= 1");
  if (c.phase_lemma_configs < 1 || c.sigma_kernels < 1) fail("sample counts must be >= 1");
  try {
    field_preset(c.field, c.gauge, c.dim);
    gauge_preset(c.gauge_function, c.dim);
    fiducial_preset(c.fiducial, c.dim);
    symbol_preset(c.symbol_f, c.dim);
    symbol_preset(c.symbol_g, c.dim);
  } catch (const ContractViolation& e) {
    fail(e.what());
  }
  if (c.state != "coherent" && c.state.rfind("coherent:", 0) != 0) fail("state must be coherent or coherent:x..,xi..");
}

}  // namespace

Json ExperimentConfig::to_json() const {
  Json j;
  j["dim"] = dim;
  j["field"] = field;
  j["gauge"] = gauge;
  j["gauge_function"] = gauge_function;
  j["fiducial"] = fiducial;
  j["quantization"] = quantization;
  j["grid"] = {{"policy", grid.policy},
               {"box_half_width", grid.box_half_width},
               {"points_per_axis", grid.points_per_axis},
               {"m_times_hbar", grid.m_times_hbar},
               {"m_min", grid.m_min},
               {"l_times_sqrt_hbar", grid.l_times_sqrt_hbar}};
  j["hbar_list"] = hbar_list;
  j["phase_lemma_hbar_list"] = phase_lemma_hbar_list;
  j["symbols"] = {{"f", symbol_f}, {"g", symbol_g}};
  j["state"] = state;
  j["seed"] = seed;
  j["threads"] = threads;
  j["output"] = {{"dir", out_dir}, {"format", format}};
  j["tolerances"] = {{"potential", tol_potential},
                     {"bargmann", tol_bargmann},
                     {"sigma", tol_sigma},
                     {"phase_lemma", tol_phase_lemma}};
  j["samples"] = {{"phase_lemma_configs", phase_lemma_configs}, {"sigma_kernels", sigma_kernels}};
  return j;
}

ExperimentConfig parse_config(const Json& j) {
  require_object(j, "<root>");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "dim") {
      c.dim = get_int(v, key);
    } else if (key == "field") {
      c.field = get_string(v, key);
    } else if (key == "gauge") {
      c.gauge = get_string(v, key);
    } else if (key == "gauge_function") {
      c.gauge_function = get_string(v, key);
    } else if (key == "fiducial") {
      c.fiducial = get_string(v, key);
    } else if (key == "quantization") {
      c.quantization = get_string(v, key);
    } else if (key == "hbar_list") {
      c.hbar_list = get_list(v, key);
    } else if (key == "phase_lemma_hbar_list") {
      c.phase_lemma_hbar_list = get_list(v, key);
    } else if (key == "state") {
      c.state = get_string(v, key);
    } else if (key == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0) fail("config key 'seed' must be a nonnegative integer");
      c.seed = get_as<unsigned>(v, key);
    } else if (key == "threads") {
      c.threads = get_int(v, key);
    } else if (key == "grid") {
      require_object(v, key);
      for (const auto& [k, w] : v.items()) {
        const std::string path = "grid." + k;
        if (k == "policy") c.grid.policy = get_string(w, path);
        else if (k == "box_half_width") c.grid.box_half_width = get_number(w, path);
        else if (k == "points_per_axis") c.grid.points_per_axis = get_int(w, path);
        else if (k == "m_times_hbar") c.grid.m_times_hbar = get_number(w, path);
        else if (k == "m_min") c.grid.m_min = get_int(w, path);
        else if (k == "l_times_sqrt_hbar") c.grid.l_times_sqrt_hbar = get_number(w, path);
        else fail("unknown config key '" + path + "'");
      }
    } else if (key == "symbols") {
      require_object(v, key);
      for (const auto& [k, w] : v.items()) {
        if (k == "f") c.symbol_f = get_string(w, "symbols.f");
        else if (k == "g") c.symbol_g = get_string(w, "symbols.g");
        else fail("unknown config key 'symbols." + k + "'");
      }
    } else if (key == "output") {
      require_object(v, key);
      for (const auto& [k, w] : v.items()) {
        if (k == "dir") c.out_dir = get_string(w, "output.dir");
        else if (k == "format") c.format = get_string(w, "output.format");
        else fail("unknown config key 'output." + k + "'");
      }
    } else if (key == "tolerances") {
      require_object(v, key);
      for (const auto& [k, w] : v.items()) {
        const std::string path = "tolerances." + k;
        if (k == "potential") c.tol_potential = get_number(w, path);
        else if (k == "bargmann") c.tol_bargmann = get_number(w, path);
        else if (k == "sigma") c.tol_sigma = get_number(w, path);
        else if (k == "phase_lemma") c.tol_phase_lemma = get_number(w, path);
        else fail("unknown config key '" + path + "'");
      }
    } else if (key == "samples") {
      require_object(v, key);
      for (const auto& [k, w] : v.items()) {
        if (k == "phase_lemma_configs") c.phase_lemma_configs = get_int(w, "samples." + k);
        else if (k == "sigma_kernels") c.sigma_kernels = get_int(w, "samples." + k);
        else fail("unknown config key 'samples." + k + "'");
      }
    } else {
      fail("unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::parse_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

namespace {

void dump_rec(const Json& j, std::ostringstream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string end_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(k).dump() << ": ";
        dump_rec(v, os, indent + 2);
      }
      os << "\n" << end_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump_rec(j[i], os, indent + 2);
      }
      os << "\n" << end_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::ostringstream os;
  dump_rec(j, os, 0);
  os << "\n";
  return os.str();
}

namespace {

struct Env {
  const ExperimentConfig& cfg;
  FieldSetup fs;
  FiducialVector v;
  Symbol f;
  Symbol g;
  RunResult result;
};

GridPolicy grid_policy(const ExperimentConfig& c, double fiducial_width) {
  const GridConfig& g = c.grid;
  if (g.policy == "scaled") return scaled_grid_policy(c.dim, g.box_half_width, g.m_times_hbar, g.m_min, fiducial_width);
  if (g.policy == "sqrt_box") return sqrt_box_policy(c.dim, g.l_times_sqrt_hbar, g.points_per_axis, fiducial_width);
  const int dim = c.dim;
  const double L = g.box_half_width;
  const int M = g.points_per_axis;
  return [=](double hbar) { return PhaseGrid(BoxGrid(dim, L, M), hbar, -1, fiducial_width); };
}

Json envelope(const ExperimentConfig& c, const std::string& command) {
  Json j;
  j["command"] = command;
  j["version"] = version_string();
  j["config"] = c.to_json();
  return j;
}

void emit(Env& env, const std::string& name, const Json& j, const std::string& csv) {
  const ExperimentConfig& c = env.cfg;
  fs::create_directories(c.out_dir);
  if (c.format == "json" || c.format == "both" || csv.empty()) {
    const std::string p = (fs::path(c.out_dir) / (name + ".json")).string();
    std::ofstream(p) << dump_json(j);
    env.result.files.push_back(p);
  }
  if (!csv.empty() && (c.format == "csv" || c.format == "both")) {
    const std::string p = (fs::path(c.out_dir) / (name + ".csv")).string();
    std::ofstream(p) << csv;
    env.result.files.push_back(p);
  }
}

Pt random_point(std::mt19937& rng, int dim, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  Pt p(dim);
  for (int d = 0; d < dim; ++d) p(d) = u(rng);
  return p;
}

Json pt_json(const Pt& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

void cmd_fields(Env& env) {
  const ExperimentConfig& c = env.cfg;
  const auto probes = default_probes(c.dim, 2.0, 32, c.seed);
  const PotentialReport pot = verify_potential(env.fs.A, env.fs.B, probes, c.tol_potential);
  std::mt19937 rng(c.seed);
  double stokes = 0.0;
  for (int t = 0; t < 16; ++t) {
    const Pt a = random_point(rng, c.dim, 2.0), b = random_point(rng, c.dim, 2.0), d = random_point(rng, c.dim, 2.0);
    const double circ = env.fs.A.line_integral(a, b) + env.fs.A.line_integral(b, d) + env.fs.A.line_integral(d, a);
    stokes = std::max(stokes, std::abs(circ - flux(env.fs.B, a, b, d)));
  }
  const bool pass = pot.pass && stokes <= c.tol_potential;
  Json j = envelope(c, "fields verify");
  j["curl_defect"] = pot.defect;
  j["stokes_defect"] = stokes;
  j["tolerance"] = c.tol_potential;
  j["verdict"] = pass ? "pass" : "fail";
  emit(env, "fields_verify", j, "");
  env.result.exit_code = pass ? 0 : 1;
}

OperatorMatrix quantize(Env& env, const std::string& which, double hbar, const PhaseGrid& grid) {
  if (which == "weyl") return weyl_op(env.fs.A, hbar, env.f, grid);
  return berezin_op(env.fs.A, env.v, hbar, env.f, grid);
}

void cmd_quantize(Env& env, const std::string& which) {
  const ExperimentConfig& c = env.cfg;
  const double hbar = c.hbar_list.front();
  const PhaseGrid grid = grid_policy(c, env.v.width)(hbar);
  const OperatorMatrix op = quantize(env, which, hbar, grid);
  const CMat W = op.weighted();
  const double herm = (W - W.adjoint()).cwiseAbs().maxCoeff();
  Json j = envelope(c, "quantize " + which);
  j["hbar"] = hbar;
  j["grid"] = grid_summary(grid);
  j["norm"] = operator_norm(op);
  j["trace_re"] = W.trace().real();
  j["trace_im"] = W.trace().imag();
  j["hermitian_defect"] = herm;
  if (herm <= 1e-10 * std::max(1.0, W.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<CMat> es(W, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    j["min_eigenvalue"] = lo;
    j["max_eigenvalue"] = hi;
    j["positive"] = lo >= -1e-8 * std::max(std::abs(lo), std::abs(hi));
  }
  fs::create_directories(c.out_dir);
  const std::string dump = (fs::path(c.out_dir) / ("operator_" + which + ".magw")).string();
  write_magw(dump, op);
  env.result.files.push_back(dump);
  j["dump"] = fs::path(dump).filename().string();
  std::ostringstream csv;
  if (op.size() <= 256) write_matrix_csv(csv, W);
  emit(env, "quantize_" + which, j, csv.str());
}

void cmd_husimi(Env& env) {
  const ExperimentConfig& c = env.cfg;
  const double hbar = c.hbar_list.front();
  const PhaseGrid grid = grid_policy(c, env.v.width)(hbar);
  PhasePoint Z{Pt::Zero(c.dim), Pt::Zero(c.dim)};
  if (c.state != "coherent") {
    std::vector<double> v;
    std::stringstream ss(c.state.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != static_cast<std::size_t>(2 * c.dim)) fail("state coherent:... needs 2N coordinates");
    for (int d = 0; d < c.dim; ++d) {
      Z.x(d) = v[static_cast<std::size_t>(d)];
      Z.xi(d) = v[static_cast<std::size_t>(c.dim + d)];
    }
  }
  const CoherentState s = coherent_vector(env.fs.A, env.v, hbar, Z, grid.position());
  const HusimiResult h = husimi(env.fs.A, env.v, hbar, s.samples, grid);
  Json j = envelope(c, "husimi");
  j["hbar"] = hbar;
  j["grid"] = grid_summary(grid);
  j["mass"] = h.mass;
  j["leakage_warning"] = h.leakage_warning || s.boundary_warning;
  std::ostringstream csv;
  write_husimi_csv(csv, grid, h);
  // The density itself is a CSV artifact regardless of the report format.
  fs::create_directories(c.out_dir);
  const std::string p = (fs::path(c.out_dir) / "husimi.csv").string();
  std::ofstream(p) << csv.str();
  env.result.files.push_back(p);
  emit(env, "husimi", j, "");
}

void cmd_bargmann(Env& env) {
  const ExperimentConfig& c = env.cfg;
  const double hbar = c.hbar_list.front();
  const PhaseGrid grid = grid_policy(c, env.v.width)(hbar);
  const BargmannSpace space(env.fs.A, env.v, grid);
  const BargmannReport r = bargmann_check(space, env.f, c.seed);
  const bool pass = r.isometry <= c.tol_bargmann && r.idempotent <= c.tol_bargmann &&
                    r.selfadjoint <= c.tol_bargmann && r.reproducing <= c.tol_bargmann &&
                    r.toeplitz <= c.tol_bargmann;
  Json j = envelope(c, "bargmann check");
  j["hbar"] = hbar;
  j["grid"] = grid_summary(grid);
  j["phase_size"] = space.phase_size();
  j["isometry_defect"] = r.isometry;
  j["idempotent_defect"] = r.idempotent;
  j["selfadjoint_defect"] = r.selfadjoint;
  j["reproducing_defect"] = r.reproducing;
  j["toeplitz_defect"] = r.toeplitz;
  j["tolerance"] = c.tol_bargmann;
  j["verdict"] = pass ? "pass" : "fail";
  std::ostringstream csv;
  if (space.phase_size() <= 2048) write_matrix_csv(csv, space.kernel_matrix());
  emit(env, "bargmann_check", j, csv.str());
  env.result.exit_code = pass ? 0 : 1;
}

Json report_json(const SweepReport& r) {
  Json j;
  j["axiom"] = r.axiom;
  j["field_preset"] = r.field_preset;
  j["gauge"] = r.gauge;
  j["fiducial"] = r.fiducial;
  j["verdict"] = r.verdict ? "pass" : "fail";
  j["rule"] = r.rule;
  if (r.axiom == "rieffel") j["sup_f"] = r.reference;
  Json recs = Json::array();
  for (const auto& x : r.records) {
    Json e;
    e["hbar"] = x.hbar;
    e["norm"] = x.norm;
    e["defect"] = x.defect;
    e["verdict"] = r.verdict ? "pass" : "fail";
    e["grid"] = x.grid;
    e["warnings"] = x.warnings;
    e["runtime_ms"] = x.runtime_ms;
    recs.push_back(e);
  }
  j["records"] = recs;
  return j;
}

void cmd_sweep(Env& env, const std::string& axiom) {
  const ExperimentConfig& c = env.cfg;
  SweepContext ctx{env.fs.A, env.fs.B, env.v, c.field, c.gauge, c.threads};
  const GridPolicy grids = grid_policy(c, env.v.width);
  Json j = envelope(c, "sweep " + axiom);
  std::vector<SweepReport> reports;
  bool pass = true;
  if (axiom == "phaselemma") {
    std::mt19937 rng(c.seed);
    Json cases = Json::array();
    std::ostringstream csv;
    csv << "case,hbar,re_value,im_value,target,limit_re,limit_im,error,verdict\n";
    for (int t = 0; t < c.phase_lemma_configs; ++t) {
      const Pt x = random_point(rng, c.dim, 1.0), y = random_point(rng, c.dim, 1.0),
               z = random_point(rng, c.dim, 1.0), a = random_point(rng, c.dim, 1.0),
               b = random_point(rng, c.dim, 1.0);
      const PhaseLemmaReport r = phase_lemma_check(env.fs.B, x, y, z, a, b, c.phase_lemma_hbar_list, c.tol_phase_lemma);
      pass = pass && r.pass;
      Json e;
      e["x"] = pt_json(x);
      e["y"] = pt_json(y);
      e["z"] = pt_json(z);
      e["a"] = pt_json(a);
      e["b"] = pt_json(b);
      Json vals = Json::array();
      for (std::size_t i = 0; i < r.values.size(); ++i) {
        vals.push_back({{"hbar", r.hbar_list[i]}, {"re", r.values[i].real()}, {"im", r.values[i].imag()}});
        csv << t << ',' << format_number(r.hbar_list[i]) << ',' << format_number(r.values[i].real()) << ','
            << format_number(r.values[i].imag()) << ',' << format_number(r.target) << ','
            << format_number(r.limit.real()) << ',' << format_number(r.limit.imag()) << ','
            << format_number(r.error) << ',' << (r.pass ? "pass" : "fail") << '\n';
      }
      e["values"] = vals;
      e["limit_re"] = r.limit.real();
      e["limit_im"] = r.limit.imag();
      e["target"] = r.target;
      e["error"] = r.error;
      e["verdict"] = r.pass ? "pass" : "fail";
      cases.push_back(e);
    }
    j["cases"] = cases;
    j["verdict"] = pass ? "pass" : "fail";
    emit(env, "sweep_phaselemma", j, csv.str());
    env.result.exit_code = pass ? 0 : 1;
    return;
  }
  if (axiom == "rieffel") {
    reports.push_back(rieffel_sweep(ctx, env.f, c.hbar_list, grids));
  } else if (axiom == "vonneumann") {
    reports.push_back(vonneumann_sweep(ctx, env.f, env.g, c.hbar_list, grids));
  } else if (axiom == "dirac") {
    reports.push_back(dirac_sweep(ctx, env.f, env.g, c.hbar_list, grids));
  } else if (axiom == "semiclassical") {
    reports.push_back(semiclassical_sweep(ctx, env.f, c.hbar_list, grids));
  } else if (axiom == "sigma") {
    std::mt19937 rng(c.seed);
    std::uniform_real_distribution<double> width(0.6, 1.2);
    for (int k = 0; k < c.sigma_kernels; ++k) {
      const Pt x0 = random_point(rng, c.dim, 0.5), w0 = random_point(rng, c.dim, 0.5),
               kk = random_point(rng, c.dim, 0.5);
      const double a = width(rng), b = width(rng);
      reports.push_back(sigma_sweep(ctx, gaussian_kernel(c.dim, x0, a, w0, b, kk), c.hbar_list, grids, c.tol_sigma));
    }
  } else {
    fail("unknown sweep '" + axiom + "'");
  }
  Json arr = Json::array();
  std::ostringstream csv;
  bool header = true;
  for (const auto& r : reports) {
    pass = pass && r.verdict;
    arr.push_back(report_json(r));
    write_sweep_csv(csv, r, header);
    header = false;
  }
  j["reports"] = arr;
  j["verdict"] = pass ? "pass" : "fail";
  emit(env, "sweep_" + axiom, j, csv.str());
  env.result.exit_code = pass ? 0 : 1;
}

void cmd_spectrum(Env& env) {
  const ExperimentConfig& c = env.cfg;
  const double hbar = c.hbar_list.front();
  const PhaseGrid grid = grid_policy(c, env.v.width)(hbar);
  const OperatorMatrix op = quantize(env, c.quantization, hbar, grid);
  const CMat W = op.weighted();
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (W + W.adjoint())), Eigen::EigenvaluesOnly);
  Json j = envelope(c, "spectrum");
  j["hbar"] = hbar;
  j["grid"] = grid_summary(grid);
  j["quantization"] = c.quantization;
  j["hermitian_defect"] = (W - W.adjoint()).cwiseAbs().maxCoeff();
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  j["eigenvalues"] = ev;
  std::ostringstream csv;
  csv << "index,eigenvalue\n";
  for (std::size_t i = 0; i < ev.size(); ++i) csv << i << ',' << format_number(ev[i]) << '\n';
  emit(env, "spectrum", j, csv.str());
}

}  // namespace

RunResult run(const std::vector<std::string>& args, const ExperimentConfig& cfg) {
  if (args.empty()) fail("missing subcommand");
  Env env{cfg, field_preset(cfg.field, cfg.gauge, cfg.dim), fiducial_preset(cfg.fiducial, cfg.dim),
          symbol_preset(cfg.symbol_f, cfg.dim), symbol_preset(cfg.symbol_g, cfg.dim), {}};
  const std::string& cmd = args[0];
  auto want = [&](std::size_t n) {
    if (args.size() != n) fail("wrong number of arguments for '" + cmd + "'");
  };
  if (cmd == "fields") {
    want(2);
    if (args[1] != "verify") fail("unknown fields action '" + args[1] + "'");
    cmd_fields(env);
  } else if (cmd == "quantize") {
    want(2);
    if (args[1] != "weyl" && args[1] != "berezin") fail("quantize expects weyl or berezin");
    cmd_quantize(env, args[1]);
  } else if (cmd == "husimi") {
    want(1);
    cmd_husimi(env);
  } else if (cmd == "bargmann") {
    want(2);
    if (args[1] != "check") fail("unknown bargmann action '" + args[1] + "'");
    cmd_bargmann(env);
  } else if (cmd == "sweep") {
    want(2);
    cmd_sweep(env, args[1]);
  } else if (cmd == "spectrum") {
    want(1);
    cmd_spectrum(env);
  } else {
    fail("unknown subcommand '" + cmd + "'");
  }
  return env.result;
}

}  // namespace magq::cli
