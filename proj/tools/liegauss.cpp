// Command-line front-end: channel construction, equivalence-class scans,
// eigenvalue traces, distillation sweeps and Monte-Carlo validation runs.
// Config files are JSON; flags override file values. CSV output carries the
// full config and seed in leading '#' comment lines so every run is
// reproducible from its own output.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "liegauss/channel1q.hpp"
#include "liegauss/channel2q.hpp"
#include "liegauss/distill.hpp"
#include "liegauss/version.hpp"

using json = nlohmann::json;
using namespace liegauss;

namespace {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  return cfg;
}

template <typename T>
T field(const json& cfg, const std::string& key, std::optional<T> fallback = std::nullopt) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing config field '" + key + "'");
  }
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

Vec3 vec3_field(const json& cfg, const std::string& key,
                std::optional<Vec3> fallback = std::nullopt) {
  if (!cfg.contains(key) && fallback) return *fallback;
  const auto v = field<std::vector<double>>(cfg, key);
  if (v.size() != 3) throw ConfigError("config field '" + key + "' must have 3 entries");
  return Vec3(v[0], v[1], v[2]);
}

Mat3 mat3_field(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing config field '" + key + "'");
  const auto& node = cfg.at(key);
  if (node.is_array() && node.size() == 3 && node[0].is_number()) {
    // diagonal shorthand
    return Vec3(node[0].get<double>(), node[1].get<double>(), node[2].get<double>()).asDiagonal();
  }
  const auto rows = field<std::vector<std::vector<double>>>(cfg, key);
  if (rows.size() != 3 || rows[0].size() != 3) {
    throw ConfigError("config field '" + key + "' must be 3x3 or a 3-entry diagonal");
  }
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rows[size_t(i)][size_t(j)];
  return m;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const RMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json cmatrix_to_json(const Mat& m) {
  return json{{"re", matrix_to_json(m.real())}, {"im", matrix_to_json(m.imag())}};
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << body;
}

void write_json(const std::string& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::string csv_preamble(const std::string& command, const json& cfg) {
  std::ostringstream os;
  os << "# liegauss " << kVersion << " " << command << "\n";
  os << "# config: " << cfg.dump() << "\n";
  return os.str();
}

json output_skeleton(const std::string& command, const json& cfg) {
  return json{{"version", kVersion}, {"command", command}, {"config", cfg}};
}

// ---------------------------------------------------------------------------

int cmd_ptm(const json& cfg, const std::string& out_path, bool emit_choi_cmd) {
  const int qubits = field<int>(cfg, "qubits", 1);
  const bool emit_choi = emit_choi_cmd || field<bool>(cfg, "emit_choi", false);
  json out = output_skeleton(emit_choi_cmd ? "choi" : "ptm", cfg);

  if (qubits == 1) {
    const channel1q::NormalParams1Q params(mat3_field(cfg, "A"),
                                           vec3_field(cfg, "b", Vec3(Vec3::Zero())));
    const auto r = channel1q::ptm(params);
    out["results"]["ptm"] = matrix_to_json(r.r);
    if (emit_choi) {
      out["results"]["choi"] = cmatrix_to_json(channel1q::choi_from_fourier(params).c);
    }
  } else if (qubits == 2) {
    channel2q::PauliTransferMatrix2Q r;
    if (cfg.contains("isotropic")) {
      const auto& iso = cfg.at("isotropic");
      const channel2q::IsotropicNormalParams params(field<double>(iso, "a1"),
                                                    field<double>(iso, "a2"),
                                                    field<double>(iso, "rho"));
      r = channel2q::correlated_normal_ptm(params);
    } else {
      const auto rows = field<std::vector<std::vector<double>>>(cfg, "A");
      const auto bv = field<std::vector<double>>(cfg, "b",
                                                 std::vector<double>(6, 0.0));
      if (rows.size() != 6 || rows[0].size() != 6 || bv.size() != 6) {
        throw ConfigError("two-qubit config needs 6x6 'A' and 6-entry 'b' (or 'isotropic')");
      }
      channel2q::Mat6 a;
      channel2q::Vec6 b;
      for (int i = 0; i < 6; ++i) {
        b[i] = bv[size_t(i)];
        for (int j = 0; j < 6; ++j) a(i, j) = rows[size_t(i)][size_t(j)];
      }
      r = channel2q::ptm2(channel2q::NormalParams2Q(a, b));
    }
    out["results"]["ptm"] = matrix_to_json(r.full());
    if (emit_choi) out["results"]["choi"] = cmatrix_to_json(channel2q::choi2(r).c);
  } else {
    throw ConfigError("config field 'qubits' must be 1 or 2");
  }
  write_json(out_path, out);
  return 0;
}

int cmd_equiv_scan(const json& cfg, const std::string& out_path) {
  const int grid = field<int>(cfg, "grid", 60);
  const int k_max = field<int>(cfg, "kmax", 6);
  if (grid < 2) throw ConfigError("config field 'grid' must be >= 2");
  if (k_max < 0) throw ConfigError("config field 'kmax' must be >= 0");
  Vec3 b = vec3_field(cfg, "b_dir");
  if (cfg.contains("b_mag")) {
    if (b.norm() < 1e-14) throw ConfigError("config field 'b_dir' must be nonzero");
    b = field<double>(cfg, "b_mag") * b.normalized();
  }

  std::ostringstream os;
  os << csv_preamble("equiv-scan", cfg);
  os << "A11,A22,A33,count,infinite_flag\n";
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid - i; ++j) {
      const int k = grid - i - j;
      const Vec3 diag(double(i) / grid, double(j) / grid, double(k) / grid);
      long count = 0;
      bool infinite = false;
      try {
        const auto cls =
            channel1q::equivalence_class(channel1q::NormalParams1Q(diag.asDiagonal(), b), k_max);
        count = static_cast<long>(cls.members.size());
        // truncated families (every |k| <= k_max branch accepted) are not
        // exhausted either, so they carry the same flag
        infinite = cls.infinite || cls.truncated;
      } catch (const ExceptionalPointError&) {
        count = -1;  // recorded, not fatal
      }
      os << fmt_double(diag[0]) << ',' << fmt_double(diag[1]) << ',' << fmt_double(diag[2]) << ','
         << count << ',' << (infinite ? 1 : 0) << '\n';
    }
  }
  write_text(out_path, os.str());
  return 0;
}

int cmd_eig_trace(const json& cfg, const std::string& out_path) {
  const Mat3 a = mat3_field(cfg, "A");
  const Vec3 b_dir = vec3_field(cfg, "b_dir");
  const auto& mags = cfg.contains("magnitudes") ? cfg.at("magnitudes") : json::object();
  const double start = field<double>(mags, "start", 0.0);
  const double stop = field<double>(mags, "stop", 1.5);
  const int count = field<int>(mags, "count", 151);
  if (count < 2) throw ConfigError("config field 'magnitudes.count' must be >= 2");

  std::vector<double> magnitudes(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    magnitudes[size_t(i)] = start + (stop - start) * double(i) / double(count - 1);
  }
  const auto trace = channel1q::eigenvalue_trace(a, b_dir, magnitudes);

  std::ostringstream os;
  os << csv_preamble("eig-trace", cfg);
  os << "# pair_formation_magnitude: "
     << (trace.pair_formation ? fmt_double(*trace.pair_formation) : "none") << "\n";
  os << "b_mag,re1,im1,re2,im2,re3,im3,pair_formed\n";
  for (size_t i = 0; i < trace.magnitudes.size(); ++i) {
    const auto& ev = trace.eigenvalues[i];
    const bool formed = trace.pair_formation && trace.magnitudes[i] >= *trace.pair_formation;
    os << fmt_double(trace.magnitudes[i]);
    for (const auto& lambda : ev) {
      os << ',' << fmt_double(lambda.real()) << ',' << fmt_double(lambda.imag());
    }
    os << ',' << (formed ? 1 : 0) << '\n';
  }
  write_text(out_path, os.str());
  return 0;
}

int cmd_distill(const json& cfg, const std::string& out_path) {
  const std::string model_name = field<std::string>(cfg, "model");
  distill::ErrorModel model;
  if (model_name == "cP") {
    model = distill::ErrorModel::CorrelatedPauli;
  } else if (model_name == "c2") {
    model = distill::ErrorModel::CorrelatedNormal;
  } else {
    throw ConfigError("config field 'model' must be \"cP\" or \"c2\"");
  }
  const auto p_values = field<std::vector<double>>(cfg, "p_values");
  const auto corr_values = field<std::vector<double>>(cfg, "corr_values");
  if (p_values.empty() || corr_values.empty()) {
    throw ConfigError("config fields 'p_values' and 'corr_values' must be nonempty");
  }

  const auto rows = distill::fidelity_sweep(model, p_values, corr_values);
  std::ostringstream os;
  os << csv_preamble("distill", cfg);
  os << "# cnot_convention: pair1-controls\n";
  os << "p,corr,F_n,F_u,success_prob,degenerate\n";
  for (const auto& row : rows) {
    os << fmt_double(row.p) << ',' << fmt_double(row.correlation) << ',' << fmt_double(row.f_n)
       << ',' << fmt_double(row.f_u) << ',' << fmt_double(row.success_prob) << ','
       << (row.degenerate ? 1 : 0) << '\n';
  }
  write_text(out_path, os.str());
  return 0;
}

struct ValidateCheck {
  std::string name;
  RMat closed_form;
  RMat estimate;
  RMat std_error;
  double max_z = 0.0;
  bool pass = false;
};

ValidateCheck run_check_1q(const std::string& name, const channel1q::NormalParams1Q& params,
                           int steps, long samples, uint64_t seed) {
  ValidateCheck check;
  check.name = name;
  check.closed_form = channel1q::ptm(params).r;
  const auto est = channel1q::random_walk_ptm(params, steps, samples, seed);
  check.estimate = est.mean;
  check.std_error = est.std_error;
  check.max_z = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double diff = std::abs(est.mean(i, j) - check.closed_form(i, j));
      const double se = est.std_error(i, j);
      if (se == 0.0) {
        if (diff > 1e-12) check.max_z = std::numeric_limits<double>::infinity();
      } else {
        check.max_z = std::max(check.max_z, diff / se);
      }
    }
  check.pass = check.max_z <= 3.0;
  return check;
}

ValidateCheck run_check_2q(const std::string& name, const channel2q::NormalParams2Q& params,
                           const channel2q::Mat16& closed_form, int steps, long samples,
                           uint64_t seed) {
  ValidateCheck check;
  check.name = name;
  check.closed_form = closed_form;
  const auto est = channel2q::random_walk_ptm2(params, steps, samples, seed);
  check.estimate = est.mean;
  check.std_error = est.std_error;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double diff = std::abs(est.mean(i, j) - closed_form(i, j));
      const double se = est.std_error(i, j);
      if (se == 0.0) {
        if (diff > 1e-12) check.max_z = std::numeric_limits<double>::infinity();
      } else {
        check.max_z = std::max(check.max_z, diff / se);
      }
    }
  check.pass = check.max_z <= 3.0;
  return check;
}

int cmd_validate(const json& cfg, const std::string& out_path) {
  const auto seed = field<uint64_t>(cfg, "seed", uint64_t{20240817});
  const long samples = field<long>(cfg, "samples", long{100000});
  const int steps = field<int>(cfg, "steps", 100);

  std::vector<ValidateCheck> checks;
  checks.push_back(run_check_1q("1q identity (A=0, b=0)",
                                channel1q::NormalParams1Q(Mat3::Zero(), Vec3::Zero()), steps,
                                samples, seed));
  checks.push_back(run_check_1q(
      "1q diffusion A=diag(0.3,0.2,0.1)",
      channel1q::NormalParams1Q(Vec3(0.3, 0.2, 0.1).asDiagonal(), Vec3::Zero()), steps, samples,
      seed + 1));
  checks.push_back(
      run_check_1q("1q drift A=0.2*1, b=e_z",
                   channel1q::NormalParams1Q(0.2 * Mat3::Identity(), Vec3(0, 0, 1)), steps,
                   samples, seed + 2));

  checks.push_back(run_check_2q(
      "2q identity (A=0)", channel2q::NormalParams2Q(channel2q::Mat6::Zero(), channel2q::Vec6::Zero()),
      channel2q::PauliTransferMatrix2Q{}.full(), steps, samples, seed + 3));
  {
    const channel2q::IsotropicNormalParams iso(0.4, 0.4, 1.0);
    checks.push_back(run_check_2q("2q isotropic a=0.4, rho=1", iso.to_normal(),
                                  channel2q::correlated_normal_ptm(iso).full(), steps, samples,
                                  seed + 4));
  }
  {
    const channel2q::IsotropicNormalParams iso(0.5, 0.25, 0.0);
    checks.push_back(run_check_2q("2q block-diagonal a1=0.5, a2=0.25", iso.to_normal(),
                                  channel2q::correlated_normal_ptm(iso).full(), steps, samples,
                                  seed + 5));
  }

  json out = output_skeleton("validate", cfg);
  out["seed"] = seed;
  out["samples"] = samples;
  out["steps"] = steps;
  bool all_pass = true;
  json report = json::array();
  for (const auto& check : checks) {
    all_pass = all_pass && check.pass;
    report.push_back(json{{"name", check.name},
                          {"closed_form", matrix_to_json(check.closed_form)},
                          {"estimate", matrix_to_json(check.estimate)},
                          {"std_error", matrix_to_json(check.std_error)},
                          {"max_z", check.max_z},
                          {"pass", check.pass}});
    std::fprintf(stderr, "[%s] %s (max |z| = %.3f)\n", check.pass ? "pass" : "FAIL",
                 check.name.c_str(), check.max_z);
  }
  out["checks"] = report;
  out["pass"] = all_pass;
  write_json(out_path, out);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liegauss: normal quantum channels on SU(2) and SU(2)xSU(2)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path, out_path;
  std::optional<uint64_t> seed_flag;
  std::optional<long> samples_flag;
  std::optional<int> steps_flag, kmax_flag, grid_flag;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", out_path, "output path ('-' = stdout)");
    cmd->add_option("--seed", seed_flag, "seed override");
    cmd->add_option("--samples", samples_flag, "Monte-Carlo sample count override");
    cmd->add_option("--steps", steps_flag, "random-walk step count override");
    cmd->add_option("--kmax", kmax_flag, "branch index bound override");
    cmd->add_option("--grid", grid_flag, "simplex grid resolution override");
  };

  auto* ptm = app.add_subcommand("ptm", "transfer matrix of a normal channel");
  auto* choi = app.add_subcommand("choi", "Choi matrix of a normal channel");
  auto* equiv = app.add_subcommand("equiv-scan", "equivalence-class counts over the simplex tr A = 1");
  auto* eig = app.add_subcommand("eig-trace", "generator eigenvalues vs drift magnitude");
  auto* dist = app.add_subcommand("distill", "distillation fidelity sweep");
  auto* val = app.add_subcommand("validate", "random-walk Monte-Carlo validation of closed forms");
  for (auto* cmd : {ptm, choi, equiv, eig, dist, val}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = load_config(config_path);
    if (seed_flag) cfg["seed"] = *seed_flag;
    if (samples_flag) cfg["samples"] = *samples_flag;
    if (steps_flag) cfg["steps"] = *steps_flag;
    if (kmax_flag) cfg["kmax"] = *kmax_flag;
    if (grid_flag) cfg["grid"] = *grid_flag;

    if (ptm->parsed()) return cmd_ptm(cfg, out_path, false);
    if (choi->parsed()) return cmd_ptm(cfg, out_path, true);
    if (equiv->parsed()) return cmd_equiv_scan(cfg, out_path);
    if (eig->parsed()) return cmd_eig_trace(cfg, out_path);
    if (dist->parsed()) return cmd_distill(cfg, out_path);
    if (val->parsed()) return cmd_validate(cfg, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
