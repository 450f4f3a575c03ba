/*
 * Copyright 2026 The PVL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "io.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

namespace pvl {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr char kMagic[4] = {'P', 'V', 'L', '1'};

void write_exact(std::ofstream& out, const void* data, std::size_t len) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!out) throw IoError("field dump: write failed");
}

void write_components(const std::string& path, const Grid& g,
                      const std::vector<const ScalarField*>& comps) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(strprintf("cannot open '%s' for writing", path.c_str()));
  write_exact(out, kMagic, 4);
  const std::uint8_t dim = static_cast<std::uint8_t>(g.dim);
  const std::uint8_t nc = static_cast<std::uint8_t>(comps.size());
  const std::uint32_t n = static_cast<std::uint32_t>(g.n);
  write_exact(out, &dim, 1);
  write_exact(out, &nc, 1);
  write_exact(out, &n, 4);  // stored little-endian; pvl targets LE hosts
  for (const ScalarField* c : comps)
    write_exact(out, c->v.data(), c->v.size() * sizeof(double));
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(strprintf("cannot create directory '%s': %s", dir.c_str(),
                                  ec.message().c_str()));
}

void write_field_dump(const std::string& path, const VectorField& u) {
  std::vector<const ScalarField*> comps;
  for (const auto& c : u.comp) comps.push_back(&c);
  write_components(path, u.grid, comps);
}

void write_field_dump(const std::string& path, const ScalarField& f) {
  write_components(path, f.grid, {&f});
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(strprintf("cannot open '%s'", path.c_str()));
  char magic[4];
  std::uint8_t dim = 0, nc = 0;
  std::uint32_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&dim), 1);
  in.read(reinterpret_cast<char*>(&nc), 1);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(strprintf("'%s' is not a PVL1 field dump", path.c_str()));
  FieldDump d;
  d.grid = Grid(dim, static_cast<int>(n));
  d.components.assign(nc, ScalarField(d.grid));
  for (auto& c : d.components) {
    in.read(reinterpret_cast<char*>(c.v.data()),
            static_cast<std::streamsize>(c.v.size() * sizeof(double)));
    if (!in) throw IoError(strprintf("'%s': truncated field dump", path.c_str()));
  }
  return d;
}

void write_field_csv(const std::string& path, const VectorField& u) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(strprintf("cannot open '%s' for writing", path.c_str()));
  const Grid& g = u.grid;
  const char* coords[3] = {"x", "y", "z"};
  for (int d = 0; d < g.dim; ++d) out << coords[d] << ",";
  for (int d = 0; d < g.dim; ++d) out << "u" << d + 1 << (d + 1 < g.dim ? "," : "\n");
  double x[3];
  const std::size_t np = g.points();
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, x);
    for (int d = 0; d < g.dim; ++d) out << fmt_double(x[d]) << ",";
    for (int d = 0; d < g.dim; ++d)
      out << fmt_double(u.comp[d].v[i]) << (d + 1 < g.dim ? "," : "\n");
  }
  if (!out) throw IoError("field csv: write failed");
}

void save_trajectory(const std::string& dir, const Trajectory& traj,
                     const TrajectoryMeta& meta) {
  ensure_directory(dir);
  std::ofstream man(fs::path(dir) / "trajectory.manifest", std::ios::trunc);
  if (!man) throw IoError(strprintf("cannot write manifest in '%s'", dir.c_str()));
  man << "format = pvl-trajectory/1\n";
  man << "q = " << fmt_double(traj.q) << "\n";
  man << "T = " << fmt_double(traj.T) << "\n";
  man << "K = " << traj.K() << "\n";
  man << "grid.dim = " << traj.grid().dim << "\n";
  man << "grid.n = " << traj.grid().n << "\n";
  man << "form = " << to_string(meta.form) << "\n";
  man << "family = " << meta.family << "\n";
  man << "params = " << (meta.params.empty() ? "none" : meta.params) << "\n";
  for (int k = 0; k <= traj.K(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "node_%04d.pvl", k);
    write_field_dump((fs::path(dir) / name).string(), traj.nodes[k]);
  }
}

Trajectory load_trajectory(const std::string& dir, TrajectoryMeta* meta_out) {
  std::ifstream man(fs::path(dir) / "trajectory.manifest");
  if (!man) throw IoError(strprintf("no trajectory manifest in '%s'", dir.c_str()));
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(man, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw IoError(strprintf("trajectory manifest is missing '%s'", key));
    return it->second;
  };
  if (need("format") != "pvl-trajectory/1")
    throw IoError("unsupported trajectory format");

  Trajectory traj;
  traj.q = std::stod(need("q"));
  traj.T = std::stod(need("T"));
  const int K = std::stoi(need("K"));
  const Grid g(std::stoi(need("grid.dim")), std::stoi(need("grid.n")));
  traj.nodes.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "node_%04d.pvl", k);
    FieldDump d = read_field_dump((fs::path(dir) / name).string());
    if (d.grid != g || static_cast<int>(d.components.size()) != g.dim)
      throw IoError(strprintf("trajectory node %d does not match the manifest grid", k));
    VectorField u(g);
    u.comp = std::move(d.components);
    traj.nodes.push_back(std::move(u));
  }
  if (meta_out) {
    meta_out->form = pde_form_from_string(need("form"));
    meta_out->family = need("family");
    meta_out->params = kv.count("params") ? kv["params"] : "";
  }
  traj.validate();
  return traj;
}

namespace {

ordered_json stochastic_block(const StochasticReport& stoch) {
  ordered_json s;
  s["delta"] = stoch.delta;
  s["common_random_numbers"] = stoch.common_random_numbers;
  s["master_seed"] = stoch.master_seed;
  s["samples"] = stoch.samples;
  s["energy_mc"] = stoch.energy_mc;
  s["energy_mc_stderr"] = stoch.energy_mc_stderr;
  s["theta_crit"] = stoch.theta_crit;
  s["det_defect_max"] = stoch.det_defect_max;
  ordered_json sf = ordered_json::array();
  for (const auto& f : stoch.fields) {
    ordered_json e;
    e["profile"] = f.profile;
    e["envelope"] = f.envelope;
    e["derivative"] = f.derivative;
    e["stderr"] = f.stderr_;
    sf.push_back(e);
  }
  s["fields"] = sf;
  s["verdict"] = to_string(stoch.verdict);
  return s;
}

}  // namespace

std::string stochastic_report_to_json(const StochasticReport& rep) {
  ordered_json j;
  j["schema"] = "pvl-stochastic-report/1";
  j["stochastic"] = stochastic_block(rep);
  return j.dump(2) + "\n";
}

std::string report_to_json(const VariationReport& rep, const StochasticReport* stoch,
                           const std::string& scenario_name, const std::string& claim) {
  ordered_json j;
  j["schema"] = "pvl-variation-report/1";
  if (!scenario_name.empty()) j["scenario"] = scenario_name;
  if (!claim.empty()) j["claim"] = claim;
  j["inputs_digest"] = rep.inputs_digest;
  j["q"] = rep.q;
  j["T"] = rep.T;
  j["K"] = rep.K;
  j["grid_n"] = rep.grid_n;
  j["grid_dim"] = rep.grid_dim;
  j["pde_form"] = to_string(rep.form);
  j["delta"] = rep.delta;
  j["energy_at_zero"] = rep.energy_at_zero;
  j["energy_scale"] = rep.energy_scale;
  j["theta_crit"] = rep.theta_crit;
  j["theta_res"] = rep.theta_res;
  j["residual_norm_rel"] = rep.residual_norm_rel;
  j["max_abs_derivative_fd"] = rep.max_abs_fd;
  j["sign_convention"] = rep.sign_convention;
  ordered_json fields = ordered_json::array();
  for (const auto& f : rep.fields) {
    ordered_json e;
    e["profile"] = f.profile;
    e["envelope"] = f.envelope;
    e["derivative_fd"] = f.fd;
    e["derivative_fd_plain"] = f.fd_plain;
    e["derivative_fd_truncation"] = f.fd_truncation;
    e["derivative_analytic"] = f.analytic;
    e["derivative_el"] = f.el;
    e["abs_fd_minus_analytic"] = std::fabs(f.fd - f.analytic);
    e["abs_analytic_plus_el"] = std::fabs(f.analytic + f.el);
    fields.push_back(e);
  }
  j["fields"] = fields;
  j["derivative_small"] = rep.derivative_small;
  j["residual_small"] = rep.residual_small;
  j["verdict"] = to_string(rep.verdict);

  if (stoch) j["stochastic"] = stochastic_block(*stoch);
  return j.dump(2) + "\n";
}

void write_series_csv(const std::string& path, const Trajectory& traj,
                      const ResidualScan& scan) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(strprintf("cannot open '%s' for writing", path.c_str()));
  out << "t,energy_integrand,residual_raw_l2,residual_projected_l2\n";
  const int K = traj.K();
  std::size_t si = 0;
  for (int k = 0; k <= K; ++k) {
    out << fmt_double(traj.time(k)) << ","
        << fmt_double(lq_integral(traj.nodes[k], traj.q) / traj.q) << ",";
    if (si < scan.node.size() && scan.node[si] == k) {
      out << fmt_double(scan.raw_l2[si]) << "," << fmt_double(scan.projected_l2[si]) << "\n";
      ++si;
    } else {
      out << ",\n";
    }
  }
}

void write_ensemble_csv(const std::string& path, const FlowEnsemble& ens,
                        const McEstimate& energy) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(strprintf("cannot open '%s' for writing", path.c_str()));
  out << "sample,energy,det_min,det_max\n";
  for (int s = 0; s < ens.cfg.samples; ++s) {
    out << s << "," << fmt_double(energy.per_sample[s]) << ","
        << fmt_double(ens.det_min[s]) << "," << fmt_double(ens.det_max[s]) << "\n";
  }
}

}  // namespace pvl
