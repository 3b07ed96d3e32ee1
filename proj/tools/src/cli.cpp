#include "mchcli/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "mch/errors.hpp"
#include "mch/evolve.hpp"
#include "mch/indices.hpp"
#include "mch/linop.hpp"
#include "mchcli/checks.hpp"
#include "mchcli/serialize.hpp"

namespace mch::cli {
namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

struct Output {
  std::string dir;
  std::string format = "json";
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Output output;
  std::string command;
  Params params;
};

// Every option of a subcommand with its effective value, in declaration order.
Params collect(const CLI::App& sub) {
  Params p;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
    }
    if (value.empty() && opt->get_type_size() == 0) value = "false";
    p.emplace_back(name, value);
  }
  return p;
}

void emit(Context& ctx, const std::string& name, const std::string& ext,
          const std::function<void(std::ostream&)>& write) {
  if (ctx.output.dir.empty()) {
    write(ctx.out);
    return;
  }
  std::filesystem::create_directories(ctx.output.dir);
  const std::filesystem::path path = std::filesystem::path(ctx.output.dir) / (name + "." + ext);
  std::ofstream f(path);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  write(f);
  ctx.err << "wrote " << path.string() << '\n';
}

void emit_json(Context& ctx, const std::string& name, const Json& body) {
  const Provenance prov = make_provenance(ctx.command, ctx.params);
  emit(ctx, name, "json", [&](std::ostream& os) { write_json(os, prov, body); });
}

void emit_csv(Context& ctx, const std::string& name, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  const Provenance prov = make_provenance(ctx.command, ctx.params);
  emit(ctx, name, "csv", [&](std::ostream& os) { write_csv(os, prov, header, rows); });
}

CLI::Option* add_length(CLI::App* sub, const std::string& flag, std::string& target,
                        const std::string& help) {
  return sub
      ->add_option(flag, target, help)
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              parse_length(s);
            } catch (const std::invalid_argument&) {
              return "not a length: " + s;
            }
            return {};
          },
          "LENGTH", "length"));
}

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.dir, "Write artifacts into this directory instead of stdout");
  sub->add_option("--format", o.format, "Artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// wave ------------------------------------------------------------------

struct WaveArgs {
  double k = 0.5;
  std::string L = "6pi";
  int n = 256;
};

int cmd_wave(Context& ctx, const WaveArgs& a) {
  const double L = parse_length(a.L);
  const ValidityReport vr = validity(a.k, L, a.n);
  if (!vr.discriminant_ok) {
    ctx.err << "error: period too small for this modulus: discriminant " << format_double(vr.discriminant)
            << " <= 0 at k=" << format_double(a.k) << ", L=" << format_double(L) << '\n';
    ctx.err << to_json(vr).dump() << '\n';
    return kExitDomain;
  }
  const WaveParams p = wave_params(a.k, L);
  if (ctx.output.format == "csv") {
    const PeriodicGrid grid(L, a.n);
    const ProfileFields f = sample_profile(p, grid);
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < a.n; ++j) rows.push_back({grid.node(j), f.phi[j], f.phi1[j], f.phi2[j]});
    emit_csv(ctx, "wave", {"x", "phi", "phi_x", "phi_xx"}, rows);
  } else {
    Json body;
    body["wave"] = to_json(p);
    body["snoidal"] = to_json(snoidal_form(p));
    body["validity"] = to_json(vr);
    body["ode_residual"] = ode_residual(p, a.n);
    emit_json(ctx, "wave", body);
  }
  if (!vr.all_ok) {
    ctx.err << "error: (k, L) outside the validity region: " << to_json(vr).dump() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

// scan ------------------------------------------------------------------

struct ScanArgs {
  double k_min = 0.01;
  double k_max = 0.2;
  std::string L_min = "3pi";
  std::string L_max = "6pi";
  int nk = 20;
  int nL = 20;
  double h = 1e-3;
  int quadrature = 256;
  unsigned threads = 0;
};

int cmd_scan(Context& ctx, const ScanArgs& a) {
  IndexOptions opts;
  opts.h = a.h;
  opts.quadrature_points = a.quadrature;
  const IndexScan scan = index_scan({a.k_min, a.k_max}, {parse_length(a.L_min), parse_length(a.L_max)},
                                    a.nk, a.nL, opts, a.threads);
  if (ctx.output.format == "csv") {
    std::vector<std::vector<double>> rows;
    for (const IndexSample& s : scan.cells) {
      rows.push_back({s.k, s.L, s.I, s.valid ? 1.0 : 0.0, s.components.dA_dk, s.components.dc_dk,
                      s.components.dV_dk, s.components.dF_dk, s.I_rel_change});
    }
    emit_csv(ctx, "scan",
             {"k", "L", "I", "valid", "dA_dk", "dc_dk", "dV_dk", "dF_dk", "I_rel_change"}, rows);
    if (!ctx.output.dir.empty()) emit_json(ctx, "scan_summary", {{"summary", to_json(scan.summary)}});
  } else {
    Json cells = Json::array();
    for (const IndexSample& s : scan.cells) cells.push_back(to_json(s));
    emit_json(ctx, "scan", {{"summary", to_json(scan.summary)}, {"cells", cells}});
  }
  ctx.err << "max I = " << format_double(scan.summary.max_I) << " (" << scan.summary.count_valid
          << " valid, " << scan.summary.count_invalid << " invalid, "
          << scan.summary.count_fd_failed << " fd failures)\n";
  return kExitOk;
}

// spectrum --------------------------------------------------------------

struct SpectrumArgs {
  double k = 0.5;
  std::string L = "6pi";
  int n = 256;
  double tol = 0.0;
  bool constant = false;
  bool restricted = false;
  bool evolution = false;
};

int cmd_spectrum(Context& ctx, const SpectrumArgs& a) {
  const double L = parse_length(a.L);
  const WaveParams p = a.constant ? constant_wave(L) : wave_params(a.k, L);
  const ProfileFields f = sample_profile(p, PeriodicGrid(L, a.n));
  const OperatorMatrix m = a.evolution ? assemble_dxl(f.phi, f.phi2, p.c) : assemble_l(f.phi, f.phi2, p.c);
  const std::optional<double> tol = a.tol > 0.0 ? std::optional<double>(a.tol) : std::nullopt;
  const SpectralReport r = a.restricted ? restricted_spectrum(m, tol) : spectrum(m, tol);

  if (ctx.output.format == "csv") {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      rows.push_back({static_cast<double>(i), r.eigenvalues[i].real(), r.eigenvalues[i].imag()});
    }
    emit_csv(ctx, "spectrum", {"index", "re", "im"}, rows);
  } else {
    Json body = to_json(r);
    if (!a.evolution) {
      body["divergence_defect"] = m.divergence_defect;
      const SpectralReport full = a.restricted ? spectrum(m, tol) : r;
      if (full.z_dim == 1 || a.constant) {
        body["morse"] = to_json(morse_check(m, a.constant));
      }
    }
    emit_json(ctx, "spectrum", body);
  }
  ctx.err << "n_neg = " << r.n_neg << ", z_dim = " << r.z_dim
          << ", max Re = " << format_double(r.max_real_part) << '\n';
  return kExitOk;
}

// krein -----------------------------------------------------------------

struct KreinArgs {
  double k = 0.99;
  std::string L_min = "6pi";
  std::string L_max = "20pi";
  int n = 256;
};

int cmd_krein(Context& ctx, const KreinArgs& a) {
  const double lo = parse_length(a.L_min);
  const double hi = parse_length(a.L_max);
  const KreinReport r = krein_index(a.k, lo, hi, a.n);
  Json body = to_json(r);
  if (r.branch_found && !std::isnan(r.D)) {
    if (const auto ds = d_second(a.k, lo, hi)) body["d_second"] = to_json(*ds);
  }
  emit_json(ctx, "krein", body);
  ctx.err << "classification = " << to_string(r.classification);
  if (!r.note.empty()) ctx.err << " (" << r.note << ")";
  ctx.err << '\n';
  return kExitOk;
}

// evolve / orbit --------------------------------------------------------

struct EvolveArgs {
  double k = 0.5;
  std::string L = "6pi";
  int n = 256;
  double dt = 0.0;
  double t_end = 5.0;
  int monitor_every = 10;
  int pad = 2;
  double delta = 0.0;
  std::uint64_t seed = 1;
  double rho_factor = 100.0;
  int modes = 8;
};

std::vector<std::vector<double>> run_rows(const StabilityRunReport& r,
                                          const std::vector<double>* extra) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<double> row{r.times[i], i < r.rho.size() ? r.rho[i] : 0.0, r.drift_E[i],
                            r.drift_F[i], r.drift_V[i]};
    if (extra) row.push_back((*extra)[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_evolve(Context& ctx, const EvolveArgs& a) {
  const WaveParams p = wave_params(a.k, parse_length(a.L));
  const PeriodicGrid grid(p.L, a.n);
  const PeriodicField phi = sample_profile(p, grid).phi;
  PeriodicField u0 = phi;
  if (a.delta > 0.0) u0 += a.delta * random_perturbation(grid, a.seed, a.modes);

  EvolutionConfig cfg;
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  cfg.monitor_every = a.monitor_every;
  cfg.dealias_pad = a.pad;
  cfg.speed_hint = p.c;
  RunMonitor mon;
  mon.reference = phi;
  std::vector<double> tw_error;
  mon.observer = [&](double t, const PeriodicField& u) {
    tw_error.push_back((u - shift(phi, -p.c * t)).sup_norm());
  };
  const RunResult res = run(u0, cfg, mon);
  tw_error.resize(res.report.times.size());

  if (ctx.output.format == "csv") {
    emit_csv(ctx, "evolve", {"t", "rho", "drift_E", "drift_F", "drift_V", "tw_error"},
             run_rows(res.report, &tw_error));
  } else {
    Json body = to_json(res.report);
    Json tw = Json::array();
    for (double e : tw_error) tw.push_back(e);
    body["tw_error"] = tw;
    emit_json(ctx, "evolve", body);
  }
  double worst = 0.0;
  for (double e : tw_error) worst = std::max(worst, e);
  ctx.err << "terminated = " << to_string(res.report.terminated)
          << ", max traveling-wave error = " << format_double(worst)
          << ", max drift = " << format_double(res.report.max_drift()) << '\n';
  return kExitOk;
}

int cmd_orbit(Context& ctx, const EvolveArgs& a) {
  const WaveParams p = wave_params(a.k, parse_length(a.L));
  EvolutionConfig cfg;
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  cfg.monitor_every = a.monitor_every;
  cfg.dealias_pad = a.pad;
  const RunResult res = orbital_experiment(p, a.delta, a.seed, a.n, cfg, {a.rho_factor, a.modes});
  if (ctx.output.format == "csv") {
    emit_csv(ctx, "orbit", {"t", "rho", "drift_E", "drift_F", "drift_V"}, run_rows(res.report, nullptr));
  } else {
    emit_json(ctx, "orbit", to_json(res.report));
  }
  ctx.err << "terminated = " << to_string(res.report.terminated)
          << ", sup rho = " << format_double(res.report.max_rho());
  if (a.delta > 0.0) ctx.err << ", sup rho / delta = " << format_double(res.report.max_rho() / a.delta);
  ctx.err << '\n';
  return kExitOk;
}

// check -----------------------------------------------------------------

int cmd_check(Context& ctx, const std::vector<int>& only) {
  std::vector<int> ids = only;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id);
    ctx.out << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

double parse_length(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double factor = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = std::numbers::pi;
    s.remove_suffix(2);
    if (s.empty()) return factor;
    if (s.back() == '*') s.remove_suffix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty length");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a length: " + std::string(text));
  }
  return v * factor;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for periodic waves of the modified Camassa-Holm equation", "mchlab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mchlab ") + tool_version());

  Output o_wave, o_scan, o_spec, o_krein, o_evolve, o_orbit;
  o_scan.format = "csv";
  o_evolve.format = "csv";
  o_orbit.format = "csv";

  WaveArgs wave;
  CLI::App* s_wave = app.add_subcommand("wave", "Wave parameters, validity margins and ODE residual");
  s_wave->add_option("--k", wave.k, "Elliptic modulus in (0, 1)");
  add_length(s_wave, "--L", wave.L, "Period (accepts a pi suffix, e.g. 6pi)");
  s_wave->add_option("--n", wave.n, "Sample count");
  add_output(s_wave, o_wave);

  ScanArgs scan;
  CLI::App* s_scan = app.add_subcommand("scan", "Stability index I over a (k, L) grid");
  s_scan->add_option("--k-min", scan.k_min, "Lower k (excluded)");
  s_scan->add_option("--k-max", scan.k_max, "Upper k (included)");
  add_length(s_scan, "--L-min", scan.L_min, "Lower period");
  add_length(s_scan, "--L-max", scan.L_max, "Upper period");
  s_scan->add_option("--nk", scan.nk, "Cells in k");
  s_scan->add_option("--nL", scan.nL, "Cells in L");
  s_scan->add_option("--fd-step", scan.h, "Finite-difference step in k");
  s_scan->add_option("--quadrature", scan.quadrature, "Samples for F and V");
  s_scan->add_option("--threads", scan.threads, "Worker threads (0 = all cores)");
  add_output(s_scan, o_scan);

  SpectrumArgs spec;
  CLI::App* s_spec = app.add_subcommand("spectrum", "Eigenvalues of L, L on Y0, or d/dx L");
  s_spec->add_option("--k", spec.k, "Elliptic modulus");
  add_length(s_spec, "--L", spec.L, "Period");
  s_spec->add_option("--n", spec.n, "Grid size");
  s_spec->add_option("--tol", spec.tol, "Zero tolerance (0 = 1e-12 x spectral radius)");
  s_spec->add_flag("--constant", spec.constant, "Use the constant state instead of a wave");
  s_spec->add_flag("--restricted", spec.restricted, "Restrict to zero-mean functions");
  s_spec->add_flag("--evolution", spec.evolution, "Use d/dx L instead of L");
  add_output(s_spec, o_spec);

  KreinArgs krein;
  CLI::App* s_krein = app.add_subcommand("krein", "Zero-mean branch, d''(c) and the Krein index");
  s_krein->add_option("--k", krein.k, "Elliptic modulus");
  add_length(s_krein, "--L-min", krein.L_min, "Lower end of the period bracket");
  add_length(s_krein, "--L-max", krein.L_max, "Upper end of the period bracket");
  s_krein->add_option("--n", krein.n, "Grid size");
  add_output(s_krein, o_krein);

  EvolveArgs evolve;
  CLI::App* s_evolve = app.add_subcommand("evolve", "Propagate a wave and monitor conservation");
  EvolveArgs orbit;
  orbit.delta = 1e-3;
  orbit.t_end = 50.0;
  CLI::App* s_orbit = app.add_subcommand("orbit", "Perturbed-wave orbital distance experiment");
  for (auto [sub, args] : {std::pair{s_evolve, &evolve}, std::pair{s_orbit, &orbit}}) {
    sub->add_option("--k", args->k, "Elliptic modulus");
    add_length(sub, "--L", args->L, "Period");
    sub->add_option("--n", args->n, "Grid size");
    sub->add_option("--dt", args->dt, "Time step (0 = automatic)");
    sub->add_option("--t-end", args->t_end, "Final time");
    sub->add_option("--monitor-every", args->monitor_every, "Steps between diagnostics");
    sub->add_option("--pad", args->pad, "Dealiasing refinement factor");
    sub->add_option("--delta", args->delta, "Perturbation size in H1");
    sub->add_option("--seed", args->seed, "Perturbation seed");
    sub->add_option("--modes", args->modes, "Perturbation bandwidth");
  }
  s_orbit->add_option("--rho-factor", orbit.rho_factor, "Stop once rho exceeds this times delta");
  add_output(s_evolve, o_evolve);
  add_output(s_orbit, o_orbit);

  std::vector<int> only;
  CLI::App* s_check = app.add_subcommand("check", "Run the acceptance criteria");
  s_check->add_option("--only", only, "Criterion ids (default: all)")->check(CLI::Range(1, kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx{out, err, {}, sub->get_name(), collect(*sub)};
  try {
    if (sub == s_wave) {
      ctx.output = o_wave;
      return cmd_wave(ctx, wave);
    }
    if (sub == s_scan) {
      ctx.output = o_scan;
      return cmd_scan(ctx, scan);
    }
    if (sub == s_spec) {
      ctx.output = o_spec;
      return cmd_spectrum(ctx, spec);
    }
    if (sub == s_krein) {
      ctx.output = o_krein;
      return cmd_krein(ctx, krein);
    }
    if (sub == s_evolve) {
      ctx.output = o_evolve;
      return cmd_evolve(ctx, evolve);
    }
    if (sub == s_orbit) {
      ctx.output = o_orbit;
      return cmd_orbit(ctx, orbit);
    }
    return cmd_check(ctx, only);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace mch::cli
