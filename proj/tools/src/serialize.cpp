#include "mchcli/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#ifndef MCH_VERSION
#define MCH_VERSION "unknown"
#endif

namespace mch::cli {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* tool_version() { return MCH_VERSION; }

Provenance make_provenance(std::string command,
                           std::vector<std::pair<std::string, std::string>> parameters) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {std::move(command), std::move(parameters), buf};
}

void write_csv(std::ostream& os, const Provenance& prov, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  os << "# tool: mchlab " << tool_version() << '\n';
  os << "# command: " << prov.command << '\n';
  for (const auto& [key, value] : prov.parameters) os << "# " << key << ": " << value << '\n';
  os << "# timestamp: " << prov.timestamp << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Provenance& prov, const Json& body) {
  Json p;
  p["tool"] = "mchlab";
  p["version"] = tool_version();
  p["command"] = prov.command;
  for (const auto& [key, value] : prov.parameters) p[key] = value;
  p["timestamp"] = prov.timestamp;
  Json doc;
  doc["provenance"] = p;
  for (const auto& [key, value] : body.items()) doc[key] = value;
  os << doc.dump(2) << '\n';
}

Json to_json(const WaveParams& p) {
  return {{"k", p.k},         {"L", p.L},
          {"a", p.a},         {"b", p.b},
          {"c", p.c},         {"A", p.A},
          {"A_closed_form", number(p.A_closed_form)},
          {"K", p.K},         {"E", p.E}};
}

Json to_json(const SnoidalParams& s) { return {{"alpha", s.alpha}, {"beta", s.beta}}; }

Json to_json(const ValidityReport& v) {
  return {{"discriminant", number(v.discriminant)},
          {"discriminant_ok", v.discriminant_ok},
          {"ineq_i_value", number(v.ineq_i_value)},
          {"ineq_ii_margin", number(v.ineq_ii_margin)},
          {"all_ok", v.all_ok}};
}

Json to_json(const SpectralReport& r) {
  Json re = Json::array();
  Json im = Json::array();
  for (const auto& l : r.eigenvalues) {
    re.push_back(l.real());
    im.push_back(l.imag());
  }
  Json j;
  j["kind"] = r.kind == OperatorKind::selfadjoint_L ? "selfadjoint_L" : "evolution_dxL";
  j["eigenvalues"] = re;
  if (r.kind == OperatorKind::evolution_dxL) j["eigenvalues_imag"] = im;
  j["n_neg"] = r.n_neg;
  j["z_dim"] = r.z_dim;
  j["n_pos"] = r.n_pos;
  j["n_center"] = r.n_center;
  j["tol"] = r.tol;
  j["spectral_radius"] = r.spectral_radius;
  j["kernel_gap"] = r.kernel_gap;
  j["max_real_part"] = r.max_real_part;
  j["grid"] = {{"L", r.grid.period()}, {"n", r.grid.size()}};
  return j;
}

Json to_json(const PairingResult& r) {
  return {{"pairing", r.value},
          {"residual", r.residual},
          {"kernel_dim", r.kernel_dim},
          {"tol", r.tol}};
}

Json to_json(const MorseReport& r) {
  return {{"n_L", r.n_L},
          {"z_L", r.z_L},
          {"pairing", r.pairing},
          {"pairing_zero", r.pairing_zero},
          {"n_L_Y0_direct", r.n_Y0_direct},
          {"z_L_Y0_direct", r.z_Y0_direct},
          {"n_L_Y0_formula", r.n_Y0_formula},
          {"z_L_Y0_formula", r.z_Y0_formula},
          {"holds", r.holds},
          {"tol", r.tol}};
}

Json to_json(const IndexSample& s) {
  return {{"k", s.k},
          {"L", s.L},
          {"valid", s.valid},
          {"I", number(s.I)},
          {"I_coarse", number(s.I_coarse)},
          {"I_direct_v", number(s.I_direct_v)},
          {"dA_dk", s.components.dA_dk},
          {"dc_dk", s.components.dc_dk},
          {"dV_dk", s.components.dV_dk},
          {"dF_dk", s.components.dF_dk},
          {"fd_rel_change", s.fd_rel_change},
          {"I_rel_change", s.I_rel_change},
          {"h", s.h},
          {"note", s.note}};
}

Json to_json(const ScanSummary& s) {
  return {{"min_I", number(s.min_I)},
          {"max_I", number(s.max_I)},
          {"count_valid", s.count_valid},
          {"count_positive", s.count_positive},
          {"count_invalid", s.count_invalid},
          {"count_fd_failed", s.count_fd_failed},
          {"max_fd_rel_change", s.max_fd_rel_change},
          {"max_I_rel_change", s.max_I_rel_change}};
}

Json to_json(const DSecondReport& r) {
  return {{"k", r.k},
          {"L_star", r.L_star},
          {"c", r.c},
          {"dL_dk", r.dL_dk},
          {"d_prime_chain", r.d_prime_chain},
          {"d_prime_direct", r.d_prime_direct},
          {"d_prime_corrected", r.d_prime_corrected},
          {"d_second", r.d_second},
          {"d_second_direct", r.d_second_direct},
          {"rel_disagreement", r.rel_disagreement}};
}

Json to_json(const KreinReport& r) {
  return {{"branch_found", r.branch_found},
          {"L_star", r.L_star},
          {"n_L", r.n_L},
          {"z_L", r.z_L},
          {"n_L_Y0", r.n_L_Y0},
          {"n_L_Y0_formula", r.n_L_Y0_formula},
          {"z_L_Y0", r.z_L_Y0},
          {"pairing", r.pairing},
          {"D", number(r.D)},
          {"n_D", r.n_D},
          {"K_Ham", r.K_Ham},
          {"classification", to_string(r.classification)},
          {"note", r.note}};
}

Json to_json(const StabilityRunReport& r) {
  return {{"terminated", to_string(r.terminated)},
          {"dt", r.dt},
          {"steps", r.steps},
          {"max_rho", r.max_rho()},
          {"max_drift", r.max_drift()},
          {"t", numbers(r.times)},
          {"rho", numbers(r.rho)},
          {"drift_E", numbers(r.drift_E)},
          {"drift_F", numbers(r.drift_F)},
          {"drift_V", numbers(r.drift_V)}};
}

Json to_json(const LinearGrowthReport& r) {
  return {{"rate_overall", r.rate_overall},
          {"rate_fit", r.rate_fit},
          {"norm_ratio_max_dev", r.norm_ratio_max_dev},
          {"dt", r.dt},
          {"steps", r.steps}};
}

}  // namespace mch::cli
