#include "run.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <thread>

#include "ldspec/birman_schwinger.hpp"
#include "ldspec/error.hpp"
#include "ldspec/parallel.hpp"
#include "ldspec/susy.hpp"

namespace ldspec::cli {

namespace {

json intervals(const std::vector<Interval>& v) {
  json out = json::array();
  for (const auto& i : v) out.push_back({i.lo, i.hi});
  return out;
}

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions s;
  s.tol = cfg.tol;
  s.c = cfg.reference_point;
  s.n_scan = cfg.n_scan;
  return s;
}

json bands(const RunConfig& cfg, json& engine) {
  const BandSet b = stability_intervals(cfg.model.q, cfg.model.r, cfg.z_range->lo, cfg.z_range->hi, scan_options(cfg));
  engine["n_scan"] = b.n_scan;
  json z = json::array(), d = json::array();
  for (const auto& s : b.samples) {
    z.push_back(s.z);
    d.push_back(s.delta);
  }
  return {{"scan_range", {b.scan_range.lo, b.scan_range.hi}},
          {"intervals", intervals(b.intervals)},
          {"components", intervals(b.components)},
          {"periodic", b.periodic},
          {"antiperiodic", b.antiperiodic},
          {"warnings", b.warnings},
          {"samples", {{"z", z}, {"delta", d}}}};
}

json eigs(const RunConfig& cfg, json& engine) {
  const auto& m = cfg.model;
  engine["n_scan"] = scan_grid(m.q, m.r, cfg.z_range->lo, cfg.z_range->hi, cfg.n_scan).size();
  json spectra = json::array();
  for (double theta : cfg.thetas) {
    const ThetaSpectrum s = theta_eigenvalues(m.q, m.r, theta, cfg.z_range->lo, cfg.z_range->hi, scan_options(cfg));
    spectra.push_back({{"theta", s.theta}, {"values", s.values}, {"unresolved", intervals(s.unresolved)}});
  }
  return {{"spectra", spectra}};
}

json bs(const RunConfig& cfg) {
  const auto& m = cfg.model;
  const auto out = parallel_map<BSpectrum>(cfg.thetas.size(), [&](std::size_t i) {
    return bs_spectrum(m.q, m.r, cfg.thetas[i], cfg.modes);
  });
  json spectra = json::array();
  for (const auto& s : out)
    spectra.push_back({{"theta", s.theta},
                       {"zeta", s.zeta},
                       {"z_values", s.z_values},
                       {"n_pos", s.n_pos},
                       {"n_neg", s.n_neg},
                       {"zeta_threshold", s.threshold},
                       {"min_eig_G", s.min_eig_G}});
  return {{"spectra", spectra}};
}

json validate(const RunConfig& cfg, json& engine) {
  const auto& m = cfg.model;
  engine["n_scan"] = scan_grid(m.q, m.r, cfg.z_range->lo, cfg.z_range->hi, cfg.n_scan).size();
  engine["limit"] = cfg.limit;
  CrossValidateOptions opts;
  opts.scan = scan_options(cfg);
  opts.limit = cfg.limit;
  json reports = json::array();
  double worst = 0.0;
  for (double theta : cfg.thetas) {
    const CrossValidation v = cross_validate(m.q, m.r, theta, cfg.modes, cfg.z_range->lo, cfg.z_range->hi, opts);
    json matches = json::array();
    for (const auto& e : v.matches)
      matches.push_back({{"z_floquet", e.z_floquet}, {"z_bs", e.z_bs}, {"rel_mismatch", e.rel_mismatch}});
    reports.push_back({{"theta", v.theta},
                       {"matches", matches},
                       {"unmatched_floquet", v.unmatched_floquet},
                       {"unmatched_bs", v.unmatched_bs},
                       {"max_rel_mismatch", v.max_rel_mismatch}});
    worst = std::max(worst, v.max_rel_mismatch);
  }
  return {{"reports", reports}, {"max_rel_mismatch", worst}};
}

struct SusyTheta {
  PartnerSpectra pair;
  std::vector<double> dirac;
  int kernel = 0;
  IsospectralReport iso;
  DiracSquareReport square;
  TransferReport transfer;
  SpectrumComparison miura;
};

json susy(const RunConfig& cfg, json& engine) {
  const MiuraField& phi = *cfg.model.phi;
  engine["kernel_threshold"] = cfg.kernel_threshold;
  const auto out = parallel_map<SusyTheta>(cfg.thetas.size(), [&](std::size_t i) {
    const double th = cfg.thetas[i];
    SusyTheta s;
    s.pair = schrodinger_pair_spectra(phi, th, cfg.modes);
    s.dirac = dirac_spectrum(phi, th, cfg.modes);
    s.kernel = kernel_dimension(phi, th, cfg.modes, cfg.kernel_threshold);
    s.iso = isospectral_check(phi, th, cfg.modes, cfg.kernel_threshold);
    s.square = dirac_square_check(phi, th, cfg.modes);
    s.transfer = eigvec_transfer_check(phi, th, cfg.modes, cfg.kernel_threshold);
    s.miura = miura_consistency_check(phi, th, cfg.modes);
    return s;
  });
  json spectra = json::array();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& s = out[i];
    spectra.push_back(
        {{"theta", cfg.thetas[i]},
         {"t1", s.pair.t1},
         {"t2", s.pair.t2},
         {"dirac", s.dirac},
         {"min_t1", s.pair.t1.front()},
         {"kernel_dimension", s.kernel},
         {"isospectral",
          {{"max_rel_mismatch", s.iso.max_rel_mismatch},
           {"matched", s.iso.matched},
           {"kernel_t1", s.iso.kernel_t1},
           {"kernel_t2", s.iso.kernel_t2},
           {"counts_agree", s.iso.counts_agree}}},
         {"dirac_square", {{"max_rel_mismatch", s.square.max_rel_mismatch}, {"compared", s.square.compared}}},
         {"eigvec_transfer",
          {{"checked", s.transfer.checked},
           {"max_eigen_residual", s.transfer.max_eigen_residual},
           {"max_residual", s.transfer.max_residual},
           {"max_adjoint_residual", s.transfer.max_adjoint_residual},
           {"max_norm_defect", s.transfer.max_norm_defect}}},
         {"miura_consistency", {{"max_rel_mismatch", s.miura.max_rel_mismatch}}}});
  }
  return {{"mean_phi", phi.mean()}, {"spectra", spectra}};
}

json miura(const RunConfig& cfg) {
  const PeriodicPotential q = miura_forward(*cfg.model.phi, cfg.partner);
  json atoms = json::array();
  for (const auto& a : q.atoms()) atoms.push_back(to_json(a));
  return {{"partner", cfg.partner == Partner::first ? "first" : "second"},
          {"potential", {{"period", q.period()}, {"q1", q.q1()}, {"q2", to_json(q.q2())}, {"atoms", atoms}}}};
}

std::string number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

json run(const RunConfig& cfg) {
  json engine{{"tol", cfg.tol}, {"reference_point", cfg.reference_point}};
  if (cfg.task == Task::bs || cfg.task == Task::susy || cfg.task == Task::validate) engine["modes"] = cfg.modes;
  json results;
  switch (cfg.task) {
    case Task::bands: results = bands(cfg, engine); break;
    case Task::eigs: results = eigs(cfg, engine); break;
    case Task::bs: results = bs(cfg); break;
    case Task::susy: results = susy(cfg, engine); break;
    case Task::miura: results = miura(cfg); break;
    case Task::validate: results = validate(cfg, engine); break;
  }
  json inputs{{"model", cfg.model_echo}, {"thetas", cfg.thetas}};
  if (cfg.z_range) inputs["z_range"] = {cfg.z_range->lo, cfg.z_range->hi};
  if (cfg.task == Task::miura) inputs["partner"] = results["partner"];
  return {{"schema_version", schema_version},
          {"task", task_name(cfg.task)},
          {"inputs", inputs},
          {"engine", engine},
          {"results", results}};
}

Outcome execute(const RunConfig& cfg) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.document = run(cfg);
  } catch (const PositivityError& e) {
    std::ostringstream os;
    os << "birman_schwinger: T_theta is not positive definite, min_eig_G = " << std::setprecision(17) << e.min_eig();
    return {exit_positivity, {}, os.str()};
  } catch (const Error& e) {
    return {exit_engine, {}, std::string("engine error in ") + e.what()};
  } catch (const std::exception& e) {
    return {exit_engine, {}, std::string("engine error: ") + e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.document["metadata"] = {{"generated_at", now_utc()},
                              {"wall_seconds", wall},
                              {"threads", std::max(1u, std::thread::hardware_concurrency())}};
  return out;
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string render_csv(const json& doc) {
  std::ostringstream os;
  const json& res = doc.at("results");
  const std::string task = doc.at("task");
  if (task == "bands") {
    os << "record,x,y\n";
    for (const auto& i : res["intervals"]) os << "band," << number(i[0]) << "," << number(i[1]) << "\n";
    for (const auto& z : res["periodic"]) os << "periodic," << number(z) << ",2\n";
    for (const auto& z : res["antiperiodic"]) os << "antiperiodic," << number(z) << ",-2\n";
    for (std::size_t k = 0; k < res["samples"]["z"].size(); ++k)
      os << "sample," << number(res["samples"]["z"][k]) << "," << number(res["samples"]["delta"][k]) << "\n";
  } else if (task == "eigs") {
    os << "theta,index,z\n";
    for (const auto& s : res["spectra"])
      for (std::size_t k = 0; k < s["values"].size(); ++k)
        os << number(s["theta"]) << "," << k << "," << number(s["values"][k]) << "\n";
  } else if (task == "bs") {
    os << "theta,index,zeta\n";
    for (const auto& s : res["spectra"])
      for (std::size_t k = 0; k < s["zeta"].size(); ++k)
        os << number(s["theta"]) << "," << k << "," << number(s["zeta"][k]) << "\n";
  } else if (task == "validate") {
    os << "theta,index,z_floquet,z_bs,rel_mismatch\n";
    for (const auto& r : res["reports"])
      for (std::size_t k = 0; k < r["matches"].size(); ++k) {
        const auto& m = r["matches"][k];
        os << number(r["theta"]) << "," << k << "," << number(m["z_floquet"]) << "," << number(m["z_bs"]) << ","
           << number(m["rel_mismatch"]) << "\n";
      }
  } else if (task == "susy") {
    os << "theta,operator,index,value\n";
    for (const auto& s : res["spectra"])
      for (const char* op : {"t1", "t2", "dirac"})
        for (std::size_t k = 0; k < s[op].size(); ++k)
          os << number(s["theta"]) << "," << op << "," << k << "," << number(s[op][k]) << "\n";
  } else if (task == "miura") {
    os << "record,x,value\n";
    const json& q = res["potential"];
    os << "q1,," << number(q["q1"]) << "\n";
    for (const auto& a : q["atoms"]) os << "atom," << number(a["x"]) << "," << number(a["w"]) << "\n";
  }
  return os.str();
}

std::vector<std::string> compare_documents(json a, json b) {
  a.erase("metadata");
  b.erase("metadata");
  std::vector<std::string> out;
  for (const auto& op : json::diff(a, b)) out.push_back(op["path"].get<std::string>());
  return out;
}

}  // namespace ldspec::cli
