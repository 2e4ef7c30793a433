#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "motgv/pgm.hpp"
#include "motgv/solver.hpp"
#include "motgv/verify.hpp"

namespace {

using namespace motgv;

// exit codes: 0 ok, 1 usage, 2 data, 3 numeric, 4 verification failure
constexpr int kOk = 0, kUsage = 1, kData = 2, kNumeric = 3, kVerifyFail = 4;

struct Options {
  std::string config, input, output, pmap, report;
  double alpha1 = 1.0, alpha2 = 1.0;
  bool alpha1_set = false, alpha2_set = false;
  std::uint64_t seed = 7;
  bool seed_set = false;
};

// FNV-1a over the resolved configuration, recorded in reports so identical
// runs are recognizable.
std::uint64_t config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Resolved {
  GridField image;
  PhiSpec phi = PhiSpec::power(2.0);
  TgvWeights alpha;
  SolverConfig solver;
  bool max_iters_set = false;
  std::uint64_t seed = 7;
  std::string provenance;  // config hash + seed header lines
  std::string pmap_source;
};

double parse_real(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("config: bad numeric value '" + s + "' for " + key);
  }
}

Resolved resolve(const Options& opt, bool need_image) {
  std::map<std::string, std::string> cfg;
  if (!opt.config.empty()) cfg = load_config(opt.config);
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    return it->second;
  };

  Resolved r;
  std::string input = opt.input;
  if (input.empty())
    if (auto v = get("input")) input = *v;
  if (need_image) {
    if (input.empty()) throw InputError("usage: no input image given");
    r.image = load_pgm(input).field;
  }

  r.alpha.alpha1 = opt.alpha1_set ? opt.alpha1 : (get("alpha1") ? parse_real(*get("alpha1"), "alpha1") : 1.0);
  r.alpha.alpha2 = opt.alpha2_set ? opt.alpha2 : (get("alpha2") ? parse_real(*get("alpha2"), "alpha2") : 1.0);
  if (!(r.alpha.alpha1 > 0.0 && r.alpha.alpha2 > 0.0))
    throw InputError("config: alpha1 and alpha2 must be positive");
  r.seed = opt.seed_set ? opt.seed : (get("seed") ? static_cast<std::uint64_t>(parse_real(*get("seed"), "seed")) : 7);
  if (auto v = get("max_iters")) {
    r.solver.max_iters = static_cast<int>(parse_real(*v, "max_iters"));
    r.max_iters_set = true;
  }
  if (auto v = get("tol_gap")) r.solver.tol_gap = parse_real(*v, "tol_gap");

  std::string pmap = opt.pmap;
  if (pmap.empty())
    if (auto v = get("pmap")) pmap = *v;
  if (pmap.empty()) pmap = "const:2";
  r.pmap_source = pmap;
  if (need_image) {
    if (pmap == "edge") {
      double k = 32.0, sigma = 1.0;
      if (auto v = get("pmap_k")) k = parse_real(*v, "pmap_k");
      if (auto v = get("pmap_sigma")) sigma = parse_real(*v, "pmap_sigma");
      r.phi = PhiSpec::variable_exponent(make_pmap(r.image, k, sigma));
    } else if (pmap.rfind("const:", 0) == 0) {
      r.phi = PhiSpec::power(parse_real(pmap.substr(6), "pmap"));
    } else {
      ExponentMap m = ExponentMap::load_csv(pmap);
      if (m.width() != r.image.width() || m.height() != r.image.height())
        throw InputError("pmap dimensions do not match the image");
      r.phi = PhiSpec::variable_exponent(std::move(m));
    }
  }

  std::ostringstream all;
  for (const auto& [k, v] : cfg) all << k << '=' << v << '\n';
  all << "input=" << input << " pmap=" << pmap << " alpha1=" << r.alpha.alpha1
      << " alpha2=" << r.alpha.alpha2;
  std::ostringstream prov;
  prov << "# config_hash " << std::hex << config_hash(all.str()) << std::dec << "\n# seed "
       << r.seed << "\n";
  r.provenance = prov.str();
  return r;
}

void write_report(const std::string& path, const std::string& body) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report " + path);
  out << body;
}

int cmd_denoise(const Options& opt) {
  Resolved r = resolve(opt, true);
  OperatorPair K = identity_op(r.image.width(), r.image.height(), r.image.h());
  DenoiseResult res = denoise_tgv(r.image, K, r.phi, r.alpha, r.solver);
  if (opt.output.empty()) throw InputError("usage: denoise needs --output");
  save_pgm(opt.output, res.u_star, 255, false);
  std::ostringstream rep;
  rep << r.provenance << "iters " << res.iters_used << "\nenergy "
      << res.energy_trace.back() << "\n";
  // two-column iteration traces
  rep << "trace_begin\n";
  for (std::size_t k = 0; k < res.energy_trace.size(); ++k)
    rep << k << ' ' << res.energy_trace[k] << '\n';
  rep << "trace_end\n";
  write_report(opt.report, rep.str());
  std::printf("denoise: %d iterations, final energy %.9g\n", res.iters_used,
              res.energy_trace.back());
  return kOk;
}

int cmd_eval_tgv(const Options& opt) {
  Resolved r = resolve(opt, true);
  TgvOptions topts;
  if (r.max_iters_set) topts.max_iters = r.solver.max_iters;
  const double primal = tgv2_primal(r.phi, r.alpha, r.image, topts).value;
  double dual = -1.0;
  std::ostringstream rep;
  rep << r.provenance << "primal " << primal << '\n';
  if (r.image.width() <= 32 && r.image.height() <= 32) {
    dual = tgv2_dual(r.phi, r.alpha, r.image, r.max_iters_set ? r.solver.max_iters : 30000);
    rep << "dual " << dual << "\ngap " << primal - dual << '\n';
    std::printf("tgv primal %.9g  dual %.9g  gap %.3g\n", primal, dual, primal - dual);
  } else {
    std::printf("tgv primal %.9g  (grid too large for the dual bound)\n", primal);
  }
  write_report(opt.report, rep.str());
  return kOk;
}

int cmd_verify(const Options& opt) {
  std::vector<SuiteResult> results = run_verification_suites();
  std::ostringstream rep;
  bool all_pass = true;
  for (const SuiteResult& s : results) {
    std::printf("%-4s %-24s %6.1fs  %s\n", s.pass ? "ok" : "FAIL", s.name.c_str(), s.seconds,
                s.detail.c_str());
    rep << (s.pass ? "ok " : "FAIL ") << s.name << ": " << s.detail << '\n';
    all_pass = all_pass && s.pass;
  }
  write_report(opt.report, rep.str());
  return all_pass ? kOk : kVerifyFail;
}

int cmd_experiments(const Options& opt) {
  Resolved r = resolve(opt, false);
  std::ostringstream rep;
  rep << r.provenance;

  const PhiSpec strip = PhiSpec::variable_exponent(make_strip_map(64, 2.0));
  DecompositionReport dec = decomposition_experiment(strip, 1.0, 6);
  std::printf("decomposition (p=1 strip):\n%s\n", dec.table().c_str());
  rep << "decomposition_strip\n" << dec.csv();

  DecompositionReport div = decomposition_experiment(PhiSpec::power(2.0), 1.0, 6);
  std::printf("decomposition (p=2, divergence):\n%s\n", div.table().c_str());
  rep << "decomposition_p2\n" << div.csv();

  GridField f(16, 16, 1);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i)
      f.at(i, j) = (i + j) * f.h() * 0.5 + (i > 8 && j > 8 ? 0.4 : 0.0);
  SolverConfig cfg;
  cfg.max_iters = 1500;
  StabilityReport st = stability_experiment(f, {0.2, 0.1, 0.05, 0.025}, PhiSpec::power(2.0),
                                            r.alpha, cfg, r.seed);
  std::printf("stability (%s):\n%s\n", st.pass ? "non-increasing" : "slack exceeded",
              st.csv().c_str());
  rep << "stability\n" << st.csv();

  GridField u(16, 16, 1);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) u.at(i, j) = std::sin(3.0 * (i + 0.5) * u.h()) * (j + 0.5) * u.h();
  ScalingReport sc = tgv_scaling_check(PhiSpec::power(1.0), r.alpha, u, 2);
  std::printf("scaling r=2: lhs %.6g rhs %.6g ratio %.4f\n", sc.lhs, sc.rhs, sc.ratio);
  rep << "scaling\nlhs,rhs,ratio\n" << sc.lhs << ',' << sc.rhs << ',' << sc.ratio << '\n';

  write_report(opt.report, rep.str());
  return kOk;
}

int cmd_make_pmap(const Options& opt) {
  Resolved r = resolve(opt, true);
  if (opt.output.empty()) throw InputError("usage: make-pmap needs --output");
  double k = 32.0, sigma = 1.0;
  std::map<std::string, std::string> cfg;
  if (!opt.config.empty()) cfg = load_config(opt.config);
  if (cfg.count("pmap_k")) k = parse_real(cfg["pmap_k"], "pmap_k");
  if (cfg.count("pmap_sigma")) sigma = parse_real(cfg["pmap_sigma"], "pmap_sigma");
  ExponentMap m = make_pmap(r.image, k, sigma);
  m.save_csv(opt.output);
  std::printf("make-pmap: wrote %dx%d exponent map\n", m.width(), m.height());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic second-order TGV toolbox"};
  app.require_subcommand(1);

  Options opt;
  std::function<int(const Options&)> run;
  auto add = [&](const char* name, const char* desc, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", opt.config);
    sub->add_option("--input", opt.input);
    sub->add_option("--output", opt.output);
    sub->add_option("--alpha1", opt.alpha1)->each([&](const std::string&) { opt.alpha1_set = true; });
    sub->add_option("--alpha2", opt.alpha2)->each([&](const std::string&) { opt.alpha2_set = true; });
    sub->add_option("--pmap", opt.pmap);
    sub->add_option("--seed", opt.seed)->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--report", opt.report);
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };
  add("denoise", "TGV-regularized denoising of a PGM image", cmd_denoise);
  add("eval-tgv", "evaluate the TGV seminorm of an image", cmd_eval_tgv);
  add("verify", "run the verification suites", cmd_verify);
  add("experiments", "decomposition, stability, and scaling sweeps", cmd_experiments);
  add("make-pmap", "edge-adaptive exponent map from an image", cmd_make_pmap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return run(opt);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return std::string(e.what()).rfind("usage:", 0) == 0 ? kUsage : kData;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  }
}
