// circfactor: factor | irreducible | pit | verify on circuit files.
//
// Exit codes: 0 success (irreducible, zero/nonzero, verified), 1 input error,
// 2 verification failure, 3 reducible, 4 infeasible (a cap was hit).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "circfactor/certify.hh"

using namespace circfactor;

namespace {

enum Exit { kOk = 0, kInput = 1, kVerify = 2, kReducible = 3, kInfeasible = 4 };

struct Config {
  std::string epsilon = "1/3";
  std::string family = "esym";
  double grid_cap = 1e6;
  double monomial_cap = 1e8;
  long recombination_cap = 1L << 20;
  int dz_cap = 8;
  std::string out;
  std::string fallback = "auto";
  bool verbose = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InputError("cannot write '" + cfg.out + "'");
  f << text;
}

Scalar parse_epsilon(const std::string& s) {
  Scalar e;
  try {
    e = Scalar(s);
    e.canonicalize();
  } catch (const std::invalid_argument&) {
    throw InputError("epsilon '" + s + "' is not a rational");
  }
  if (e <= 0 || e >= Scalar(1, 2)) throw InputError("epsilon must lie in (0, 1/2)");
  return e;
}

FactorOptions factor_options(const Config& cfg) {
  FactorOptions o;
  o.epsilon = parse_epsilon(cfg.epsilon);
  o.family = cfg.family;
  hard_family(o.family);  // rejects unknown names
  if (cfg.grid_cap <= 0 || cfg.monomial_cap <= 0 || cfg.recombination_cap <= 0 || cfg.dz_cap <= 0)
    throw InputError("caps must be positive");
  o.grid_cap = cfg.grid_cap;
  o.monomial_cap = cfg.monomial_cap;
  o.recombination_cap = cfg.recombination_cap;
  o.fallback = cfg.fallback == "auto";
  return o;
}

void dump_log(const Config& cfg, const std::vector<std::string>& log) {
  if (!cfg.verbose) return;
  for (const auto& l : log) std::cerr << "# " << l << "\n";
}

int cmd_factor(const Config& cfg, const std::string& file) {
  FactorOptions opt = factor_options(cfg);
  Circuit c = parse_circuit(read_file(file));
  FactorStats st;
  FactorizationResult r = factor_all(c, opt, &st);
  dump_log(cfg, st.log);
  if (!verify_factorization(c, r)) throw VerificationFailed("result did not re-verify");
  emit(cfg, result_to_json(r));
  return kOk;
}

int cmd_irreducible(const Config& cfg, const std::string& file, const std::string& method, bool require_sf) {
  FactorOptions opt = factor_options(cfg);
  Circuit c = parse_circuit(read_file(file));
  auto verdict = [&](bool irreducible) {
    emit(cfg, irreducible ? "irreducible\n" : "reducible\n");
    return irreducible ? kOk : kReducible;
  };
  if (method == "count") {
    FactorStats st;
    FactorizationResult r = factor_all(c, opt, &st);
    dump_log(cfg, st.log);
    if (r.factors.empty()) throw DegenerateInput("constant polynomial");
    if (!verify_factorization(c, r)) throw VerificationFailed("result did not re-verify");
    if (require_sf && r.max_multiplicity > 1) throw InputError("input is not squarefree");
    return verdict(r.factors.size() == 1 && r.factors[0].multiplicity == 1);
  }
  SquarefreeParts sf = squarefree_parts_circuits(c, opt.monomial_cap);
  if (sf.parts.empty()) throw DegenerateInput("constant polynomial");
  if (sf.parts.size() > 1) {
    if (require_sf) throw InputError("input is not squarefree");
    return verdict(false);
  }
  std::vector<std::string> log;
  Preprocessed pre = preprocess(c, opt, &log);
  dump_log(cfg, log);
  MultiPoly t = dense_from_circuit(pre.tilde, opt.monomial_cap);
  CertifyOptions co;
  co.dz_cap = cfg.dz_cap;
  co.family = opt.family;
  co.T = pre.info.T;
  co.z = pre.info.z;
  Certificate cert = irreducibility_certificate(t, opt.epsilon, co);
  dump_log(cfg, cert.log);
  if (cert.verdict == Verdict::Infeasible) throw CapExceeded(cert.reason);
  if (cert.verdict == Verdict::Reducible) {
    int dz = cert.witness.degree(co.z);
    if (dz < 1 || dz >= t.degree(co.z) || !divides_monic(cert.witness, t, co.z))
      throw VerificationFailed("certificate witness does not divide");
  }
  return verdict(cert.verdict == Verdict::Irreducible);
}

int cmd_pit(const Config& cfg, const std::string& file) {
  FactorOptions opt = factor_options(cfg);
  Circuit c = parse_circuit(read_file(file));
  PitOptions po;
  po.grid_cap = opt.grid_cap;
  po.family = opt.family;
  po.fallback = opt.fallback;
  std::vector<std::string> log;
  po.log = &log;
  PitVerdict v = ki_pit(c, opt.epsilon, po);
  dump_log(cfg, log);
  if (v.is_zero) {
    emit(cfg, "zero\n");
    return kOk;
  }
  const auto& w = *v.witness;
  bool nonzero = false;
  for (const auto& y : eval_circuit(c, [&] {
         std::map<std::string, Coeff> m;
         for (size_t i = 0; i < w.size(); ++i) m[c.variables()[i]] = w[i];
         return m;
       }()))
    nonzero = nonzero || !y.is_zero();
  if (!nonzero) throw VerificationFailed("witness evaluates to zero");
  std::string line = "nonzero";
  for (size_t i = 0; i < w.size(); ++i) line += " " + c.variables()[i] + "=" + w[i].to_string();
  emit(cfg, line + "\n");
  return kOk;
}

int cmd_verify(const Config& cfg, const std::string& file, const std::string& result) {
  Circuit c = parse_circuit(read_file(file));
  FactorizationResult r = result_from_json(read_file(result));
  VerifyReport rep = verify_factorization_report(c, r, cfg.monomial_cap);
  if (!rep.ok) {
    std::cerr << "verification failed at stage " << rep.stage << "\n";
    return kVerify;
  }
  emit(cfg, "ok\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Factorization and identity testing for arithmetic circuits over Q"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--epsilon", cfg.epsilon, "Rational in (0, 1/2)")->capture_default_str();
  app.add_option("--hard-family", cfg.family, "esym, nw or isp")->capture_default_str();
  app.add_option("--grid-cap", cfg.grid_cap, "Maximum number of grid points per search")->capture_default_str();
  app.add_option("--monomial-cap", cfg.monomial_cap, "Maximum monomials when densifying")->capture_default_str();
  app.add_option("--recombination-cap", cfg.recombination_cap, "Maximum factor subsets tried")->capture_default_str();
  app.add_option("--dz-cap", cfg.dz_cap, "Largest z-degree the certificate attempts")->capture_default_str();
  app.add_option("--out", cfg.out, "Write output here instead of stdout");
  app.add_option("--fallback", cfg.fallback, "auto or off")->check(CLI::IsMember({"auto", "off"}))->capture_default_str();
  app.add_flag("-v,--verbose", cfg.verbose, "Log escalation steps to stderr");

  std::string file, result, method = "certificate";
  bool require_sf = false;
  auto* f = app.add_subcommand("factor", "Factor a circuit; prints JSON");
  f->add_option("circuit", file, "Circuit file ('-' for stdin)")->required();
  auto* irr = app.add_subcommand("irreducible", "Decide irreducibility");
  irr->add_option("circuit", file, "Circuit file ('-' for stdin)")->required();
  irr->add_option("--method", method, "certificate or count")
      ->check(CLI::IsMember({"certificate", "count"}))
      ->capture_default_str();
  irr->add_flag("--require-squarefree", require_sf, "Reject non-squarefree input (exit 1)");
  auto* p = app.add_subcommand("pit", "Decide whether a circuit is identically zero");
  p->add_option("circuit", file, "Circuit file ('-' for stdin)")->required();
  auto* v = app.add_subcommand("verify", "Check a factorization result against its circuit");
  v->add_option("circuit", file, "Circuit file")->required();
  v->add_option("result", result, "Result JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }
  if (const char* env = std::getenv("CIRCFACTOR_SEED_FAMILY"); env && *env) cfg.family = env;

  try {
    if (*f) return cmd_factor(cfg, file);
    if (*irr) return cmd_irreducible(cfg, file, method, require_sf);
    if (*p) return cmd_pit(cfg, file);
    return cmd_verify(cfg, file, result);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const VerificationFailed& e) {
    std::cerr << e.what() << "\n";
    return kVerify;
  } catch (const FallbackExhausted& e) {
    std::cerr << e.what() << "\n";
    return kVerify;
  } catch (const CapExceeded& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const RecombinationCapExceeded& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  }
}
