#include <CLI11.hpp>
#include <json.hpp>

#include "modmass/experiments.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

// modmass: batch experiments over holomorphic eigenforms, Eisenstein series
// and raised Maass forms.  Exit codes: 0 all checks passed, 1 a numeric
// check failed, 2 usage or configuration error.

namespace {

using namespace modmass;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<unsigned> parse_weights(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<unsigned>(std::stoul(item)));
    } catch (const std::exception&) {
      throw UsageError("bad weight: " + item);
    }
  }
  if (out.empty()) throw UsageError("empty weight list");
  return out;
}

void apply_config_pair(ExperimentConfig& cfg, unsigned& precision_bits,
                       const std::string& key, const std::string& value) {
  try {
    if (key == "weights")
      cfg.weights = parse_weights(value);
    else if (key == "s")
      cfg.s = Real(value);
    else if (key == "tol")
      cfg.tol = Real(value);
    else if (key == "dirichlet_n")
      cfg.dirichlet_n = std::stoull(value);
    else if (key == "raised_terms")
      cfg.raised_terms = static_cast<unsigned>(std::stoul(value));
    else if (key == "eisenstein_terms")
      cfg.eisenstein_terms = static_cast<unsigned>(std::stoul(value));
    else if (key == "coset_b")
      cfg.coset_b = std::stoull(value);
    else if (key == "input_path")
      cfg.input_path = value;
    else if (key == "out_path")
      cfg.out_path = value;
    else if (key == "format")
      cfg.format = value;
    else if (key == "precision_bits")
      precision_bits = static_cast<unsigned>(std::stoul(value));
    else
      throw UsageError("unknown config key: " + key);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad config value for " + key + ": " + value);
  }
}

// Config files are either JSON objects or key=value lines ('#' comments).
void load_config(const std::string& path, ExperimentConfig& cfg, unsigned& precision_bits) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad JSON config: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string value;
      if (it->is_string())
        value = it->get<std::string>();
      else if (it->is_array()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < it->size(); ++i)
          os << (i ? "," : "") << (*it)[i].get<std::uint64_t>();
        value = os.str();
      } else {
        std::ostringstream os;
        os << *it;
        value = os.str();
      }
      apply_config_pair(cfg, precision_bits, it.key(), value);
    }
    return;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw UsageError("bad config line: " + line);
      continue;
    }
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_config_pair(cfg, precision_bits, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

// ---------------------------------------------------------------------------

int run_selftest(const ExperimentConfig& cfg) {
  auto rep = selftest_report();
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_eigenform(const ExperimentConfig& cfg, unsigned trunc) {
  std::vector<HeckeEigenform> forms;
  bool ok = true;
  for (unsigned k : cfg.weights) {
    auto fs = eigenforms(k, trunc);
    for (auto& f : fs) {
      f.set_l_sym2_at_1(l_sym2_at_1_completed(f));
      for (auto p : primes_up_to(std::min<std::uint64_t>(trunc, 31))) {
        if (abs(f.lambda(p * p) - (f.lambda(p) * f.lambda(p) - 1)) > Real("1e-35")) ok = false;
        if (abs(f.lambda(p)) > 2) ok = false;
      }
      forms.push_back(std::move(f));
    }
  }
  if (cfg.out_path.empty()) {
    write_eigenform_cache(std::cout, forms);
  } else {
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw UsageError("cannot open output path " + cfg.out_path);
    write_eigenform_cache(os, forms);
  }
  if (!ok) std::cerr << "eigenform: Hecke property check failed\n";
  return ok ? 0 : 1;
}

int run_whittaker(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "whittaker";
  rep.columns = {"alpha", "shift", "y", "closed_form", "recursion", "rel_err"};
  Real worst = 0;
  for (unsigned kw = 2; kw <= 20; kw += 2) {
    Real alpha = Real(kw) / 2;
    for (double yd : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      Real y(yd);
      for (unsigned shift = 0; shift < 8; ++shift) {
        Real w = w_holomorphic_shift(alpha, shift, y);
        Real wd = w_holomorphic_shift_deriv(alpha, shift, y);
        Real stepped = recursion_step(w, wd, alpha + Real(shift), alpha - Real(1) / 2, y);
        Real direct = w_holomorphic_shift(alpha, shift + 1, y);
        Real rel = abs(stepped - direct) / abs(direct);
        if (rel > worst) worst = rel;
        rep.rows.push_back({real_to_string(alpha), std::to_string(shift + 1),
                            real_to_string(y), real_to_string(direct),
                            real_to_string(stepped), real_to_string(rel)});
      }
    }
  }
  rep.require_le("closed_form_vs_recursion", worst, Real("1e-25"));
  {
    Real worst0 = 0;
    for (double yd : {0.5, 1.0, 3.0, 8.0}) {
      Real y(yd);
      Complex f0 = jakobson_f(0, Real("1.5"), y);
      Complex bessel = 2 * sqrt(y / pi()) * bessel_k(Complex(Real(0), Real("1.5")), y / 2) /
                       gamma(Complex(Real(1) / 2, Real("1.5")));
      Real rel = abs(f0 - bessel) / abs(bessel);
      if (rel > worst0) worst0 = rel;
    }
    rep.require_le("jakobson_k0_vs_bessel", worst0, Real("1e-20"));
  }
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_eisenstein(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.experiment = "eisenstein";
  rep.columns = {"k", "s", "x", "y", "coset", "fourier", "diff", "tail_bound"};
  Real worst3 = 0;
  bool tail_ok = true;
  for (unsigned k : {0u, 2u, 4u}) {
    for (int j = 0; j < 10; ++j) {
      HPoint z(Real(2 * j - 9) / 20, 1 + Real(j) / 10);
      Real tail = 0;
      Complex s(3);
      Complex a = eisenstein_coset_sum(k, z, s, 150, &tail);
      Complex b = eisenstein_fourier(k, z, s);
      Real diff = abs(a - b);
      if (diff > worst3) worst3 = diff;
      rep.rows.push_back({std::to_string(k), "3", real_to_string(z.x), real_to_string(z.y),
                          real_to_string(a.re), real_to_string(b.re), real_to_string(diff),
                          real_to_string(tail)});
    }
  }
  for (int j = 0; j < 3; ++j) {
    HPoint z(Real(j) / 5, 1 + Real(j) / 8);
    Real tail = 0;
    Complex s(2);
    Complex a = eisenstein_coset_sum(0, z, s, cfg.coset_b, &tail);
    Complex b = eisenstein_fourier(0, z, s);
    Real diff = abs(a - b);
    if (!(diff < tail)) tail_ok = false;
    rep.rows.push_back({"0", "2", real_to_string(z.x), real_to_string(z.y),
                        real_to_string(a.re), real_to_string(b.re), real_to_string(diff),
                        real_to_string(tail)});
  }
  rep.require_le("two_route_at_s3", worst3, Real("1e-8"));
  rep.require("two_route_at_s2_within_tail", tail_ok, "lattice tail bound");
  {
    Complex s = Complex(Real(1) + Real("1e-6"));
    Complex v = (s - Real(1)) * eisenstein_fourier(0, HPoint(Real("0.3"), Real("1.2")), s, 40);
    rep.require_le("residue_at_1", abs(v - Complex(3 / pi())), Real("1e-4"));
  }
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_rankin_selberg(const ExperimentConfig& cfg) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (std::size_t i = 0; i < cfg.weights.size(); ++i)
    for (std::size_t j = i; j < cfg.weights.size(); ++j)
      pairs.emplace_back(cfg.weights[i], cfg.weights[j]);
  auto rep = rankin_selberg_report(pairs, cfg);
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_que_scan(const ExperimentConfig& cfg) {
  auto rep = que_scan(cfg);
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_shifted_sum(const ExperimentConfig& cfg) {
  unsigned k1 = cfg.weights.front();
  unsigned k2 = cfg.weights.size() > 1 ? cfg.weights[1] : k1;
  const auto& f = prepared_eigenform(k1, 100016);
  const auto& g = prepared_eigenform(k2, 100016);
  auto rep = sieve_suite(f, g);
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

int run_maass_check(const ExperimentConfig& cfg) {
  if (cfg.input_path.empty()) throw UsageError("maass-check needs an input file (--in)");
  ExperimentReport rep;
  rep.experiment = "maass-check";
  rep.columns = {"t", "parity", "n_coeffs"};
  MaassData m = ingest_maass(cfg.input_path);
  rep.rows.push_back({real_to_string(m.t), m.even_parity ? "even" : "odd",
                      std::to_string(m.n_coeffs)});
  {
    std::ostringstream os;
    write_maass(os, m);
    std::istringstream is(os.str());
    MaassData m2 = read_maass(is);
    bool same = m2.t == m.t && m2.even_parity == m.even_parity && m2.n_coeffs == m.n_coeffs;
    for (unsigned n = 1; same && n <= m.n_coeffs; ++n) same = m2.coeff(n) == m.coeff(n);
    rep.require("round_trip", same, "exact");
  }
  {
    FormFn u = [&](const HPoint& w) { return raised_maass_form(m, 2, w); };
    HPoint z(Real("0.13"), Real("0.9"));
    Complex ratio = laplacian_numeric(u, 2, z) / u(z);
    Complex want(Real(1) / 4 + m.t * m.t);
    rep.require_le("laplace_eigenvalue_rel_err", abs(ratio - want) / abs(want), Real("1e-6"));
  }
  write_report(rep, cfg.out_path, cfg.format);
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modmass: modular-form mass and convolution experiments"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  unsigned precision_bits = 192;
  if (const char* env = std::getenv("MODMASS_PRECISION_BITS")) {
    try {
      precision_bits = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "bad MODMASS_PRECISION_BITS value: " << env << "\n";
      return 2;
    }
  }

  std::string config_path, weights_text, tol_text, s_text;
  unsigned trunc = 128;
  app.add_option("--config", config_path, "config file (key=value lines or JSON)");
  app.add_option("--weights", weights_text, "comma-separated weight list");
  app.add_option("--precision-bits", precision_bits, "working precision in bits");
  app.add_option("--tol", tol_text, "quadrature tolerance");
  app.add_option("--s", s_text, "Eisenstein spectral parameter");
  app.add_option("--out", cfg.out_path, "output path (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--in", cfg.input_path, "input data path");
  app.add_option("--trunc", trunc, "eigenform truncation (eigenform subcommand)");

  auto* sc_eigenform = app.add_subcommand("eigenform", "emit eigenform cache, check Hecke relations");
  auto* sc_whittaker = app.add_subcommand("whittaker", "closed form vs recursion grid");
  auto* sc_eisenstein = app.add_subcommand("eisenstein", "coset sum vs Fourier expansion");
  auto* sc_rankin = app.add_subcommand("rankin-selberg", "unfolding identity, two routes");
  auto* sc_que = app.add_subcommand("que-scan", "decorrelation scan across weights");
  auto* sc_shifted = app.add_subcommand("shifted-sum", "shifted convolution vs sieve bound");
  auto* sc_maass = app.add_subcommand("maass-check", "validate a Maass coefficient file");
  auto* sc_selftest = app.add_subcommand("selftest", "quick checks of every module");
  // global flags may follow the subcommand name
  for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) load_config(config_path, cfg, precision_bits);
    // flags take precedence over the config file
    if (!weights_text.empty()) cfg.weights = parse_weights(weights_text);
    if (!tol_text.empty()) cfg.tol = Real(tol_text);
    if (!s_text.empty()) cfg.s = Real(s_text);
    set_global_precision(Precision{precision_bits});
    cfg.validate();

    if (sc_selftest->parsed()) return run_selftest(cfg);
    if (sc_eigenform->parsed()) return run_eigenform(cfg, trunc);
    if (sc_whittaker->parsed()) return run_whittaker(cfg);
    if (sc_eisenstein->parsed()) return run_eisenstein(cfg);
    if (sc_rankin->parsed()) return run_rankin_selberg(cfg);
    if (sc_que->parsed()) return run_que_scan(cfg);
    if (sc_shifted->parsed()) return run_shifted_sum(cfg);
    if (sc_maass->parsed()) return run_maass_check(cfg);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
