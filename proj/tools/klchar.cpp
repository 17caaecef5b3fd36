// klchar: integral systems, KL polynomials and irreducible characters for affine highest-weight modules.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "kl_affine/kl_affine.hpp"
#include "selftest.hpp"

using namespace kl_affine;
using nlohmann::json;

namespace {

struct Options {
  std::string type = "A1~";
  std::string weight;
  std::int64_t depth = 4;
  std::int64_t max_depth = 12;
  bool as_json = false;
  std::string cache_dir;
  int length = 4;
  std::string xi = "0,0";
  std::string route = "auto";
};

std::shared_ptr<const CartanData> load_type(const std::string& t) {
  if (t.size() > 5 && t.substr(t.size() - 5) == ".json") return std::make_shared<const CartanData>(CartanData::from_file(t));
  return std::make_shared<const CartanData>(CartanData::from_type(t));
}

Weight load_weight(const CartanData& cd, const std::string& text) {
  if (text.empty()) return Weight::zero(cd);
  return parse_weight(cd, text);
}

std::string fmt_root(const RootVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string fmt_word(const CoxeterElement& w) {
  if (w.is_identity()) return "e";
  std::string s;
  for (int x : w.word()) s += (s.empty() ? "s" : " s") + std::to_string(x);
  return s;
}

void check_depth(const Options& o) {
  if (o.depth < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be nonnegative");
  if (o.depth > o.max_depth)
    throw Error(ErrorKind::DepthExceeded, "depth " + std::to_string(o.depth) + " exceeds --max-depth " + std::to_string(o.max_depth));
}

std::optional<std::filesystem::path> cache_of(const Options& o) {
  if (o.cache_dir.empty()) return std::nullopt;
  return std::filesystem::path(o.cache_dir);
}

int run_integral(const Options& o) {
  auto cd = load_type(o.type);
  const Weight lambda = load_weight(*cd, o.weight);
  if (is_critical(*cd, lambda)) throw Error(ErrorKind::CriticalLevel, "critical level: (delta, lambda + rho) = 0");
  const auto sys = compute_integral_system(lambda, cd);
  json out = json_io::integral_system(sys);
  std::optional<DominantRepresentative> rep;
  if (!sys.empty()) {
    rep = dominant_representative(sys);
    out["representative"] = {{"mu", format_weight(*cd, rep->mu)}, {"word", rep->word}, {"chamber", name(rep->chamber)}};
  }
  if (o.as_json) {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "type     " << cd->name() << "\n"
            << "weight   " << format_weight(*cd, lambda) << "\n"
            << "level    " << sys.level() << "\n"
            << "chamber  " << name(classify_chamber(sys)) << "\n";
  if (sys.empty()) {
    std::cout << "Delta(lambda) is empty\n";
    return 0;
  }
  std::cout << "W(lambda) " << (sys.finite() ? "finite" : "infinite") << "\n" << "simples ";
  for (const auto& r : sys.simples()) std::cout << " " << fmt_root(r);
  std::cout << "\ndelta0  ";
  for (const auto& r : sys.delta0()) std::cout << " " << fmt_root(r);
  std::cout << "\ncoxeter ";
  for (const auto& row : sys.coxeter_matrix()) {
    std::cout << " ";
    for (int m : row) std::cout << (m == 0 ? "oo" : std::to_string(m)) << (&m == &row.back() ? "" : ",");
  }
  std::cout << "\nrep      " << format_weight(*cd, rep->mu) << " (" << name(rep->chamber) << ")\n";
  return 0;
}

Route parse_route(const std::string& r) {
  if (r == "auto") return Route::Auto;
  if (r == "dominant") return Route::Dominant;
  if (r == "antidominant") return Route::Antidominant;
  throw CLI::ValidationError("--route", "expected auto, dominant or antidominant");
}

int run_char(const Options& o) {
  check_depth(o);
  auto cd = load_type(o.type);
  CharacterEngine engine(cd, cache_of(o));
  const Weight lambda = load_weight(*cd, o.weight);
  const auto f = engine.irreducible_formula(lambda, o.depth, parse_route(o.route));
  const auto ch = engine.character_of(f, o.depth);
  engine.save_caches();
  if (o.as_json) {
    std::cout << json_io::char_output(*cd, f, ch).dump(2) << "\n";
    return 0;
  }
  std::cout << "ch L(" << format_weight(*cd, lambda) << ") to depth " << o.depth << "\n";
  std::cout << "chamber " << name(f.chamber) << ", anchor " << format_weight(*cd, f.anchor) << "\n";
  std::cout << "formula:\n";
  for (const auto& t : f.terms)
    std::cout << "  " << (t.sign > 0 ? "+" : "-") << " " << t.kl_at_one << " * ch M(lambda - " << fmt_root(t.offset)
              << ")  y = " << fmt_word(t.y) << "\n";
  std::cout << "terms (xi: coeff of e^{lambda - xi}):\n";
  for (const auto& [xi, c] : ch.terms()) std::cout << "  " << fmt_root(xi) << ": " << c << "\n";
  return 0;
}

int run_kl(const Options& o) {
  auto cd = load_type(o.type);
  CharacterEngine engine(cd, cache_of(o));
  const Weight lambda = load_weight(*cd, o.weight);
  const auto sys = engine.integral_system(lambda);
  auto kl = engine.engine_for(sys);
  const auto& g = kl->group();
  const auto ball = g.enumerate_ball(o.length);
  json pairs = json::array();
  std::ostringstream text;
  for (const auto& w : ball)
    for (const auto& y : ball) {
      if (y.length() > w.length() || !g.bruhat_leq(y, w)) continue;
      const auto p = kl->kl_polynomial(y, w);
      const auto m = kl->mu(y, w);
      pairs.push_back({{"y", json_io::word(y)}, {"w", json_io::word(w)}, {"P", json_io::poly(p)}, {"mu", json_io::big(m)}});
      text << fmt_word(y) << " <= " << fmt_word(w) << " : P = " << p << ", mu = " << m << "\n";
    }
  engine.save_caches();
  if (o.as_json) {
    std::cout << json{{"simples", json_io::roots(sys.simples())}, {"max_length", o.length}, {"pairs", pairs}}.dump(2)
              << "\n";
    return 0;
  }
  std::cout << "generators:";
  for (std::size_t i = 0; i < sys.simples().size(); ++i) std::cout << " s" << i << "=" << fmt_root(sys.simples()[i]);
  std::cout << "\n" << text.str();
  return 0;
}

int run_decomp(const Options& o) {
  check_depth(o);
  auto cd = load_type(o.type);
  CharacterEngine engine(cd, cache_of(o));
  const auto data = engine.decomposition_multiplicities(load_weight(*cd, o.weight), o.depth, parse_route(o.route));
  engine.save_caches();
  if (o.as_json) {
    std::cout << json_io::linkage(data).dump(2) << "\n";
    return 0;
  }
  std::cout << "anchor " << format_weight(*cd, data.anchor) << " (" << (data.chamber > 0 ? "CPlus" : "CMinus")
            << "), depth " << data.depth << "\n";
  for (std::size_t r = 0; r < data.reps.size(); ++r)
    std::cout << "  x" << r << " = " << fmt_word(data.rep(static_cast<int>(r))) << "  offset "
              << fmt_root(data.offsets[data.reps[r]]) << "\n";
  std::cout << "[M(x_r):L(x_s)]:\n";
  for (const auto& row : data.multiplicities) {
    std::cout << " ";
    for (const auto& x : row) std::cout << " " << x;
    std::cout << "\n";
  }
  return 0;
}

int run_oracle(const Options& o) {
  auto cd = load_type(o.type);
  const Weight lambda = load_weight(*cd, o.weight);
  RootVec xi;
  std::stringstream ss(o.xi);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      xi.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad --xi component '" + part + "'");
    }
  }
  const auto r = shapovalov::analyze(*cd, lambda, xi);
  if (o.as_json) {
    std::cout << json_io::oracle(r).dump(2) << "\n";
    return 0;
  }
  std::cout << "size " << r.size << "\nrank " << r.rank << "\ndet  " << r.det << "\n";
  return 0;
}

int run_selftest(const Options& o) {
  const auto results = selftest::run_all();
  bool ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (o.as_json) arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    else std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  }
  if (o.as_json) std::cout << json{{"passed", ok}, {"checks", arr}}.dump(2) << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characters of irreducible highest-weight modules over affine Lie algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--type", o.type, "Cartan type such as A1~, A2~, G2~, B2, or a Cartan JSON file")->capture_default_str();
  app.add_option("--weight", o.weight, "Weight as h0=<s>,h1=<s>,...[,d=<s>], s = p/q[+r/s*t], t = sqrt 2");
  app.add_option("--depth", o.depth, "Truncation depth (height below the top weight)")->capture_default_str();
  app.add_option("--max-depth", o.max_depth, "Refuse depths above this")->capture_default_str();
  app.add_flag("--json", o.as_json, "Emit JSON");
  app.add_option("--cache-dir", o.cache_dir, "Directory for the persistent KL memo");

  auto* integral = app.add_subcommand("integral", "Integral root system, chamber and representative");
  auto* chr = app.add_subcommand("char", "Irreducible character via the KL formula");
  chr->add_option("--route", o.route, "auto, dominant or antidominant")->capture_default_str();
  auto* kl = app.add_subcommand("kl", "KL polynomials on a ball of W(lambda)");
  kl->add_option("--length", o.length, "Ball radius")->capture_default_str();
  auto* decomp = app.add_subcommand("decomp", "Decomposition multiplicities [M:L] in a window");
  decomp->add_option("--route", o.route, "auto, dominant or antidominant")->capture_default_str();
  auto* oracle = app.add_subcommand("oracle", "Shapovalov Gram rank for A1~");
  oracle->add_option("--xi", o.xi, "Root-lattice coordinates n0,n1")->capture_default_str();
  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*integral) return run_integral(o);
    if (*chr) return run_char(o);
    if (*kl) return run_kl(o);
    if (*decomp) return run_decomp(o);
    if (*oracle) return run_oracle(o);
    if (*selftest) return run_selftest(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  } catch (const Error& e) {
    std::cerr << json_io::error(e).dump() << "\n";
    return 2;
  }
  return 1;
}
