#include "commtask/families.hpp"
#include "commtask/majorization.hpp"
#include "commtask/matrix_json.hpp"
#include "commtask/monotones.hpp"
#include "commtask/quantum.hpp"
#include "commtask/reproduce.hpp"
#include "commtask/transforms.hpp"
#include "commtask/verdict_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace commtask;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Usage = 1, Invariant = 2 };

struct Config {
  long budget_ms = 60000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string format = "pretty";
  unsigned threads = 1;
  std::vector<std::string> inline_matrices;

  Budget budget() const {
    Budget b;
    b.time_ms = budget_ms;
    b.tol = tol;
    b.seed = seed;
    b.threads = threads;
    return b;
  }
};

// Raised for bad input; main turns it into exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string &path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CommMatrix load(const std::string &text, const std::string &origin) {
  try {
    return parse_matrix(text).matrix;
  } catch (const ParseError &e) {
    std::string where;
    if (e.row() >= 0 && std::string(e.what()).find(" at row ") == std::string::npos)
      where = " at row " + std::to_string(e.row()) +
              (e.col() >= 0 ? ", column " + std::to_string(e.col()) : "");
    throw InputError(origin + ": " + e.what() + where);
  } catch (const StochasticError &e) {
    throw InputError(origin + ": " + e.what());
  }
}

// Files first, then --inline literals, in the order given.
std::vector<CommMatrix> matrices(const Config &cfg, const std::vector<std::string> &files,
                                 std::size_t want) {
  std::vector<CommMatrix> out;
  for (const auto &f : files)
    out.push_back(load(read_source(f), f));
  for (std::size_t i = 0; i < cfg.inline_matrices.size(); ++i)
    out.push_back(load(cfg.inline_matrices[i], "--inline #" + std::to_string(i + 1)));
  if (out.size() != want)
    throw InputError("expected " + std::to_string(want) + " matrix argument(s), got " +
                     std::to_string(out.size()));
  return out;
}

void print_pretty(const json &j, const std::string &prefix, std::ostream &os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      print_pretty(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    return;
  }
  // Matrices: one row per line.
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    os << prefix << ":\n";
    for (const auto &row : j) {
      os << "  ";
      for (std::size_t k = 0; k < row.size(); ++k)
        os << (k ? "  " : "") << (row[k].is_string() ? row[k].get<std::string>() : row[k].dump());
      os << "\n";
    }
    return;
  }
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t k = 0; k < j.size(); ++k)
      print_pretty(j[k], prefix + "[" + std::to_string(k) + "]", os);
    return;
  }
  os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

void emit(const Config &cfg, const json &j) {
  if (cfg.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    print_pretty(j, "", std::cout);
}

int cmd_gen(const std::string &family, int n, const std::string &eps, int t,
            const std::string &out) {
  FamilyParams p;
  try {
    p.family = parse_family(family);
    p.n = n;
    p.eps = parse_rational(eps);
    p.t = t;
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }
  CommMatrix m = [&] {
    try {
      return make_family(p);
    } catch (const std::invalid_argument &e) {
      throw InputError(e.what());
    }
  }();
  std::string text = serialize(m);
  if (out.empty() || out == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out);
    if (!f)
      throw InputError("cannot write " + out);
    f << text << "\n";
  }
  return Ok;
}

int cmd_compare(const Config &cfg, const std::vector<std::string> &files) {
  auto ms = matrices(cfg, files, 2);
  Verdict v = decide(ms[0], ms[1], cfg.budget());
  emit(cfg, to_json(v));
  if (v.outcome != Outcome::Unknown && !verify_verdict(ms[0], ms[1], v)) {
    std::cerr << "certificate failed re-verification\n";
    return Invariant;
  }
  return Ok;
}

int cmd_equiv(const Config &cfg, const std::vector<std::string> &files) {
  auto ms = matrices(cfg, files, 2);
  EquivalenceVerdict v = equivalent(ms[0], ms[1], cfg.budget());
  emit(cfg, to_json(v));
  for (const auto &[c, d, part] :
       {std::tuple{&ms[0], &ms[1], &v.c_below_d}, std::tuple{&ms[1], &ms[0], &v.d_below_c}})
    if (part->outcome != Outcome::Unknown && !verify_verdict(*c, *d, *part)) {
      std::cerr << "certificate failed re-verification\n";
      return Invariant;
    }
  return Ok;
}

int cmd_iota(const Config &cfg, const std::vector<std::string> &files) {
  auto c = matrices(cfg, files, 1).front();
  auto rows = orthogonal_rows(c);
  StochasticPair w = iota_witness(c, rows);
  json j{{"iota", rows.size()}, {"rows", rows}, {"witness", to_json(w)}};
  emit(cfg, j);
  if (!verifies(w, make_identity(static_cast<int>(rows.size())), c)) {
    std::cerr << "iota witness failed exact verification\n";
    return Invariant;
  }
  return Ok;
}

int cmd_reduce(const Config &cfg, const std::vector<std::string> &files) {
  auto c = matrices(cfg, files, 1).front();
  Transformed t = reduce(c);
  emit(cfg, {{"matrix", to_json(t.matrix)},
             {"forward", to_json(t.forward)},
             {"backward", to_json(t.backward)}});
  if (!verifies(t.forward, t.matrix, c) || !verifies(t.backward, c, t.matrix)) {
    std::cerr << "reduction maps failed exact verification\n";
    return Invariant;
  }
  return Ok;
}

int cmd_table1(const Config &cfg) {
  ReferenceTable t = reproduce_reference_table(cfg.budget());
  json rows = json::array();
  for (const auto &r : t.rows) {
    const auto &ref = r.reference;
    rows.push_back({{"name", ref.name},
                    {"computed", to_json(r.computed)},
                    {"reference",
                     {{"rank", ref.rank},
                      {"nneg_rank", ref.nneg_rank},
                      {"psd_rank", ref.psd_rank},
                      {"lambda_min", to_string(ref.lambda_min)},
                      {"iota", ref.iota},
                      {"lambda_max", to_string(ref.lambda_max)}}},
                    {"mismatches", r.mismatches},
                    {"nneg_flagged", r.nneg_flagged}});
  }
  json det = json::array();
  for (const auto &d : t.detections)
    det.push_back({{"pair", {d.first, d.second}},
                   {"monotone", d.monotone},
                   {"separating", d.separating},
                   {"ok", d.ok}});

  if (cfg.format == "json") {
    emit(cfg, {{"rows", rows}, {"detections", det}, {"ok", t.ok()}});
  } else {
    auto bracket = [](int lo, int hi) {
      return lo == hi ? std::to_string(lo) : "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    };
    std::printf("%-10s %-12s %-12s %-12s %-12s %-8s %-12s %s\n", "matrix", "rank", "nneg_rank",
                "psd_rank", "lambda_min", "iota", "lambda_max", "status");
    for (const auto &r : t.rows) {
      const auto &c = r.computed;
      const auto &ref = r.reference;
      auto cell = [](const std::string &got, const std::string &want) {
        return got == want ? got : got + "(" + want + ")";
      };
      std::string status = r.mismatches.empty() ? "ok" : "MISMATCH";
      if (r.nneg_flagged)
        status += " nneg-interval";
      if (!c.psd.certified_upper)
        status += " psd-upper-numeric";
      std::printf("%-10s %-12s %-12s %-12s %-12s %-8s %-12s %s\n", ref.name.c_str(),
                  cell(std::to_string(c.rank), std::to_string(ref.rank)).c_str(),
                  cell(bracket(c.nneg_rank.lo, c.nneg_rank.hi), std::to_string(ref.nneg_rank)).c_str(),
                  (bracket(c.psd.lower, c.psd.upper) + " ~" + std::to_string(ref.psd_rank)).c_str(),
                  cell(to_string(c.lambda_min), to_string(ref.lambda_min)).c_str(),
                  cell(std::to_string(c.iota), std::to_string(ref.iota)).c_str(),
                  cell(to_string(c.lambda_max), to_string(ref.lambda_max)).c_str(), status.c_str());
    }
    std::printf("\n");
    for (const auto &d : t.detections) {
      std::string seps;
      for (const auto &s : d.separating)
        seps += (seps.empty() ? "" : ",") + s;
      std::printf("%-4s %-10s vs %-10s only %-11s separated by {%s}\n", d.ok ? "ok" : "FAIL",
                  d.first.c_str(), d.second.c_str(), d.monotone.c_str(), seps.c_str());
    }
  }
  return t.ok() ? Ok : Invariant;
}

int cmd_dfamily(const Config &cfg, int n, const std::string &step_text) {
  Rational step;
  DFamilyGrid g;
  try {
    step = parse_rational(step_text);
    g = check_d_family(n, step);
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }
  json pts = json::array();
  for (const auto &p : g.points)
    pts.push_back({{"eps", to_string(p.eps)},
                   {"mu", to_string(p.mu)},
                   {"majorizes", p.predicted},
                   {"confirmation", p.confirmation}});
  if (cfg.format == "json") {
    emit(cfg, {{"n", n},
               {"step", to_string(step)},
               {"points", pts},
               {"agreeing", g.agreeing()},
               {"total", g.points.size()}});
  } else {
    // Rows eps, columns mu; '#' majorized (witness), '.' refuted by a
    // monotone, '?' unconfirmed.
    const std::size_t k = static_cast<std::size_t>(Rational(1 / step).get_num().get_si()) + 1;
    std::printf("n=%d  rows: eps, columns: mu, step %s\n", n, to_string(step).c_str());
    for (std::size_t a = 0; a < k; ++a) {
      std::printf("%6s  ", to_string(g.points[a * k].eps).c_str());
      for (std::size_t b = 0; b < k; ++b) {
        const auto &p = g.points[a * k + b];
        std::putchar(p.confirmation.empty() ? '?' : p.predicted ? '#' : '.');
      }
      std::putchar('\n');
    }
    std::printf("agreement: %zu/%zu\n", g.agreeing(), g.points.size());
  }
  return g.agreeing() == g.points.size() ? Ok : Invariant;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Communication matrices: monotones and ultraweak majorization"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  if (const char *env = std::getenv("COMMTASK_BUDGET_MS")) {
    try {
      cfg.budget_ms = std::stol(env);
    } catch (const std::exception &) {
      std::cerr << "COMMTASK_BUDGET_MS is not an integer\n";
      return Usage;
    }
  }
  app.add_option("--budget-ms", cfg.budget_ms, "Time budget per decision in milliseconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "Numeric tolerance of the floating-point searches")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized starts");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"pretty", "json"}));
  app.add_option("--threads", cfg.threads, "Worker cap")->check(CLI::PositiveNumber);
  app.add_option("--inline", cfg.inline_matrices, "Matrix literal, e.g. '[[\"1/2\",\"1/2\"]]'")
      ->allow_extra_args(false);

  std::string family, eps = "0", out, step = "1/12";
  int n = 2, t = 1;
  auto *gen = app.add_subcommand("gen", "Generate a family matrix (identity, uniform, D, G, A)");
  gen->add_option("family", family)->required();
  gen->add_option("--n", n, "Size")->required();
  gen->add_option("--eps", eps, "Noise parameter of D");
  gen->add_option("--t", t, "Number of zeros per row of G");
  gen->add_option("-o,--output", out, "Output file (default stdout)");

  std::vector<std::string> files;
  auto matrix_cmd = [&](const std::string &name, const std::string &desc) {
    auto *s = app.add_subcommand(name, desc);
    s->add_option("files", files, "Matrix files ('-' for stdin)");
    return s;
  };
  auto *mono = matrix_cmd("mono", "All monotones of a matrix");
  auto *compare = matrix_cmd("compare", "Decide whether C is ultraweakly majorized by D");
  auto *equiv = matrix_cmd("equiv", "Decide ultraweak equivalence");
  auto *nrank = matrix_cmd("nrank", "Nonnegative rank (minimal classical dimension)");
  auto *psd = matrix_cmd("psd", "psd rank bracket (minimal quantum dimension)");
  auto *iota_cmd = matrix_cmd("iota", "Largest identity below the matrix, with witness");
  auto *reduce_cmd = matrix_cmd("reduce", "Equivalent matrix without redundant rows and columns");
  auto *table = app.add_subcommand("table1", "Recompute the reference monotone table");
  auto *dfam = app.add_subcommand("dfamily", "Check the D_{n,eps} ordering on a grid");
  dfam->add_option("--n", n, "Size")->required()->check(CLI::Range(2, 64));
  dfam->add_option("--step", step, "Grid step 1/k");
  (void)table;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : Usage;
  }

  try {
    if (*gen)
      return cmd_gen(family, n, eps, t, out);
    if (*mono) {
      auto c = matrices(cfg, files, 1).front();
      emit(cfg, to_json(report(c, cfg.budget())));
      return Ok;
    }
    if (*compare)
      return cmd_compare(cfg, files);
    if (*equiv)
      return cmd_equiv(cfg, files);
    if (*nrank) {
      auto c = matrices(cfg, files, 1).front();
      emit(cfg, to_json(nneg_rank(c, cfg.budget())));
      return Ok;
    }
    if (*psd) {
      auto c = matrices(cfg, files, 1).front();
      emit(cfg, to_json(report(c, cfg.budget()))["psd_rank"]);
      return Ok;
    }
    if (*iota_cmd)
      return cmd_iota(cfg, files);
    if (*reduce_cmd)
      return cmd_reduce(cfg, files);
    if (*dfam)
      return cmd_dfamily(cfg, n, step);
    return cmd_table1(cfg);
  } catch (const InputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const std::logic_error &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return Invariant;
  }
}
