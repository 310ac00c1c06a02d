// flagcert: certificates for the SL2 curve family, affine Weyl group queries,
// Bruhat cells, tangent vectors and series normalization.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flagcert/affine_weyl.hpp"
#include "flagcert/curves.hpp"
#include "flagcert/errors.hpp"
#include "flagcert/loopgroup.hpp"
#include "flagcert/tangent.hpp"
#include "flagcert/text.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace flagcert;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 2;
constexpr int kIndeterminate = 3;
constexpr int kUsage = 64;
constexpr int kDataError = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  bool json = false;
  std::optional<std::int64_t> precision;
  std::int64_t max_length = 10;
  unsigned parallelism = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionViolated("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline text, or the contents of --file.
std::string input_text(const std::string& inline_text, const std::string& file) {
  if (!file.empty() && !inline_text.empty()) throw UsageError("give either an inline matrix or --file, not both");
  if (!file.empty()) return read_file(file);
  if (inline_text.empty()) throw UsageError("missing input");
  return inline_text;
}

Ring ring_by_name(const std::string& name) {
  static const std::map<std::string, std::function<Ring()>> table{
      {"Q", [] { return rings::rationals(); }},
      {"dual", [] { return curve_rings::dual(); }},
      {"Q[eps]/(eps^2)", [] { return curve_rings::dual(); }},
      {"poly", [] { return curve_rings::polynomial(); }},
      {"Q[eps]", [] { return curve_rings::polynomial(); }},
      {"laurent", [] { return curve_rings::laurent(); }},
      {"Q[eps,eps^-1]", [] { return curve_rings::laurent(); }},
      {"frac", [] { return curve_rings::rational(); }},
      {"Qeps", [] { return curve_rings::rational(); }},
      {"Q(eps)", [] { return curve_rings::rational(); }},
      {"rot", [] { return curve_rings::rotation(); }},
      {"Q[lam,lam^-1,eps]", [] { return curve_rings::rotation(); }},
      {"Q[u]", [] { return curve_rings::chart(); }},
      {"Q[u,u^-1]", [] { return rings::laurent("u"); }},
  };
  auto it = table.find(name);
  if (it == table.end()) throw UsageError("unknown ring '" + name + "'");
  return it->second();
}

CartanData cartan_by_type(const std::string& type) {
  if (type == "A1") return CartanData::A1();
  if (type == "A2") return CartanData::A2();
  if (fs::exists(type)) {
    const auto j = nlohmann::json::parse(read_file(type));
    const auto& m = j.is_object() ? j.at("cartan") : j;
    return CartanData::from_matrix(m.get<IntMatrix>());
  }
  return CartanData::from_type(type);
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::vector<std::int64_t> ns;
  std::string output_dir;
};

int cmd_certify(const CertifyArgs& args, const Config& cfg, std::ostream& out) {
  std::vector<std::int64_t> ns = args.ns;
  if (ns.empty()) ns = {1, 2, 3, 4, 5};
  CertifyOptions options;
  for (auto n : ns)
    if (n < 1 || n > options.max_n)
      throw UsageError("--n must lie in 1.." + std::to_string(options.max_n) + ", got " + std::to_string(n));
  const auto certs = certify_all(ns, cfg.parallelism, options);

  std::string dir = args.output_dir;
  if (dir.empty())
    if (const char* env = std::getenv("FLAGCERT_OUTPUT_DIR")) dir = env;
  if (!dir.empty()) {
    fs::create_directories(dir);
    for (const auto& c : certs) {
      std::ofstream f(fs::path(dir) / ("certificate_n" + std::to_string(c.n) + ".json"));
      f << c.to_json().dump(2) << '\n';
    }
  }

  if (cfg.json) {
    if (certs.size() == 1) {
      emit(out, certs[0].to_json());
    } else {
      ordered_json arr = ordered_json::array();
      for (const auto& c : certs) arr.push_back(c.to_json());
      emit(out, arr);
    }
  } else {
    for (const auto& c : certs) out << c.to_text();
  }
  bool failed = false, indeterminate = false;
  for (const auto& c : certs) {
    for (const auto& check : c.checks) {
      failed |= check.status == CheckStatus::fail;
      indeterminate |= check.status == CheckStatus::indeterminate;
    }
  }
  return failed ? kCheckFailed : indeterminate ? kIndeterminate : kOk;
}

struct BruhatArgs {
  std::string matrix;
  std::string file;
  std::string field = "Q";
};

int cmd_bruhat(const BruhatArgs& args, const Config& cfg, std::ostream& out) {
  Ring ring;
  if (args.field == "Q")
    ring = rings::rationals();
  else if (args.field == "Qeps")
    ring = curve_rings::rational();
  else
    throw UsageError("--field must be Q or Qeps");
  const LoopMatrix g = matrix_parse(input_text(args.matrix, args.file), ring);
  const AffineWeylGroup group(CartanData::A1(), cfg.max_length);
  const BruhatCellResult r = bruhat_cell(group, g);
  if (cfg.json) {
    ordered_json j;
    j["w"] = group.print(r.w);
    j["left"] = matrix_print(r.left);
    j["right"] = matrix_print(r.right);
    emit(out, j);
  } else {
    out << group.print(r.w) << '\n'
        << "length " << group.length(r.w) << '\n'
        << "left " << matrix_print(r.left) << '\n'
        << "right " << matrix_print(r.right) << '\n';
  }
  return kOk;
}

struct WeylArgs {
  std::string query;
  std::string type = "A1";
  std::string w;
  std::string v;
  std::string root;
};

int cmd_weyl(const WeylArgs& args, const Config& cfg, std::ostream& out) {
  const AffineWeylGroup group(cartan_by_type(args.type), cfg.max_length);
  auto need = [](const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("this query needs ") + flag);
    return value;
  };
  ordered_json j;
  std::string text;
  if (args.query == "length") {
    const auto w = group.parse(need(args.w, "--w"));
    j["w"] = group.print(w);
    j["length"] = group.length(w);
    text = std::to_string(group.length(w));
  } else if (args.query == "leq") {
    const auto v = group.parse(need(args.v, "--v"));
    const auto w = group.parse(need(args.w, "--w"));
    const bool leq = group.bruhat_leq(v, w);
    j["v"] = group.print(v);
    j["w"] = group.print(w);
    j["leq"] = leq;
    text = leq ? "true" : "false";
  } else if (args.query == "phi-w") {
    const auto w = group.parse(need(args.w, "--w"));
    const auto phi = group.phi_w(w);
    ordered_json roots = ordered_json::array();
    std::string listed;
    for (const auto& a : phi) {
      roots.push_back(group.print(a));
      listed += (listed.empty() ? "" : ", ") + group.print(a);
    }
    j["w"] = group.print(w);
    j["phi"] = roots;
    j["count"] = phi.size();
    j["length"] = group.length(w);
    text = "Phi_w = {" + listed + "}\ncount " + std::to_string(phi.size()) + "\nlength " +
           std::to_string(group.length(w));
  } else if (args.query == "reflection") {
    if (!args.root.empty()) {
      const auto a = group.parse_root(args.root);
      const auto r = group.reflection_of_root(a);
      j["root"] = group.print(a);
      j["reflection"] = group.print(r);
      j["length"] = group.length(r);
      text = group.print(r);
    } else {
      const auto w = group.parse(need(args.w, "--w or --root"));
      const auto a = group.root_of_reflection(w);
      j["reflection"] = group.print(w);
      j["root"] = group.print(a);
      text = group.print(a);
    }
  } else if (args.query == "act") {
    const auto w = group.parse(need(args.w, "--w"));
    const auto a = group.parse_root(need(args.root, "--root"));
    const auto image = group.act(w, a);
    j["w"] = group.print(w);
    j["root"] = group.print(a);
    j["image"] = group.print(image);
    text = group.print(image);
  } else {
    throw UsageError("unknown weyl query '" + args.query + "' (length, leq, phi-w, reflection, act)");
  }
  if (cfg.json)
    emit(out, j);
  else
    out << text << '\n';
  return kOk;
}

struct TangentArgs {
  std::string matrix;
  std::string file;
  std::string chart = "zero";
};

int cmd_tangent(const TangentArgs& args, const Config& cfg, std::ostream& out) {
  const std::string text = input_text(args.matrix, args.file);
  const AffineWeylGroup group(CartanData::A1(), cfg.max_length);
  TangentVector v(rings::rationals());
  std::optional<std::string> point;
  if (args.chart == "zero") {
    v = tangent_of_dual_point(LoopMatrix::sl2(grid_parse(text, curve_rings::dual())));
  } else if (args.chart == "infinity") {
    const LoopMatrix g = LoopMatrix::sl2(grid_parse(text, curve_rings::laurent()));
    const LoopMatrix limit = infinity_limit(g);
    const BruhatCellResult cell = bruhat_cell(group, limit);
    const LoopMatrix rep = weyl_representative(cell.w);
    // Translate from the torus-fixed point when the limit is one, else from the limit itself.
    const bool fixed = coset_equal(limit, rep).equal;
    v = translate_tangent(fixed ? rep : limit, infinity_first_order(g));
    point = fixed ? group.print(cell.w) : matrix_print(limit);
  } else {
    throw UsageError("--chart must be zero or infinity");
  }
  const auto label = root_label(v);
  if (cfg.json) {
    ordered_json j;
    if (point) j["point"] = *point;
    j["components"] = v.to_json();
    j["label"] = label ? ordered_json(group.print(*label)) : ordered_json(nullptr);
    emit(out, j);
  } else {
    if (point) out << "point " << *point << '\n';
    out << v.to_string() << '\n' << "label " << (label ? group.print(*label) : std::string("none")) << '\n';
  }
  return kOk;
}

struct SeriesArgs {
  std::string expr;
  std::string file;
  std::string ring = "Q[eps]/(eps^2)";
  bool invert = false;
};

int cmd_series(const SeriesArgs& args, const Config& cfg, std::ostream& out) {
  const Ring ring = ring_by_name(args.ring);
  const LaurentSeries a = series_parse(input_text(args.expr, args.file), ring);
  std::string valuation;
  try {
    valuation = series_val(a).to_string();
  } catch (const IndeterminateValuation&) {
    valuation = ">=" + a.valuation_lower_bound().to_string();
  }
  std::optional<LaurentSeries> inv;
  if (args.invert) {
    // An exact input needs an exact inverse unless --precision names a target order.
    inv = series_invert(a, a.is_exact() ? cfg.precision : a.precision());
  }
  if (cfg.json) {
    ordered_json j;
    j["ring"] = ring->name();
    j["series"] = series_print(a);
    j["valuation"] = valuation;
    j["precision"] = a.precision() ? ordered_json(*a.precision()) : ordered_json("exact");
    if (inv) j["inverse"] = series_print(*inv);
    emit(out, j);
  } else {
    out << series_print(a) << '\n';
    if (inv) out << "inverse " << series_print(*inv) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int update_golden(const std::string& dir, const std::string& self) {
  const fs::path manifest = fs::path(dir) / "manifest.txt";
  std::ifstream in(manifest);
  if (!in) {
    std::cerr << "cannot read " << manifest << '\n';
    return kUsage;
  }
  std::string line;
  int written = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string file, code, cmdline;
    std::getline(ls, file, '\t');
    std::getline(ls, code, '\t');
    std::getline(ls, cmdline);
    const std::string shell = "cd '" + dir + "' && '" + self + "' " + cmdline + " 2>/dev/null";
    FILE* p = popen(shell.c_str(), "r");
    if (!p) return kUsage;
    std::string output;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, p)) output.append(buf, got);
    const int status = pclose(p);
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (std::to_string(exit_code) != code)
      std::cerr << file << ": exit " << exit_code << ", manifest expects " << code << '\n';
    std::ofstream(fs::path(dir) / file) << output;
    ++written;
  }
  std::cerr << "wrote " << written << " golden files to " << dir << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact certificates for Iwahori cosets, affine Weyl groups and tangent vectors of the SL2 affine flag manifold"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Config cfg;
  std::string golden_dir;
  app.add_flag("--json", cfg.json, "JSON output");
  app.add_option("--precision", cfg.precision, "target t-order for inverting an exact series with no exact inverse");
  app.add_option("--max-length", cfg.max_length, "length bound for Weyl group enumerations")->check(CLI::NonNegativeNumber);
  app.add_option("--parallelism", cfg.parallelism, "worker threads for certify")->check(CLI::PositiveNumber);
  app.add_option("--update-golden", golden_dir, "regenerate golden outputs listed in <dir>/manifest.txt");

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "certify the curve family for each --n");
  certify->add_option("--n", certify_args.ns, "curve parameter (repeatable; default 1..5)");
  certify->add_option("--output-dir", certify_args.output_dir, "also write certificate_n<k>.json files here");

  BruhatArgs bruhat_args;
  auto* bruhat = app.add_subcommand("bruhat", "Bruhat cell of an SL2 Laurent-polynomial matrix");
  bruhat->add_option("matrix", bruhat_args.matrix, "matrix text [[a, b], [c, d]]");
  bruhat->add_option("--file", bruhat_args.file, "read the matrix from a file");
  bruhat->add_option("--field", bruhat_args.field, "Q or Qeps");

  WeylArgs weyl_args;
  auto* weyl = app.add_subcommand("weyl", "affine Weyl group queries: length, leq, phi-w, reflection, act");
  weyl->add_option("query", weyl_args.query, "query")->required();
  weyl->add_option("--type", weyl_args.type, "A1, A2, A<r> or a JSON Cartan-matrix file");
  weyl->add_option("--w", weyl_args.w, "element, e.g. t[-3] or s0*s1");
  weyl->add_option("--v", weyl_args.v, "second element for leq");
  weyl->add_option("--root", weyl_args.root, "affine root, e.g. -alpha+delta");

  TangentArgs tangent_args;
  auto* tangent = app.add_subcommand("tangent", "tangent vector of a dual-number point");
  tangent->add_option("matrix", tangent_args.matrix, "matrix text");
  tangent->add_option("--file", tangent_args.file, "read the matrix from a file");
  tangent->add_option("--chart", tangent_args.chart, "zero (matrix over Q[eps]/(eps^2)) or infinity (over Q[eps,eps^-1])");

  SeriesArgs series_args;
  auto* series = app.add_subcommand("series", "parse and print a Laurent series in normal form");
  series->add_option("expr", series_args.expr, "series text");
  series->add_option("--file", series_args.file, "read the series from a file");
  series->add_option("--ring", series_args.ring, "coefficient ring, e.g. Q, Q[eps], Q[eps]/(eps^2), Q(eps)");
  series->add_flag("--invert", series_args.invert, "also print the inverse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!golden_dir.empty()) return update_golden(fs::absolute(golden_dir).string(), fs::canonical("/proc/self/exe").string());
    if (*certify) return cmd_certify(certify_args, cfg, std::cout);
    if (*bruhat) return cmd_bruhat(bruhat_args, cfg, std::cout);
    if (*weyl) return cmd_weyl(weyl_args, cfg, std::cout);
    if (*tangent) return cmd_tangent(tangent_args, cfg, std::cout);
    if (*series) return cmd_series(series_args, cfg, std::cout);
    std::cerr << app.help();
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IndeterminateMembership& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const IndeterminateValuation& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const IndeterminatePivot& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const InexactResult& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
}
