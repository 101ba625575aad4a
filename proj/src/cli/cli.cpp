#include "dmod/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmod/hilbert.hpp"
#include "dmod/io.hpp"
#include "dmod/solver.hpp"

namespace dmod::cli {

namespace {

using nlohmann::json;

// Exit codes.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNegative = 2;
constexpr int kUndecided = 3;

struct Options {
  std::string field = "q";
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::optional<int> max_degree;
  std::string method = "elim";
  int zmax = 8;
  int m = 1;
  std::string file;
  std::string k;
  std::string side = "right";
  std::string kind = "bernstein";
  std::vector<std::string> args;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("ORE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("ORE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

VarIndexSet parse_k(const std::string& text, int m) {
  std::vector<int> members;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(item);
    } catch (const std::exception&) {
      throw InvalidArgument("bad index in K: " + item);
    }
    if (v < 1 || v > m) throw IndexOutOfRange("K index " + item);
    members.push_back(v);
  }
  return VarIndexSet(m, members);
}

VarIndexSet k_from_json(const json& j, int m) {
  std::vector<int> members;
  for (const auto& v : j) {
    int k = v.get<int>();
    if (k < 1 || k > m) throw IndexOutOfRange("K index " + std::to_string(k));
    members.push_back(k);
  }
  return VarIndexSet(m, members);
}

Side parse_side(const std::string& s) {
  if (s == "right") return Side::Right;
  if (s == "left") return Side::Left;
  throw InvalidArgument("side must be left or right");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return json::parse(in);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

// Operands come from --file (one per line) or from the positional arguments.
std::vector<std::string> operands(const Options& o) {
  return o.file.empty() ? o.args : read_lines(o.file);
}

// Matrix input: --file {m, field, K, side, B} or positional rows "a,b,c".
struct MatrixInput {
  int m;
  Field field;
  std::optional<VarIndexSet> k;
  Side side;
  OpMatrix b;
};

MatrixInput read_matrix(const Options& o) {
  std::vector<std::vector<std::string>> cells;
  MatrixInput in{o.m, Field::parse(o.field), std::nullopt, parse_side(o.side), {}};
  std::optional<json> kjson;
  if (!o.file.empty()) {
    json j = read_json(o.file);
    in.m = j.at("m").get<int>();
    if (j.contains("field")) in.field = Field::parse(j.at("field").get<std::string>());
    if (j.contains("K")) kjson = j.at("K");
    if (j.contains("side")) in.side = parse_side(j.at("side").get<std::string>());
    for (const auto& row : j.at("B")) cells.push_back(row.get<std::vector<std::string>>());
  } else {
    for (const auto& row : o.args) {
      std::vector<std::string> r;
      std::stringstream ss(row);
      std::string item;
      while (std::getline(ss, item, ',')) r.push_back(item);
      cells.push_back(r);
    }
  }
  if (cells.empty() || cells.front().empty()) throw InvalidArgument("empty matrix");
  if (kjson) {
    in.k = k_from_json(*kjson, in.m);
  } else if (!o.k.empty()) {
    in.k = parse_k(o.k, in.m);
  }
  std::vector<std::vector<WeylOp>> rows;
  for (const auto& r : cells) {
    if (r.size() != cells.front().size()) throw InvalidArgument("ragged matrix");
    std::vector<WeylOp> ops;
    for (const auto& c : r) ops.push_back(parse_operator(c, in.m, in.field));
    rows.push_back(std::move(ops));
  }
  in.b = OpMatrix(std::move(rows));
  return in;
}

LinearSystem read_system(const std::string& path) {
  json j = read_json(path);
  const int m = j.at("m").get<int>();
  const Field f = Field::parse(j.value("field", std::string("q")));
  VarIndexSet kd = j.contains("K_den") ? k_from_json(j.at("K_den"), m) : VarIndexSet(m);
  std::vector<std::vector<WeylOp>> rows;
  for (const auto& row : j.at("A")) {
    std::vector<WeylOp> ops;
    for (const auto& c : row) ops.push_back(parse_operator(c.get<std::string>(), m, f));
    rows.push_back(std::move(ops));
  }
  std::vector<WeylOp> rhs;
  for (const auto& c : j.at("rhs")) rhs.push_back(parse_operator(c.get<std::string>(), m, f));
  if (rows.empty()) throw InvalidArgument("system has no equations");
  return LinearSystem(FractionContext::standard(m, f, kd), OpMatrix(std::move(rows)), std::move(rhs));
}

ModulePresentation read_module(const std::string& path) {
  json j = read_json(path);
  const int m = j.at("m").get<int>();
  const Field f = Field::parse(j.value("field", std::string("q")));
  const int n = j.at("n").get<int>();
  std::vector<std::vector<WeylOp>> gens;
  for (const auto& g : j.at("generators")) {
    std::vector<WeylOp> w;
    for (const auto& c : g) w.push_back(parse_operator(c.get<std::string>(), m, f));
    gens.push_back(std::move(w));
  }
  return ModulePresentation(m, f, n, std::move(gens));
}

std::vector<std::string> op_strings(const std::vector<WeylOp>& ops) {
  std::vector<std::string> out;
  for (const auto& a : ops) out.push_back(to_string(a));
  return out;
}

void print_list(std::ostream& out, const std::string& label, const std::vector<std::string>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) out << label << (i + 1) << " = " << items[i] << "\n";
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Field f = Field::parse(o.field);
  auto src = operands(o);
  if (src.empty()) throw InvalidArgument("eval needs at least one expression");
  std::vector<std::string> res;
  for (const auto& s : src) res.push_back(to_string(parse_operator(s, o.m, f)));
  if (o.json) {
    out << json{{"results", res}}.dump(2) << "\n";
  } else {
    for (const auto& r : res) out << r << "\n";
  }
  return kOk;
}

int cmd_mul(const Options& o, std::ostream& out) {
  const Field f = Field::parse(o.field);
  auto src = operands(o);
  if (src.empty()) throw InvalidArgument("mul needs at least one expression");
  WeylOp acc = parse_operator(src.front(), o.m, f);
  for (std::size_t i = 1; i < src.size(); ++i) acc = acc * parse_operator(src[i], o.m, f);
  if (o.json) {
    out << json{{"result", to_string(acc)}}.dump(2) << "\n";
  } else {
    out << to_string(acc) << "\n";
  }
  return kOk;
}

int cmd_deg(const Options& o, std::ostream& out) {
  const Field f = Field::parse(o.field);
  auto src = operands(o);
  if (src.size() != 1) throw InvalidArgument("deg takes exactly one expression");
  DegreeKind kind;
  if (o.kind == "bernstein") {
    kind = DegreeKind::Bernstein;
  } else if (o.kind == "ord") {
    kind = DegreeKind::OrdD;
  } else if (o.kind == "ordk") {
    kind = DegreeKind::OrdK;
  } else if (o.kind == "degk") {
    kind = DegreeKind::DegK;
  } else {
    throw InvalidArgument("kind must be bernstein, ord, ordk or degk");
  }
  std::optional<VarIndexSet> k;
  if (kind == DegreeKind::OrdK || kind == DegreeKind::DegK) k = parse_k(o.k, o.m);
  int d = filtration_degree(parse_operator(src.front(), o.m, f), kind, k);
  if (o.json) {
    out << json{{"degree", d}}.dump(2) << "\n";
  } else {
    out << d << "\n";
  }
  return kOk;
}

int cmd_syz(const Options& o, std::ostream& out) {
  MatrixInput in = read_matrix(o);
  Syzygy s = syzygy(in.b, in.side, in.k.value_or(VarIndexSet::full(in.m)), o.max_degree);
  auto c = op_strings(s.c);
  if (o.json) {
    out << json{{"status", "FOUND"}, {"syzygy", c}, {"degree", s.degree}, {"bound", s.bound}}.dump(2) << "\n";
  } else {
    print_list(out, "c", c);
    out << "ansatz degree: " << s.degree << " (bound " << s.bound << ")\n";
  }
  return kOk;
}

int cmd_clm(const Options& o, std::ostream& out) {
  const Field f = Field::parse(o.field);
  auto src = operands(o);
  if (src.empty()) throw InvalidArgument("clm needs at least one operator");
  std::vector<WeylOp> bs;
  for (const auto& s : src) bs.push_back(parse_operator(s, o.m, f));
  VarIndexSet k = o.k.empty() ? VarIndexSet::full(o.m) : parse_k(o.k, o.m);
  CommonMultiple cm = common_multiple(bs, parse_side(o.side), k, o.max_degree);
  auto c = op_strings(cm.c);
  if (o.json) {
    out << json{{"status", "FOUND"}, {"multipliers", c}, {"value", to_string(cm.value)}, {"degree", cm.degree},
                {"bound", cm.bound}}
               .dump(2)
        << "\n";
  } else {
    print_list(out, "c", c);
    out << "common multiple: " << to_string(cm.value) << "\n";
  }
  return kOk;
}

int cmd_qinv(const Options& o, std::ostream& out) {
  MatrixInput in = read_matrix(o);
  OpMatrix c = left_quasi_inverse(in.b, in.k);
  OpMatrix cb = c * in.b;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> diag;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    std::vector<std::string> r;
    for (std::size_t j = 0; j < c.cols(); ++j) r.push_back(to_string(c.at(i, j)));
    rows.push_back(std::move(r));
    diag.push_back(to_string(cb.at(i, i)));
  }
  if (o.json) {
    out << json{{"status", "FOUND"}, {"C", rows}, {"diagonal", diag}}.dump(2) << "\n";
  } else {
    for (const auto& r : rows) {
      out << "[";
      for (std::size_t j = 0; j < r.size(); ++j) out << (j ? ", " : "") << r[j];
      out << "]\n";
    }
    out << "diagonal of C*B: ";
    for (std::size_t i = 0; i < diag.size(); ++i) out << (i ? ", " : "") << diag[i];
    out << "\n";
  }
  return kOk;
}

int status_code(SolveStatus s) {
  switch (s) {
  case SolveStatus::Solved:
    return kOk;
  case SolveStatus::Unsolvable:
    return kNegative;
  case SolveStatus::UndecidedAtCap:
    return kUndecided;
  }
  return kUndecided;
}

int cmd_solve(const Options& o, std::ostream& out) {
  if (o.file.empty()) throw InvalidArgument("solve needs --file");
  LinearSystem sys = read_system(o.file);
  SolveOutcome res;
  if (o.method == "elim") {
    res = decide_solve(sys, resolve_seed(o));
  } else if (o.method == "ansatz") {
    std::vector<int> schedule;
    for (int d = 0; d <= o.max_degree.value_or(8); ++d) schedule.push_back(d);
    res = ansatz_solve(sys, schedule);
  } else {
    throw InvalidArgument("method must be elim or ansatz");
  }
  if (o.json) {
    json sol = json::array();
    for (const auto& v : res.solution) {
      sol.push_back({{"num", to_string(v.num())}, {"den", to_string(v.den())}, {"text", v.str()}});
    }
    json certs = json::array();
    for (const auto& c : res.certificates) certs.push_back({{"stage", c.stage}, {"name", c.name}, {"value", c.value}});
    json j{{"status", to_string(res.status)}, {"solution", sol}, {"certificates", certs}};
    if (!res.note.empty()) j["note"] = res.note;
    out << j.dump(2) << "\n";
  } else {
    out << "status: " << to_string(res.status) << "\n";
    for (std::size_t i = 0; i < res.solution.size(); ++i) out << "V" << (i + 1) << " = " << res.solution[i].str() << "\n";
    if (!res.note.empty()) out << "note: " << res.note << "\n";
    for (const auto& c : res.certificates) out << "  [" << c.stage << "] " << c.name << ": " << c.value << "\n";
  }
  return status_code(res.status);
}

json hf_json(const std::vector<std::pair<int, long>>& hf) {
  json a = json::array();
  for (const auto& [z, v] : hf) a.push_back(v);
  return a;
}

void print_hk(std::ostream& out, const HKReport& rep) {
  out << "hf:";
  for (const auto& [z, v] : rep.hf) out << " " << v;
  out << "\n";
  if (rep.t < 0) {
    out << "t: ZERO (zero module)\n";
  } else {
    out << "t: " << rep.t << "\nl: " << rep.l.get_str() << "\npoly: " << poly_to_string(rep.poly) << "\n";
  }
}

int cmd_hk(const Options& o, std::ostream& out) {
  if (o.file.empty()) throw InvalidArgument("hk needs --file");
  ModulePresentation l = read_module(o.file);
  HilbertValues hv = hilbert_values(l, o.zmax, 2, resolve_seed(o));
  HKFit fit = hk_fit(hv.hf);
  if (o.json) {
    json hf = json::array();
    for (long v : hv.hf) hf.push_back(v);
    json j{{"hf", hf}, {"t", fit.t}, {"l", fit.l.get_str()}, {"poly", poly_to_string(fit.poly)},
           {"stabilized", hv.stabilized}};
    out << j.dump(2) << "\n";
  } else {
    HKReport rep;
    for (int z = 0; z <= o.zmax; ++z) rep.hf.emplace_back(z, hv.hf[z]);
    rep.t = fit.t;
    rep.l = fit.l;
    rep.poly = fit.poly;
    print_hk(out, rep);
  }
  return kOk;
}

int cmd_bezout(const Options& o, std::ostream& out) {
  if (o.file.empty()) {
    if (o.args.size() != 5) throw InvalidArgument("bezout takes --file or the five numbers n s m d t");
    std::vector<int> v;
    for (const auto& a : o.args) {
      try {
        v.push_back(std::stoi(a));
      } catch (const std::exception&) {
        throw InvalidArgument("not an integer: " + a);
      }
    }
    mpz_class b = bezout_bound(v[0], v[1], v[2], v[3], v[4]);
    if (o.json) {
      out << json{{"bounds", {{"bezout", b.get_str()}}}}.dump(2) << "\n";
    } else {
      out << b.get_str() << "\n";
    }
    return kOk;
  }
  ModulePresentation l = read_module(o.file);
  HKReport rep = bezout_check(l, o.zmax, resolve_seed(o));
  if (o.json) {
    json bounds{{"satisfied", rep.satisfied}};
    bounds["bezout"] = rep.bezout ? json(rep.bezout->get_str()) : json(nullptr);
    bounds["kolchin_sum"] = rep.kolchin ? json(*rep.kolchin) : json(nullptr);
    json j{{"hf", hf_json(rep.hf)}, {"t", rep.t}, {"l", rep.l.get_str()}, {"poly", poly_to_string(rep.poly)},
           {"bounds", bounds}, {"note", rep.note}};
    out << j.dump(2) << "\n";
  } else {
    print_hk(out, rep);
    if (rep.bezout) out << "bezout bound: " << rep.bezout->get_str() << "\n";
    if (rep.kolchin) out << "kolchin bound: " << *rep.kolchin << "\n";
    out << "satisfied: " << (rep.satisfied ? "yes" : "no") << "\n";
    out << "note: " << rep.note << "\n";
  }
  return rep.satisfied ? kOk : kNegative;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact linear algebra over Weyl algebras and their fields of fractions", "dmod"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--field", o.field, "ground field: q or fp:<prime>");
  app.add_option("--seed", o.seed, "random seed (default: ORE_SEED, then 1)");
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--max-degree", o.max_degree, "degree cap for searches (solve --method ansatz: last degree)");
  app.add_option("--method", o.method, "solve method: elim or ansatz");
  app.add_option("--zmax", o.zmax, "largest order for Hilbert function values");
  app.add_option("--m", o.m, "number of variables");
  app.add_option("--file", o.file, "input file");
  app.add_option("--K", o.k, "comma separated derivation indices");
  app.add_option("--side", o.side, "left or right");

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Options&, std::ostream&);
  };
  const Sub subs[] = {
      {"eval", "normal form of operator expressions", cmd_eval},
      {"mul", "product of operators, left to right", cmd_mul},
      {"deg", "filtration degree of an operator", cmd_deg},
      {"syz", "syzygy of an operator matrix", cmd_syz},
      {"clm", "common left or right multiple", cmd_clm},
      {"qinv", "left quasi-inverse of a square matrix", cmd_qinv},
      {"solve", "solve a linear system over the fractions", cmd_solve},
      {"hk", "Hilbert function and Hilbert-Kolchin fit", cmd_hk},
      {"bezout", "Bezout bound, or the bound check for a module", cmd_bezout},
  };
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("args", o.args, "operands");
    if (std::string(s.name) == "deg") sub->add_option("--kind", o.kind, "bernstein, ord, ordk or degk");
    handles.push_back(sub);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (std::size_t i = 0; i < handles.size(); ++i) {
      if (handles[i]->parsed()) return subs[i].run(o, out);
    }
    err << "no subcommand\n";
    return kUsage;
  } catch (const NotStabilized& e) {
    err << e.what() << "\n";
    return kUndecided;
  } catch (const UndecidedAtCap& e) {
    err << e.what() << "\n";
    return kUndecided;
  } catch (const ResourceCap& e) {
    err << e.what() << "\n";
    return kUndecided;
  } catch (const NotFoundWithinBound& e) {
    err << e.what() << "\n";
    return kNegative;
  } catch (const SingularInput& e) {
    err << e.what() << "\n";
    return kNegative;
  } catch (const nlohmann::json::exception& e) {
    err << "bad input file: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kUsage;
  }
}

} // namespace dmod::cli
