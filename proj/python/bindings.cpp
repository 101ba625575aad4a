#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmod/hilbert.hpp"
#include "dmod/io.hpp"
#include "dmod/solver.hpp"

namespace py = pybind11;
using namespace dmod;

namespace {

py::int_ big(const mpz_class& z) { return py::int_(py::str(z.get_str())); }

VarIndexSet make_k(int m, const std::vector<int>& k) { return VarIndexSet(m, k); }

OpMatrix make_matrix(const std::vector<std::vector<WeylOp>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidArgument("empty matrix");
  return OpMatrix(rows);
}

std::vector<std::vector<WeylOp>> rows_of(const OpMatrix& a) {
  std::vector<std::vector<WeylOp>> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i].push_back(a.at(i, j));
  return out;
}

py::dict outcome_dict(const SolveOutcome& res) {
  py::list sol, certs;
  for (const auto& v : res.solution) sol.append(py::make_tuple(v.num(), v.den()));
  for (const auto& c : res.certificates) certs.append(py::make_tuple(c.stage, c.name, c.value));
  py::dict d;
  d["status"] = to_string(res.status);
  d["solution"] = sol;
  d["certificates"] = certs;
  d["note"] = res.note;
  return d;
}

ModulePresentation make_module(const std::vector<std::vector<WeylOp>>& gens, int n) {
  if (gens.empty() || gens.front().empty()) throw InvalidArgument("no generators");
  const WeylOp& first = gens.front().front();
  return ModulePresentation(first.m(), first.field(), n, gens);
}

py::tuple rational(const mpq_class& q) { return py::make_tuple(big(q.get_num()), big(q.get_den())); }

} // namespace

PYBIND11_MODULE(dmod, mod) {
  mod.doc() = "Weyl algebra arithmetic, Ore fractions and linear systems over them";

  auto base = py::register_exception<Error>(mod, "DmodError");
  py::register_exception<SyntaxError>(mod, "ParseError", base.ptr());
  py::register_exception<IndexOutOfRange>(mod, "IndexOutOfRangeError", base.ptr());
  py::register_exception<ResourceCap>(mod, "ResourceCapError", base.ptr());
  py::register_exception<NotStabilized>(mod, "NotStabilizedError", base.ptr());

  py::class_<WeylOp>(mod, "Operator")
      .def_property_readonly("m", &WeylOp::m)
      .def("is_zero", &WeylOp::is_zero)
      .def("degree", [](const WeylOp& a, const std::string& kind, const std::vector<int>& k) {
        if (kind == "bernstein") return filtration_degree(a, DegreeKind::Bernstein);
        if (kind == "ord") return filtration_degree(a, DegreeKind::OrdD);
        VarIndexSet ks(a.m(), k);
        if (kind == "ordk") return filtration_degree(a, DegreeKind::OrdK, ks);
        if (kind == "degk") return filtration_degree(a, DegreeKind::DegK, ks);
        throw InvalidArgument("kind must be bernstein, ord, ordk or degk");
      }, py::arg("kind") = "bernstein", py::arg("K") = std::vector<int>{})
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__str__", [](const WeylOp& a) { return to_string(a); })
      .def("__repr__", [](const WeylOp& a) { return "Operator('" + to_string(a) + "')"; });

  mod.def("parse", [](const std::string& text, int m, const std::string& field) {
    return parse_operator(text, m, Field::parse(field));
  }, py::arg("text"), py::arg("m"), py::arg("field") = "q", "Parse an operator expression into normal order.");

  mod.def("apply", [](const WeylOp& a, const WeylOp& f) {
    return from_polynomial(apply_to_polynomial(a, as_polynomial(f)));
  }, py::arg("op"), py::arg("poly"), "Apply an operator to a polynomial (an operator without derivations).");

  mod.def("adjoint", &adjoint);

  mod.def("syzygy", [](const std::vector<std::vector<WeylOp>>& b, const std::string& side, const std::vector<int>& k,
                       std::optional<int> cap) {
    OpMatrix mat = make_matrix(b);
    Syzygy s = syzygy(mat, side == "left" ? Side::Left : Side::Right, make_k(mat.m(), k), cap);
    py::dict d;
    d["c"] = s.c;
    d["degree"] = s.degree;
    d["bound"] = s.bound;
    return d;
  }, py::arg("B"), py::arg("side") = "right", py::arg("K") = std::vector<int>{}, py::arg("cap") = py::none());

  mod.def("common_multiple", [](const std::vector<WeylOp>& bs, const std::string& side, const std::vector<int>& k) {
    if (bs.empty()) throw InvalidArgument("no operators");
    CommonMultiple cm = common_multiple(bs, side == "left" ? Side::Left : Side::Right, make_k(bs.front().m(), k));
    py::dict d;
    d["c"] = cm.c;
    d["value"] = cm.value;
    d["degree"] = cm.degree;
    return d;
  }, py::arg("ops"), py::arg("side") = "right", py::arg("K") = std::vector<int>{});

  mod.def("quasi_inverse", [](const std::vector<std::vector<WeylOp>>& b, std::optional<std::vector<int>> k) {
    OpMatrix mat = make_matrix(b);
    std::optional<VarIndexSet> alg;
    if (k) alg = make_k(mat.m(), *k);
    return rows_of(left_quasi_inverse(mat, alg));
  }, py::arg("B"), py::arg("K") = py::none());

  mod.def("solve", [](const std::vector<std::vector<WeylOp>>& a, const std::vector<WeylOp>& rhs,
                      const std::vector<int>& k_den, const std::string& method, std::uint64_t seed, int max_degree) {
    OpMatrix mat = make_matrix(a);
    LinearSystem sys(FractionContext::standard(mat.m(), mat.field(), make_k(mat.m(), k_den)), mat, rhs);
    if (method == "elim") return outcome_dict(decide_solve(sys, seed));
    if (method != "ansatz") throw InvalidArgument("method must be elim or ansatz");
    std::vector<int> schedule;
    for (int d = 0; d <= max_degree; ++d) schedule.push_back(d);
    return outcome_dict(ansatz_solve(sys, schedule));
  }, py::arg("A"), py::arg("rhs"), py::arg("K_den") = std::vector<int>{}, py::arg("method") = "elim",
     py::arg("seed") = 1, py::arg("max_degree") = 8,
     "Solve sum_i A[j][i] V_i = rhs[j]; solution entries are (numerator, denominator) pairs.");

  mod.def("hilbert", [](const std::vector<std::vector<WeylOp>>& gens, int n, int zmax, std::uint64_t seed) {
    ModulePresentation l = make_module(gens, n);
    HilbertValues hv = hilbert_values(l, zmax, 2, seed);
    HKFit fit = hk_fit(hv.hf);
    py::dict d;
    d["hf"] = hv.hf;
    d["t"] = fit.t;
    d["l"] = rational(fit.l);
    d["poly"] = poly_to_string(fit.poly);
    d["stabilized"] = hv.stabilized;
    return d;
  }, py::arg("generators"), py::arg("n") = 1, py::arg("zmax") = 8, py::arg("seed") = 1,
     "generators[j] is the tuple (w_1j, ..., w_nj).");

  mod.def("bezout_check", [](const std::vector<std::vector<WeylOp>>& gens, int n, int zmax, std::uint64_t seed) {
    HKReport rep = bezout_check(make_module(gens, n), zmax, seed);
    py::dict d;
    std::vector<long> hf;
    for (const auto& [z, v] : rep.hf) hf.push_back(v);
    d["hf"] = hf;
    d["t"] = rep.t;
    d["l"] = rational(rep.l);
    d["poly"] = poly_to_string(rep.poly);
    d["bezout"] = rep.bezout ? py::object(big(*rep.bezout)) : py::object(py::none());
    d["kolchin_sum"] = rep.kolchin ? py::object(py::int_(*rep.kolchin)) : py::object(py::none());
    d["satisfied"] = rep.satisfied;
    return d;
  }, py::arg("generators"), py::arg("n") = 1, py::arg("zmax") = 8, py::arg("seed") = 1);

  mod.def("principal_element", [](const std::vector<std::vector<WeylOp>>& gens, int n, int i0,
                                  const std::vector<int>& k, std::uint64_t seed) -> py::object {
    ModulePresentation l = make_module(gens, n);
    auto pe = principal_element(l, i0, make_k(l.m(), k), seed);
    if (!pe) return py::none();
    return py::make_tuple(pe->b, pe->coeffs);
  }, py::arg("generators"), py::arg("n"), py::arg("i0"), py::arg("K"), py::arg("seed") = 1);

  mod.def("bezout_bound", [](int n, int s, int m, int d, int t) { return big(bezout_bound(n, s, m, d, t)); });
  mod.def("theorem_solution_bound", [](int m, int k, int d, int p, int q) {
    return big(bounds::theorem_solution(m, k, d, p, q));
  });
  mod.def("lemma_vector_bound", [](int m, int k, int p, int d) { return big(bounds::lemma_vector(m, k, p, d)); });
}
