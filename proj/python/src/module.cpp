// Python bindings. Elements cross the boundary in their text form and
// certificates as JSON text, so the Python side never sees C++ types beyond
// Group and the small result records.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "paradox/certificate.hpp"
#include "paradox/cli.hpp"
#include "paradox/crossed_product.hpp"
#include "paradox/errors.hpp"
#include "paradox/induced.hpp"
#include "paradox/paradox.hpp"
#include "paradox/smallsets.hpp"
#include "paradox/window_cache.hpp"

namespace py = pybind11;
using namespace paradox;

namespace {

std::vector<std::string> format_all(const Group& g, std::span<const Elem> xs) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(g.format(x));
  return out;
}

py::dict report_dict(const ValidationReport& r) {
  py::list checks;
  for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
  py::dict d;
  d["passed"] = r.passed();
  d["checks"] = checks;
  return d;
}

// Runs the doubling search and returns (exit code, certificate JSON).
py::tuple check(const Group& g, const std::string& set, const std::string& translators, int radius,
                int slack, bool witness) {
  const SetExpr a = SetExpr::parse(g, set);
  const auto s = parse_translators(g, translators);
  const Window w = cached_ball(g, radius);
  const auto result = doubling_matching(a, s, w, slack);
  if (const auto* m = std::get_if<MatchCert>(&result)) {
    if (!witness) return py::make_tuple(kExitFound, write_certificate(*m, slack));
    auto uniform = uniform_witness(*m);
    return py::make_tuple(kExitFound,
                          write_certificate(WitnessCert{uniform ? *uniform : witness_from_matching(*m), w}, slack));
  }
  return py::make_tuple(kExitDual, write_certificate(std::get<DeficiencyCert>(result), slack));
}

// Witness certificate for A = semigroup(s, t; e) on the positive words of
// length <= max_len, or None when two words collide.
std::optional<std::string> semigroup_witness(const Group& g, const std::string& s, const std::string& t,
                                             int max_len) {
  const Elem se = g.parse_elem(s);
  const Elem te = g.parse_elem(t);
  auto result = free_semigroup_witness(g, se, te, max_len);
  auto* w = std::get_if<ParadoxWitness>(&result);
  if (w == nullptr) return std::nullopt;
  const std::vector<Elem> gens{se, te};
  Window win = positive_words_window(g, gens, max_len);
  return write_certificate(WitnessCert{std::move(*w), std::move(win)});
}

// Replays the crossed-product identities for the witness carried by a
// match or witness certificate.
py::dict cp_witness(const std::string& cert_text, std::optional<int> radius, int slack) {
  auto decoded = read_certificate(cert_text);
  std::optional<ParadoxWitness> w;
  std::optional<Window> win;
  if (auto* c = std::get_if<WitnessCert>(&decoded.cert)) {
    w = c->witness;
    win = c->window;
  } else if (auto* m = std::get_if<MatchCert>(&decoded.cert)) {
    auto uniform = uniform_witness(*m);
    w = uniform ? *uniform : witness_from_matching(*m);
    win = m->window;
  } else {
    throw Error("expected a match or witness certificate, found " + certificate_kind(decoded.cert));
  }
  if (radius) win = cached_ball(w->set.group(), *radius);
  const auto check = witness_check(*w, *win, slack);
  if (!check.passed()) throw InvariantViolation("witness does not re-check: " + check.summary());
  PIWitness pw = pi_witness(*w);
  py::dict d = report_dict(verify_pi_witness(pw, *win, slack));
  d["certificate"] = write_certificate(CPWitnessCert{std::move(pw), *win}, slack);
  return d;
}

// Induces a token witness along t; returns the JSON with the "output" block.
py::dict induce(const std::string& token_json, std::optional<std::string> t) {
  InduceInput in = parse_induce_input(token_json);
  if (t) in.t = in.group.parse_elem(*t);
  if (!in.t) throw Error("no element t given");
  const auto token_check = check_token_witness(in.subgroup, in.witness);
  if (!token_check.passed()) throw InvariantViolation("token witness: " + token_check.summary());
  const InducedWitness out = induce_witness(in.subgroup, in.witness, *in.t);
  py::dict d = report_dict(check_induced_witness(in.subgroup, out));
  d["json"] = token_witness_json(in.subgroup, in.witness, &out);
  return d;
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_paradox, m) {
  m.doc() = "Finite-window certificates for paradoxical decompositions";
  m.attr("__version__") = PARADOX_VERSION;

  auto base = py::register_exception<Error>(m, "ParadoxError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  py::class_<Group>(m, "Group")
      .def(py::init([](const std::string& spec) { return Group::parse(spec); }), py::arg("spec"))
      .def_property_readonly("spec", &Group::spec)
      .def_property_readonly("identity", [](const Group& g) { return g.format(g.identity()); })
      .def_property_readonly("generators", [](const Group& g) { return format_all(g, g.generators()); })
      .def("mul", [](const Group& g, const std::string& a, const std::string& b) {
        return g.format(g.mul(g.parse_elem(a), g.parse_elem(b)));
      })
      .def("inv", [](const Group& g, const std::string& a) { return g.format(g.inv(g.parse_elem(a))); })
      .def("normalize", [](const Group& g, const std::string& a) { return g.format(g.parse_elem(a)); })
      .def("ball", [](const Group& g, int radius) {
        const Window w = g.ball(radius);
        return format_all(g, w.elements());
      })
      .def("__repr__", [](const Group& g) { return "Group('" + g.spec() + "')"; });

  m.def("check", &check, py::arg("group"), py::arg("set"), py::arg("translators"), py::arg("radius"),
        py::arg("slack") = 4, py::arg("witness") = false,
        "Doubling search on ball(radius); returns (exit code, certificate JSON).");
  m.def(
      "verify_certificate",
      [](const std::string& text) {
        const auto o = verify_certificate(text);
        return py::make_tuple(o.exit_code, o.kind, o.message);
      },
      py::arg("text"), "Replays a certificate; returns (exit code, kind, message).");
  m.def("semigroup_witness", &semigroup_witness, py::arg("group"), py::arg("s"), py::arg("t"),
        py::arg("max_len"));
  m.def(
      "greedy_small_set",
      [](const Group& g, int n) { return format_all(g, greedy_small_set(g, n)); }, py::arg("group"),
      py::arg("n"));
  m.def("cp_witness", &cp_witness, py::arg("certificate"), py::arg("radius") = std::nullopt,
        py::arg("slack") = 4);
  m.def("induce", &induce, py::arg("token_json"), py::arg("t") = std::nullopt);
  m.def("sha256_hex", [](const std::string& s) { return sha256_hex(s); });
  m.def("run_cli", &run, py::arg("args"), "Runs the command line in-process; returns (code, stdout, stderr).");
}
