#include "paradox/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "paradox/certificate.hpp"
#include "paradox/crossed_product.hpp"
#include "paradox/embedding.hpp"
#include "paradox/errors.hpp"
#include "paradox/paradox.hpp"
#include "paradox/smallsets.hpp"
#include "paradox/window_cache.hpp"

namespace paradox {

namespace {

using nlohmann::json;

// Thrown by subcommands for failed checks that should exit with code 3.
class VerificationFailed : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::string group;
  int window = -1;
  int slack = 4;
  std::string out_path;
  bool quiet = false;
};

class Runner {
 public:
  Runner(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  Group group() const {
    if (g_.group.empty()) throw CLI::RequiredError("--group");
    return Group::parse(g_.group);
  }

  Window window(const Group& g) const {
    if (g_.window < 0) throw CLI::RequiredError("--window");
    return cached_ball(g, g_.window);
  }

  void emit(const std::string& text) const {
    if (g_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(g_.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write " + g_.out_path);
    file << text;
  }

  void note(const std::string& line) const {
    if (!g_.quiet) err_ << line << '\n';
  }

  int slack() const { return g_.slack; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> format_all(const Group& g, std::span<const Elem> xs) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(g.format(x));
  return out;
}

// A paradox witness and its window from a match or witness certificate.
std::pair<ParadoxWitness, Window> witness_from_cert(const std::string& path) {
  auto decoded = read_certificate(read_file(path));
  if (auto* w = std::get_if<WitnessCert>(&decoded.cert)) return {w->witness, w->window};
  if (auto* m = std::get_if<MatchCert>(&decoded.cert)) {
    auto uniform = uniform_witness(*m);
    return {uniform ? *uniform : witness_from_matching(*m), m->window};
  }
  throw Error(path + ": expected a match or witness certificate, found " + certificate_kind(decoded.cert));
}

int cmd_check(const Runner& r, const std::string& set, const std::string& translators, bool as_witness) {
  const Group g = r.group();
  const SetExpr a = SetExpr::parse(g, set);
  const auto s = parse_translators(g, translators);
  const Window w = r.window(g);
  const auto result = doubling_matching(a, s, w, r.slack());
  if (const auto* m = std::get_if<MatchCert>(&result)) {
    r.note("match: " + std::to_string(m->assignment.size()) + " points doubled on a window of " +
           std::to_string(w.size()));
    if (as_witness) {
      auto uniform = uniform_witness(*m);
      r.emit(write_certificate(WitnessCert{uniform ? *uniform : witness_from_matching(*m), w}, r.slack()));
    } else {
      r.emit(write_certificate(*m, r.slack()));
    }
    return kExitFound;
  }
  const auto& d = std::get<DeficiencyCert>(result);
  r.note("deficiency: |D| = " + std::to_string(d.violator.size()) + ", |N(D) ∩ A| = " +
         std::to_string(d.neighborhood.size()));
  r.emit(write_certificate(d, r.slack()));
  return kExitDual;
}

int cmd_verify(const Runner& r, const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    r.note(e.what());
    return kExitUsage;
  }
  const auto outcome = verify_certificate(text);
  const std::string kind = outcome.kind.empty() ? "certificate" : outcome.kind;
  r.note((outcome.exit_code == 0 ? "PASS " : "FAIL ") + kind + ": " + outcome.message);
  return outcome.exit_code;
}

int cmd_embed_f2(const Runner& r, const std::string& path, int depth) {
  auto [w, win] = witness_from_cert(path);
  const auto check = witness_check(w, win, r.slack());
  if (!check.passed()) throw VerificationFailed("witness does not re-check: " + check.summary());
  const EmbeddingData e = build_embedding(w, win, r.slack(), depth);
  const LipschitzReport rep = check_injective_lipschitz(e, depth);
  const Group& g = e.group;
  json j{{"group", g.spec()},
         {"injective", rep.injective},
         {"L", rep.radius},
         {"evaluated", rep.evaluated},
         {"|T|", rep.t_set.size()},
         {"T", format_all(g, rep.t_set)},
         {"violations", rep.violations}};
  if (rep.collision) {
    const Group f = f2();
    j["collision"] = {f.format(rep.collision->first), f.format(rep.collision->second)};
  } else {
    j["collision"] = nullptr;
  }
  r.emit(j.dump(2) + "\n");
  r.note(std::string(rep.passed() ? "PASS" : "FAIL") + " embed-f2: " + std::to_string(rep.evaluated) +
         " words, |T| = " + std::to_string(rep.t_set.size()));
  return rep.passed() ? kExitFound : kExitVerifyFailed;
}

int cmd_small_set(const Runner& r, int count, int radius) {
  const Group g = r.group();
  const auto seq = greedy_small_set(g, count);
  const auto violation = greedy_exclusion_violation(g, seq);
  const auto pairs = check_pair_intersections(g, seq, radius);
  json j{{"group", g.spec()},
         {"count", count},
         {"elements", format_all(g, seq)},
         {"exclusionHolds", !violation.has_value()},
         {"radius", radius},
         {"maxPair", pairs.max_size},
         {"attainedBy", pairs.attained_by ? json(g.format(*pairs.attained_by)) : json(nullptr)}};
  r.emit(j.dump(2) + "\n");
  const bool ok = !violation && pairs.max_size <= 2;
  r.note(std::string(ok ? "PASS" : "FAIL") + " small-set: max |sA ∩ A| = " + std::to_string(pairs.max_size));
  return ok ? kExitFound : kExitVerifyFailed;
}

int cmd_cp_witness(const Runner& r, const std::string& path, std::optional<int> radius) {
  auto [w, cert_window] = witness_from_cert(path);
  const Window win = radius ? cached_ball(w.set.group(), *radius) : cert_window;
  const auto check = witness_check(w, win, r.slack());
  if (!check.passed()) throw VerificationFailed("witness does not re-check: " + check.summary());
  PIWitness pw = pi_witness(w);
  const auto report = verify_pi_witness(pw, win, r.slack());
  for (const auto& c : report.checks) r.note((c.passed ? "PASS " : "FAIL ") + c.name + (c.passed ? "" : ": " + c.detail));
  r.emit(write_certificate(CPWitnessCert{std::move(pw), win}, r.slack()));
  return report.passed() ? kExitFound : kExitVerifyFailed;
}

int cmd_type_order(const Runner& r, int m, int n, const std::string& set, const std::string& target,
                   const std::string& translators) {
  const Group g = r.group();
  const SetExpr a = SetExpr::parse(g, set);
  const SetExpr b = SetExpr::parse(g, target);
  const auto s = parse_translators(g, translators);
  const Window w = r.window(g);
  const auto result = type_order(m, a, n, b, s, w, r.slack());
  if (const auto* f = std::get_if<FlowCert>(&result)) {
    r.note("flow: " + std::to_string(m) + "[A] <= " + std::to_string(n) + "[B] on the window");
    r.emit(write_certificate(*f, r.slack()));
    return kExitFound;
  }
  const auto& d = std::get<FlowDeficiency>(result);
  r.note("flow-deficiency: |D| = " + std::to_string(d.violator.size()) + ", |N(D) ∩ B| = " +
         std::to_string(d.neighborhood.size()));
  r.emit(write_certificate(d, r.slack()));
  return kExitDual;
}

int cmd_induce(const Runner& r, const Globals& globals, const std::string& path, const std::string& subgroup,
               const std::string& t_text) {
  InduceInput in = parse_induce_input(read_file(path), globals.group, subgroup);
  if (!t_text.empty()) in.t = in.group.parse_elem(t_text);
  if (!in.t) throw CLI::RequiredError("--t");
  const auto token_check = check_token_witness(in.subgroup, in.witness);
  if (!token_check.passed()) throw VerificationFailed("token witness: " + token_check.summary());
  const InducedWitness out = induce_witness(in.subgroup, in.witness, *in.t);
  const auto check = check_induced_witness(in.subgroup, out);
  r.emit(token_witness_json(in.subgroup, in.witness, &out));
  r.note(std::string(check.passed() ? "PASS" : "FAIL") + " induce: " + check.summary());
  return check.passed() ? kExitFound : kExitVerifyFailed;
}

std::vector<std::size_t> index_list(const json& j, std::size_t bound, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be a list of piece indices", 0);
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() >= bound) {
      throw ParseError(std::string(what) + " holds an invalid piece index", 0);
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

std::vector<Elem> parse_translators(const Group& g, std::string_view text) {
  if (text.substr(0, 5) == "ball:") {
    int r = 0;
    try {
      std::size_t used = 0;
      r = std::stoi(std::string(text.substr(5)), &used);
      if (used != text.size() - 5 || r < 0) throw std::invalid_argument("radius");
    } catch (const std::exception&) {
      throw ParseError("expected 'ball:<radius>'", 5);
    }
    const Window b = g.ball(r);
    return {b.elements().begin(), b.elements().end()};
  }
  return g.parse_elem_list(text);
}

InduceInput parse_induce_input(std::string_view text, std::string_view group_override,
                               std::string_view subgroup_override) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("token witness is not a JSON object", 0);
  try {
    const Group g = Group::parse(group_override.empty() ? j.at("group").get<std::string>() : std::string(group_override));
    const SubgroupSpec h =
        SubgroupSpec::parse(g, subgroup_override.empty() ? j.at("subgroup").get<std::string>() : std::string(subgroup_override));
    TokenWitness w;
    const json& tokens = j.at("xTokens");
    w.set = tokens.at("set").get<std::string>();
    w.pieces = tokens.at("pieces").get<std::vector<std::string>>();
    const std::size_t n = w.pieces.size();
    for (const auto& t : j.at("gamma0Elems")) w.translators.push_back(g.parse_elem(t.get<std::string>()));
    w.split = j.at("split").get<std::size_t>();
    const json& facts = j.at("eqEFacts");
    for (const auto& pair : facts.at("disjoint")) {
      const auto ij = index_list(pair, n, "disjoint");
      if (ij.size() != 2) throw ParseError("disjoint facts are index pairs", 0);
      w.disjoint.emplace_back(ij[0], ij[1]);
    }
    for (const auto& family : facts.at("covers")) w.covers.push_back(index_list(family, n, "covers"));
    if (facts.contains("within")) w.within = index_list(facts.at("within"), n, "within");
    std::optional<Elem> t;
    if (j.contains("t")) t = g.parse_elem(j.at("t").get<std::string>());
    return {g, h, std::move(w), std::move(t)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("token witness: ") + e.what(), 0);
  }
}

std::string token_witness_json(const SubgroupSpec& h, const TokenWitness& w, const InducedWitness* induced) {
  const Group& g = h.group();
  json disjoint = json::array();
  for (const auto& [i, k] : w.disjoint) disjoint.push_back({i, k});
  json j{{"group", g.spec()},
         {"subgroup", h.to_string()},
         {"xTokens", {{"set", w.set}, {"pieces", w.pieces}}},
         {"gamma0Elems", format_all(g, w.translators)},
         {"split", w.split},
         {"eqEFacts", {{"disjoint", disjoint}, {"covers", w.covers}, {"within", w.within}}}};
  if (induced) {
    auto yset = [&](const YSet& y) { return json{{"rep", g.format(y.rep)}, {"r", g.format(y.r)}, {"token", y.token}}; };
    json fj = json::array();
    for (const auto& p : induced->pieces) fj.push_back(yset(p));
    j["t"] = g.format(induced->t);
    j["output"] = {{"f", yset(induced->set)}, {"fj", fj}, {"sj", format_all(g, induced->translators)}};
  }
  return j.dump(2) + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Window-level certificates for paradoxical decompositions in groups", "paradox"};
  app.set_version_flag("--version", std::string(PARADOX_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--group", g.group, "Group spec: free:k, zn:d or bs12");
  app.add_option("--window", g.window, "Window radius (ball in the word metric)")->check(CLI::NonNegativeNumber);
  app.add_option("--budget-slack", g.slack, "Semigroup membership budget beyond the window radius")
      ->default_val(4)
      ->check(CLI::Range(0, 64));
  app.add_option("--out", g.out_path, "Write the certificate or report to this file instead of stdout");
  app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

  std::string set, target, translators, path, subgroup, t_text;
  int depth = 6, count = 0, radius = 5, m = 2, n = 1;
  std::optional<int> cp_radius;
  bool as_witness = false;

  auto* check = app.add_subcommand("check", "Search for a doubling of A on the window (exit 0 match, 2 deficiency)");
  check->add_option("--set", set, "Set expression A")->required();
  check->add_option("--translators", translators, "Translator set: element list or ball:r")->required();
  check->add_flag("--witness", as_witness, "Emit a paradox witness certificate instead of the matching");

  auto* verify = app.add_subcommand("verify", "Replay a certificate (exit 0 valid, 3 invalid, 1 unreadable)");
  verify->add_option("path", path, "Certificate file")->required();

  auto* embed = app.add_subcommand("embed-f2", "Build and check the Lipschitz embedding of F2");
  embed->add_option("--from-cert", path, "Match or witness certificate")->required();
  embed->add_option("--depth", depth, "Radius of the F2 ball to evaluate")->check(CLI::Range(1, 12));

  auto* small = app.add_subcommand("small-set", "Greedy small set and its pair intersections");
  small->add_option("--count", count, "Number of elements")->required()->check(CLI::Range(1, 100000));
  small->add_option("--radius", radius, "Radius of the translations s to test")->check(CLI::Range(1, 12));

  auto* cp = app.add_subcommand("cp-witness", "Proper infiniteness data for 1_A from a witness");
  cp->add_option("--from-cert", path, "Match or witness certificate")->required();
  // The global --window is reused as the radius of the replay window.
  cp->add_option("--replay-radius", cp_radius, "Replay on this ball instead of the certificate window");

  auto* order = app.add_subcommand("type-order", "Decide m[A] <= n[B] on the window (exit 0 flow, 2 deficiency)");
  order->add_option("--m", m, "Copies of A")->check(CLI::Range(1, 1 << 16));
  order->add_option("--n", n, "Capacity of each point of B")->check(CLI::Range(1, 1 << 16));
  order->add_option("--set", set, "Set expression A")->required();
  order->add_option("--target", target, "Set expression B")->required();
  order->add_option("--translators", translators, "Translator set: element list or ball:r")->required();

  auto* induce = app.add_subcommand("induce", "Transport a token-level witness to the induced action");
  induce->add_option("--witness", path, "Token witness JSON")->required();
  induce->add_option("--subgroup", subgroup, "cyclic:<word>, coords:i,j or kernel");
  induce->add_option("--t", t_text, "Element t to induce along");

  std::vector<const char*> argv{"paradox"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  const Runner r(g, out, err);
  try {
    if (check->parsed()) return cmd_check(r, set, translators, as_witness);
    if (verify->parsed()) return cmd_verify(r, path);
    if (embed->parsed()) return cmd_embed_f2(r, path, depth);
    if (small->parsed()) return cmd_small_set(r, count, radius);
    if (cp->parsed()) {
      if (!cp_radius && g.window >= 0) cp_radius = g.window;
      return cmd_cp_witness(r, path, cp_radius);
    }
    if (order->parsed()) return cmd_type_order(r, m, n, set, target, translators);
    if (induce->parsed()) return cmd_induce(r, g, path, subgroup, t_text);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const VerificationFailed& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise --budget-slack)\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace paradox
