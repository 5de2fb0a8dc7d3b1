#include "paradox/certificate.hpp"

#include <openssl/evp.h>

#include <array>
#include <json.hpp>
#include <optional>

#include "paradox/errors.hpp"
#include "paradox/verify.hpp"
#include "paradox/window_cache.hpp"

namespace paradox {

namespace {

using nlohmann::json;

// Balls larger than this are refused when decoding, so a tampered radius
// cannot make the verifier enumerate an enormous window.
constexpr std::uint64_t kMaxWindow = 2'000'000;

// Payload problems found while decoding. Reported as verification
// failures, not schema errors.
class DecodeError : public Error {
 public:
  using Error::Error;
};

json elem_list(const Group& g, std::span<const Elem> xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(g.format(x));
  return out;
}

json window_json(const Window& w) {
  json out{{"radius", w.radius()}};
  if (!w.is_ball()) out["list"] = elem_list(w.group(), w.elements());
  return out;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DecodeError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string text_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw DecodeError(std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

int int_field(const json& j, const char* name, int lo, int hi) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw DecodeError(std::string("field '") + name + "' is not an integer");
  const auto n = v.get<std::int64_t>();
  if (n < lo || n > hi) throw DecodeError(std::string("field '") + name + "' is out of range");
  return static_cast<int>(n);
}

Elem elem_of(const Group& g, const json& v, const char* what) {
  if (!v.is_string()) throw DecodeError(std::string(what) + " is not an element string");
  try {
    return g.parse_elem(v.get<std::string>());
  } catch (const ParseError& e) {
    throw DecodeError(std::string(what) + ": " + e.what());
  }
}

std::vector<Elem> elems_field(const Group& g, const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) throw DecodeError(std::string("field '") + name + "' is not a list");
  std::vector<Elem> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(elem_of(g, x, name));
  return out;
}

SetExpr set_of(const Group& g, const std::string& text, const char* name) {
  try {
    return SetExpr::parse(g, text);
  } catch (const ParseError& e) {
    throw DecodeError(std::string(name) + ": " + e.what());
  }
}

SetExpr set_field(const Group& g, const json& j, const char* name) { return set_of(g, text_field(j, name), name); }

CPElem cp_field(const Group& g, const json& j, const char* name) {
  try {
    return CPElem::parse(g, text_field(j, name));
  } catch (const ParseError& e) {
    throw DecodeError(std::string(name) + ": " + e.what());
  }
}

Window window_field(const Group& g, const json& j) {
  const json& w = field(j, "window");
  const int radius = int_field(w, "radius", 0, 1'000'000);
  if (!w.contains("list")) {
    if (ball_size_bound(g, radius) > kMaxWindow) throw DecodeError("window radius too large to replay");
    return cached_ball(g, radius);
  }
  auto elems = elems_field(g, w, "list");
  const std::size_t n = elems.size();
  Window out(g, std::move(elems), radius, false);
  if (out.size() != n) throw DecodeError("window list repeats an element");
  return out;
}

// Serialized form of each payload, without the common header fields.
json payload(const MatchCert& c) {
  const Group& g = c.set.group();
  json rows = json::array();
  for (const auto& e : c.assignment) rows.push_back({{"x", g.format(e.x)}, {"s1", g.format(e.s1)}, {"s2", g.format(e.s2)}});
  return {{"set", c.set.to_string()},
          {"translators", elem_list(g, c.translators)},
          {"window", window_json(c.window)},
          {"assignment", std::move(rows)}};
}

json payload(const DeficiencyCert& c) {
  const Group& g = c.set.group();
  return {{"set", c.set.to_string()},
          {"translators", elem_list(g, c.translators)},
          {"window", window_json(c.window)},
          {"violator", elem_list(g, c.violator)},
          {"neighborhood", elem_list(g, c.neighborhood)}};
}

json payload(const WitnessCert& c) {
  const Group& g = c.witness.set.group();
  json parts = json::array();
  for (const auto& p : c.witness.parts) parts.push_back({{"set", p.set.to_string()}, {"translator", g.format(p.translator)}});
  return {{"set", c.witness.set.to_string()},
          {"window", window_json(c.window)},
          {"parts", std::move(parts)},
          {"split", c.witness.split}};
}

json payload(const FlowCert& c) {
  const Group& g = c.set_a.group();
  json rows = json::array();
  for (const auto& e : c.assignment) rows.push_back({{"x", g.format(e.x)}, {"translators", elem_list(g, e.translators)}});
  return {{"m", c.m},
          {"n", c.n},
          {"set", c.set_a.to_string()},
          {"target", c.set_b.to_string()},
          {"translators", elem_list(g, c.translators)},
          {"window", window_json(c.window)},
          {"assignment", std::move(rows)}};
}

json payload(const FlowDeficiency& c) {
  const Group& g = c.set_a.group();
  return {{"m", c.m},
          {"n", c.n},
          {"set", c.set_a.to_string()},
          {"target", c.set_b.to_string()},
          {"translators", elem_list(g, c.translators)},
          {"window", window_json(c.window)},
          {"violator", elem_list(g, c.violator)},
          {"neighborhood", elem_list(g, c.neighborhood)}};
}

json payload(const CPWitnessCert& c) {
  return {{"set", c.witness.set.to_string()},
          {"window", window_json(c.window)},
          {"p", c.witness.p.to_string()},
          {"v", c.witness.v.to_string()},
          {"w", c.witness.w.to_string()}};
}

const Group& group_of(const Certificate& c) {
  return std::visit(
      [](const auto& x) -> const Group& {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FlowCert> || std::is_same_v<T, FlowDeficiency>) {
          return x.set_a.group();
        } else if constexpr (std::is_same_v<T, WitnessCert> || std::is_same_v<T, CPWitnessCert>) {
          return x.witness.set.group();
        } else {
          return x.set.group();
        }
      },
      c);
}

const Window& window_of(const Certificate& c) {
  return std::visit([](const auto& x) -> const Window& { return x.window; }, c);
}

std::string content_digest(json j) {
  j.erase("digest");
  return sha256_hex(j.dump());
}

Certificate decode(const std::string& kind, const Group& g, const json& j) {
  if (kind == "match") {
    MatchCert c{set_field(g, j, "set"), elems_field(g, j, "translators"), window_field(g, j), {}};
    const json& rows = field(j, "assignment");
    if (!rows.is_array()) throw DecodeError("field 'assignment' is not a list");
    for (const auto& r : rows) {
      c.assignment.push_back({elem_of(g, field(r, "x"), "x"), elem_of(g, field(r, "s1"), "s1"),
                              elem_of(g, field(r, "s2"), "s2")});
    }
    return c;
  }
  if (kind == "deficiency") {
    return DeficiencyCert{set_field(g, j, "set"), elems_field(g, j, "translators"), window_field(g, j),
                          elems_field(g, j, "violator"), elems_field(g, j, "neighborhood")};
  }
  if (kind == "witness") {
    ParadoxWitness w{set_field(g, j, "set"), {}, 0};
    const json& parts = field(j, "parts");
    if (!parts.is_array()) throw DecodeError("field 'parts' is not a list");
    for (const auto& p : parts) {
      w.parts.push_back(Piece{set_field(g, p, "set"), elem_of(g, field(p, "translator"), "translator")});
    }
    w.split = static_cast<std::size_t>(int_field(j, "split", 0, static_cast<int>(w.parts.size())));
    return WitnessCert{std::move(w), window_field(g, j)};
  }
  if (kind == "flow" || kind == "flow-deficiency") {
    const int m = int_field(j, "m", 1, 1 << 16);
    const int n = int_field(j, "n", 1, 1 << 16);
    auto a = set_field(g, j, "set");
    auto b = set_field(g, j, "target");
    auto s = elems_field(g, j, "translators");
    auto w = window_field(g, j);
    if (kind == "flow-deficiency") {
      return FlowDeficiency{m, n, a, b, s, w, elems_field(g, j, "violator"), elems_field(g, j, "neighborhood")};
    }
    FlowCert c{m, n, a, b, s, w, {}};
    const json& rows = field(j, "assignment");
    if (!rows.is_array()) throw DecodeError("field 'assignment' is not a list");
    for (const auto& r : rows) c.assignment.push_back({elem_of(g, field(r, "x"), "x"), elems_field(g, r, "translators")});
    return c;
  }
  if (kind == "cp-witness") {
    PIWitness pw{set_field(g, j, "set"), cp_field(g, j, "p"), cp_field(g, j, "v"), cp_field(g, j, "w")};
    return CPWitnessCert{std::move(pw), window_field(g, j)};
  }
  throw DecodeError("unknown certificate kind '" + kind + "'");
}

ValidationReport replay(const Certificate& c, int slack) {
  return std::visit(
      [slack](const auto& x) -> ValidationReport {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatchCert>) {
          return verify_match(x, slack);
        } else if constexpr (std::is_same_v<T, DeficiencyCert>) {
          return verify_deficiency(x, slack);
        } else if constexpr (std::is_same_v<T, WitnessCert>) {
          return witness_check(x.witness, x.window, slack);
        } else if constexpr (std::is_same_v<T, FlowCert>) {
          return verify_flow(x, slack);
        } else if constexpr (std::is_same_v<T, FlowDeficiency>) {
          return verify_flow_deficiency(x, slack);
        } else {
          // p must be the indicator of the stated set, or the identities
          // would certify some other projection.
          ValidationReport r;
          r.pass("p=1_A");
          const CPElem indicator = CPElem::indicator(x.witness.set);
          if (auto d = cp_compare(x.witness.p, indicator, x.window, slack)) {
            r.fail("p=1_A", "coefficient of u(" + x.window.group().format(d->t) + ") at " +
                                x.window.group().format(d->point) + " is " + rational_to_string(d->lhs) +
                                ", expected " + rational_to_string(d->rhs));
          }
          for (auto& check : verify_pi_witness(x.witness, x.window, slack).checks) {
            r.pass(check.name);
            if (!check.passed) r.fail(check.name, check.detail);
          }
          return r;
        }
      },
      c);
}

struct Envelope {
  json doc;
  std::string kind;
  Group group;
};

// Schema-level parsing. Throws ParseError for anything that does not look
// like a certificate of this schema.
Envelope open(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("certificate is not valid JSON", 0);
  if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != std::string(kCertSchema)) {
    throw ParseError("not a " + std::string(kCertSchema) + " certificate", 0);
  }
  std::string kind = text_field(doc, "kind");
  Group g = [&] {
    try {
      return Group::parse(text_field(doc, "group"));
    } catch (const ParseError& e) {
      throw DecodeError(std::string("group: ") + e.what());
    }
  }();
  return {std::move(doc), std::move(kind), std::move(g)};
}

}  // namespace

std::string certificate_kind(const Certificate& c) {
  static constexpr std::array<const char*, 6> kNames{"match", "deficiency", "witness", "flow", "flow-deficiency",
                                                     "cp-witness"};
  return kNames[c.index()];
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::string window_digest(const Window& w) {
  std::string text = w.group().spec() + "\n";
  for (const auto& x : w.elements()) {
    text += w.group().format(x);
    text += '\n';
  }
  return sha256_hex(text);
}

std::string write_certificate(const Certificate& c, int slack) {
  json j = std::visit([](const auto& x) { return payload(x); }, c);
  j["schema"] = std::string(kCertSchema);
  j["kind"] = certificate_kind(c);
  j["group"] = group_of(c).spec();
  j["budgetSlack"] = slack;
  j["checkedOn"] = window_digest(window_of(c));
  j["producer"] = {{"name", "paradox"}, {"version", PARADOX_VERSION}};
  j["digest"] = content_digest(j);
  return j.dump(2) + "\n";
}

DecodedCertificate read_certificate(std::string_view text) {
  Envelope env = open(text);
  try {
    return {decode(env.kind, env.group, env.doc), int_field(env.doc, "budgetSlack", 0, 64)};
  } catch (const json::exception& e) {
    throw DecodeError(e.what());
  }
}

VerifyOutcome verify_certificate(std::string_view text) {
  std::optional<Envelope> env;
  try {
    env = open(text);
  } catch (const DecodeError& e) {
    return {3, "", std::string("decode: ") + e.what()};
  } catch (const ParseError& e) {
    return {1, "", e.message()};
  }
  const std::string kind = env->kind;
  try {
    const int slack = int_field(env->doc, "budgetSlack", 0, 64);
    const Certificate cert = decode(kind, env->group, env->doc);
    if (text_field(env->doc, "checkedOn") != window_digest(window_of(cert))) {
      return {3, kind, "checked-on: window digest does not match the window descriptor"};
    }
    const ValidationReport report = replay(cert, slack);
    if (const auto* bad = report.first_failure()) return {3, kind, bad->name + ": " + bad->detail};
    if (text_field(env->doc, "digest") != content_digest(env->doc)) {
      return {3, kind, "content-digest: digest does not match the certificate fields"};
    }
    std::string passed = std::to_string(report.checks.size()) + " checks passed (";
    for (std::size_t i = 0; i < report.checks.size(); ++i) passed += (i ? ", " : "") + report.checks[i].name;
    return {0, kind, passed + ")"};
  } catch (const json::exception& e) {
    return {3, kind, std::string("decode: ") + e.what()};
  } catch (const Error& e) {
    return {3, kind, std::string("decode: ") + e.what()};
  }
}

}  // namespace paradox
