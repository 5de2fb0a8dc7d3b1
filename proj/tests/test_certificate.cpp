#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "paradox/certificate.hpp"
#include "paradox/cli.hpp"
#include "paradox/window_cache.hpp"

using namespace paradox;
using nlohmann::json;

namespace {

const Group kBs = Group::dyadic_affine();
const Group kZ = Group::zn(1);

std::vector<Elem> st() { return {kBs.parse_elem("(2,0)"), kBs.parse_elem("(2,1)")}; }

MatchCert bs_match() {
  const auto res = doubling_matching(SetExpr::semigroup(kBs, st(), true), st(), kBs.ball(4));
  REQUIRE(std::holds_alternative<MatchCert>(res));
  return std::get<MatchCert>(res);
}

DeficiencyCert z_deficiency() {
  const auto res = doubling_matching(SetExpr::all(kZ), parse_translators(kZ, "ball:1"), kZ.ball(3));
  REQUIRE(std::holds_alternative<DeficiencyCert>(res));
  return std::get<DeficiencyCert>(res);
}

// Recomputes the content digest after an edit, so that only the semantic
// replay can reject the result.
std::string reseal(json j) {
  j.erase("digest");
  j["digest"] = sha256_hex(j.dump());
  return j.dump(2) + "\n";
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("paradox-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("match certificates round trip byte for byte") {
  const MatchCert m = bs_match();
  const std::string text = write_certificate(m);
  CHECK(text == write_certificate(bs_match()));
  const auto decoded = read_certificate(text);
  CHECK(decoded.slack == 4);
  CHECK(write_certificate(decoded.cert, decoded.slack) == text);

  const auto ok = verify_certificate(text);
  CHECK(ok.exit_code == 0);
  CHECK(ok.kind == "match");

  const json j = json::parse(text);
  CHECK(j["schema"] == "paradox-cert/v1");
  CHECK(j["group"] == "bs12");
  CHECK(j["window"] == json{{"radius", 4}});
  CHECK(j["checkedOn"] == window_digest(kBs.ball(4)));
}

TEST_CASE("an edited assignment entry is rejected by the replay") {
  json j = json::parse(write_certificate(bs_match()));
  j["assignment"][0]["s2"] = j["assignment"][0]["s1"];
  // Without a fresh digest the payload check still fires first.
  const auto raw = verify_certificate(j.dump());
  CHECK(raw.exit_code == 3);
  CHECK(raw.message.rfind("images-distinct", 0) == 0);
  const auto sealed = verify_certificate(reseal(j));
  CHECK(sealed.exit_code == 3);
  CHECK(sealed.message.rfind("images-distinct", 0) == 0);
}

TEST_CASE("deficiency certificates and their tampering") {
  const std::string text = write_certificate(z_deficiency());
  CHECK(verify_certificate(text).exit_code == 0);
  json j = json::parse(text);
  // A one-point violator has |N(D)| = 3 >= 2|D|.
  j["violator"] = json::array({"(0)"});
  const auto out = verify_certificate(reseal(j));
  CHECK(out.exit_code == 3);
  CHECK(out.kind == "deficiency");
}

TEST_CASE("schema problems exit 1, payload problems exit 3") {
  const std::string text = write_certificate(bs_match());
  CHECK(verify_certificate("not json").exit_code == 1);
  CHECK(verify_certificate("[1, 2]").exit_code == 1);
  json j = json::parse(text);

  json other = j;
  other["schema"] = "paradox-cert/v2";
  CHECK(verify_certificate(other.dump()).exit_code == 1);

  json missing = j;
  missing.erase("assignment");
  CHECK(verify_certificate(reseal(missing)).exit_code == 3);

  json bad_elem = j;
  bad_elem["assignment"][1]["x"] = "(2,";
  CHECK(verify_certificate(reseal(bad_elem)).exit_code == 3);

  json huge = j;
  huge["window"]["radius"] = 400;
  const auto out = verify_certificate(reseal(huge));
  CHECK(out.exit_code == 3);
  CHECK(out.message.find("too large") != std::string::npos);

  json moved = j;
  moved["window"]["radius"] = 3;
  CHECK(verify_certificate(reseal(moved)).message.rfind("checked-on", 0) == 0);

  json kind = j;
  kind["kind"] = "matching";
  CHECK(verify_certificate(reseal(kind)).exit_code == 3);

  json digest = j;
  digest["producer"]["version"] = "9.9.9";
  const auto d = verify_certificate(digest.dump());
  CHECK(d.exit_code == 3);
  CHECK(d.message.rfind("content-digest", 0) == 0);
}

TEST_CASE("witness and cp-witness certificates with listed windows") {
  const auto res = free_semigroup_witness(kBs, st()[0], st()[1], 4);
  REQUIRE(std::holds_alternative<ParadoxWitness>(res));
  const auto& w = std::get<ParadoxWitness>(res);
  const Window win = positive_words_window(kBs, st(), 4);
  const std::string text = write_certificate(WitnessCert{w, win});
  CHECK(verify_certificate(text).exit_code == 0);
  const json j = json::parse(text);
  CHECK(j["window"]["list"].size() == win.size());
  CHECK(write_certificate(read_certificate(text).cert) == text);

  json bad = j;
  bad["parts"][1]["translator"] = "(1/2,0)";
  CHECK(verify_certificate(reseal(bad)).exit_code == 3);

  const std::string cp = write_certificate(CPWitnessCert{pi_witness(w), win});
  CHECK(verify_certificate(cp).exit_code == 0);
  json zero = json::parse(cp);
  zero["p"] = "0";
  zero["v"] = "0";
  zero["w"] = "0";
  const auto out = verify_certificate(reseal(zero));
  CHECK(out.exit_code == 3);
  CHECK(out.message.rfind("p=1_A", 0) == 0);
}

TEST_CASE("flow certificates round trip") {
  const Group f = Group::free(2);
  const auto s = parse_translators(f, "ball:1");
  const auto flow = type_order(2, SetExpr::all(f), 1, SetExpr::all(f), s, f.ball(2));
  REQUIRE(std::holds_alternative<FlowCert>(flow));
  const std::string text = write_certificate(std::get<FlowCert>(flow));
  CHECK(verify_certificate(text).exit_code == 0);
  json j = json::parse(text);
  j["n"] = 0;
  CHECK(verify_certificate(reseal(j)).exit_code == 3);

  const auto dual = type_order(2, SetExpr::all(kZ), 1, SetExpr::all(kZ), parse_translators(kZ, "ball:1"), kZ.ball(2));
  REQUIRE(std::holds_alternative<FlowDeficiency>(dual));
  const std::string dtext = write_certificate(std::get<FlowDeficiency>(dual));
  CHECK(verify_certificate(dtext).exit_code == 0);
  CHECK(json::parse(dtext)["kind"] == "flow-deficiency");
}

TEST_CASE("command line exit codes") {
  const auto dir = temp_dir("cli");
  const std::string match = (dir / "match.json").string();
  const auto c = cli({"check", "--group", "bs12", "--set", "semigroup((2,0),(2,1);e)", "--translators",
                      "(2,0),(2,1)", "--window", "4", "--out", match});
  CHECK(c.code == 0);
  CHECK(cli({"verify", match}).code == 0);

  const auto d = cli({"--quiet", "check", "--group", "zn:1", "--set", "all", "--translators", "ball:1", "--window", "3"});
  CHECK(d.code == 2);
  CHECK(d.err.empty());
  CHECK(json::parse(d.out)["kind"] == "deficiency");
  // Identical configurations give identical bytes.
  CHECK(cli({"check", "--group", "zn:1", "--set", "all", "--translators", "ball:1", "--window", "3"}).out == d.out);

  const auto bad = cli({"check", "--group", "zn:1", "--set", "all(", "--translators", "ball:1", "--window", "3"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("position") != std::string::npos);
  CHECK(cli({"check", "--group", "zn:1", "--set", "all", "--translators", "ball:x", "--window", "3"}).code == 1);
  CHECK(cli({"check", "--group", "zn:1", "--set", "all", "--translators", "ball:1"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"verify", (dir / "absent.json").string()}).code == 1);

  const auto embed = cli({"embed-f2", "--from-cert", match, "--depth", "4"});
  CHECK(embed.code == 0);
  const json report = json::parse(embed.out);
  CHECK(report["injective"] == true);
  CHECK(report["L"] == 4);
  CHECK(report["evaluated"] == 161);
  CHECK(report["|T|"] == report["T"].size());
  CHECK(report["violations"].empty());

  const auto small = cli({"small-set", "--group", "zn:1", "--count", "4"});
  CHECK(small.code == 0);
  CHECK(json::parse(small.out)["elements"] == json::array({"(0)", "(1)", "(-2)", "(5)"}));
  CHECK(json::parse(small.out)["maxPair"] <= 2);

  const std::string cp = (dir / "cp.json").string();
  const auto cpw = cli({"cp-witness", "--from-cert", match, "--window", "4", "--out", cp});
  CHECK(cpw.code == 0);
  CHECK(cpw.err.find("PASS vv*ww*=0") != std::string::npos);
  CHECK(cli({"verify", cp}).code == 0);

  CHECK(cli({"type-order", "--group", "zn:1", "--m", "1", "--n", "1", "--set", "all", "--target", "all",
             "--translators", "ball:1", "--window", "2"})
            .code == 0);
}

TEST_CASE("token witness files") {
  const auto dir = temp_dir("induce");
  const std::string path = (dir / "tokens.json").string();
  std::ofstream(path) << R"({"group": "free:2", "subgroup": "cyclic:a",
    "xTokens": {"set": "E", "pieces": ["E1", "E2"]}, "gamma0Elems": ["a", "a^-1 a^-1"], "split": 1,
    "eqEFacts": {"disjoint": [[0, 1]], "covers": [[0], [1]], "within": [0, 1]}})";
  const auto run = cli({"induce", "--witness", path, "--t", "b"});
  CHECK(run.code == 0);
  const json out = json::parse(run.out);
  CHECK(out["output"]["sj"] == json::array({"b a b^-1", "b a^-1 a^-1 b^-1"}));
  CHECK(out["output"]["fj"][1]["token"] == "E2");

  // The emitted file is itself an input, with t carried along.
  const auto again = parse_induce_input(run.out);
  REQUIRE(again.t);
  CHECK(Group::free(2).format(*again.t) == "b");
  CHECK(again.witness.disjoint == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  CHECK(token_witness_json(again.subgroup, again.witness) ==
        token_witness_json(SubgroupSpec::cyclic(Group::free(2), Group::free(2).parse_elem("a")), again.witness));

  CHECK(cli({"induce", "--witness", path, "--t", "b", "--subgroup", "cyclic:b"}).code == 3);
  CHECK(cli({"induce", "--witness", path}).code == 1);
  std::ofstream(path) << R"({"group": "free:2", "subgroup": "cyclic:a", "xTokens": {"set": "E"}})";
  CHECK(cli({"induce", "--witness", path, "--t", "b"}).code == 1);
}

TEST_CASE("window cache") {
  const auto dir = temp_dir("cache");
  ::setenv("PARADOX_CACHE_DIR", dir.c_str(), 1);
  const Group f = Group::free(2);
  const Window fresh = cached_ball(f, 3);
  const auto file = dir / "free-2-ball-3.txt";
  REQUIRE(std::filesystem::exists(file));
  const Window reused = cached_ball(f, 3);
  CHECK(window_digest(reused) == window_digest(f.ball(3)));
  CHECK(reused.is_ball());

  // A damaged cache file is ignored and rewritten.
  std::ofstream(file, std::ios::app) << "a a a a a\n";
  CHECK(window_digest(cached_ball(f, 3)) == window_digest(fresh));
  CHECK(window_digest(cached_ball(f, 3)) == window_digest(fresh));
  ::unsetenv("PARADOX_CACHE_DIR");

  CHECK(ball_size_bound(f, 3) == 1 + 4 + 12 + 36);
  CHECK(ball_size_bound(kZ, 5) >= 11);
  CHECK(ball_size_bound(f, 100) == std::numeric_limits<std::uint64_t>::max());
}
