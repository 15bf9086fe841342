#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qcb/verify.hpp"

using namespace qcb;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qcb-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string lines(const std::vector<CheckReport>& rs) {
  std::string out;
  for (const auto& r : rs) out += r.json().dump() + "\n";
  return out;
}

}  // namespace

TEST_CASE("named checks") {
  const CheckReport t = run_check("transition", {{"datum", "a1"}, {"factors", "LW:1 HW:1"}});
  CHECK(t.pass);
  CHECK(t.max_pos_deg == 0);
  CHECK(t.min_neg_deg == -1);
  CHECK(run_check("structure_constants", {{"datum", "a2"}, {"max_tr", 5}}).pass);
  CHECK(run_check("udot_mult", {{"datum", "a1"}, {"max_tr", 1}, {"zetas", {{-1}, {1}}}}).pass);
  CHECK(run_check("b_action", {{"datum", "a1"}, {"factors", "LW:1 HW:2"}, {"max_tr", 2}}).pass);
  CHECK_THROWS_AS(run_check("no_such_check", {{"datum", "a1"}}), CheckError);
  CHECK_THROWS_AS(run_check("transition", {{"datum", "a1"}, {"factors", "HW:1"}}), CheckError);
  // Failures inside a computation are reported, not thrown.
  const CheckReport bad = run_check("udot_mult", {{"datum", "a1"}, {"max_tr", 1}, {"zetas", {{0}}}, {"margin", 0}});
  CHECK_FALSE(bad.pass);
  CHECK(bad.counterexample.find("margin") != std::string::npos);
  CHECK(bad.json().contains("counterexample"));
}

TEST_CASE("factor specs") {
  const RootDatum d = builtin_datum("a2");
  const auto f = parse_factors(d, "LW:1,0 HW:0,2 V:-1,3");
  REQUIRE(f.size() == 3);
  CHECK(f[0].kind == ModuleKind::SimpleLW);
  CHECK(d.pairings(f[1].lambda) == std::vector<int>{0, 2});
  CHECK(f[2].kind == ModuleKind::Verma);
  CHECK_THROWS_AS(parse_factors(d, "HW:1"), CheckError);
  CHECK_THROWS_AS(parse_factors(d, "XW:1,0"), CheckError);
  CHECK_THROWS_AS(parse_factors(d, "HW:-1,0"), CheckError);
  CHECK_THROWS_AS(parse_factors(d, ""), CheckError);
}

TEST_CASE("suites") {
  CHECK(run_suite(parse_suite(Json::array())).empty());
  CHECK(!default_suite("a1").empty());
  CHECK(default_suite("some/file.json").size() == 1);
  const Json cfg = Json::parse(R"([
    {"check": "transition", "params": {"datum": "a1", "factors": "HW:1 HW:1"}},
    {"check": "structure_constants", "params": {"datum": "a1", "max_tr": 4}},
    {"check": "transition", "params": {"datum": "a1", "factors": "LW:1 HW:2"}}])");
  Json rev = Json::array();
  for (auto it = cfg.rbegin(); it != cfg.rend(); ++it) rev.push_back(*it);
  const auto a = run_suite(parse_suite(cfg));
  CHECK(a.size() == 3);
  CHECK(lines(a) == lines(run_suite(parse_suite(rev), 2)));
  const auto skipped = parse_suite(Json{{"checks", cfg}, {"disabled", {"transition"}}});
  REQUIRE(skipped.size() == 1);
  CHECK(skipped[0].name == "structure_constants");
  CHECK_THROWS_AS(parse_suite(Json::parse(R"([{"check": "nope"}])")), CheckError);
}

TEST_CASE("cache") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(Cache::key("a", "b", "c") != Cache::key("a", "bc", ""));
  const auto dir = scratch("cache");
  Cache c(dir);
  CHECK_FALSE(c.get("k").has_value());
  c.put("k", "payload\nwith lines");
  CHECK(c.get("k") == std::optional<std::string>("payload\nwith lines"));
  {
    std::ofstream out(dir / "k.txt", std::ios::app);
    out << "garbage";
  }
  CHECK_FALSE(c.get("k").has_value());
  CHECK_FALSE(std::filesystem::exists(dir / "k.txt"));

  const auto suite = parse_suite(Json::parse(R"([{"check": "structure_constants", "params": {"datum": "a1", "max_tr": 5}}])"));
  const auto cold = run_suite(suite, 1, c);
  const auto warm = run_suite(suite, 1, c);
  CHECK_FALSE(cold[0].cached);
  CHECK(warm[0].cached);
  CHECK(lines(cold) == lines(warm));
  std::filesystem::remove_all(dir);
}
