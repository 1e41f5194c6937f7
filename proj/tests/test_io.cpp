#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cocircular;
using std::numbers::pi;

namespace {

json two_body_json() {
  return json::parse(R"({
    "kernel": {"family": "power_law", "a": 3},
    "masses": [1, 1],
    "spin": 0.5,
    "variant": "plain",
    "initial": {"r": 1.3, "alpha": [0, 2.9]}
  })");
}

std::string field_of(const json& j) {
  try {
    problem_from_json(j);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(Io, ParsesProblem) {
  const auto pf = problem_from_json(two_body_json());
  EXPECT_EQ(pf.spec.kernel, InteractionKernel::power_law(3.0));
  EXPECT_EQ(pf.spec.spin, 0.5);
  ASSERT_TRUE(pf.initial.has_value());
  EXPECT_EQ(pf.initial->alpha[1], 2.9);
}

TEST(Io, ProblemRoundTripIsValueIdentical) {
  for (const char* text : {
           R"({"kernel":{"family":"power_law","a":3},"masses":[1,2,3,4],"spin":1,"variant":"plain"})",
           R"({"kernel":{"family":"quasi_homogeneous","c1":0.3,"a":2.5,"c2":1.7,"b":3.25},"masses":[1,2,3],
               "central_mass":0.7,"spin":0.9,"variant":"central_mass","initial":{"r":0.1,"alpha":[0,0.1,3]}})",
           R"({"kernel":{"family":"curved_hyperbolic"},"masses":[1,1],"spin":0.2973017,"variant":"curved",
               "initial":{"rho":1,"gamma":[0,3.141592653589793]}})"}) {
    const auto pf = problem_from_json(json::parse(text));
    const auto again = problem_from_json(json::parse(problem_to_json(pf).dump()));
    EXPECT_EQ(again, pf) << text;
    EXPECT_EQ(problem_to_json(again), problem_to_json(pf));
  }
}

TEST(Io, FieldNamedErrors) {
  auto j = two_body_json();
  j.erase("spin");
  EXPECT_EQ(field_of(j), "spin");

  j = two_body_json();
  j["masses"] = json::array({1, -1});
  EXPECT_EQ(field_of(j), "masses[1]");

  j = two_body_json();
  j["kernel"]["family"] = "yukawa";
  EXPECT_EQ(field_of(j), "kernel.family");

  j = two_body_json();
  j["kernel"]["a"] = 0.5;
  EXPECT_EQ(field_of(j), "kernel");

  j = two_body_json();
  j["variant"] = "central_mass";
  EXPECT_EQ(field_of(j), "central_mass");

  j = two_body_json();
  j["initial"]["alpha"] = json::array({0, 0});
  EXPECT_EQ(field_of(j), "initial");

  j = two_body_json();
  j["initial"]["alpha"] = json::array({0});
  EXPECT_EQ(field_of(j), "initial.alpha");

  j = two_body_json();
  j["variant"] = "curved";
  EXPECT_EQ(field_of(j), "kernel.family");
}

TEST(Io, InadmissibleKernelMessage) {
  auto j = two_body_json();
  j["kernel"]["a"] = 0.5;
  try {
    problem_from_json(j);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("g increasing"), std::string::npos);
  }
}

TEST(Io, CurvedInitialChecksZ) {
  auto j = json::parse(R"({"kernel":{"family":"curved_hyperbolic"},"masses":[1,1],"spin":0.3,"variant":"curved",
                            "initial":{"rho":1,"gamma":[0,3],"z":1.2}})");
  EXPECT_EQ(field_of(j), "initial.z");
  j["initial"]["z"] = std::sqrt(2.0);
  EXPECT_EQ(field_of(j), "<none>");
}

TEST(Io, OptionsRoundTrip) {
  SolveOptions o;
  o.seed = 123456789012345ULL;
  o.tol_grad = 3e-11;
  o.starts = 7;
  const auto back = options_from_json(json::parse(options_to_json(o).dump()));
  EXPECT_EQ(options_to_json(back), options_to_json(o));
}

TEST(Io, ReportsAreDeterministic) {
  const auto pf = problem_from_json(json::parse(
      R"({"kernel":{"family":"power_law","a":3},"masses":[1,2,3,4],"spin":1,"variant":"plain"})"));
  SolveOptions o;
  o.seed = 77;
  o.starts = 8;
  auto run = [&] {
    json reports = json::array();
    for (const auto& ord : enumerate_orderings(pf.spec.masses)) {
      reports.push_back(to_json(uniqueness_experiment(pf.spec, ord, o)));
    }
    return make_report("uniqueness", pf, o, reports).dump();
  };
  EXPECT_EQ(run(), run());
}

TEST(Io, StationaryReportNumbersRoundTrip) {
  const auto pf = problem_from_json(two_body_json());
  const auto rep = solve_stationary(pf.spec, *pf.initial);
  const json j = to_json(rep);
  const json back = json::parse(j.dump());
  EXPECT_EQ(back.at("potential").get<double>(), rep.potential);
  EXPECT_EQ(back.at("config").at("r").get<double>(), rep.config.r);
  EXPECT_EQ(back, j);
}
