#include "obm/cli.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace obm;
using io::Json;

namespace {

struct Proc {
  int code = -1;
  std::string out, err;
};

std::filesystem::path scratch() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / ("obm_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the obm binary named by OBM_CLI; args are passed through the shell as given.
Proc run_cli(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("OBM_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "OBM_CLI must name the obm binary");
  const auto errf = scratch() / "stderr.txt";
  const std::string cmd = env + " '" + std::string(bin) + "' " + args + " 2>'" + errf.string() + "'";
  Proc p;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  const int st = pclose(pipe);
  p.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  p.err = slurp(errf);
  return p;
}

int count_lines(const std::string& s, const std::string& prefix) {
  std::stringstream ss(s);
  std::string line;
  int n = 0;
  while (std::getline(ss, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("body descriptors") {
  const ConvexBody a = io::body_from_json(Json::parse(R"({"type": "vpolytope", "vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]})"));
  const ConvexBody b = io::body_from_json(Json::parse(
      R"({"type": "hpolytope", "halfspaces": [{"normal": [1,0], "offset": 1}, {"normal": [-1,0], "offset": 1},
          {"normal": [0,1], "offset": 1}, {"normal": [0,-1], "offset": 1}]})"));
  const ConvexBody c = io::body_from_json(Json("square:1"));
  CHECK(hausdorff_distance(a, b) < 1e-12);
  CHECK(hausdorff_distance(a, c) < 1e-12);
  CHECK(io::body_from_json(Json("ball:3")).support(vec2(0, 1)) == doctest::Approx(3.0));
  CHECK(io::body_from_json(Json("ball3:2")).dim() == 3);
  CHECK(volume(io::body_from_json(Json("rect:2,1"))) == doctest::Approx(2.0));
  // round trip through the vertex form
  const ConvexBody d = io::body_from_json(io::body_to_json(a));
  CHECK(hausdorff_distance(a, d) < 1e-15);
  CHECK(io::bodies_from_json(Json::parse(R"({"bodies": ["ball:1", "square:2"]})")).size() == 2);
  CHECK_THROWS_AS(io::body_from_json(Json("blob:1")), Error);
  CHECK_THROWS_AS(io::body_from_json(Json::parse(R"({"type": "vpolytope"})")), Error);
}

TEST_CASE("phi descriptors round trip") {
  for (const char* text : {R"({"family": "power", "p": 2.5})", R"("exp")", R"("maxlinear:0.3")", R"("neglog")",
                           R"({"family": "piecewise", "knots": [[0,0],[0.5,0.1],[1,1]]})", R"("steep-exp")",
                           R"({"family": "power-mix", "weights": [0.5, 0.5], "powers": [1, 3]})"}) {
    INFO(text);
    const PhiFunction phi = io::phi_from_json(Json::parse(text));
    const PhiFunction back = io::phi_from_json(io::phi_to_json(phi));
    for (double t : {0.0, 0.2, 0.7, 1.0, 1.5}) {
      if (std::isinf(phi(t))) continue;
      CHECK(back(t) == doctest::Approx(phi(t)).epsilon(1e-15));
    }
  }
  const PhiM s = io::phi_m_from_json(Json::parse(R"({"family": "sum", "terms": ["exp", {"family": "power", "p": 2}]})"));
  CHECK(s.kind() == PhiM::Kind::Sum);
  const PhiM s2 = io::phi_m_from_json(io::phi_m_to_json(s));
  const double x[2] = {0.4, 0.9};
  CHECK(s2.eval(x) == doctest::Approx(s.eval(x)));
  CHECK(io::phi_m_from_json(Json::parse(R"({"family": "max"})")).kind() == PhiM::Kind::Max);
  CHECK(io::phi_m_from_json(Json("lp:3")).eval(x) == doctest::Approx(std::pow(0.4, 3) + std::pow(0.9, 3)));
  CHECK_THROWS_AS(io::phi_from_json(Json("power:0.5")), Error);
}

TEST_CASE("coefficient sets") {
  CHECK(io::coeffs_from_arg("name:singleton").kind() == CoeffSet::Kind::Singleton);
  CHECK(io::coeffs_from_arg("name:segment").kind() == CoeffSet::Kind::Segment);
  const CoeffSet lp = io::coeffs_from_arg("name:lp,p=2");
  CHECK(lp.support(std::vector<double>{3, 4}) == doctest::Approx(5.0));
  const CoeffSet pts = io::coeffs_from_arg(R"({"points": [[1, 0], [0, 1], [1, 1]]})");
  CHECK(pts.support(std::vector<double>{2, 3}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(io::coeffs_from_arg("name:jpolar"), Error);
}

TEST_CASE("report CSV") {
  std::vector<InequalityReport> rows = {make_report("a", 2, 1), make_report("b", 1, 2)};
  const std::string csv = io::reports_to_csv(rows);
  CHECK(csv.rfind("name,lhs,rhs,slack,holds,equality_case,grid,seed\n", 0) == 0);
  CHECK(count_lines(csv, "a,") == 1);
  CHECK(count_lines(csv, "b,") == 1);
}

TEST_CASE("scenario serialization round trip") {
  cli::Scenario s;
  s.command = "ineq";
  s.inputs["name"] = "orlicz-minkowski";
  s.inputs["phi"] = Json::parse(R"({"family": "power", "p": 2})");
  s.inputs["K"] = "square:1";
  s.grid = 720;
  s.seed = 7;
  s.out = "x.csv";
  s.format = "csv";
  const Json j = cli::scenario_to_json(s);
  CHECK(cli::scenario_from_json(j) == s);
  CHECK(cli::scenario_from_json(Json::parse(j.dump())) == s);
  Json bad = j;
  bad["command"] = "nope";
  CHECK_THROWS_AS(cli::scenario_from_json(bad), Error);
  bad = j;
  bad["format"] = "xml";
  CHECK_THROWS_AS(cli::scenario_from_json(bad), Error);
}

TEST_CASE("in-process run reports structured errors") {
  cli::Scenario s;
  s.command = "add";
  s.inputs["phi"] = "lp:2";
  s.inputs["K"] = "ball:1";
  std::ostringstream out, err;
  CHECK(cli::run(s, out, err) == cli::ValidationFailure);  // L missing
  const Json e = Json::parse(err.str());
  CHECK(e.at("exit_code") == 2);
  CHECK(e.contains("error"));
  CHECK(e.contains("message"));
}

TEST_CASE("obm add: L_2 sum of disks of radii 3 and 4") {
  const Proc p = run_cli("add --phi lp:2 --K ball:3 --L ball:4");
  REQUIRE(p.code == 0);
  const Json j = Json::parse(p.out);
  CHECK(std::fabs(j.at("h_min").get<double>() - 5) < 1e-9);
  CHECK(std::fabs(j.at("h_max").get<double>() - 5) < 1e-9);
  CHECK(j.at("body").at("vertices").size() > 3);
}

TEST_CASE("obm hab: H(2, 1) < 0") {
  const Proc p = run_cli("hab --a 2 --b 1");
  REQUIRE(p.code == 0);
  const Json j = Json::parse(p.out);
  CHECK(j.at("H").get<double>() < 0);
  CHECK(j.at("sign") == "negative");
}

TEST_CASE("obm suite smoke run") {
  const auto csv = scratch() / "suite.csv";
  const Proc p = run_cli("suite --seed 42 --cases 10 --out '" + csv.string() + "'");
  CHECK(p.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("name,lhs,rhs,slack,holds,equality_case,grid,seed\n", 0) == 0);
  for (const std::string& v : suite_validators()) {
    INFO(v);
    CHECK(count_lines(text, v + ",") == 10);
  }
}

TEST_CASE("identical scenarios give byte-identical reports") {
  const auto a = scratch() / "a.json", b = scratch() / "b.json", sc = scratch() / "scenario.json";
  const std::string args = "ineq --name orlicz-bm --phi '{\"family\":\"sum\",\"terms\":[\"exp\",\"power:2\"]}' --K rect:2,1 --L ball:1 --seed 9";
  REQUIRE(run_cli(args + " --out '" + a.string() + "' --save-scenario '" + sc.string() + "'").code == 0);
  REQUIRE(run_cli(args + " --out '" + b.string() + "'").code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  // replaying the saved scenario rewrites the same file
  std::filesystem::remove(a);
  REQUIRE(run_cli("run '" + sc.string() + "'").code == 0);
  CHECK(slurp(a) == slurp(b));
  const Json saved = Json::parse(slurp(sc));
  CHECK(cli::scenario_to_json(cli::scenario_from_json(saved)) == saved);
}

TEST_CASE("exit codes") {
  const Proc v = run_cli("add --phi lp:2 --K nonsense --L ball:1");
  CHECK(v.code == 2);
  CHECK(Json::parse(v.err).at("exit_code") == 2);
  const Proc c = run_cli("ineq --name log-inequality --K square:1 --L ball:2");
  CHECK(c.code == 2);
  CHECK(Json::parse(c.err).at("error") == "ContainmentViolation");
  const Proc s = run_cli("add --phi exp --K square:1 --L ball:1", "OBM_TOL=max_iter=2");
  CHECK(s.code == 3);
  CHECK(Json::parse(s.err).at("error") == "SolverFailure");
  // coefficients outside M: the coefficient form of the inequality fails
  const Proc i = run_cli("ineq --name bm-m-addition --M name:singleton --K square:1 --L ball:1 --coeffs 2,2");
  CHECK(i.code == 4);
  CHECK(Json::parse(i.out).at("holds") == false);
  CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("other commands run") {
  CHECK(run_cli("mvol --formula vphi --phi exp --K rect:2,1 --L ball:1").code == 0);
  CHECK(run_cli("split --K square:1 --L ball:1 --format csv").code == 0);
  CHECK(run_cli("projbody --phi power:1 --K square:0.5 --grid 360").code == 0);
  CHECK(run_cli("centroidbody --phi power:1 --K ball:1 --quad cells:128 --grid 360").code == 0);
  const Proc d = run_cli("decompose --phi exp");
  CHECK(d.code == 0);
  CHECK(run_cli("probe-naive --seed 3 --pairs 2000").code == 0);
  CHECK(run_cli("probe-assoc --seed 3 --directions 90").code == 0);
}
