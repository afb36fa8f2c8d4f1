#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dwf/dwf.h"

namespace {

std::string take(char* s) {
  std::string out(s);
  dwf_string_free(s);
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DWF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("fixture and suite listings") {
  REQUIRE(dwf_fixture_count() == 5);
  CHECK(std::string(dwf_fixture_name(0)) == "FIX-1D");
  CHECK(dwf_fixture_name(99) == nullptr);
  CHECK(dwf_suite_count() == 16);
  CHECK(std::string(dwf_suite_name(15)) == "fd-crosscheck");
}

TEST_CASE("spec errors map to status codes") {
  dwf_spec* spec = nullptr;
  CHECK(dwf_spec_parse("{\"sampling\": {}}", &spec) == DWF_ERR_SCHEMA);
  CHECK(std::string(dwf_last_error()).find("$.") != std::string::npos);
  CHECK(spec == nullptr);
  CHECK(dwf_spec_from_fixture("NOPE", 1, 5, &spec) == DWF_ERR_ARGUMENT);
  CHECK(dwf_spec_parse(nullptr, &spec) == DWF_ERR_ARGUMENT);
  REQUIRE(dwf_spec_from_fixture("FIX-E", 1, 5, &spec) == DWF_OK);
  CHECK(dwf_spec_set_count(spec, 0) == DWF_ERR_SEMANTIC);
  CHECK(dwf_spec_set_tolerance(spec, "no-such/check", 1.0) == DWF_ERR_SEMANTIC);
  const char* bad[] = {"homogeneity", "bogus"};
  CHECK(dwf_spec_set_suites(spec, bad, 2) == DWF_ERR_SEMANTIC);
  dwf_spec_free(spec);
}

TEST_CASE("tensor evaluation through the C API") {
  dwf_spec* spec = nullptr;
  REQUIRE(dwf_spec_from_fixture("FIX-1D", 0, 1, &spec) == DWF_OK);
  const double p[] = {0.0, 1.0, 1.0, 1.0};
  double out[16];
  size_t len = 0;
  int rank = -1;
  REQUIRE(dwf_eval(spec, "F2", p, 4, out, 16, &len, &rank) == DWF_OK);
  CHECK(len == 1);
  CHECK(rank == 0);
  CHECK(out[0] == doctest::Approx(3.0));
  REQUIRE(dwf_eval(spec, "spray", p, 4, out, 16, &len, &rank) == DWF_OK);
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(-0.5));
  CHECK(dwf_eval(spec, "B", p, 4, out, 4, &len, &rank) == DWF_ERR_ARGUMENT);
  CHECK(len == 16);
  CHECK(dwf_eval(spec, "nope", p, 4, out, 16, &len, &rank) == DWF_ERR_ARGUMENT);
  const double slit[] = {0.0, 1.0, 0.0, 1.0};
  CHECK(dwf_eval(spec, "g", slit, 4, out, 16, &len, &rank) == DWF_ERR_DOMAIN);
  dwf_spec_free(spec);
}

TEST_CASE("runs, rendering and diffable determinism") {
  dwf_spec* spec = nullptr;
  REQUIRE(dwf_spec_from_fixture("FIX-R", 42, 4, &spec) == DWF_OK);
  const char* suites[] = {"reinhart", "nijenhuis"};
  REQUIRE(dwf_spec_set_suites(spec, suites, 2) == DWF_OK);
  dwf_report* a = nullptr;
  dwf_report* b = nullptr;
  REQUIRE(dwf_run(spec, &a) == DWF_OK);
  REQUIRE(dwf_run(spec, &b) == DWF_OK);
  char* da = nullptr;
  char* db = nullptr;
  REQUIRE(dwf_report_diffable(a, &da) == DWF_OK);
  REQUIRE(dwf_report_diffable(b, &db) == DWF_OK);
  CHECK(take(da) == take(db));
  CHECK(dwf_report_exit_code(a) == 0);
  char* js = nullptr;
  REQUIRE(dwf_report_render(a, DWF_FORMAT_JSON, &js) == DWF_OK);
  const auto text = take(js);
  dwf_report* c = nullptr;
  REQUIRE(dwf_report_parse(text.c_str(), &c) == DWF_OK);
  char* js2 = nullptr;
  REQUIRE(dwf_report_render(c, DWF_FORMAT_JSON, &js2) == DWF_OK);
  CHECK(take(js2) == text);
  dwf_report_free(a);
  dwf_report_free(b);
  dwf_report_free(c);
  dwf_spec_free(spec);
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("fixtures") == 0);
  CHECK(run_cli("verify --fixture FIX-P --seed 3 --points 3 --suite homogeneity") == 0);
  CHECK(run_cli("verify --fixture FIX-R --seed 3 --points 3 --suite reinhart") == 0);
  CHECK(run_cli("verify --fixture FIX-E --seed 3 --points 3 --suite homogeneity --tol homogeneity/spray=-1") == 2);
  // FIX-R without its declared expected failure: an unexpected verdict.
  const std::string path = "dwf_capi_undeclared.json";
  {
    std::ofstream out(path);
    out << R"({"fixture": "FIX-R", "sampling": {"seed": 3, "count": 3}, "suites": ["reinhart"]})";
  }
  CHECK(run_cli("verify --spec " + path) == 1);
  CHECK(run_cli("verify --spec " + path + " --suite homogeneity") == 0);
  std::remove(path.c_str());
  CHECK(run_cli("verify --fixture NO-SUCH") == 2);
  CHECK(run_cli("verify --fixture FIX-E --suite astrology") == 2);
  CHECK(run_cli("verify --fixture FIX-E --tol nonsense") == 2);
  CHECK(run_cli("verify") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("eval --fixture FIX-1D --at 0,1,1,1 --tensor g") == 0);
  CHECK(run_cli("eval --fixture FIX-1D --at 0,1,0,1 --tensor g") == 2);
}
