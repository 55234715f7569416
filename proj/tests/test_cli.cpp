#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(COLEHOPF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmpdir() {
    fs::path d = fs::temp_directory_path() / "colehopf-cli-test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("derive: exit codes follow the verdict") {
    CHECK(run("derive burgers --m 1 --h \"C*exp(alpha*x)\" --param C=1 --param alpha=1") == 0);
    CHECK(run("derive ode --f 1 --w a --v \"4*a^2\" --s 0 --param a=1") == 0);
    // incompatible coefficients: constraint fails, exit 1
    CHECK(run("derive burgers --m 1 --h \"x^2+1\"") == 1);
    CHECK(run("derive ode --f 1 --w a --v 0 --s 0 --param a=1") == 1);
}

TEST_CASE("malformed input exits 3, never crashes") {
    CHECK(run("derive burgers --m 1 --h \"1+*x\"") == 3);
    CHECK(run("derive burgers --m 1 --h \"sin(x\"") == 3);
    CHECK(run("derive burgers --m 1 --h \"a*x\"") == 3);  // unbound parameter
    CHECK(run("derive burgers --m 1") == 3);              // missing required flag
    CHECK(run("frobnicate") == 3);                        // unknown subcommand
    CHECK(run("verify no-such-case") == 3);
    CHECK(run("solve burgers --config /nonexistent.ini") == 3);
}

TEST_CASE("solve ode: CSV schema and byte-identical determinism") {
    fs::path d = tmpdir();
    fs::path a = d / "a.csv", b = d / "b.csv", rep = d / "rep.json";
    std::string base = "solve ode --f 1 --w a --v \"4*a^2\" --s 0 --param a=1 --n 801";
    CHECK(run(base + " --csv " + a.string() + " --report " + rep.string()) == 0);
    CHECK(run(base + " --csv " + b.string()) == 0);

    std::string ca = slurp(a);
    CHECK(ca.substr(0, ca.find('\n')) == "x,phi,dphi,psi,mask");
    CHECK(ca == slurp(b));
    CHECK(ca.find("\r") == std::string::npos);  // LF only

    std::string r = slurp(rep);
    CHECK(r.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(r.find("\"Q\"") != std::string::npos);
}

TEST_CASE("solve burgers: PDE CSV schema") {
    fs::path d = tmpdir();
    fs::path csv = d / "pde.csv";
    // loose tolerance: this checks the schema, not accuracy at a coarse grid
    CHECK(run("solve burgers --m nu --h -1 --param nu=0.1 --n 65 --nt 50 --t-end 0.01 "
              "--tol 0.05 --csv " + csv.string()) == 0);
    std::string c = slurp(csv);
    CHECK(c.substr(0, c.find('\n')) == "x,t,phi,dphi,psi,mask");
}

TEST_CASE("solve burgers: all-masked profile reports degenerate and exits 1") {
    fs::path rep = tmpdir() / "deg.json";
    CHECK(run("solve burgers --m nu --h -1 --param nu=0.1 --phi0 0 --n 65 --nt 50 "
              "--t-end 0.01 --report " + rep.string()) == 1);
    CHECK(slurp(rep).find("degenerate field") != std::string::npos);
}

TEST_CASE("config file drives a run; flags override file values") {
    fs::path d = tmpdir();
    fs::path ini = d / "run.ini", csv = d / "cfg.csv";
    std::ofstream out(ini);
    out << "[problem]\n"
           "kind = burgers\n"
           "m = 1\n"
           "h = C*exp(alpha*x)\n"
           "params = C=1, alpha=1\n"
           "[grid]\n"
           "n = 129\n"
           "[time]\n"
           "t_end = 0.1\n"
           "nt = 500\n"
           "[solver]\n"
           "tol = 4e-3\n"
           "[output]\n"
           "csv = " << csv.string() << "\n";
    out.close();

    CHECK(run("solve burgers --config " + ini.string()) == 0);
    CHECK(fs::exists(csv));
    // flag override: an absurdly tight tolerance must flip the verdict
    CHECK(run("solve burgers --config " + ini.string() + " --tol 1e-15") == 1);
    // the same file also works as a verify case
    CHECK(run("verify --config " + ini.string()) == 0);

    std::ofstream bad(d / "bad.ini");
    bad << "key = value\n";  // key outside any section
    bad.close();
    CHECK(run("solve burgers --config " + (d / "bad.ini").string()) == 3);
}

TEST_CASE("verify: bundled cases") {
    CHECK(run("verify classical-burgers") == 0);
}

TEST_CASE("families: closed forms print and check") {
    CHECK(run("families h --family exponential --param C=1 --param alpha=1") == 0);
    CHECK(run("families h --family no-such") == 3);
    CHECK(run("families m --a1 1 --b1 2") == 0);
    CHECK(run("families m --c 1 --c1 0 --c2 0 --n 11") == 0);
    CHECK(run("families m --a1 1 --c 1") == 3);  // ambiguous family selection
}
