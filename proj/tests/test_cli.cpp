#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string cli() {
    const char* p = std::getenv("RA_CLI_BIN");
    REQUIRE_MESSAGE(p != nullptr, "RA_CLI_BIN must point at the ra binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("cli exit codes") {
    CHECK(run("fixed-point --scenario fig1b --gamma0 0 --damping 0.5 --max-iter 5") == 0);
    CHECK(run("fixed-point --scenario /no/such/file") == 2);
    CHECK(run("simulate --scenario fig1b --policy random") == 2);  // missing --h
    CHECK(run("simulate --scenario fig1b --h 1") == 2);            // missing --policy
    CHECK(run("nonsense") == 2);
    CHECK(run("simulate --scenario fig1b --policy bogus --h 1") == 2);
}

TEST_CASE("cli writes tabular output with metadata") {
    const std::string path = "/tmp/ra_cli_trace.txt";
    CHECK(run("fixed-point --scenario fig1b --max-iter 3 --out " + path) == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# command=fixed-point", 0) == 0);
    bool header = false;
    int row_count = 0;
    while (std::getline(in, line)) {
        if (line.rfind("iter residual", 0) == 0) header = true;
        else if (!line.empty() && line[0] != '#' && header) ++row_count;
    }
    CHECK(header);
    CHECK(row_count == 4);  // gamma_0 .. gamma_3
}

TEST_CASE("cli solve-relaxed on a light scenario") {
    const std::string path = "/tmp/ra_cli_relaxed.txt";
    CHECK(run("solve-relaxed --scenario fig1b --gamma 0 --out " + path) == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("# revenue=") != std::string::npos);
    CHECK(all.find("# nu_1=") != std::string::npos);
    CHECK(all.find("rank pattern state") != std::string::npos);
}

TEST_CASE("cli simulate smoke run") {
    const std::string path = "/tmp/ra_cli_sim.txt";
    CHECK(run("simulate --scenario fig1b --policy random --h 1 --horizon 30 "
              "--seed 3 --out " +
              path) == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("scenario policy eps_m h revenue") != std::string::npos);
    CHECK(all.find("random") != std::string::npos);
}
