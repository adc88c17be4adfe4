#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli_path;
std::filesystem::path g_workdir;

int run_cli(const std::string& args, const std::string& stdout_file = "") {
    std::string command = g_cli_path + " " + args;
    if (!stdout_file.empty()) command += " > " + stdout_file;
    command += " 2>/dev/null";
    const int status = std::system(command.c_str());
    return (status >> 8) & 0xff;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("loss-curve --eta 1.5") == 2);
    CHECK(run_cli("loss-curve --family nope") == 2);
    CHECK(run_cli("loss-curve --methods no_such_method") == 2);
    CHECK(run_cli("no-such-subcommand") == 2);
    CHECK(run_cli("loss-curve --family coherent --methods analytic_sv --n-steps 1") == 2);
}

TEST_CASE("write failures exit with code 3") {
    CHECK(run_cli("loss-curve --n-steps 2 --out /nonexistent-dir/out.csv") == 3);
}

TEST_CASE("loss-curve output is deterministic and well-formed") {
    const auto csv_a = g_workdir / "a.csv";
    const auto csv_b = g_workdir / "b.csv";
    const std::string args = "loss-curve --family squeezed_vacuum --eta 0.9 "
                             "--n-min 1 --n-max 20 --n-steps 5 --kmax 60";
    REQUIRE(run_cli(args + " --out " + csv_a.string()) == 0);
    REQUIRE(run_cli(args + " --out " + csv_b.string()) == 0);
    const std::string content = slurp(csv_a);
    CHECK(content == slurp(csv_b));
    CHECK(content.rfind("family,N,eta,method,F_upper,delta_phi_lower\n", 0) == 0);
    CHECK(content.find("analytic_sv") != std::string::npos);
    CHECK(content.find("weak_value") != std::string::npos);
    CHECK(content.find('\r') == std::string::npos);
}

TEST_CASE("gnuplot format emits a script beside the CSV") {
    const auto csv = g_workdir / "loss.csv";
    REQUIRE(run_cli("loss-curve --n-steps 3 --format gnuplot --out " + csv.string()) == 0);
    const std::string script = slurp(csv.string() + ".gp");
    CHECK(script.find("loss.csv") != std::string::npos);
    CHECK(script.find("logscale") != std::string::npos);
    // Script references the sibling file by name, not by some other path.
    CHECK(script.find(g_workdir.string()) == std::string::npos);
}

TEST_CASE("json format") {
    const auto json_path = g_workdir / "curve.json";
    REQUIRE(run_cli("loss-curve --n-steps 2 --format json --out " + json_path.string()) == 0);
    const std::string content = slurp(json_path);
    CHECK(content.find("\"method\"") != std::string::npos);
    CHECK(content.find("\"diverged\"") != std::string::npos);
}

TEST_CASE("dephasing-curve runs for both orders") {
    const auto out = g_workdir / "deph.csv";
    REQUIRE(run_cli("dephasing-curve --family coherent --beta-delta 1 --n-steps 3 --out " +
                    out.string()) == 0);
    const std::string content = slurp(out);
    CHECK(content.rfind("family,N,strength_spread,N_E,method,F_upper,delta_phi_lower,"
                        "validity_radius\n",
                        0) == 0);
    CHECK(content.find("exact_bound") != std::string::npos);

    REQUIRE(run_cli("dephasing-curve --family squeezed_vacuum --gamma-delta 1 --second-order "
                    "--n-min 50 --n-max 50 --n-steps 1 --methods exact_bound --out " +
                    out.string()) == 0);
    const std::string so = slurp(out);
    CHECK(so.find("inf") != std::string::npos);  // unrestricted validity radius
}

TEST_CASE("summary-table prints the expected cells") {
    const auto out = g_workdir / "table.txt";
    REQUIRE(run_cli("summary-table --eta 0.5 --n 4", out.string()) == 0);
    CHECK(slurp(out).find("0.25") != std::string::npos);

    REQUIRE(run_cli("summary-table --eta 0.9 --n 10 --beta-delta 1 --gamma-delta 1", out.string()) ==
            0);
    const std::string table = slurp(out);
    CHECK(table.find("0.000756") != std::string::npos);
    CHECK(table.find("1.4142135623730951") != std::string::npos);
}

TEST_CASE("verify subcommand") {
    SUBCASE("dephasing suite passes") {
        const auto out = g_workdir / "verify.txt";
        CHECK(run_cli("verify --suite dephasing", out.string()) == 0);
        const std::string log = slurp(out);
        CHECK(log.find("[PASS]") != std::string::npos);
        CHECK(log.find("[FAIL]") == std::string::npos);
    }

    SUBCASE("mutated analytic constant trips the loss suite") {
        const auto out = g_workdir / "verify_mut.txt";
        CHECK(run_cli("verify --suite loss --mutate-appendix 0.01", out.string()) == 1);
        const std::string log = slurp(out);
        CHECK(log.find("[FAIL] fmin_analytic_general equivalence") != std::string::npos);
    }

    SUBCASE("oracle suite includes the finite-difference derivative check") {
        const auto out = g_workdir / "verify_oracle.txt";
        CHECK(run_cli("verify --suite oracle", out.string()) == 0);
        const std::string log = slurp(out);
        CHECK(log.find("finite differences") != std::string::npos);
        CHECK(log.find("[FAIL]") == std::string::npos);
    }
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-kerrqfi-binary>\n");
        return 1;
    }
    g_cli_path = argv[1];
    g_workdir = std::filesystem::temp_directory_path() / "kerrqfi_cli_test";
    std::filesystem::create_directories(g_workdir);

    doctest::Context context;
    context.applyCommandLine(1, argv);
    const int result = context.run();
    std::filesystem::remove_all(g_workdir);
    return result;
}
