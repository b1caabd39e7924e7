#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("OSTOP_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "OSTOP_CLI not set");
    const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("cli: solve reflected") {
    const auto r = run_cli("solve --example reflected --alpha 0.5");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("status") == "RootFound");
    CHECK(j.at("x0").get<double>() == doctest::Approx(1.19967864).epsilon(1e-6));
    CHECK(j.at("u").get<double>() == doctest::Approx(1.19967864).epsilon(1e-6));
}

TEST_CASE("cli: solve absorbed reports the degenerate boundary") {
    const auto r = run_cli("solve --example absorbed --alpha 1");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("status") == "NoPositiveRoot");
    CHECK(j.at("x0").get<double>() == 0.0);
    CHECK(j.contains("note"));
    CHECK(j.at("note").get<std::string>().find("no positive root") !=
          std::string::npos);
}

TEST_CASE("cli: usage errors exit with code 2") {
    CHECK(run_cli("solve --example nonsense --alpha 1").exit_code == 2);
    CHECK(run_cli("solve --alpha 1").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("sweep --example stopped --alpha 1 --thresholds bad --x 0")
              .exit_code == 2);
}

TEST_CASE("cli: table emits the threshold ordering") {
    const auto r = run_cli("table --alphas 0.25,0.5,1,2 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("alpha,x0_running,x0_stopped,x0_reflected,x0_absorbed") !=
          std::string::npos);
    CHECK(r.out.find("false") == std::string::npos);

    const auto rj = run_cli("table --alphas 0.25,2 --format json");
    const json j = json::parse(rj.out);
    CHECK(j.at("all_ordering_ok") == true);
    for (const auto& row : j.at("rows")) {
        CHECK(row.at("x0_absorbed").get<double>() == 0.0);
        CHECK(row.at("reflected_over_stopped").get<double>() ==
              doctest::Approx(1.19967864).epsilon(1e-6));
    }
}

TEST_CASE("cli: verify passes at the solved threshold and fails off it") {
    CHECK(run_cli("verify --example stopped --alpha 0.5").exit_code == 0);
    CHECK(run_cli("verify --example running --alpha 0.5").exit_code == 0);
    CHECK(run_cli("verify --example stopped --alpha 0.5 --x0 2.0").exit_code ==
          1);
    const auto r = run_cli("verify --example reflected --alpha 0.5");
    const json j = json::parse(r.out);
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("region").at("threshold").get<double>() ==
          doctest::Approx(1.19967864).epsilon(1e-3));
}

TEST_CASE("cli: quadrature budget exhaustion exits with code 3") {
    const auto r = run_cli(
        "verify --example stopped --alpha 0.5 --numeric-value --max-evals 50");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: identical invocations are byte-identical") {
    const std::string cmd =
        "simulate --example stopped --alpha 0.5 --x 0 --paths 2000 --dt 0.01 "
        "--seed 99";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());

    const auto c = run_cli("solve --example reflected --alpha 0.5");
    const auto d = run_cli("solve --example reflected --alpha 0.5");
    CHECK(c.out == d.out);
}

TEST_CASE("cli: verify accepts an explicit grid and the ui probe") {
    const auto r = run_cli(
        "verify --example reflected --alpha 0.5 --grid-min 0 --grid-max 3 "
        "--grid-n 101 --ui-paths 2000 --dt 0.005 --seed 5");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("grid").size() == 101);
    REQUIRE(j.contains("uniform_integrability"));
    const auto& tails = j.at("uniform_integrability");
    REQUIRE(tails.size() == 5);
    double prev = tails[0].at("worst_tail").get<double>();
    for (const auto& t : tails) {
        const double tail = t.at("worst_tail").get<double>();
        CHECK(tail <= prev + 1e-12);
        prev = tail;
    }
}

TEST_CASE("cli: sweep output carries the argmax") {
    const auto r = run_cli(
        "sweep --example stopped --alpha 0.5 --thresholds 0.6:1.4:5 --x 0 "
        "--paths 4000 --dt 0.005 --seed 31");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("points").size() == 5);
    CHECK(j.contains("argmax_threshold"));
}
