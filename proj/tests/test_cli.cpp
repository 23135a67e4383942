#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "weightlab/cli.hpp"

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "weightlab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    std::ostringstream out, err;
    const int code = weightlab::run_cli(static_cast<int>(args.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("constants of the trivial weight") {
    const Run r = run({"constants", "--weight", "const:c=1", "--res", "8", "--p", "2", "--p", "3", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("ap_2").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("ap_3").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("a1").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("fw").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("transform CSV") {
    const Run r = run({"transform", "--weight", "step:K=4", "--res", "5", "--op", "maximal"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "fiber,cell,x,w,transform");
    int rows = 0;
    for (std::string line; std::getline(in, line);) rows += !line.empty();
    CHECK(rows == 32);
}

TEST_CASE("derive and verify") {
    const Run d = run({"derive", "--script", "main-chain", "--p", "2"});
    CHECK(d.code == 0);
    CHECK(d.out.find("#35: X′ A_2-regular") != std::string::npos);
    const Run j = run({"derive", "--script", "themcr2", "--json"});
    CHECK(j.code == 0);
    CHECK(nlohmann::json::accept(j.out));
    const Run v = run({"verify", "a1apt", "--seed", "3", "--res", "7"});
    CHECK(v.code == 0);
    CHECK(nlohmann::json::parse(v.out).at("pass").get<bool>());
}

TEST_CASE("exit codes") {
    CHECK(run({"constants", "--weight", "nonsense"}).code == 2);
    CHECK(run({"constants"}).code == 2);
    CHECK(run({"bogus-command"}).code == 2);
    CHECK(run({"derive", "--script", "main-chain", "--p", "abc"}).code == 2);
    const Run e = run({"constants", "--weight", "step:K=abc"});
    CHECK(e.code == 2);
    CHECK_FALSE(e.err.empty());
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"majorant", "--f", "power:a=0.3", "--p", "2", "--res", "7"};
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}
