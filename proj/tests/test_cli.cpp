#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kam/cli.hpp"
#include "kam/dataset.hpp"
#include "kam/oracle.hpp"
#include "kam/report_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run kam_run(std::vector<std::string> args) {
    args.insert(args.begin(), "kam");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = kam::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "kam_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write(const std::string &name, const std::string &text) {
    const auto path = scratch(name);
    std::ofstream(path) << text;
    return path;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kTwoDmu = "dmu,I:in1,O:out1,O:out2\nA,1,4,10\nB,1,10,9\n";

std::vector<std::string> fixture_args(const fs::path &csv) {
    return {csv.string(), "--epsilon-mode", "absolute", "--epsilon-out", "0.5,0.5", "--weights", "unit",
            "--delta-rule", "tenth"};
}

} // namespace

TEST_CASE("two-DMU fixture produces the expected JSON report") {
    const auto csv = write("two.csv", kTwoDmu);
    const auto r = kam_run(fixture_args(csv));
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    std::vector<std::string> keys;
    for (const auto &[k, v] : j.items()) {
        keys.push_back(k);
    }
    CHECK(keys == std::vector<std::string>{"config", "ranking", "evaluations", "summary", "adequacy"});
    REQUIRE(j["ranking"].size() == 2);
    CHECK(j["ranking"][0]["dmu"] == "B");
    CHECK(j["ranking"][0]["rank"] == 1);
    CHECK(j["ranking"][0]["ka_eps"].get<double>() == doctest::Approx(1.0));
    CHECK(j["ranking"][0]["kam_efficient"] == true);
    CHECK(j["ranking"][1]["dmu"] == "A");
    CHECK(j["ranking"][1]["rank"] == 2);
    CHECK(j["ranking"][1]["ka_eps"].get<double>() == doctest::Approx(0.848485).epsilon(1e-6));
    CHECK(j["ranking"][1]["kam_efficient"] == false);
    CHECK(j["evaluations"][0]["target"]["outputs"][0].get<double>() == doctest::Approx(7.0));
    CHECK(j["config"]["epsilon"]["mode"] == "absolute");
    CHECK(j["config"]["delta"]["rule"] == "tenth");
}

TEST_CASE("0-KAM run marks technical efficiency only") {
    const auto csv = write("three.csv", "dmu,I:x,O:y1,O:y2\nA,1,4,10\nB,1,10,9\nC,1,5,5\n");
    const auto r = kam_run({csv.string(), "--epsilon-mode", "proportional", "--epsilon", "0"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const auto &e : j["evaluations"]) {
        const bool tech = e["technically_efficient"].get<bool>();
        CHECK(e["kam_efficient"].get<bool>() == tech);
        if (tech) {
            CHECK(e["ka_eps"].get<double>() == doctest::Approx(1.0));
        }
        CHECK(e["ka_eps"].get<double>() == e["ka0"].get<double>());
    }
    CHECK(j["evaluations"][2]["technically_efficient"] == false);
}

TEST_CASE("exit codes") {
    SUBCASE("validation failure prints issues and no report") {
        const auto csv = write("zero.csv", "dmu,I:x,O:y\nA,0,1\nB,1,1\n");
        const auto r = kam_run({csv.string(), "--epsilon", "0.1"});
        CHECK(r.code == 1);
        CHECK(r.out.empty());
        CHECK(r.err.find("ALL_ZERO_INPUTS") != std::string::npos);
        CHECK(r.err.find("'A'") != std::string::npos);
    }
    SUBCASE("parse failure") {
        const auto csv = write("neg.csv", "dmu,I:x,O:y\nA,-3,1\n");
        const auto r = kam_run({csv.string(), "--epsilon", "0.1"});
        CHECK(r.code == 1);
        CHECK(r.err.find("NEGATIVE_VALUE") != std::string::npos);
    }
    SUBCASE("inverse weights over a zero datum") {
        const auto csv = write("zero_out.csv", "dmu,I:x,O:y1,O:y2\nA,1,0,5\nB,1,3,3\n");
        const auto r = kam_run({csv.string(), "--epsilon", "0.1", "--weights", "inverse"});
        CHECK(r.code == 2);
        CHECK(r.err.find("'y1'") != std::string::npos);
        CHECK(r.err.find("'A'") != std::string::npos);
    }
    SUBCASE("conflicting flags") {
        const auto csv = write("two.csv", kTwoDmu);
        CHECK(kam_run({csv.string(), "--epsilon", "0.1", "--epsilon-out", "0.5,0.5"}).code == 2);
        CHECK(kam_run({csv.string(), "--epsilon-mode", "absolute", "--epsilon-out", "0.5"}).code == 2);
        CHECK(kam_run({csv.string()}).code == 2);
        CHECK(kam_run({csv.string(), "--epsilon", "0.1", "--delta-rule", "explicit"}).code == 2);
        CHECK(kam_run({csv.string(), "--epsilon", "0.1", "--delta", "0.2"}).code == 2);
        CHECK(kam_run({csv.string(), "--epsilon", "0.1", "--format", "xml"}).code == 2);
        CHECK(kam_run({csv.string(), "--epsilon", "-1"}).code == 2);
    }
    SUBCASE("missing input file") {
        CHECK(kam_run({scratch("does_not_exist.csv").string(), "--epsilon", "0.1"}).code == 2);
    }
}

TEST_CASE("CSV and JSON reports agree and the chart follows the ranking") {
    const auto csv = write("rand.csv", kam::serialize_dataset(kam::oracle::random_instance(3, 12, 2, 3)));
    const std::vector<std::string> base{csv.string(), "--epsilon", "0.1", "--weights", "inverse"};

    auto json_args = base;
    const auto chart = scratch("chart.svg");
    json_args.insert(json_args.end(), {"--chart", chart.string()});
    const auto rj = kam_run(json_args);
    REQUIRE(rj.code == 0);
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto rc = kam_run(csv_args);
    REQUIRE(rc.code == 0);

    const auto j = json::parse(rj.out);
    std::istringstream lines(rc.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "rank,dmu,ka_eps,ka0,technically_efficient,kam_efficient");
    std::vector<std::string> order;
    for (const auto &e : j["ranking"]) {
        REQUIRE(std::getline(lines, line));
        const std::string expected = std::to_string(e["rank"].get<int>()) + "," + e["dmu"].get<std::string>() + "," +
                                     kam::fixed6(e["ka_eps"].get<double>()) + "," +
                                     kam::fixed6(e["ka0"].get<double>()) + "," +
                                     (e["technically_efficient"].get<bool>() ? "true" : "false") + "," +
                                     (e["kam_efficient"].get<bool>() ? "true" : "false");
        CHECK(line == expected);
        order.push_back(e["dmu"].get<std::string>());
    }

    const auto svg = slurp(chart);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("href") == std::string::npos);
    std::vector<std::string> bars;
    const std::regex bar_re("data-dmu=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar_re); it != std::sregex_iterator(); ++it) {
        bars.push_back((*it)[1].str());
    }
    CHECK(bars == order);
}

TEST_CASE("identical invocations are byte-identical") {
    const auto csv = write("det.csv", kam::serialize_dataset(kam::oracle::random_instance(11, 16, 3, 2)));
    const auto a = kam_run({csv.string(), "--epsilon", "0.001", "--weights", "inverse"});
    const auto b = kam_run({csv.string(), "--epsilon", "0.001", "--weights", "inverse", "--serial"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("weights file and output file") {
    const auto csv = write("two.csv", kTwoDmu);
    const auto weights = write("w.csv", "dmu,O:out2,I:in1,O:out1\nweights,2,1,1\n");
    const auto report = scratch("report.csv");
    const auto r = kam_run({csv.string(), "--epsilon", "0", "--weights", "file", "--weights-file", weights.string(),
                            "--format", "csv", "-o", report.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(report).find("rank,dmu") == 0);

    const auto bad = write("w_bad.csv", "dmu,I:in1,O:out1\nweights,1,1\n");
    CHECK(kam_run({csv.string(), "--epsilon", "0", "--weights", "file", "--weights-file", bad.string()}).code == 2);
    CHECK(kam_run({csv.string(), "--epsilon", "0", "--weights", "file"}).code == 2);
}

TEST_CASE("KAM_LOG controls diagnostics") {
    const auto csv = write("two.csv", kTwoDmu);
    ::setenv("KAM_LOG", "debug", 1);
    const auto dbg = kam_run({csv.string(), "--epsilon", "0.1"});
    ::setenv("KAM_LOG", "error", 1);
    const auto quiet = kam_run({csv.string(), "--epsilon", "0.1"});
    ::unsetenv("KAM_LOG");
    CHECK(dbg.code == 0);
    CHECK(dbg.err.find("0-KAM objective") != std::string::npos);
    CHECK(dbg.err.find("adequacy golany-roll") != std::string::npos);
    CHECK(quiet.err.empty());
    CHECK(dbg.out == quiet.out);
}
