#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace lrdtest;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lrdtest");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
    const auto dir = fs::temp_directory_path() / "lrdtest_cli_test";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(ParseSeries, Formats) {
    std::istringstream plain("1\n2.5\n\n-3e2\n");
    EXPECT_EQ(cli::parse_series(plain), (std::vector<double>{1, 2.5, -300}));
    std::istringstream csv("value\r\n\"1.5\"\r\n2\r\n");
    EXPECT_EQ(cli::parse_series(csv), (std::vector<double>{1.5, 2}));
}

TEST(ParseSeries, ErrorsNameTheLine) {
    std::istringstream bad("1\n2\nfoo\n");
    try {
        cli::parse_series(bad, "f.txt");
        FAIL();
    } catch (const cli::InputParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("f.txt:3"), std::string::npos);
    }
    std::istringstream nan("1\nnan\n");
    EXPECT_THROW(cli::parse_series(nan), cli::InputParseError);
    std::istringstream two("1,2\n");
    EXPECT_THROW(cli::parse_series(two), cli::InputParseError);
    std::istringstream empty("x\n\n");
    EXPECT_THROW(cli::parse_series(empty), cli::InputParseError);
}

TEST(CsvField, Quoting) {
    EXPECT_EQ(cli::csv_field("abc"), "abc");
    EXPECT_EQ(cli::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(cli::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(CmdTest, StepSeriesKHat) {
    const auto p = temp_file("step.txt", "0\n0\n0\n10\n10\n10\n");
    // both three-point segments are constant, so the scale is zero; the split is still reported
    auto r = run_cli({"test", p.string(), "--test", "wilcoxon"});
    EXPECT_EQ(r.code, cli::kDegenerateData) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["reports"][0]["k_hat"], 3);
    EXPECT_NE(j["reports"][0]["error"].get<std::string>().find("segment 1"), std::string::npos);

    r = run_cli({"test", p.string(), "--format", "csv"});
    EXPECT_EQ(r.code, cli::kDegenerateData);
    EXPECT_NE(r.out.find("\nwilcoxon,6,3,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\ncusum,6,3,"), std::string::npos) << r.out;
}

TEST(CmdTest, ExitCodes) {
    const auto constant = temp_file("const.txt", "2\n2\n2\n2\n2\n2\n2\n2\n");
    EXPECT_EQ(run_cli({"test", constant.string()}).code, cli::kDegenerateData);
    const auto bad = temp_file("bad.txt", "1\n2\nx\n");
    const auto r = run_cli({"test", bad.string()});
    EXPECT_EQ(r.code, cli::kParseError);
    EXPECT_NE(r.err.find(":3"), std::string::npos);
    EXPECT_EQ(run_cli({"test", "/nonexistent/file"}).code, cli::kParseError);
    EXPECT_EQ(run_cli({"test", constant.string(), "--test", "neither"}).code, cli::kBadFlags);
    EXPECT_EQ(run_cli({"size", "--reps", "0"}).code, cli::kBadFlags);
    EXPECT_EQ(run_cli({"size", "--n", "3"}).code, cli::kBadFlags);
    EXPECT_EQ(run_cli({}).code, cli::kBadFlags);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST(CmdTest, FrozenFgnFixtureRejects) {
    const auto path = fs::path(LRDTEST_FIXTURE_DIR) / "fgn_d0.4_n2000_seed2018.txt";
    const auto r = run_cli({"test", path.string(), "--test", "wilcoxon"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["reports"][0]["n"], 2000);
    EXPECT_EQ(j["reports"][0]["k_hat"], 1364);
    EXPECT_EQ(j["reports"][0]["reject"], true);
}

TEST(CmdTest, CsvCarriesManifest) {
    const auto path = fs::path(LRDTEST_FIXTURE_DIR) / "fgn_d0.4_n2000_seed2018.txt";
    const auto r = run_cli({"test", path.string(), "--format", "csv", "--variance", "bartlett"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    ASSERT_EQ(r.out.rfind("# {", 0), 0u);
    const auto first_nl = r.out.find('\n');
    const auto manifest = nlohmann::json::parse(r.out.substr(2, first_nl - 2));
    EXPECT_EQ(manifest["tests"][0]["variance"]["kind"], "bartlett");
    EXPECT_NE(r.out.find("cusum,2000,"), std::string::npos);
    EXPECT_NE(r.out.find("wilcoxon,2000,1364,"), std::string::npos);
}

TEST(CmdSize, ByteIdenticalAcrossWorkers) {
    const auto a = run_cli({"size", "--n", "300", "--reps", "60", "--seed", "5", "--workers", "1"});
    const auto b = run_cli({"size", "--n", "300", "--reps", "60", "--seed", "5", "--workers", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["manifest"]["seed"], 5);
    EXPECT_EQ(j["manifest"]["dgp"]["rho"], 0.4);
    EXPECT_EQ(j["results"].size(), 2u);
}

TEST(CmdSize, OutliersSwitchRhoSource) {
    const auto r = run_cli({"size", "--n", "200", "--reps", "5", "--outliers", "--test", "cusum"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["manifest"]["tests"][0]["variance"]["rho_source"], "robust");
    const auto q = run_cli({"power", "--n", "200", "--reps", "5", "--rho-source", "acf", "--outliers"});
    EXPECT_EQ(nlohmann::json::parse(q.out)["manifest"]["tests"][0]["variance"]["rho_source"], "acf");
}

TEST(CmdTables, FilesAndManifest) {
    const auto dir = fs::temp_directory_path() / "lrdtest_cli_tables";
    fs::remove_all(dir);
    auto r = run_cli({"tables", "--table", "3", "--reps", "20", "--max-n", "500", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "table3.csv");
    const auto manifest = nlohmann::json::parse(slurp(dir / "table3.manifest.json"));
    EXPECT_EQ(manifest["table"], 3);
    EXPECT_EQ(manifest["max_n"], 500);
    EXPECT_EQ(csv.rfind("# " + manifest.dump() + "\n", 0), 0u);
    std::istringstream lines(csv);
    std::string line;
    int rows = 0;
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("table,measure,n,", 0), 0u);
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_NE(line.find(",true,carlstein,"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 4);  // delta in {1, 2} x n in {200, 500}

    r = run_cli({"tables", "--table", "3", "--reps", "20", "--max-n", "500", "--out", dir.string(),
                 "--workers", "2"});
    EXPECT_EQ(slurp(dir / "table3.csv"), csv);
}

TEST(CmdTables, TableOneUsesBartlett) {
    cli::TableOptions opt;
    opt.reps = 10;
    opt.max_n = 500;
    const auto rows = cli::run_table(1, opt);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].measure, "size");
    EXPECT_EQ(rows[1].measure, "power");
    for (const auto& row : rows) {
        EXPECT_EQ(row.cusum_variance, "bartlett");
        EXPECT_TRUE(row.cusum.has_value());
        EXPECT_FALSE(row.wilcoxon.has_value());
    }
}

TEST(CmdTables, GridSizes) {
    cli::TableOptions opt;
    opt.reps = 1;
    opt.max_n = 200;
    EXPECT_EQ(cli::run_table(2, opt).size(), 8u);
    EXPECT_EQ(cli::run_table(4, opt).size(), 4u);
    EXPECT_EQ(cli::run_table(5, opt).size(), 4u);
    EXPECT_THROW(cli::run_table(6, opt), std::invalid_argument);
}

TEST(CmdFigureRho, Csv) {
    const auto r = run_cli({"figure-rho", "--reps", "3", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("# {", 0), 0u);
    std::getline(lines, line);
    EXPECT_EQ(line, "replication,rho_acf,rho_robust");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 3);
}
