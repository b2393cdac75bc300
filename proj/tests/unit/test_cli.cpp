#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hypecurve/series.hpp"

namespace hypecurve::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

const std::string data_dir = HYPECURVE_DATA_DIR;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hypecurve_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int call(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        args.push_back("--timestamp");
        args.push_back("fixed");
        return run(args, out_, err_);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::ostringstream out_, err_;
};

TEST_F(CliTest, SimulateReferenceNoiseFree) {
    ASSERT_EQ(call({"simulate", "--k", "4", "--r", "1", "--t0", "8", "--p", "0.125", "--tstar", "4",
                    "--from", "0", "--to", "30", "--pub-out", path("pub.csv"), "--pat-out",
                    path("pat.csv")}),
              exit_ok)
        << err_.str();
    const auto pub = parse_csv(slurp(path("pub.csv")));
    EXPECT_NEAR(total(pub), 4.0, 4e-3);
    EXPECT_EQ(pub.first_year(), 0);
    EXPECT_EQ(pub.last_year(), 30);
    const auto manifest = nlohmann::json::parse(out_.str());
    EXPECT_EQ(manifest.at("command"), "simulate");
    EXPECT_EQ(manifest.at("timestamp"), "fixed");
}

TEST_F(CliTest, SimulateIsSeedDeterministic) {
    const std::vector<std::string> base{"simulate", "--k", "8000", "--r", "0.45", "--t0", "2004",
                                        "--p", "2.5", "--tstar", "5", "--from", "1988", "--to",
                                        "2025", "--noise", "poisson", "--seed", "7"};
    auto a = base, b = base, c = base;
    a.insert(a.end(), {"--pub-out", path("a1.csv"), "--pat-out", path("a2.csv")});
    b.insert(b.end(), {"--pub-out", path("b1.csv"), "--pat-out", path("b2.csv")});
    c.back() = "8";
    c.insert(c.end(), {"--pub-out", path("c1.csv"), "--pat-out", path("c2.csv")});
    ASSERT_EQ(call(a), exit_ok) << err_.str();
    ASSERT_EQ(call(b), exit_ok);
    ASSERT_EQ(call(c), exit_ok);
    EXPECT_EQ(slurp(path("a1.csv")), slurp(path("b1.csv")));
    EXPECT_EQ(slurp(path("a2.csv")), slurp(path("b2.csv")));
    EXPECT_NE(slurp(path("a1.csv")), slurp(path("c1.csv")));
}

TEST_F(CliTest, PresetReproducesBundledFixture) {
    ASSERT_EQ(call({"simulate", "--preset", "oled", "--pub-out", path("p.csv"), "--pat-out",
                    path("q.csv")}),
              exit_ok)
        << err_.str();
    EXPECT_EQ(slurp(path("p.csv")), slurp(data_dir + "/oled_publications.csv"));
    EXPECT_EQ(slurp(path("q.csv")), slurp(data_dir + "/oled_patents.csv"));
}

TEST_F(CliTest, InvalidParameterIsUsageError) {
    EXPECT_EQ(call({"simulate", "--k", "4", "--r", "-1", "--t0", "8", "--from", "0", "--to", "30",
                    "--pub-out", path("a.csv"), "--pat-out", path("b.csv")}),
              exit_usage);
    EXPECT_NE(err_.str().find("--r"), std::string::npos) << err_.str();
    EXPECT_EQ(call({"fit", "--pub", data_dir + "/oled_publications.csv", "--mode", "bogus"}),
              exit_usage);
    EXPECT_EQ(call({"fit", "--pub", data_dir + "/oled_publications.csv", "--epsilon", "1.5",
                    "--out-dir", path("")}),
              exit_usage);
    EXPECT_NE(err_.str().find("--epsilon"), std::string::npos) << err_.str();
    EXPECT_EQ(call({"nonsense"}), exit_usage);
}

TEST_F(CliTest, FitFixtureJointAndIndependent) {
    ASSERT_EQ(call({"fit", "--pub", data_dir + "/oled_publications.csv", "--pat",
                    data_dir + "/oled_patents.csv", "--out-dir", dir_.string()}),
              exit_ok)
        << err_.str();
    for (const char* f : {"hype.report.json", "hype.curve.csv", "hype.pub.normalized.csv",
                          "hype.pat.normalized.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    }
    const auto joint = nlohmann::json::parse(slurp(dir_ / "hype.report.json"));
    const double tstar = joint.at("fit").at("params").at("tstar");
    EXPECT_GE(tstar, 4.0);
    EXPECT_LE(tstar, 6.0);
    EXPECT_EQ(joint.at("report").at("forecast_from_year"), 2016);

    const auto npub = parse_csv(slurp(dir_ / "hype.pub.normalized.csv"));
    const auto npat = parse_csv(slurp(dir_ / "hype.pat.normalized.csv"));
    EXPECT_EQ(npub.max_count(), 1.0);
    EXPECT_EQ(npat.max_count(), 0.5);

}

TEST_F(CliTest, IndependentMatchesJointOnNoiseFreeData) {
    ASSERT_EQ(call({"simulate", "--k", "8000", "--r", "0.45", "--t0", "2004", "--p", "2.5", "--tstar",
                    "5", "--from", "1988", "--to", "2025", "--pub-out", path("pub.csv"), "--pat-out",
                    path("pat.csv")}),
              exit_ok);
    ASSERT_EQ(call({"fit", "--pub", path("pub.csv"), "--pat", path("pat.csv"), "--out-dir",
                    dir_.string(), "--prefix", "joint"}),
              exit_ok);
    ASSERT_EQ(call({"fit", "--pub", path("pub.csv"), "--pat", path("pat.csv"), "--mode",
                    "independent", "--out-dir", dir_.string(), "--prefix", "ind"}),
              exit_ok)
        << err_.str();
    const auto joint = nlohmann::json::parse(slurp(dir_ / "joint.report.json"));
    const auto ind = nlohmann::json::parse(slurp(dir_ / "ind.report.json"));
    EXPECT_EQ(ind.at("fit").at("mode"), "independent");
    for (const char* key : {"k", "r", "t0", "p", "tstar"}) {
        const double a = joint.at("fit").at("params").at(key);
        const double b = ind.at("fit").at("params").at(key);
        EXPECT_NEAR(a, b, 1e-3 * std::abs(a)) << key;
    }
}

TEST_F(CliTest, FitPublicationsOnly) {
    ASSERT_EQ(call({"fit", "--pub", data_dir + "/oled_publications.csv", "--out-dir", dir_.string()}),
              exit_ok)
        << err_.str();
    const auto rep = nlohmann::json::parse(slurp(dir_ / "hype.report.json"));
    EXPECT_FALSE(rep.at("fit").at("has_tech").get<bool>());
    EXPECT_FALSE(rep.at("fit").at("params").contains("tstar"));
    EXPECT_FALSE(rep.at("report").contains("pat_trigger_year"));
    EXPECT_FALSE(fs::exists(dir_ / "hype.pat.normalized.csv"));
}

TEST_F(CliTest, FitAveragesSources) {
    const auto pub = slurp(data_dir + "/oled_publications.csv");
    const auto doubled = to_csv(parse_csv(pub).scaled(3.0));
    spit(path("a.csv"), pub);
    spit(path("b.csv"), doubled);
    ASSERT_EQ(call({"fit", "--pub", path("a.csv"), "--pub", path("b.csv"), "--out-dir",
                    dir_.string()}),
              exit_ok)
        << err_.str();
    const auto rep = nlohmann::json::parse(slurp(dir_ / "hype.report.json"));
    EXPECT_EQ(rep.at("manifest").at("inputs").size(), 2u);
}

TEST_F(CliTest, FitDeterministicBytes) {
    const std::vector<std::string> args{"fit", "--pub", data_dir + "/oled_publications.csv", "--pat",
                                        data_dir + "/oled_patents.csv", "--out-dir", dir_.string()};
    ASSERT_EQ(call(args), exit_ok);
    const auto first = slurp(dir_ / "hype.report.json");
    const auto first_curve = slurp(dir_ / "hype.curve.csv");
    ASSERT_EQ(call(args), exit_ok);
    EXPECT_EQ(first, slurp(dir_ / "hype.report.json"));
    EXPECT_EQ(first_curve, slurp(dir_ / "hype.curve.csv"));
}

TEST_F(CliTest, InputErrors) {
    EXPECT_EQ(call({"fit", "--pub", path("missing.csv"), "--out-dir", dir_.string()}), exit_input_error);
    spit(path("bad.csv"), "year,count\n2000,1\n2001,abc\n2002,3\n");
    EXPECT_EQ(call({"fit", "--pub", path("bad.csv"), "--out-dir", dir_.string()}), exit_input_error);
    EXPECT_NE(err_.str().find("row 3"), std::string::npos) << err_.str();
    spit(path("neg.csv"), "2000,1\n2001,-2\n2002,3\n");
    EXPECT_EQ(call({"fit", "--pub", path("neg.csv"), "--out-dir", dir_.string()}), exit_input_error);
    spit(path("short.csv"), "2000,1\n2001,2\n");
    EXPECT_EQ(call({"fit", "--pub", path("short.csv"), "--out-dir", dir_.string()}), exit_input_error);
}

TEST_F(CliTest, DegenerateFitExitCode) {
    spit(path("zero.csv"), "2000,0\n2001,0\n2002,0\n2003,0\n");
    EXPECT_EQ(call({"fit", "--pub", path("zero.csv"), "--out-dir", dir_.string()}), exit_fit_failure);
}

TEST_F(CliTest, ForecastFromParams) {
    ASSERT_EQ(call({"forecast", "--k", "1000", "--r", "0.4", "--t0", "2012", "--p", "0.5", "--tstar",
                    "5", "--from", "2012", "--horizon", "8", "--out", path("f.csv")}),
              exit_ok)
        << err_.str();
    const auto text = slurp(path("f.csv"));
    const auto last = text.substr(text.rfind("2020,"));
    const double ratio = std::stod(last.substr(last.rfind(',') + 1));
    EXPECT_NEAR(ratio, 0.15052707581828548, 1e-9);
    EXPECT_NE(out_.str().find("first below half of peak in 2017"), std::string::npos) << out_.str();

    ASSERT_EQ(call({"forecast", "--k", "1000", "--r", "0.4", "--t0", "2012", "--from", "2012",
                    "--horizon", "0", "--out", path("g.csv")}),
              exit_ok);
    EXPECT_EQ(slurp(path("g.csv")).substr(slurp(path("g.csv")).find('\n') + 1).find("2012,"), 0u);
    const auto g = slurp(path("g.csv"));
    EXPECT_EQ(std::count(g.begin(), g.end(), '\n'), 2);
    EXPECT_EQ(g.substr(g.rfind(',') + 1), "1\n");
}

TEST_F(CliTest, ForecastFromFixtureReport) {
    ASSERT_EQ(call({"fit", "--pub", data_dir + "/oled_publications.csv", "--pat",
                    data_dir + "/oled_patents.csv", "--out-dir", dir_.string()}),
              exit_ok);
    ASSERT_EQ(call({"forecast", "--report", path("hype.report.json"), "--out", path("f.csv")}),
              exit_ok)
        << err_.str();
    const auto out = out_.str();
    const auto pos = out.find("patent rate change over final year: ");
    ASSERT_NE(pos, std::string::npos) << out;
    const double pct = std::stod(out.substr(pos + 36));
    EXPECT_LT(std::abs(pct), 0.1);
    EXPECT_EQ(slurp(path("f.csv")).substr(0, 40).find("year,pub_rate"), 0u);
}

TEST_F(CliTest, CurveReferenceMatchesGolden) {
    ASSERT_EQ(call({"curve", "--pub-peak", "1", "--pat-plateau", "0.5", "--r", "1", "--t0", "8",
                    "--tstar", "4", "--from", "0", "--to", "30", "--out", path("c.csv"), "--summary",
                    path("s.json")}),
              exit_ok)
        << err_.str();
    EXPECT_EQ(slurp(path("c.csv")), slurp(data_dir + "/golden/reference_curve.csv"));
    const auto mine = nlohmann::json::parse(slurp(path("s.json")));
    const auto gold = nlohmann::json::parse(slurp(data_dir + "/golden/reference_summary.json"));
    EXPECT_EQ(mine.at("summary"), gold.at("summary"));
}

}  // namespace
}  // namespace hypecurve::cli
