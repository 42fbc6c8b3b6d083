#include "lcev/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace lcev;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream is(row);
    for (std::string f; std::getline(is, f, ',');) out.push_back(f);
    return out;
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

} // namespace

// ---------------------------------------------------------------------------
// enumerate

TEST(Enumerate, TwoBetaTwo) {
    const auto r = invoke({"--two-beta", "2", "--r", "7/100", "--q", "3/100", "--alpha", "1/5", "--format", "csv", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], "class,n,lambda,pipeline,spatial");
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        EXPECT_EQ(f[3], "agree") << rows[i];
        if (f[0] == "1" && f[1] == "2") {
            EXPECT_EQ(f[2], "-2/25");
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Enumerate, TwoBetaOneListsTwoClasses) {
    const auto r = invoke({"--two-beta", "1", "--format", "csv", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::set<std::string> classes;
    const auto rows = lines(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) classes.insert(split(rows[i])[0]);
    EXPECT_EQ(classes, (std::set<std::string>{"2", "4"}));
    EXPECT_EQ(rows.size(), 9u);
}

TEST(Enumerate, NegativeTwoBeta) {
    const auto r = invoke({"--two-beta", "-3", "--format", "csv", "--count", "2", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 9u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        EXPECT_TRUE(f[1] == "0" || f[1] == "-3") << rows[i];
        EXPECT_EQ(f[3], "-");
    }
}

TEST(Enumerate, TwoBetaZeroPowerPair) {
    const auto r = invoke({"--two-beta", "0", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("(xi1 + zeta1)/(2 sigma^2)"), std::string::npos);
    EXPECT_NE(r.out.find("(xi1 - zeta1)/(2 sigma^2)"), std::string::npos);
    const auto csv = invoke({"--two-beta", "0", "--format", "csv", "enumerate"});
    const auto rows = lines(csv.out);
    ASSERT_EQ(rows.size(), 3u);
    // lambda = 0: exponents 1 and -2(r-q)/sigma^2 = -2
    EXPECT_EQ(split(rows[1])[3], "1");
    EXPECT_EQ(split(rows[2])[3], "-2");
}

TEST(Enumerate, JsonEnvelope) {
    const auto r = invoke({"--two-beta", "3", "--format", "json", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["version"], cli::kVersion);
    EXPECT_EQ(j["command"], "enumerate");
    EXPECT_EQ(j["params"]["twoBeta"], 3);
    EXPECT_EQ(j["results"].size(), 16u);
}

// ---------------------------------------------------------------------------
// eval

TEST(Eval, FirstClassIsS) {
    const auto r = invoke({"--two-beta", "4", "--class", "1", "--n", "0", "--s-min", "3", "--s-max", "3", "--s-count", "1",
                           "--t-min", "5", "--t-max", "5", "--t-count", "1", "eval"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "S,t,V");
    const auto f = split(rows[1]);
    PrecisionScope scope(50);
    EXPECT_EQ(Real(f[0]), Real(3));
    EXPECT_EQ(Real(f[1]), Real(5));
    EXPECT_EQ(Real(f[2]), Real(3));
}

TEST(Eval, SecondClassGrowsWithTheDrift) {
    const auto r = invoke({"--two-beta", "2", "--class", "2", "--n", "0", "--s-min", "1", "--s-max", "1", "--s-count", "1",
                           "--t-min", "1", "--t-max", "1", "--t-count", "1", "--precision", "30", "eval"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto f = split(lines(r.out).at(1));
    PrecisionScope scope(60);
    const Real expect = exp(Real(1) / 25);
    EXPECT_LT(abs(Real(f[2]) - expect), Real("1e-28"));
    EXPECT_EQ(f[2].substr(0, 12), "1.0408107741");
}

TEST(Eval, EmptyGridIsHeaderOnly) {
    const auto r = invoke({"--two-beta", "2", "--class", "1", "--s-count", "0", "eval"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "S,t,V\n");
}

TEST(Eval, SuperpositionColumns) {
    const auto r = invoke({"--two-beta", "2", "--class", "1", "--class", "2", "--n", "0", "--coeff", "2", "--coeff", "3",
                           "--s-min", "1", "--s-max", "1", "--s-count", "1", "--t-min", "0", "--t-max", "0", "--t-count",
                           "1", "eval"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "S,t,V,term1,term2");
    const auto f = split(rows[1]);
    PrecisionScope scope(50);
    EXPECT_EQ(Real(f[2]), Real(5));
    EXPECT_EQ(Real(f[3]), Real(2));
    EXPECT_EQ(Real(f[4]), Real(3));
}

TEST(Eval, ExitCodes) {
    EXPECT_EQ(invoke({"--two-beta", "2", "--class", "1", "--n", "1", "eval"}).code, 3);
    EXPECT_EQ(invoke({"--two-beta", "1", "--class", "1", "--n", "1", "eval"}).code, 3);
    EXPECT_EQ(invoke({"--two-beta", "2", "--class", "1", "--s-min", "0", "eval"}).code, 4);
    EXPECT_EQ(invoke({"--two-beta", "2", "--class", "1", "--s-min", "-1", "eval"}).code, 4);
    EXPECT_EQ(invoke({"--two-beta", "2", "eval"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--class", "1", "--coeff", "1", "--coeff", "2", "eval"}).code, 2);
}

// ---------------------------------------------------------------------------
// describe

TEST(Describe, FirstClassAtZero) {
    const auto r = invoke({"--two-beta", "2", "--class", "1", "--n", "0", "describe"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const auto& s = j["results"][0]["spatial"];
    EXPECT_EQ(s["expCoeff"], "0");
    ASSERT_EQ(s["terms"].size(), 1u);
    EXPECT_EQ(s["terms"][0]["exponent"], 1);
    EXPECT_EQ(s["terms"][0]["coeff"], "1");
}

TEST(Describe, RoundTripsThroughParse) {
    std::mt19937 rng(7);
    const std::vector<int> tbs = {-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6};
    std::uniform_int_distribution<std::size_t> pick_tb(0, tbs.size() - 1);
    std::uniform_int_distribution<int> pick_j(0, 3);
    for (int k = 0; k < 20; ++k) {
        const int tb = tbs[pick_tb(rng)];
        const auto cls = cev::availability(tb).classes;
        std::uniform_int_distribution<std::size_t> pick_c(0, cls.size() - 1);
        const int c = *std::next(cls.begin(), static_cast<long>(pick_c(rng)));
        const int n = tb * pick_j(rng);
        const auto r = invoke({"--two-beta", std::to_string(tb), "--class", std::to_string(c), "--n", std::to_string(n),
                               "describe"});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto j = descriptor::Json::parse(r.out);
        const std::string first = j["results"][0].dump(2);
        EXPECT_EQ(descriptor::dump(descriptor::parse(first)), first);
    }
}

TEST(Describe, TextFormat) {
    const auto r = invoke({"--two-beta", "2", "--class", "3", "--n", "2", "--format", "text", "describe"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("S3,2: lambda = ", 0), 0u);
}

TEST(Describe, Beta0) {
    const auto r = invoke({"--two-beta", "0", "--class", "beta0", "--n", "-1", "--lambda", "-1/40", "describe"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["results"][0]["class"], "beta0");
    EXPECT_EQ(j["results"][0]["spatial"]["power"], "-3/2");
}

// ---------------------------------------------------------------------------
// verify

TEST(Verify, SingleTwoBetaPasses) {
    const auto r = invoke({"--two-beta", "3", "verify"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const auto ls = lines(r.out);
    ASSERT_FALSE(ls.empty());
    EXPECT_EQ(ls.back(), "16 checked, 0 failed");
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) EXPECT_EQ(ls[i].rfind("PASS", 0), 0u) << ls[i];
}

TEST(Verify, DefaultGridPasses) {
    const auto r = invoke({"--count", "3", "verify"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find(" 0 failed"), std::string::npos);
    // the oracle ran on one sampled entry per 2beta
    std::size_t sampled = 0;
    for (const auto& l : lines(r.out))
        if (l.find("oracle=") != std::string::npos && l.find("oracle=-") == std::string::npos) ++sampled;
    EXPECT_EQ(sampled, cli::default_grid().size());
}

TEST(Verify, MutationFailsWithThePinpointedTerm) {
    const auto r = invoke({"--two-beta", "3", "--class", "1", "--n", "3", "--mutate", "--no-oracle", "verify"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("FAIL", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("mutated body coefficient of S^"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("residual: "), std::string::npos);
}

TEST(Verify, BetaZeroPerfectSquare) {
    const auto r = invoke({"--two-beta", "0", "--lambda", "-1/40", "verify"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("2 checked, 0 failed"), std::string::npos);
    EXPECT_EQ(invoke({"--two-beta", "0", "--lambda", "1/100", "verify"}).code, 3);
    EXPECT_EQ(invoke({"--two-beta", "0", "--lambda", "-1", "verify"}).code, 4);
}

TEST(Verify, FromStdin) {
    const auto d = invoke({"--two-beta", "4", "--class", "2", "--class", "3", "--n", "4", "describe"});
    ASSERT_EQ(d.code, 0);
    const auto r = invoke({"--stdin", "--format", "json", "verify"}, d.out);
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["results"].size(), 2u);
    for (const auto& e : j["results"]) {
        EXPECT_TRUE(e["certificate"]["isZero"].get<bool>());
        EXPECT_TRUE(e["passed"].get<bool>());
    }
}

TEST(Verify, MalformedStdin) {
    for (const std::string bad : {"{not json", "{}", R"({"twoBeta": 2})", "[1, 2]"}) {
        const auto r = invoke({"--stdin", "verify"}, bad);
        EXPECT_EQ(r.code, 2) << bad;
        EXPECT_NE(r.err.find("descriptor"), std::string::npos) << r.err;
    }
}

TEST(Verify, CsvAndJson) {
    const auto csv = invoke({"--two-beta", "2", "--no-oracle", "--count", "1", "--format", "csv", "verify"});
    ASSERT_EQ(csv.code, 0);
    const auto rows = lines(csv.out);
    EXPECT_EQ(rows[0], "label,twoBeta,lambda,residual,numeric,oracle,status");
    EXPECT_EQ(rows.size(), 5u);
    const auto json = invoke({"--two-beta", "2", "--no-oracle", "--count", "1", "--format", "json", "verify"});
    ASSERT_EQ(json.code, 0);
    const auto j = nlohmann::json::parse(json.out);
    EXPECT_EQ(j["command"], "verify");
    EXPECT_EQ(j["results"].size(), 4u);
}

TEST(Verify, LowPrecisionRejected) {
    EXPECT_EQ(invoke({"--two-beta", "2", "--precision", "20", "verify"}).code, 2);
}

// ---------------------------------------------------------------------------
// parsing and plumbing

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"--bogus", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "two", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--alpha", "0", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--alpha", "-1/5", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--r", "1/0", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--r", "sqrt(2)", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--lambda", "1", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--format", "xml", "enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--class", "7", "describe"}).code, 2);
    EXPECT_EQ(invoke({"enumerate"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--oracle-tol", "abc", "verify"}).code, 2);
    EXPECT_EQ(invoke({"--two-beta", "2", "--oracle-tol", "-1", "verify"}).code, 2);
}

TEST(Cli, HelpAndVersion) {
    const auto h = invoke({"--help"});
    EXPECT_EQ(h.code, 0);
    EXPECT_NE(h.out.find("--two-beta"), std::string::npos);
    const auto v = invoke({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find(cli::kVersion), std::string::npos);
}

TEST(Cli, NegativeOptionValues) {
    const auto r = invoke({"--two-beta", "-2", "--class", "1", "--n", "-2", "describe"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["results"][0]["n"], -2);
}

TEST(Cli, DecimalInputsAreExact) {
    const auto a = invoke({"--two-beta", "2", "--r", "0.07", "--q", "0.03", "--alpha", "0.2", "--class", "1", "--n", "2", "describe"});
    const auto b = invoke({"--two-beta", "2", "--class", "1", "--n", "2", "describe"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(nlohmann::json::parse(a.out)["params"]["r"], "7/100");
    const auto c = invoke({"--two-beta", "2", "--r", "7e-2", "--q", "3E-2", "--class", "1", "--n", "2", "describe"});
    EXPECT_EQ(c.out, b.out);
}

TEST(Cli, Deterministic) {
    const std::vector<std::string> args = {"--two-beta", "5", "--count", "2", "verify"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const std::vector<std::string> ev = {"--two-beta", "-4", "--class", "3", "--n", "-8", "eval"};
    EXPECT_EQ(invoke(ev).out, invoke(ev).out);
}

TEST(Cli, ConfigFileWithOverride) {
    const auto path = temp_path("lcev_test_config.toml");
    {
        std::ofstream f(path);
        f << "two-beta = 2\nr = \"1/10\"\nq = \"1/20\"\nalpha = \"1/4\"\nclass = [\"1\"]\nn = [2]\n";
    }
    const auto r = invoke({"--config", path.string(), "describe"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["params"]["r"], "1/10");
    EXPECT_EQ(j["params"]["alpha"], "1/4");
    EXPECT_EQ(j["results"][0]["n"], 2);

    const auto o = invoke({"--config", path.string(), "--r", "3/20", "describe"});
    ASSERT_EQ(o.code, 0) << o.err;
    j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j["params"]["r"], "3/20");
    std::filesystem::remove(path);
}

TEST(Cli, OutFile) {
    const auto path = temp_path("lcev_test_out.csv");
    const auto r = invoke({"--two-beta", "2", "--class", "1", "--out", path.string(), "eval"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "S,t,V");
    std::filesystem::remove(path);
}

TEST(Cli, ExitCodeTable) {
    EXPECT_EQ(cli::exit_code(ErrorCode::ParseError), 2);
    EXPECT_EQ(cli::exit_code(ErrorCode::ParamMismatch), 2);
    EXPECT_EQ(cli::exit_code(ErrorCode::Unavailable), 3);
    EXPECT_EQ(cli::exit_code(ErrorCode::PochhammerZero), 3);
    EXPECT_EQ(cli::exit_code(ErrorCode::DomainError), 4);
    EXPECT_EQ(cli::exit_code(ErrorCode::VerificationFailed), 1);
}
