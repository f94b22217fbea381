#include <gtest/gtest.h>

#include <cstdio>
#include <sys/wait.h>

#include "test_support.hpp"

using namespace pkoszul;

namespace {

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome run_on(RunConfig cfg, const std::string& input) {
    std::ostringstream out, err;
    Outcome o;
    o.code = run(cfg, input, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

RunConfig json_cmd(const std::string& command) {
    RunConfig c;
    c.command = command;
    c.format = OutputFormat::json;
    return c;
}

nlohmann::json parsed(const Outcome& o) {
    EXPECT_EQ(o.code, 0) << o.err;
    return nlohmann::json::parse(o.out);
}

}  // namespace

TEST(Cli, ClassifyWorkedExample) {
    auto j = parsed(run_on(json_cmd("classify"), pktest::algebra_text("worked_example.pk")));
    EXPECT_EQ(j["verdict"], "PK");
    EXPECT_EQ(j["p"], 3);
    EXPECT_EQ(j["d"], 4);
    EXPECT_EQ(j["termination_degree"], 4);
    EXPECT_EQ(j["fitting_pairs"], nlohmann::json::parse("[[3,4]]"));
    EXPECT_GE(j["certified_to"].get<int>(), 6);
}

TEST(Cli, ClassifyCommutingLoops) {
    auto j = parsed(run_on(json_cmd("classify"), pktest::algebra_text("commuting_loops.pk")));
    EXPECT_EQ(j["verdict"], "Koszul");
    EXPECT_EQ(j["termination_degree"], 3);
}

TEST(Cli, ClassificationKeysAreStable) {
    auto j = nlohmann::ordered_json::parse(run_on(json_cmd("classify"), pktest::algebra_text("x3.pk")).out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    std::vector<std::string> head(keys.begin(), keys.begin() + 6);
    EXPECT_EQ(head, (std::vector<std::string>{"verdict", "p", "d", "certified_to", "fitting_pairs", "termination_degree"}));
    EXPECT_EQ(j["verdict"], "dKoszul");
    EXPECT_EQ(j["d"], 3);
    EXPECT_TRUE(j["termination_degree"].is_null());
}

TEST(Cli, AritiesOnPk36Input) {
    // the path quiver resolves in rows 0 and 1 only, so every (p, d) fits, (3, 6) included
    auto cfg = json_cmd("arities");
    cfg.arg1 = 9;
    cfg.pd = DeltaFunction(3, 6);
    auto text = pktest::algebra_text("path_a3.pk");
    auto c = parsed(run_on(json_cmd("classify"), text));
    EXPECT_NE(std::find(c["fitting_pairs"].begin(), c["fitting_pairs"].end(), nlohmann::json::parse("[3,6]")),
              c["fitting_pairs"].end());
    auto j = parsed(run_on(cfg, text));
    EXPECT_EQ(j["closed_form"], nlohmann::json::parse("[2,5,8]"));
    // Ext^2 = 0, so no product of positive classes can land anywhere
    EXPECT_EQ(j["support"], nlohmann::json::array());
    EXPECT_EQ(j["consistent"], true);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    for (auto cmd : {"resolve", "classify", "ext", "generation", "ek", "reduced2l"}) {
        auto cfg = json_cmd(cmd);
        cfg.arg1 = std::string(cmd) == "reduced2l" ? 3 : 1;
        auto text = pktest::algebra_text("worked_example.pk");
        auto a = run_on(cfg, text), b = run_on(cfg, text);
        EXPECT_EQ(a.code, 0) << cmd << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << cmd;
        EXPECT_FALSE(a.out.empty()) << cmd;
    }
}

TEST(Cli, ExitCodes) {
    auto text = pktest::algebra_text("worked_example.pk");
    auto y = json_cmd("yoneda");
    y.arg1 = 1;
    y.arg2 = 2;
    y.max_hdeg = 2;
    auto refused = run_on(y, text);
    EXPECT_EQ(refused.code, 1);
    EXPECT_NE(refused.err.find("refused"), std::string::npos);

    auto bad = run_on(json_cmd("classify"), "vertices 1 2\narrow a1 : 1 -> 2\nrelation a1*a9\n");
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("line 3"), std::string::npos);
    EXPECT_NE(bad.err.find("a9"), std::string::npos);

    EXPECT_EQ(run_on(json_cmd("frobnicate"), text).code, 2);
    auto c = json_cmd("classify");
    c.max_ideg = 1;
    EXPECT_EQ(run_on(c, text).code, 2);
    c = json_cmd("classify");
    c.characteristic = 7;  // the file declares 32003
    EXPECT_EQ(run_on(c, text).code, 2);
}

TEST(Cli, ModuleClassifyNeedsAPiecewiseKoszulAlgebra) {
    auto cfg = json_cmd("module-classify");
    cfg.max_hdeg = 3;
    cfg.max_ideg = 4;
    auto o = run_on(cfg, "vertices 1\narrow x : 1 -> 1\narrow y : 1 -> 1\nrelation x*x\nrelation y*y*y\n");
    EXPECT_EQ(o.code, 1);
}

TEST(Cli, ModuleClassifyBuiltInModules) {
    auto text = pktest::algebra_text("worked_example.pk");
    auto cfg = json_cmd("module-classify");
    cfg.module = "trivial";
    auto j = parsed(run_on(cfg, text));
    EXPECT_EQ(j["classification"]["piecewise_koszul"], true);
    EXPECT_EQ(j["classification"]["s"], 0);
    EXPECT_EQ(j["generated_in_degree_zero"], true);
    cfg.module = "syzygy:3";
    j = parsed(run_on(cfg, text));
    EXPECT_EQ(j["classification"]["s"], 4);
    cfg.module = "radical";  // J = Omega^1(A_0) has row 2 in degree 4
    j = parsed(run_on(cfg, text));
    EXPECT_EQ(j["classification"]["piecewise_koszul"], false);
    EXPECT_EQ(j["generated_in_degree_zero"], false);
    cfg.module = "regular";
    j = parsed(run_on(cfg, text));
    EXPECT_EQ(j["classification"]["piecewise_koszul"], true);
    cfg.module = "nonsense";
    EXPECT_EQ(run_on(cfg, text).code, 2);
}

TEST(Cli, EkOutputReingests) {
    auto cfg = json_cmd("ek");
    cfg.arg1 = 1;
    auto o = run_on(cfg, pktest::algebra_text("worked_example.pk"));
    ASSERT_EQ(o.code, 0) << o.err;
    auto again = parsed(run_on(json_cmd("classify"), o.out));
    EXPECT_EQ(again["verdict"], "Koszul");
}

TEST(Cli, TableOutput) {
    RunConfig cfg;
    cfg.command = "resolve";
    auto o = run_on(cfg, pktest::algebra_text("worked_example.pk"));
    ASSERT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("4x1@5"), std::string::npos);
    EXPECT_NE(o.out.find("P_4 = 0"), std::string::npos);
}

TEST(Cli, BinaryPrintsSchemaAndClassifies) {
    const std::string cli = PK_CLI_PATH;
    auto capture = [](const std::string& cmd, int& status) {
        std::string out;
        FILE* f = popen(cmd.c_str(), "r");
        if (!f) return out;
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
        status = WEXITSTATUS(pclose(f));
        return out;
    };
    int status = -1;
    auto schema = capture(cli + " --schema", status);
    EXPECT_EQ(status, 0);
    EXPECT_NE(schema.find("relation"), std::string::npos);
    auto out = capture(cli + " --format json classify " + std::string(PK_ALGEBRAS_DIR) + "/worked_example.pk", status);
    EXPECT_EQ(status, 0);
    EXPECT_EQ(nlohmann::json::parse(out)["verdict"], "PK");
    capture(cli + " classify /nonexistent/file.pk 2>/dev/null", status);
    EXPECT_EQ(status, 2);
}
