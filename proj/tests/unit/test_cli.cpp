// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace
{

const std::string kCli = LLMPERF_CLI;
const std::string kPlans = LLMPERF_PLANS_DIR;

struct Result
{
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result run(const std::string &args)
{
    Result r;
    FILE *p = popen((kCli + " " + args + " 2>&1").c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// Stdout only.
Result run_quiet(const std::string &args) { return run(args + " 2>/dev/null"); }

class Cli : public ::testing::Test
{
   protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("llmperf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &text)
    {
        fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, MalformedJsonExitsTwoWithPosition)
{
    std::string f = write("bad.json", "{\n  \"system\": \"scd-blade\",\n  \"model\": }\n");
    Result r = run("run " + f);
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_NE(r.out.find("bad.json:3:"), std::string::npos) << r.out;
}

TEST_F(Cli, UnknownFlagExitsTwo)
{
    EXPECT_EQ(run("run --bogus").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, DeviceCountMismatchExitsThree)
{
    std::string f = write("s.json", R"({"system": "scd-blade", "model": "gpt3-18b",
        "workload": {"phase": "training", "batch": 64, "seq_len": 2048, "microbatches": 8},
        "mapping": {"tp": 8, "pp": 4, "dp": 1}})");
    Result r = run("run " + f);
    EXPECT_EQ(r.code, 3) << r.out;
    EXPECT_NE(r.out.find("mapping"), std::string::npos) << r.out;

    r = run("validate " + f);
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(run("validate " + f + " --set mapping.pp=8").code, 0);
}

TEST_F(Cli, RerunsAreByteIdentical)
{
    const std::string scenario = kPlans + "/scenarios/infer_bandwidth_base.json";
    Result a = run_quiet("run " + scenario);
    Result b = run_quiet("run " + scenario);
    ASSERT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
    auto doc = nlohmann::json::parse(a.out);
    EXPECT_TRUE(doc.contains("report"));

    Result c = run_quiet("sweep " + kPlans + "/infer_dram_latency.json");
    Result d = run_quiet("sweep " + kPlans + "/infer_dram_latency.json");
    ASSERT_EQ(c.code, 0) << c.out;
    EXPECT_EQ(c.out, d.out);
}

TEST_F(Cli, RunWithFlagsAndCsv)
{
    std::string wl = kPlans + "/workloads/infer_b8_200_200.json";
    std::string mp = kPlans + "/mappings/tp64.json";
    Result r = run_quiet("run --system scd-blade --model llama-70b --workload " + wl + " --mapping " + mp +
                         " --format csv");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind("scenario,", 0), 0u) << r.out;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST_F(Cli, OutDirectoryReceivesFiles)
{
    Result r = run("sweep " + kPlans + "/infer_dram_latency.json --out " + dir_.string());
    ASSERT_EQ(r.code, 0) << r.out;
    bool any_csv = false;
    for (const auto &e : fs::directory_iterator(dir_))
        any_csv = any_csv || e.path().extension() == ".csv";
    EXPECT_TRUE(any_csv);
}

TEST_F(Cli, DumpPresetRoundTrips)
{
    Result r = run_quiet("dump-preset h100-node");
    ASSERT_EQ(r.code, 0) << r.out;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["device"]["peak_flops_by_precision"]["bf16"].get<double>(), 0.9895e15);

    std::string f = write("h100.json", r.out);
    EXPECT_EQ(run("validate " + f).code, 0);
    const std::string args = " --model llama-70b --workload " + kPlans + "/workloads/infer_b8_200_200.json" +
                             " --mapping " + kPlans + "/mappings/tp64.json --format csv";
    Result by_name = run_quiet("run --system h100-node" + args);
    Result by_file = run_quiet("run --system " + f + args);
    ASSERT_EQ(by_name.code, 0) << by_name.out;
    EXPECT_EQ(by_name.out, by_file.out);

    EXPECT_EQ(run_quiet("dump-preset gpt3-76b").code, 0);
    Result bad = run("dump-preset tpu-pod");
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.out.find("scd-blade"), std::string::npos);
}

TEST_F(Cli, ComparePlanAndKvFit)
{
    Result r = run_quiet("compare " + kPlans + "/train_speedup.json --model gpt3-18b");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("speedup"), std::string::npos);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);

    r = run_quiet("kv-fit " + kPlans + "/kv_fit.json --format json");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(nlohmann::json::accept(r.out));
}

TEST_F(Cli, ValidatePlans)
{
    for (const char *plan : {"train_dram_bandwidth.json", "train_speedup.json", "infer_dram_bandwidth.json", "infer_speedup.json", "kv_fit.json"})
    {
        Result r = run(std::string("validate ") + kPlans + "/" + plan);
        EXPECT_EQ(r.code, 0) << plan << ": " << r.out;
    }
}
