#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using hermfactor::Json;

namespace {

const std::string samples = SAMPLES_DIR;

struct Outcome {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hermfactor");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = hermfactor::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return samples + "/" + name; }

class TempDir {
public:
    TempDir()
    {
        path_ = fs::temp_directory_path() / ("hermfactor-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

int verify_all(const fs::path& dir, int* count = nullptr)
{
    int bad = 0, n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        ++n;
        const Outcome r = run({"verify", e.path().string()});
        if (r.code != 0) {
            ++bad;
            ADD_FAILURE() << e.path() << ": " << r.out << r.err;
        }
    }
    if (count) *count = n;
    return bad;
}

}  // namespace

TEST(Check, IntroExampleStrictFails)
{
    const Outcome r = run({"check", sample("intro_example.txt"), "--mode", "strict", "--no-timings"});
    EXPECT_EQ(r.code, 1);
    const Json j = r.json();
    EXPECT_EQ(j["type"], "report");
    EXPECT_EQ(j["command"], "check");
    EXPECT_FALSE(j["verdict"]["passed"].get<bool>());
    EXPECT_FALSE(j.contains("timings"));
    EXPECT_EQ(j["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
}

TEST(Check, IntroExampleSemiPasses)
{
    const Outcome r = run({"check", sample("intro_example.txt"), "--mode", "semi"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.json().contains("timings"));
}

TEST(Check, ExpressionTextAndFormJson)
{
    EXPECT_EQ(run({"check", "z1^2*zb1^2 + z2^2*zb2^2", "--mode", "semi"}).code, 0);
    EXPECT_EQ(run({"check", sample("degenerate_symbol.json"), "--mode", "semi"}).code, 0);
    EXPECT_EQ(run({"check", sample("degenerate_symbol.json"), "--mode", "strict"}).code, 1);
    EXPECT_EQ(run({"check", sample("matrix_kernel.txt")}).code, 0);
}

TEST(Check, InputErrors)
{
    EXPECT_EQ(run({"check", "z1*zb1 +* z2"}).code, 2);
    EXPECT_EQ(run({"check", sample("mixed_degree.txt")}).code, 2);
    EXPECT_EQ(run({"check", "z1*zb2"}).code, 2);
    EXPECT_EQ(run({"check", "z1*zb1", "--mode", "loose"}).code, 2);
    EXPECT_EQ(run({"check"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    const Outcome bad = run({"check", "{\"type\": \"form\""});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("error:"), std::string::npos);
}

TEST(Stabilize, Examples)
{
    const Outcome fm1 = run({"stabilize", "z1^2*zb1^2 - z1*z2*zb1*zb2 + z2^2*zb2^2", "--dmax", "5", "--no-timings"});
    EXPECT_EQ(fm1.code, 0);
    EXPECT_EQ(fm1.json()["verdict"]["d_min"], 3);

    const Outcome ds = run({"stabilize", sample("difference_square.txt"), "--mode", "semi", "--dmax", "12"});
    EXPECT_EQ(ds.code, 3);
    EXPECT_TRUE(ds.json()["verdict"]["d_min"].is_null());
    EXPECT_EQ(ds.json()["verdict"]["trail"].size(), 13u);

    const Outcome f2 = run({"stabilize", "z1^2*zb1^2 + 2*z1*z2*zb1*zb2 + z2^2*zb2^2"});
    EXPECT_EQ(f2.code, 0);
    EXPECT_EQ(f2.json()["verdict"]["d_min"], 0);
}

TEST(Factor, Examples)
{
    const Outcome intro = run({"factor", sample("intro_example.txt"), "--no-timings"});
    ASSERT_EQ(intro.code, 0);
    const Json v = intro.json()["verdict"];
    EXPECT_EQ(v["rows"], 2);
    EXPECT_LT(v["numeric_reconstruction_error"].get<double>(), 1e-8);

    const Outcome strict = run({"factor", sample("intro_example.txt"), "--mode", "strict", "--d", "1"});
    ASSERT_EQ(strict.code, 0);
    EXPECT_EQ(strict.json()["verdict"]["rows"], 4);

    const Outcome none = run({"factor", sample("difference_square.txt")});
    EXPECT_EQ(none.code, 1);
    EXPECT_FALSE(none.json()["verdict"]["witness"].is_null());

    EXPECT_EQ(run({"factor", sample("intro_example.txt"), "--mode", "strict"}).code, 1);
}

TEST(Factor, NumericPrecisionFollowsDigits)
{
    const Outcome r = run({"factor", "z1*zb1*(1/3) + z2*zb2*(5/7)", "--float-digits", "30", "--no-timings"});
    ASSERT_EQ(r.code, 0);
    EXPECT_LT(r.json()["verdict"]["numeric_reconstruction_error"].get<double>(), 1e-25);
}

TEST(Decompose, ReconstructsDifferenceSquare)
{
    const Outcome r = run({"decompose", sample("difference_square.txt"), "--no-timings"});
    ASSERT_EQ(r.code, 0);
    const Json v = r.json()["verdict"];
    EXPECT_EQ(v["positive"].size(), 2u);
    EXPECT_EQ(v["negative"].size(), 1u);
    EXPECT_EQ(run({"decompose", sample("mixed_degree.txt")}).code, 0);
}

TEST(Sweep, FcFamily)
{
    const Outcome r = run({"sweep", sample("fc_family.txt"), "--dmax", "16"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], "label,d_min,matrix_size,elapsed_ms");
    EXPECT_EQ(lines[1].rfind("c=2,0,3,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("c=0,1,4,", 0), 0u);
    EXPECT_EQ(lines[3].rfind("c=-1,3,6,", 0), 0u);
    EXPECT_EQ(lines[4].rfind("c=-3/2,7,10,", 0), 0u);
    EXPECT_EQ(lines[5].rfind("c=-19/10,absent,", 0), 0u);
}

TEST(Sweep, EmptyFamilyGivesHeaderOnly)
{
    TempDir tmp;
    tmp.write("empty.txt", "# nothing here\n\n");
    const Outcome r = run({"sweep", tmp.file("empty.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "label,d_min,matrix_size,elapsed_ms\n");
}

TEST(Sweep, NonFactorableMemberIsAbsent)
{
    TempDir tmp;
    tmp.write("fam.txt", "square: (z1*zb1 - z2*zb2)^2\nintro: z1^2*zb1^2 + z2^2*zb2^2\n");
    const Outcome r = run({"sweep", tmp.file("fam.txt"), "--mode", "semi", "--dmax", "4", "--csv", tmp.file("out.csv"),
                       "-o", tmp.file("sweep.json"), "--no-timings"});
    EXPECT_EQ(r.code, 0);
    const std::string csv = slurp(tmp.file("out.csv"));
    EXPECT_NE(csv.find("\nsquare,absent,"), std::string::npos);
    EXPECT_NE(csv.find("\nintro,0,3,"), std::string::npos);
    const Json j = Json::parse(slurp(tmp.file("sweep.json")));
    EXPECT_EQ(j["command"], "sweep");
}

TEST(Sweep, ParallelMatchesSerial)
{
    TempDir tmp;
    const Outcome a = run({"sweep", sample("fc_family.txt"), "--dmax", "8", "-o", tmp.file("a.json"), "--no-timings"});
    const Outcome b = run({"sweep", sample("fc_family.txt"), "--dmax", "8", "-o", tmp.file("b.json"), "--no-timings",
                       "--parallel"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(slurp(tmp.file("a.json")), slurp(tmp.file("b.json")));
}

TEST(Symbol, Examples)
{
    const Outcome lap = run({"symbol", sample("laplacian.txt"), "--no-timings"});
    EXPECT_EQ(lap.code, 0);
    EXPECT_EQ(lap.json()["verdict"]["elliptic_certified"], 0);

    const Outcome f0 = run({"symbol", "z1^2*zb1^2 + z2^2*zb2^2"});
    EXPECT_EQ(f0.code, 0);
    EXPECT_EQ(f0.json()["verdict"]["elliptic_certified"], 1);
    EXPECT_EQ(f0.json()["verdict"]["operator_factor"].size(), 4u);

    const Outcome deg = run({"symbol", sample("degenerate_symbol.json")});
    EXPECT_EQ(deg.code, 1);
    EXPECT_TRUE(deg.json()["verdict"]["elliptic_certified"].is_null());

    EXPECT_EQ(run({"symbol", "z1*zb1 - 2*z2*zb2", "--dmax", "3"}).code, 3);
    EXPECT_EQ(run({"symbol", "x1^3 + x2^3"}).code, 2);
    EXPECT_EQ(run({"symbol", sample("bilaplacian.txt")}).code, 0);
}

TEST(Symbol, TextFormat)
{
    const Outcome r = run({"symbol", sample("laplacian.txt"), "--format", "text"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict: elliptic"), std::string::npos);
    EXPECT_NE(r.out.find("|∂z1|^2"), std::string::npos);
    EXPECT_NE(r.out.find("not checked"), std::string::npos);
}

TEST(Determinism, ReportsAreByteIdenticalWithoutTimings)
{
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"check", sample("difference_square.txt"), "--no-timings"},
          {"stabilize", sample("intro_example.txt"), "--no-timings"},
          {"factor", sample("intro_example.txt"), "--no-timings"},
          {"decompose", sample("mixed_degree.txt"), "--no-timings"},
          {"symbol", sample("quartic_symbol.txt"), "--no-timings"}}) {
        const Outcome a = run(args), b = run(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args[0];
    }
}

TEST(Verify, AcceptsEveryEmittedCertificate)
{
    TempDir tmp;
    const std::vector<std::vector<std::string>> cmds = {
        {"check", sample("intro_example.txt"), "--mode", "strict"},
        {"check", sample("matrix_kernel.txt")},
        {"stabilize", sample("intro_example.txt")},
        {"stabilize", sample("difference_square.txt"), "--mode", "semi", "--dmax", "6"},
        {"factor", sample("intro_example.txt")},
        {"factor", sample("difference_square.txt")},
        {"decompose", sample("difference_square.txt")},
        {"sweep", sample("fc_family.txt"), "--dmax", "8"},
        {"symbol", sample("laplacian.txt")},
        {"symbol", sample("quartic_symbol.txt")},
        {"symbol", sample("degenerate_symbol.json"), "--dmax", "4"},
    };
    for (auto args : cmds) {
        args.push_back("--cert-dir");
        args.push_back(tmp.path().string());
        args.push_back("-o");
        args.push_back(tmp.file(args[0] + "-" + std::to_string(fs::hash_value(args[1]) % 100000) + "-report.json"));
        const int code = run(args).code;
        EXPECT_TRUE(code == 0 || code == 1 || code == 3) << args[0] << " " << args[1];
    }
    int count = 0;
    EXPECT_EQ(verify_all(tmp.path(), &count), 0);
    EXPECT_GT(count, 30);
}

TEST(Verify, TamperedDiagonalEntryFails)
{
    TempDir tmp;
    ASSERT_EQ(run({"check", sample("intro_example.txt"), "--mode", "semi", "-o", tmp.file("r.json")}).code, 0);
    Json j = Json::parse(slurp(tmp.file("r.json")));
    EXPECT_EQ(run({"verify", tmp.file("r.json")}).code, 0);
    Json cert = j["certificates"][0];
    std::ofstream(tmp.file("cert.json")) << cert.dump();
    const Outcome ok = run({"verify", tmp.file("cert.json")});
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("OK"), std::string::npos);
    cert["D"][0] = "7/3";
    std::ofstream(tmp.file("bad.json")) << cert.dump();
    const Outcome bad = run({"verify", tmp.file("bad.json")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("FAILED"), std::string::npos);
}

TEST(Verify, TamperedFactorFails)
{
    TempDir tmp;
    ASSERT_EQ(run({"factor", sample("intro_example.txt"), "-o", tmp.file("r.json")}).code, 0);
    Json cert = Json::parse(slurp(tmp.file("r.json")))["certificates"][1];
    ASSERT_EQ(cert["type"], "factor_certificate");
    cert["factor"]["weights"][0] = "2";
    std::ofstream(tmp.file("bad.json")) << cert.dump();
    EXPECT_EQ(run({"verify", tmp.file("bad.json")}).code, 1);
}

TEST(Verify, WrongFileType)
{
    TempDir tmp;
    tmp.write("x.json", "{\"type\": \"holo_matrix\"}");
    tmp.write("y.txt", "not json at all");
    EXPECT_EQ(run({"verify", tmp.file("x.json")}).code, 2);
    EXPECT_EQ(run({"verify", tmp.file("y.txt")}).code, 2);
    EXPECT_EQ(run({"verify", tmp.file("missing.json")}).code, 2);
    EXPECT_EQ(run({"verify", sample("degenerate_symbol.json")}).code, 2);
}

TEST(Binary, ExitCodesFromProcess)
{
    const std::string bin = HERMFACTOR_BIN;
    auto status = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("check " + sample("intro_example.txt") + " --mode semi"), 0);
    EXPECT_EQ(status("check " + sample("intro_example.txt") + " --mode strict"), 1);
    EXPECT_EQ(status("check '1 +'"), 2);
    EXPECT_EQ(status("stabilize " + sample("difference_square.txt") + " --mode semi --dmax 3"), 3);
    EXPECT_EQ(status("--help"), 0);
}
