// Copyright 2026 The irisattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "iris/iris_template.hpp"
#include "iris/pgm.hpp"
#include "iris/spoofsim.hpp"
#include "test_util.hpp"

using namespace iris;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("irisattack_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string save_template(const std::string& name, const IrisTemplate& t) const {
        const auto bytes = serialize_template(t);
        write_file_bytes(dir_ / name, bytes);
        return path(name);
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, MatchIdenticalTemplates) {
    std::mt19937_64 rng(1);
    const auto a = save_template("a.tmpl", test::random_template(rng, 20, 240, 0.0));
    const auto r = run({"match", a, a});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(r.out, "hd=0.000000 shift=0 bits=9600\n");
}

TEST_F(Cli, MatchRecoversRotation) {
    std::mt19937_64 rng(2);
    const auto x = test::random_template(rng, 20, 240, 0.05);
    const auto y = x.rotated(3);
    // The oracle finds the shift that aligns y back onto x.
    int zero_shift = 99;
    for (int s = -8; s <= 8; ++s) {
        if (test::naive_hd(x, y, s).differing == 0) zero_shift = s;
    }
    const auto expected = test::naive_hd(x, y, zero_shift);
    const auto r = run({"match", save_template("x.tmpl", x), save_template("y.tmpl", y)});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(r.out, "hd=0.000000 shift=" + std::to_string(zero_shift) +
                         " bits=" + std::to_string(expected.effective) + "\n");
}

TEST_F(Cli, ConfigLayering) {
    std::mt19937_64 rng(3);
    const auto x = test::random_template(rng, 20, 240, 0.0);
    const auto a = save_template("x.tmpl", x);
    const auto b = save_template("y.tmpl", x.rotated(2));
    std::ofstream(dir_ / "cfg.ini") << "matching.shift_budget = 0\n";
    const auto from_file = run({"match", a, b, "-c", path("cfg.ini")});
    EXPECT_EQ(from_file.code, cli::kOk);
    EXPECT_EQ(from_file.out.rfind("hd=0.000000", 0), std::string::npos) << from_file.out;
    const auto overridden = run({"match", a, b, "-c", path("cfg.ini"), "--set", "matching.shift_budget=2"});
    EXPECT_EQ(overridden.code, cli::kOk);
    EXPECT_EQ(overridden.out.rfind("hd=0.000000 shift=-2", 0), 0u) << overridden.out;
}

TEST_F(Cli, SegmentBlankImageIsDomainError) {
    write_pgm_file(dir_ / "blank.pgm", GrayImage(200, 200, 128));
    const auto r = run({"segment", path("blank.pgm")});
    EXPECT_EQ(r.code, cli::kDomainError);
    EXPECT_EQ(r.err.rfind("error: segmentation failure", 0), 0u) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, SegmentSyntheticEye) {
    EyeParams p;
    p.iris_cx = 150;
    p.iris_cy = 135;
    p.pupil_cx = 152;
    p.pupil_cy = 136;
    write_pgm_file(dir_ / "eye.pgm", render_synthetic_eye(p));
    const auto r = run({"segment", path("eye.pgm"), "--overlay", path("overlay.pgm")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    std::istringstream in(r.out);
    std::string tag;
    double cx, cy, rad;
    in >> tag >> cx >> cy >> rad;
    EXPECT_EQ(tag, "iris");
    EXPECT_LE(std::hypot(cx - p.iris_cx, cy - p.iris_cy), 2.0);
    EXPECT_NEAR(rad, p.iris_r, 2.0);
    in >> tag >> cx >> cy >> rad;
    EXPECT_EQ(tag, "pupil");
    EXPECT_LE(std::hypot(cx - p.pupil_cx, cy - p.pupil_cy), 2.0);
    EXPECT_NE(r.out.find("upper_eyelid none\n"), std::string::npos) << r.out;
    const auto overlay = read_pgm_file(dir_ / "overlay.pgm");
    EXPECT_EQ(overlay.width(), p.width);
}

TEST_F(Cli, EncodeNormalizeAndSelfMatch) {
    write_pgm_file(dir_ / "eye.pgm", render_synthetic_eye(EyeParams{}));
    const auto e = run({"encode", path("eye.pgm"), "-o", path("eye.tmpl")});
    ASSERT_EQ(e.code, cli::kOk) << e.err;
    EXPECT_EQ(e.out.rfind("template 20x480 noise=", 0), 0u) << e.out;
    const auto t = deserialize_template(read_file_bytes(dir_ / "eye.tmpl"));
    EXPECT_EQ(t.rows(), 20);
    EXPECT_EQ(run({"match", path("eye.tmpl"), path("eye.tmpl")}).out.rfind("hd=0.000000 shift=0", 0), 0u);

    const auto n = run({"normalize", path("eye.pgm"), "-o", path("pattern.pgm"), "--mask", path("mask.pgm")});
    ASSERT_EQ(n.code, cli::kOk) << n.err;
    EXPECT_EQ(n.out.rfind("pattern 20x240 masked=", 0), 0u) << n.out;
    EXPECT_EQ(read_pgm_file(dir_ / "pattern.pgm").width(), 240);
    EXPECT_EQ(read_pgm_file(dir_ / "mask.pgm").height(), 20);
}

TEST_F(Cli, InvalidConfigIsUsageErrorAndWritesNothing) {
    write_pgm_file(dir_ / "eye.pgm", render_synthetic_eye(EyeParams{}));
    auto r = run({"encode", path("eye.pgm"), "-o", path("eye.tmpl"), "--set", "foo.bar=1"});
    EXPECT_EQ(r.code, cli::kUsageError);
    EXPECT_NE(r.err.find("foo.bar"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(dir_ / "eye.tmpl"));

    r = run({"encode", path("eye.pgm"), "-o", path("eye.tmpl"), "--set", "canny.sigma=-1"});
    EXPECT_EQ(r.code, cli::kUsageError);
    EXPECT_FALSE(fs::exists(dir_ / "eye.tmpl"));

    r = run({"synth", "-o", path("ds"), "-u", "1", "--preset", "bogus"});
    EXPECT_EQ(r.code, cli::kUsageError);
    EXPECT_FALSE(fs::exists(dir_ / "ds" / "manifest.csv"));
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::kUsageError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
    EXPECT_EQ(run({"match", "only-one"}).code, cli::kUsageError);
    EXPECT_EQ(run({"synth"}).code, cli::kUsageError);
    EXPECT_EQ(run({"preset-list", "-j", "0"}).code, cli::kUsageError);
    EXPECT_EQ(run({"match", path("missing.tmpl"), path("missing.tmpl")}).code, cli::kDomainError);
}

TEST_F(Cli, HelpOnEverySubcommand) {
    const auto top = run({"--help"});
    EXPECT_EQ(top.code, cli::kOk);
    for (const char* sub : {"synth", "segment", "normalize", "encode", "match", "eval", "preset-list"}) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
        const auto r = run({sub, "--help"});
        EXPECT_EQ(r.code, cli::kOk) << sub;
        EXPECT_NE(r.out.find("--config"), std::string::npos) << sub << "\n" << r.out;
    }
}

TEST_F(Cli, PresetList) {
    const auto r = run({"preset-list", "--config-keys"});
    ASSERT_EQ(r.code, cli::kOk);
    for (const auto& p : chain_presets()) EXPECT_NE(r.out.find("  " + p.name + " = "), std::string::npos);
    for (const auto& p : recapture_presets()) EXPECT_NE(r.out.find("  " + p.name + " = "), std::string::npos);
    EXPECT_NE(r.out.find("canny.eyelid_high = 0.3\n"), std::string::npos);
}

// Same seeds give byte-identical datasets, scores and reports regardless of
// the worker count.
TEST_F(Cli, SynthAndEvalDeterministic) {
    const std::vector<std::string> synth = {"-u", "1", "--images", "2", "-s", "5"};
    auto args = std::vector<std::string>{"synth", "-o", path("a")};
    args.insert(args.end(), synth.begin(), synth.end());
    const auto sa = run(args);
    ASSERT_EQ(sa.code, cli::kOk) << sa.err;
    EXPECT_NE(sa.out.find(": 8 real, 8 fake"), std::string::npos) << sa.out;
    args = {"synth", "-o", path("b"), "-j", "2"};
    args.insert(args.end(), synth.begin(), synth.end());
    ASSERT_EQ(run(args).code, cli::kOk);
    for (const auto& entry : fs::recursive_directory_iterator(dir_ / "a")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), dir_ / "a");
        EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / rel)) << rel;
    }

    const auto eval = [&](const std::string& tag, const std::string& jobs) {
        return run({"eval", path("a/manifest.csv"), "-j", jobs, "--scores", path(tag + ".csv"), "--report",
                    path(tag + ".json"), "--table", path(tag + ".txt")});
    };
    const auto e1 = eval("r1", "1");
    ASSERT_EQ(e1.code, cli::kOk) << e1.err;
    const auto e2 = eval("r2", "2");
    ASSERT_EQ(e2.code, cli::kOk) << e2.err;
    EXPECT_EQ(e1.out, e2.out);
    EXPECT_EQ(e1.out, slurp(dir_ / "r1.txt"));
    for (const char* ext : {".csv", ".json", ".txt"}) {
        EXPECT_EQ(slurp(dir_ / (std::string("r1") + ext)), slurp(dir_ / (std::string("r2") + ext))) << ext;
    }
    EXPECT_EQ(slurp(dir_ / "r1.csv").rfind("kind,subject_a,subject_b,hd,shift\n", 0), 0u);
}
