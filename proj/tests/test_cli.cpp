/*
 * Copyright 2026 The ventriq authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// End-to-end checks of the ventriq binary: every subcommand, the exit-code
// contract (0 ok, 1 domain, 2 usage, 3 I/O), and flag/config layering.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "ventriq/stackio.hpp"
#include "ventriq/volgrid.hpp"

using namespace ventriq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() /
               ("ventriq-cli-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
    int code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + VENTRIQ_CLI_PATH + "\" " + args + " 2>&1";
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.code = WEXITSTATUS(status);
    return result;
}

nlohmann::json load_json(const fs::path& path) {
    return nlohmann::json::parse(read_text_file(path));
}

/// Writes a series whose metric curves are flat, to trip the degenerate-cycle
/// guard through the binary.
std::string write_constant_series(const TempDir& tmp) {
    const Dims d{3, 4, 4};
    const Spacing s{0.5, 0.5, 1.5};
    std::vector<std::uint8_t> v(d.count(), 0);
    for (int y = 1; y < 3; ++y)
        for (int x = 1; x < 3; ++x) v[voxel_index(d, 1, y, x)] = 1;
    std::vector<Phase> phases;
    for (int t = 0; t < 4; ++t) {
        phases.push_back(Phase{t, BinaryMask(d, s, v), std::nullopt});
    }
    const fs::path dir = tmp.path / "flat";
    return write_stack_series(StackSeries(std::move(phases)), dir).string();
}

}  // namespace

TEST_CASE("cli: phantom then analyze recovers the ground-truth EF exactly") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    const CliResult ph =
        run_cli("phantom --out " + data + " --phases 13 --ef 55 --ved 500 --seed 3");
    CHECK(ph.code == 0);
    CHECK(ph.output.find("wrote") != std::string::npos);
    REQUIRE(fs::exists(fs::path(data) / "manifest.json"));
    REQUIRE(fs::exists(fs::path(data) / "ground_truth.json"));

    const std::string report = tmp.sub("ef.json");
    const CliResult an = run_cli("analyze --stacks " + data + "/manifest.json --out " + report +
                                 " --metric volume --fit gp");
    REQUIRE(an.code == 0);

    const nlohmann::json truth = load_json(fs::path(data) / "ground_truth.json");
    const nlohmann::json ef = load_json(report);
    CHECK(ef.at("ef_percent").get<double>() == truth.at("ef_percent").get<double>());
    CHECK(ef.at("ed_phase").get<int>() == truth.at("ed_phase").get<int>());
    CHECK(ef.at("es_phase").get<int>() == truth.at("es_phase").get<int>());
    CHECK(ef.at("v_ed_mm3").get<double>() == truth.at("v_ed_mm3").get<double>());
    CHECK(ef.at("metric").get<std::string>() == "volume");
    CHECK(ef.at("method").get<std::string>() == "gp");
    CHECK(ef.at("selection").at("mode").get<std::string>() == "snap");
}

TEST_CASE("cli: analyze default metric reports the mid-slice index and --curve writes CSV") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --seed 5").code == 0);

    const std::string report = tmp.sub("ef.json");
    const std::string curve = tmp.sub("curve.csv");
    const CliResult an = run_cli("analyze --stacks " + data + "/manifest.json --out " + report +
                                 " --curve " + curve);
    REQUIRE(an.code == 0);

    const nlohmann::json ef = load_json(report);
    CHECK(ef.at("metric").get<std::string>() == "slice-area");
    CHECK(ef.at("selection").contains("mid_slice_index"));

    const std::string csv = read_text_file(curve);
    CHECK(csv.rfind("kind,x,y\n", 0) == 0);
    std::size_t observed = 0, fitted = 0, pos = 0;
    while ((pos = csv.find("\nobserved,", pos)) != std::string::npos) ++observed, ++pos;
    pos = 0;
    while ((pos = csv.find("\nfitted,", pos)) != std::string::npos) ++fitted, ++pos;
    CHECK(observed == 13);
    CHECK(csv.find("observed,0,") != std::string::npos);
    CHECK(fitted >= 64);
}

TEST_CASE("cli: --interpolated is reflected in the report") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --seed 6").code == 0);
    const std::string report = tmp.sub("ef.json");
    const CliResult an = run_cli("analyze --stacks " + data + "/manifest.json --out " + report +
                                 " --metric volume --interpolated");
    REQUIRE(an.code == 0);
    const nlohmann::json ef = load_json(report);
    CHECK(ef.at("selection").at("mode").get<std::string>() == "interpolated");
    CHECK(ef.at("ef_percent").get<double>() > 0.0);
}

TEST_CASE("cli: config file sets options and explicit flags override it") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --seed 7").code == 0);

    const std::string cfg = tmp.sub("config.json");
    write_text_file(cfg, "{\"metric\": \"volume\", \"fit\": \"poly4\"}\n");

    const std::string report = tmp.sub("ef.json");
    REQUIRE(run_cli("analyze --stacks " + data + "/manifest.json --out " + report + " --config " +
                    cfg)
                .code == 0);
    nlohmann::json ef = load_json(report);
    CHECK(ef.at("metric").get<std::string>() == "volume");
    CHECK(ef.at("method").get<std::string>() == "poly4");

    REQUIRE(run_cli("analyze --stacks " + data + "/manifest.json --out " + report + " --config " +
                    cfg + " --fit gp")
                .code == 0);
    ef = load_json(report);
    CHECK(ef.at("metric").get<std::string>() == "volume");
    CHECK(ef.at("method").get<std::string>() == "gp");
}

TEST_CASE("cli: metrics on identical series reports perfect overlap") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --phases 11 --seed 8").code == 0);
    const std::string report = tmp.sub("metrics.json");
    const CliResult m = run_cli("metrics --pred " + data + "/manifest.json --ref " + data +
                                "/manifest.json --out " + report);
    REQUIRE(m.code == 0);
    const nlohmann::json j = load_json(report);
    CHECK(j.at("n_phases").get<int>() == 11);
    CHECK(j.at("mean_dice").get<double>() == 1.0);
    CHECK(j.at("phases").size() == 11);
    CHECK(j.at("phases")[0].at("dice").get<double>() == 1.0);
    CHECK(j.at("phases")[0].at("hausdorff_mm").get<double>() == 0.0);
}

TEST_CASE("cli: noise corrupts intensities, keeps masks, and is seed-stable") {
    TempDir tmp;
    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --phases 5 --seed 9").code == 0);

    const std::string out_a = tmp.sub("noisy_a");
    const std::string out_b = tmp.sub("noisy_b");
    const std::string args = " --model rician --snr 15 --seed 4";
    REQUIRE(run_cli("noise --stacks " + data + "/manifest.json --out " + out_a + args).code == 0);
    REQUIRE(run_cli("noise --stacks " + data + "/manifest.json --out " + out_b + args).code == 0);
    REQUIRE(fs::exists(fs::path(out_a) / "noise_meta.json"));

    const StackSeries clean = read_stack_series(data + "/manifest.json");
    const StackSeries noisy = read_stack_series(out_a + "/manifest.json");
    REQUIRE(noisy.size() == clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const auto& nm = noisy.phases()[i].mask.voxels();
        const auto& cm = clean.phases()[i].mask.voxels();
        CHECK(std::vector<std::uint8_t>(nm.begin(), nm.end()) ==
              std::vector<std::uint8_t>(cm.begin(), cm.end()));
        REQUIRE(noisy.phases()[i].intensity.has_value());
        const auto ni = noisy.phases()[i].intensity->voxels();
        const auto ci = clean.phases()[i].intensity->voxels();
        REQUIRE(ni.size() == ci.size());
        std::size_t differing = 0;
        for (std::size_t k = 0; k < ni.size(); ++k)
            if (ni[k] != ci[k]) ++differing;
        CHECK(differing > ni.size() / 2);
    }
    // Same seed, same bytes.
    CHECK(read_text_file(fs::path(out_a) / "int_000.raw") ==
          read_text_file(fs::path(out_b) / "int_000.raw"));
    const nlohmann::json meta = load_json(fs::path(out_a) / "noise_meta.json");
    CHECK(meta.at("model").get<std::string>() == "rician");
    CHECK(meta.at("snr").get<double>() == 15.0);
}

TEST_CASE("cli: agree reports Bland-Altman statistics and writes the plot CSV") {
    TempDir tmp;
    const std::string pairs = tmp.sub("pairs.csv");
    write_text_file(pairs,
                    "subject,reference,estimate\np1,50,53\np2,60,58\np3,55,59\n");
    const std::string report = tmp.sub("agree.json");
    const std::string plot = tmp.sub("plot.csv");
    const CliResult ag =
        run_cli("agree --pairs " + pairs + " --out " + report + " --plot " + plot);
    REQUIRE(ag.code == 0);

    const nlohmann::json j = load_json(report);
    CHECK(j.at("n").get<int>() == 3);
    CHECK(j.at("bias").get<double>() == doctest::Approx(5.0 / 3.0).epsilon(1e-5));
    CHECK(j.at("loa_lower").get<double>() == doctest::Approx(-4.63385).epsilon(1e-5));
    CHECK(j.at("loa_upper").get<double>() == doctest::Approx(7.96719).epsilon(1e-5));

    const std::string csv = read_text_file(plot);
    CHECK(csv.rfind("mean,diff\n", 0) == 0);
    CHECK(csv.find("51.5,3") != std::string::npos);
    CHECK(csv.find("59,-2") != std::string::npos);
    CHECK(csv.find("57,4") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
    TempDir tmp;
    CHECK(run_cli("phantom --out " + tmp.sub("p") + " --phases 1").code == 2);
    CHECK(run_cli("").code == 2);                       // a subcommand is required
    CHECK(run_cli("analyze --bogus x").code == 2);      // unknown flag
    CHECK(run_cli("frobnicate").code == 2);             // unknown subcommand
    CHECK(run_cli("analyze --out " + tmp.sub("r.json")).code == 2);  // missing --stacks

    const std::string data = tmp.sub("data");
    REQUIRE(run_cli("phantom --out " + data + " --phases 3 --seed 1").code == 0);
    const std::string stacks = data + "/manifest.json";
    const std::string out = tmp.sub("r.json");
    CHECK(run_cli("analyze --stacks " + stacks + " --out " + out + " --metric girth").code == 2);
    CHECK(run_cli("analyze --stacks " + stacks + " --out " + out + " --threshold 1.5").code == 2);
    CHECK(run_cli("noise --stacks " + stacks + " --out " + tmp.sub("n") + " --snr -5").code == 2);

    const std::string bad_cfg = tmp.sub("bad.json");
    write_text_file(bad_cfg, "{\"metric\": \"volume\"");
    CHECK(run_cli("analyze --stacks " + stacks + " --out " + out + " --config " + bad_cfg).code ==
          2);
    write_text_file(bad_cfg, "{\"metrics\": \"volume\"}");
    CHECK(run_cli("analyze --stacks " + stacks + " --out " + out + " --config " + bad_cfg).code ==
          2);

    const std::string bad_pairs = tmp.sub("bad_pairs.csv");
    write_text_file(bad_pairs, "subject,reference,estimate\np1,abc,def\n");
    CHECK(run_cli("agree --pairs " + bad_pairs + " --out " + tmp.sub("a.json")).code == 2);
}

TEST_CASE("cli: domain errors exit 1") {
    TempDir tmp;
    const std::string flat = write_constant_series(tmp);
    const CliResult an = run_cli("analyze --stacks " + flat + " --out " + tmp.sub("r.json") +
                                 " --metric volume");
    CHECK(an.code == 1);
    CHECK(an.output.find("error") != std::string::npos);

    const std::string one_pair = tmp.sub("one.csv");
    write_text_file(one_pair, "subject,reference,estimate\np1,50,53\n");
    CHECK(run_cli("agree --pairs " + one_pair + " --out " + tmp.sub("a.json")).code == 1);

    const std::string a = tmp.sub("a");
    const std::string b = tmp.sub("b");
    REQUIRE(run_cli("phantom --out " + a + " --phases 3 --seed 1").code == 0);
    REQUIRE(run_cli("phantom --out " + b + " --phases 4 --seed 1").code == 0);
    CHECK(run_cli("metrics --pred " + a + "/manifest.json --ref " + b +
                  "/manifest.json --out " + tmp.sub("m.json"))
              .code == 1);
}

TEST_CASE("cli: I/O errors exit 3 and --help exits 0") {
    TempDir tmp;
    CHECK(run_cli("analyze --stacks " + tmp.sub("nope/manifest.json") + " --out " +
                  tmp.sub("r.json"))
              .code == 3);
    CHECK(run_cli("agree --pairs " + tmp.sub("nope.csv") + " --out " + tmp.sub("a.json")).code ==
          3);
    CHECK(run_cli("analyze --stacks x --out y --config " + tmp.sub("nope_cfg.json")).code == 3);

    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("analyze --help").code == 0);
}

TEST_CASE("cli: phantom output is deterministic for a fixed seed") {
    TempDir tmp;
    const std::string a = tmp.sub("a");
    const std::string b = tmp.sub("b");
    REQUIRE(run_cli("phantom --out " + a + " --phases 6 --ef 48 --seed 11").code == 0);
    REQUIRE(run_cli("phantom --out " + b + " --phases 6 --ef 48 --seed 11").code == 0);
    CHECK(read_text_file(fs::path(a) / "manifest.json") ==
          read_text_file(fs::path(b) / "manifest.json"));
    CHECK(read_text_file(fs::path(a) / "ground_truth.json") ==
          read_text_file(fs::path(b) / "ground_truth.json"));
    CHECK(read_text_file(fs::path(a) / "mask_000.raw") ==
          read_text_file(fs::path(b) / "mask_000.raw"));
}
