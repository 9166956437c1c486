#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "corpus.hpp"
#include "tempdir.hpp"
#include "voxtopo/pipeline.hpp"

using namespace voxtopo;
using voxtopo::testing::slurp;
using voxtopo::testing::spit;
using voxtopo::testing::TempDir;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int run(const std::string& command) {
    const int status = std::system((command + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli() { return VOXTOPO_CLI_PATH; }

SynthConfig tiny_synth() {
    SynthConfig cfg = SynthConfig::default_three_class();
    cfg.per_class = 2;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_SUITE("cli-pipeline") {

TEST_CASE("option syntax round trips") {
    CHECK(format_range(parse_range("minmax")) == "minmax");
    CHECK(format_range(parse_range("fixed:0:255")) == "fixed:0:255");
    CHECK(parse_range("fixed:-1.5:2").lo == -1.5);
    CHECK_THROWS_AS(parse_range("fixed:3:1"), Error);
    CHECK_THROWS_AS(parse_range("fixed:a:1"), Error);
    CHECK(parse_axis("y") == Axis::y);
    CHECK_THROWS_AS(parse_axis("w"), Error);
    CHECK(parse_direction("super") == Direction::superlevel);
    CHECK(format_vectorization(parse_vectorization("silhouette:2")) == "silhouette:2");
    CHECK(format_vectorization(parse_vectorization("betti")) == "betti");
    CHECK_THROWS_AS(parse_vectorization("landscape"), Error);
    CHECK(parse_dims("2,1") == std::vector<int>{1, 2});
    CHECK_THROWS_AS(parse_dims("1,1"), Error);
    CHECK_THROWS_AS(parse_dims("3"), Error);
    CHECK_THROWS_AS(parse_dims(""), Error);
    ExtractionConfig cfg;
    cfg.levels = 50;
    cfg.range = RangeMode::fixed(0, 255);
    cfg.dims = {1, 2};
    cfg.vectorization = Vectorization::silhouette_with_power(0.5);
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
    CHECK(format_feature(3.0) == "3");
    CHECK(format_feature(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_feature(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("synth writes volumes and a manifest deterministically") {
    TempDir a;
    TempDir b;
    SynthConfig cfg = SynthConfig::default_three_class();
    const auto m = run_synth(cfg, a.path());
    run_synth(cfg, b.path());
    CHECK(m.entries.size() == 30);
    CHECK(m.classes == std::vector<std::string>{"ball", "shell", "torus"});
    for (const auto& e : m.entries) {
        const auto name = e.path.filename().string();
        CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    const auto loaded = load_manifest(a / "manifest.json");
    CHECK(loaded.entries.size() == 30);
    CHECK(loaded.entries.front().id() == "ball_000");
}

TEST_CASE("extract: 300 features by default, 200 for dims 1,2, CSV matches diagram JSON") {
    TempDir dir;
    auto manifest = run_synth(tiny_synth(), dir.path());
    manifest.entries.resize(3);
    manifest.entries[1] = load_manifest(dir / "manifest.json").entries[2];
    manifest.entries[2] = load_manifest(dir / "manifest.json").entries[4];
    const auto summary = run_extract(manifest, dir / "f.csv", dir / "diagrams", 1);
    CHECK(summary.processed == 3);
    CHECK(summary.failures.empty());
    const auto rows = read_csv(dir / "f.csv");
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) CHECK(r.size() == 302);
    CHECK(rows[0][0] == "id");
    CHECK(rows[0][2] == "b0_001");
    CHECK(rows[0][301] == "b2_100");

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto j = nlohmann::json::parse(slurp(dir / "diagrams" / (rows[i][0] + ".json")));
        CHECK(j.at("n_levels") == 100);
        const Diagrams d = diagrams_from_json(j);
        const auto fv = assemble_features(d, 100, Vectorization::betti());
        for (std::size_t c = 0; c < fv.values.size(); ++c) {
            REQUIRE(rows[i][c + 2] == format_feature(fv.values[c]));
        }
    }

    manifest.config.dims = {1, 2};
    run_extract(manifest, dir / "g.csv", std::nullopt, 1);
    for (const auto& r : read_csv(dir / "g.csv")) CHECK(r.size() == 202);
}

TEST_CASE("extract output bytes do not depend on worker count") {
    TempDir dir;
    const auto manifest = run_synth(tiny_synth(), dir.path());
    run_extract(manifest, dir / "one.csv", dir / "d1", 1);
    run_extract(manifest, dir / "many.csv", dir / "d4", 4);
    CHECK(slurp(dir / "one.csv") == slurp(dir / "many.csv"));
    for (const auto& e : manifest.entries) {
        CHECK(slurp(dir / "d1" / (e.id() + ".json")) == slurp(dir / "d4" / (e.id() + ".json")));
    }
    ExtractionConfig sil = manifest.config;
    sil.vectorization = Vectorization::silhouette_with_power(1.0);
    DatasetManifest m2 = manifest;
    m2.config = sil;
    run_extract(m2, dir / "s1.csv", std::nullopt, 1);
    run_extract(m2, dir / "s3.csv", std::nullopt, 3);
    CHECK(slurp(dir / "s1.csv") == slurp(dir / "s3.csv"));
}

TEST_CASE("extract skips failing volumes and keeps manifest order") {
    TempDir dir;
    auto manifest = run_synth(tiny_synth(), dir.path());
    spit(dir / "broken.npy", "garbage");
    manifest.entries.insert(manifest.entries.begin() + 1, ManifestEntry{dir / "broken.npy", "ball", ""});
    const auto summary = run_extract(manifest, dir / "f.csv", std::nullopt, 2);
    CHECK(summary.processed == 6);
    REQUIRE(summary.failures.size() == 1);
    const auto rows = read_csv(dir / "f.csv");
    CHECK(rows[1][0] == "ball_000");
    CHECK(rows[2][0] == "ball_001");
}

TEST_CASE("empty manifest yields a header-only CSV") {
    TempDir dir;
    DatasetManifest m;
    const auto summary = run_extract(m, dir / "f.csv", std::nullopt, 2);
    CHECK(summary.processed == 0);
    const auto rows = read_csv(dir / "f.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].size() == 302);
}

TEST_CASE("manifest validation") {
    TempDir dir;
    spit(dir / "m.json", R"({"classes": ["a"], "entries": [{"path": "x.npy", "label": "b"}]})");
    CHECK_THROWS_AS(load_manifest(dir / "m.json"), Error);
    spit(dir / "d.json", R"({"entries": [{"path": "x.npy", "label": "a"}, {"path": "./x.npy", "label": "a"}]})");
    CHECK_THROWS_AS(load_manifest(dir / "d.json"), Error);
    spit(dir / "c.json", R"({"config": {"levels": 1}, "entries": []})");
    CHECK_THROWS_AS(load_manifest(dir / "c.json"), Error);
    spit(dir / "ok.json", R"({"config": {"levels": 20, "dims": "0"}, "entries": [{"path": "sub/x.npy", "label": "a", "subject": "S1"}]})");
    const auto m = load_manifest(dir / "ok.json");
    CHECK(m.config.levels == 20);
    CHECK(m.entries[0].id() == "S1");
    CHECK(m.entries[0].path == dir / "sub/x.npy");
}

TEST_CASE("feature CSV reading and class order") {
    TempDir dir;
    spit(dir / "f.csv", "id,label,a,b\ns1,AD,1,2\ns2,NC,3,4\ns3,MCI,5,6.5\n");
    const auto ds = read_feature_csv(dir / "f.csv");
    CHECK(ds.class_names == std::vector<std::string>{"NC", "MCI", "AD"});
    CHECK(ds.labels == std::vector<int>{2, 0, 1});
    CHECK(ds.row(2)[1] == 6.5);
    const auto custom = read_feature_csv(dir / "f.csv", {"AD", "MCI", "NC"});
    CHECK(custom.labels == std::vector<int>{0, 2, 1});
    spit(dir / "bad.csv", "id,label,a\ns1,x,1\ns2,y\n");
    CHECK_THROWS_AS(read_feature_csv(dir / "bad.csv"), Error);
    spit(dir / "nan.csv", "id,label,a\ns1,x,nan\n");
    CHECK_THROWS_AS(read_feature_csv(dir / "nan.csv"), Error);
    spit(dir / "hdr.csv", "name,label,a\n");
    CHECK_THROWS_AS(read_feature_csv(dir / "hdr.csv"), Error);
}

TEST_CASE("binary task merges the two disease classes") {
    LabeledDataset ds;
    ds.n_features = 1;
    ds.feature_names = {"f"};
    ds.class_names = {"NC", "MCI", "AD"};
    for (int i = 0; i < 30; ++i) {
        ds.values.push_back(i % 3 == 0 ? 0.0 : 10.0 + i);
        ds.labels.push_back(i % 3);
        ds.sample_ids.push_back(std::to_string(i));
    }
    ds.n_samples = 30;
    ClassifierConfig cfg;
    cfg.n_estimators = 20;
    const auto report = run_classify(ds, Task::binary, cfg, 5, 1);
    CHECK(report.class_names == std::vector<std::string>{"NC", "MCI+AD"});
    CHECK(report.config.objective == Objective::binary_logistic);
    CHECK(report.mean.accuracy == 1.0);
    const auto j = report_to_json(report, Task::binary);
    CHECK(j.at("task") == "binary");
    CHECK(confusion_csv(report).rfind("true\\predicted,NC,MCI+AD\n", 0) == 0);
    CHECK(roc_csv(report).rfind("fold,class,threshold,fpr,tpr\n", 0) == 0);
}

TEST_CASE("CLI end to end: exit codes, defaults echoed, determinism") {
    TempDir dir;
    const std::string d = dir.path().string();
    REQUIRE(run(cli() + " synth -o " + d + "/ph --per-class 10 --seed 3") == 0);
    REQUIRE(run(cli() + " extract " + d + "/ph/manifest.json -o " + d + "/f1.csv --workers 1") == 0);
    REQUIRE(run(cli() + " extract " + d + "/ph/manifest.json -o " + d + "/f2.csv --workers 3") == 0);
    CHECK(slurp(dir / "f1.csv") == slurp(dir / "f2.csv"));
    REQUIRE(run(cli() + " extract " + d + "/ph/manifest.json -o " + d + "/f12.csv --dims 1,2") == 0);
    CHECK(read_csv(dir / "f12.csv")[0].size() == 202);

    REQUIRE(run(cli() + " classify " + d + "/f1.csv --task three_class --n-estimators 30 --out-dir " + d + "/r1") == 0);
    REQUIRE(run(cli() + " classify " + d + "/f1.csv --task three_class --n-estimators 30 --out-dir " + d + "/r2") == 0);
    for (const char* f : {"report.json", "confusion.csv", "roc.csv"}) {
        CHECK(slurp(dir / "r1" / f) == slurp(dir / "r2" / f));
    }
    const auto report = nlohmann::json::parse(slurp(dir / "r1" / "report.json"));
    CHECK(report.at("mean").contains("precision"));
    CHECK(report.at("mean").contains("f1"));
    REQUIRE(run(cli() + " classify " + d + "/f1.csv --out-dir " + d + "/r3 --n-estimators 500 --folds 5") == 0);
    const auto defaults = nlohmann::json::parse(slurp(dir / "r3" / "report.json")).at("config");
    CHECK(defaults.at("n_estimators") == 500);
    CHECK(defaults.at("learning_rate") == 0.2);
    CHECK(defaults.at("max_depth") == 7);
    CHECK(defaults.at("colsample_bytree") == 0.3);

    // TOML defaults with a flag override.
    spit(dir / "cfg.toml", "[extract]\nlevels = 20\ndims = \"0\"\n");
    REQUIRE(run(cli() + " --config " + d + "/cfg.toml extract " + d + "/ph/manifest.json -o " + d + "/t.csv") == 0);
    CHECK(read_csv(dir / "t.csv")[0].size() == 22);
    REQUIRE(run(cli() + " --config " + d + "/cfg.toml extract " + d + "/ph/manifest.json -o " + d +
                "/t2.csv --dims 0,1") == 0);
    CHECK(read_csv(dir / "t2.csv")[0].size() == 42);

    spit(dir / "bad.npy", "junk");
    spit(dir / "partial.json", "{\"entries\": [{\"path\": \"ph/ball_000.npy\", \"label\": \"ball\"}, "
                               "{\"path\": \"bad.npy\", \"label\": \"ball\"}]}");
    CHECK(run(cli() + " extract " + d + "/partial.json -o " + d + "/p.csv") == 2);
    CHECK(run(cli() + " extract " + d + "/ph/manifest.json -o " + d + "/x.csv --levels 1") == 1);
    CHECK(run(cli() + " classify " + d + "/missing.csv") != 0);
    spit(dir / "empty.json", "{\"entries\": []}");
    CHECK(run(cli() + " extract " + d + "/empty.json -o " + d + "/e.csv") == 0);
    CHECK(read_csv(dir / "e.csv").size() == 1);
}

TEST_CASE("diagram command prints JSON with null for essential classes") {
    TempDir dir;
    write_npy(GrayVolume({4, 4, 4}, std::vector<double>(64, 7.0)), dir / "c.npy");
    const std::string d = dir.path().string();
    REQUIRE(std::system((cli() + " diagram " + d + "/c.npy --levels 10 > " + d + "/out.json").c_str()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "out.json"));
    CHECK(j.at("dims").at("0") == nlohmann::json::parse("[[1, null]]"));
    CHECK(j.at("dims").at("1").empty());
    CHECK(j.at("dims").at("2").empty());

    write_npy(GrayVolume({5, 5, 1}, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18,
                                                         19, 20, 21, 22, 23, 24, 25}),
              dir / "flat.npy");
    REQUIRE(std::system((cli() + " diagram " + d + "/flat.npy > " + d + "/flat.json").c_str()) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "flat.json")).at("dims").at("2").empty());

    const auto shell = testing::crafted_corpus()[2].volume;
    write_npy(shell, dir / "shell.npy");
    REQUIRE(std::system((cli() + " diagram " + d + "/shell.npy --range fixed:1:10 --levels 10 > " + d + "/shell.json").c_str()) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "shell.json")).at("dims").at("2") == nlohmann::json::parse("[[2, 9]]"));
}

}  // TEST_SUITE
