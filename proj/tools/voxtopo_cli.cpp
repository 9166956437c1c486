// voxtopo command-line front end: extract, classify, synth, diagram.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "voxtopo/pipeline.hpp"

namespace fs = std::filesystem;
using namespace voxtopo;

namespace {

struct ExtractFlags {
    std::optional<int> levels;
    std::optional<std::string> range;
    std::optional<std::size_t> slices;
    std::optional<std::string> axis;
    std::optional<std::string> direction;
    std::optional<std::string> vec;
    std::optional<std::string> dims;
    std::optional<std::string> format;

    void add_to(CLI::App& app) {
        app.add_option("--levels", levels, "Number of threshold levels N");
        app.add_option("--range", range, "Quantisation range: minmax | fixed:LO:HI");
        app.add_option("--slices", slices, "Keep this many middle slices (0 = all)");
        app.add_option("--axis", axis, "Slice axis: x | y | z");
        app.add_option("--direction", direction, "Filtration direction: sub | super");
        app.add_option("--vec", vec, "Vectorisation: betti | silhouette:P");
        app.add_option("--dims", dims, "Homology dimensions, e.g. 0,1,2");
        app.add_option("--format", format, "Input format: auto | nifti | npy | raw");
    }

    ExtractionConfig apply(ExtractionConfig cfg) const {
        if (levels) cfg.levels = *levels;
        if (range) cfg.range = parse_range(*range);
        if (slices) cfg.slices = *slices;
        if (axis) cfg.axis = parse_axis(*axis);
        if (direction) cfg.direction = parse_direction(*direction);
        if (vec) cfg.vectorization = parse_vectorization(*vec);
        if (dims) cfg.dims = parse_dims(*dims);
        if (format) cfg.format = parse_volume_format(*format);
        cfg.validate();
        return cfg;
    }
};

int default_workers() {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write " + path.string());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cubical persistent homology features and gradient-boosted classification for 3D volumes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with default flag values");

    // extract
    auto* extract = app.add_subcommand("extract", "Compute diagrams and feature vectors for every volume in a manifest");
    std::string manifest_path;
    std::string features_path = "features.csv";
    std::optional<std::string> diagram_dir;
    int workers = default_workers();
    ExtractFlags extract_flags;
    extract->add_option("manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
    extract->add_option("-o,--out", features_path, "Output feature CSV");
    extract->add_option("--diagrams", diagram_dir, "Directory for per-volume diagram JSON");
    extract->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    extract_flags.add_to(*extract);

    // classify
    auto* classify = app.add_subcommand("classify", "Cross-validated classification of a feature CSV");
    std::string csv_path;
    std::string task_name = "three_class";
    std::string out_dir = ".";
    int folds = 10;
    std::string selection = "mean";
    std::vector<std::string> classes;
    ClassifierConfig ccfg;
    classify->add_option("features", csv_path, "Feature CSV written by extract")->required()->check(CLI::ExistingFile);
    classify->add_option("--task", task_name, "binary | three_class");
    classify->add_option("--folds", folds, "Number of cross-validation folds");
    classify->add_option("--out-dir", out_dir, "Directory for report.json, confusion.csv, roc.csv");
    classify->add_option("--n-estimators", ccfg.n_estimators, "Boosting rounds");
    classify->add_option("--learning-rate", ccfg.learning_rate, "Shrinkage");
    classify->add_option("--max-depth", ccfg.max_depth, "Maximum tree depth");
    classify->add_option("--colsample-bytree", ccfg.colsample_bytree, "Fraction of features per tree");
    classify->add_option("--reg-lambda", ccfg.reg_lambda, "L2 penalty on leaf weights");
    classify->add_option("--min-child-weight", ccfg.min_child_weight, "Minimum hessian sum per leaf");
    classify->add_option("--max-bins", ccfg.max_bins, "Histogram bins per feature (0 = exact)");
    classify->add_option("--feature-selection", selection, "mean | off | absolute:T");
    classify->add_option("--classes", classes, "Class order, negative class first")->delimiter(',');
    classify->add_option("--seed", ccfg.seed, "Random seed");
    classify->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a labelled phantom dataset and its manifest");
    std::optional<std::string> synth_config;
    std::string synth_out = "phantoms";
    std::optional<int> per_class;
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("--spec", synth_config, "Phantom dataset JSON (default: ball/shell/torus)")
        ->check(CLI::ExistingFile);
    synth->add_option("-o,--out", synth_out, "Output directory");
    synth->add_option("--per-class", per_class, "Volumes per class");
    synth->add_option("--seed", synth_seed, "Random seed");

    // diagram
    auto* diagram = app.add_subcommand("diagram", "Print the persistence diagrams of one volume as JSON");
    std::string volume_path;
    ExtractFlags diagram_flags;
    diagram->add_option("volume", volume_path, "Volume file")->required()->check(CLI::ExistingFile);
    diagram_flags.add_to(*diagram);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            DatasetManifest manifest = load_manifest(manifest_path);
            manifest.config = extract_flags.apply(manifest.config);
            const auto summary = run_extract(manifest, features_path,
                                             diagram_dir ? std::optional<fs::path>(*diagram_dir) : std::nullopt, workers);
            for (const auto& [path, message] : summary.failures) {
                std::cerr << "error: " << path << ": " << message << "\n";
            }
            std::cerr << "processed " << summary.processed << " of " << manifest.entries.size() << " volumes\n";
            return summary.failures.empty() ? 0 : 2;
        }
        if (*classify) {
            ccfg.feature_selection = FeatureSelection::parse(selection);
            ccfg.validate();
            const Task task = parse_task(task_name);
            const LabeledDataset ds = read_feature_csv(csv_path, classes);
            const ClassifierReport report = run_classify(ds, task, ccfg, folds, workers);
            fs::create_directories(out_dir);
            write_file(fs::path(out_dir) / "report.json", report_to_json(report, task).dump(2) + "\n");
            write_file(fs::path(out_dir) / "confusion.csv", confusion_csv(report));
            write_file(fs::path(out_dir) / "roc.csv", roc_csv(report));
            std::cout << "accuracy " << report.mean.accuracy << "  roc_auc " << report.mean_roc_auc << "  f1 "
                      << report.mean.f1 << "\n";
            return 0;
        }
        if (*synth) {
            SynthConfig cfg = SynthConfig::default_three_class();
            if (synth_config) {
                std::ifstream in(*synth_config);
                try {
                    cfg = SynthConfig::from_json(nlohmann::json::parse(in));
                } catch (const nlohmann::json::exception& e) {
                    throw Error(*synth_config + ": " + e.what());
                }
            }
            if (per_class) cfg.per_class = *per_class;
            if (synth_seed) cfg.seed = *synth_seed;
            const auto manifest = run_synth(cfg, synth_out);
            std::cerr << "wrote " << manifest.entries.size() << " volumes to " << synth_out << "\n";
            return 0;
        }
        if (*diagram) {
            const ExtractionConfig cfg = diagram_flags.apply({});
            const Diagrams d = diagrams_for(load_volume(volume_path, cfg.format), cfg);
            std::cout << diagrams_to_json(d, cfg.levels, cfg.direction).dump() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
