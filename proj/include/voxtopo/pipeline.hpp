#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "voxtopo/classifier.hpp"
#include "voxtopo/filtration.hpp"
#include "voxtopo/persistence.hpp"
#include "voxtopo/phantoms.hpp"
#include "voxtopo/vectorize.hpp"
#include "voxtopo/volume.hpp"
#include "voxtopo/volume_io.hpp"

namespace voxtopo {

/// Everything needed to turn a volume file into diagrams and features.
struct ExtractionConfig {
    int levels = 100;
    RangeMode range = RangeMode::minmax();
    /// 0 keeps every slice.
    std::size_t slices = 0;
    Axis axis = Axis::z;
    Direction direction = Direction::sublevel;
    Vectorization vectorization = Vectorization::betti();
    std::vector<int> dims{0, 1, 2};
    VolumeFormat format = VolumeFormat::automatic;

    void validate() const;
};

// Flag syntax shared by the CLI and the manifest: "minmax" | "fixed:LO:HI",
// "x|y|z", "sub|super", "betti" | "silhouette:P", "0,1,2".
RangeMode parse_range(const std::string& text);
std::string format_range(const RangeMode& range);
Axis parse_axis(const std::string& text);
std::string format_axis(Axis axis);
Direction parse_direction(const std::string& text);
std::string format_direction(Direction direction);
Vectorization parse_vectorization(const std::string& text);
std::string format_vectorization(const Vectorization& v);
std::vector<int> parse_dims(const std::string& text);
std::string format_dims(const std::vector<int>& dims);

nlohmann::json config_to_json(const ExtractionConfig& cfg);
ExtractionConfig config_from_json(const nlohmann::json& j, ExtractionConfig base = {});

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
    std::string subject;

    /// Row id: the subject when given, else the file name without extension.
    std::string id() const;
};

/// JSON manifest:
///   {"classes": [...], "config": {...}, "entries": [{"path", "label", "subject"?}]}
/// Relative paths are resolved against the manifest's directory on load.
struct DatasetManifest {
    std::vector<std::string> classes;
    ExtractionConfig config;
    std::vector<ManifestEntry> entries;

    void validate() const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Slice selection, quantisation and filtration of a loaded volume.
CubicalFiltration filtration_for(const GrayVolume& volume, const ExtractionConfig& cfg);
Diagrams diagrams_for(const GrayVolume& volume, const ExtractionConfig& cfg);

/// {"n_levels": N, "direction": "sub"|"super", "dims": {"0": [[b, d], ...], ...}}
/// with d = null for essential pairs.
nlohmann::json diagrams_to_json(const Diagrams& d, int levels, Direction direction);
Diagrams diagrams_from_json(const nlohmann::json& j);

/// Decimal text for a feature value: integers without a fractional part, other
/// values with 17 significant digits so that parsing restores the same double.
std::string format_feature(double v);

struct ExtractSummary {
    std::size_t processed = 0;
    /// (path, message) per volume that failed; those rows are omitted.
    std::vector<std::pair<std::string, std::string>> failures;
};

/// Writes the feature CSV (id, label, features...) in manifest order and, when
/// `diagram_dir` is set, one diagram JSON per volume named <id>.json. Output
/// bytes do not depend on `workers`.
ExtractSummary run_extract(const DatasetManifest& manifest, const std::filesystem::path& csv_path,
                           const std::optional<std::filesystem::path>& diagram_dir, int workers);

enum class Task { binary, three_class };
Task parse_task(const std::string& text);
std::string format_task(Task task);

/// Reads a feature CSV. Class order: `classes` when given, NC/MCI/AD when every
/// label is one of those, otherwise sorted label names.
LabeledDataset read_feature_csv(const std::filesystem::path& path, const std::vector<std::string>& classes = {});

/// merge_binary for the binary task, then stratified cross-validation.
ClassifierReport run_classify(const LabeledDataset& ds, Task task, ClassifierConfig cfg, int folds, int workers);

nlohmann::json report_to_json(const ClassifierReport& report, Task task);
/// Mean row-normalised confusion matrix: header "true\predicted,<classes>".
std::string confusion_csv(const ClassifierReport& report);
/// fold,class,threshold,fpr,tpr for every fold's ROC curve(s).
std::string roc_csv(const ClassifierReport& report);

/// Phantom dataset description (JSON):
///   {"levels", "dims": [x,y,z], "foreground_bin", "background_bin", "jitter",
///    "seed", "per_class", "perturb", "classes": [{"label", "shape", ...}]}
/// Per-class objects may override any shape field.
struct SynthConfig {
    int per_class = 10;
    std::uint64_t seed = 0;
    bool perturb = true;
    std::vector<std::pair<std::string, PhantomSpec>> classes;

    static SynthConfig from_json(const nlohmann::json& j);
    /// Ball / shell / torus classes in a 24^3 grid, jitter 1.
    static SynthConfig default_three_class();
};

/// Writes <label>_<nnn>.npy volumes and manifest.json into `out_dir`. The
/// manifest quantises with fixed:1:N so the stored bins pass through unchanged.
DatasetManifest run_synth(const SynthConfig& cfg, const std::filesystem::path& out_dir);

/// Specs of every volume run_synth would write, in manifest order.
std::vector<std::pair<std::string, PhantomSpec>> synth_specs(const SynthConfig& cfg);

}  // namespace voxtopo
