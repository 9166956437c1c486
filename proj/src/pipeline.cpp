#include "voxtopo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace voxtopo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        parts.push_back(item);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw Error("cannot parse " + what + " from '" + text + "'");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

// --- option syntax ---------------------------------------------------------

RangeMode parse_range(const std::string& text) {
    if (text == "minmax") {
        return RangeMode::minmax();
    }
    const auto parts = split(text, ':');
    if (parts.size() == 3 && parts[0] == "fixed") {
        const double lo = parse_double(parts[1], "range low");
        const double hi = parse_double(parts[2], "range high");
        if (!(lo < hi)) {
            throw Error("fixed range needs LO < HI, got '" + text + "'");
        }
        return RangeMode::fixed(lo, hi);
    }
    throw Error("range must be 'minmax' or 'fixed:LO:HI', got '" + text + "'");
}

std::string format_range(const RangeMode& range) {
    if (range.kind == RangeMode::Kind::minmax) {
        return "minmax";
    }
    return "fixed:" + format_feature(range.lo) + ":" + format_feature(range.hi);
}

Axis parse_axis(const std::string& text) {
    if (text == "x") return Axis::x;
    if (text == "y") return Axis::y;
    if (text == "z") return Axis::z;
    throw Error("axis must be x, y or z, got '" + text + "'");
}

std::string format_axis(Axis axis) {
    return axis == Axis::x ? "x" : axis == Axis::y ? "y" : "z";
}

Direction parse_direction(const std::string& text) {
    if (text == "sub" || text == "sublevel") return Direction::sublevel;
    if (text == "super" || text == "superlevel") return Direction::superlevel;
    throw Error("direction must be sub or super, got '" + text + "'");
}

std::string format_direction(Direction direction) {
    return direction == Direction::sublevel ? "sub" : "super";
}

Vectorization parse_vectorization(const std::string& text) {
    if (text == "betti") {
        return Vectorization::betti();
    }
    const auto parts = split(text, ':');
    if (parts[0] == "silhouette" && parts.size() <= 2) {
        const double p = parts.size() == 2 ? parse_double(parts[1], "silhouette power") : 1.0;
        if (!std::isfinite(p) || p < 0.0) {
            throw Error("silhouette power must be finite and >= 0");
        }
        return Vectorization::silhouette_with_power(p);
    }
    throw Error("vectorization must be 'betti' or 'silhouette:P', got '" + text + "'");
}

std::string format_vectorization(const Vectorization& v) {
    if (v.kind == Vectorization::Kind::betti) {
        return "betti";
    }
    return "silhouette:" + format_feature(v.silhouette.power);
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    for (const auto& part : split(text, ',')) {
        if (part != "0" && part != "1" && part != "2") {
            throw Error("dims must be a comma list drawn from 0,1,2, got '" + text + "'");
        }
        dims.push_back(part[0] - '0');
    }
    std::sort(dims.begin(), dims.end());
    if (dims.empty() || std::adjacent_find(dims.begin(), dims.end()) != dims.end()) {
        throw Error("dims must be a non-empty list of distinct dimensions, got '" + text + "'");
    }
    return dims;
}

std::string format_dims(const std::vector<int>& dims) {
    std::string out;
    for (int d : dims) {
        if (!out.empty()) out += ",";
        out += std::to_string(d);
    }
    return out;
}

void ExtractionConfig::validate() const {
    if (levels < 2 || levels > 65535) {
        throw Error("levels must lie in [2, 65535]");
    }
    if (range.kind == RangeMode::Kind::fixed && !(range.lo < range.hi)) {
        throw Error("fixed range needs lo < hi");
    }
    if (dims.empty()) {
        throw Error("at least one homology dimension must be selected");
    }
    for (int d : dims) {
        if (d < 0 || d > 2) {
            throw Error("homology dimensions must lie in {0, 1, 2}");
        }
    }
}

json config_to_json(const ExtractionConfig& cfg) {
    return json{{"levels", cfg.levels},
                {"range", format_range(cfg.range)},
                {"slices", cfg.slices},
                {"axis", format_axis(cfg.axis)},
                {"direction", format_direction(cfg.direction)},
                {"vec", format_vectorization(cfg.vectorization)},
                {"dims", format_dims(cfg.dims)}};
}

ExtractionConfig config_from_json(const json& j, ExtractionConfig cfg) {
    if (!j.is_object()) {
        throw Error("extraction config must be a JSON object");
    }
    try {
        if (j.contains("levels")) cfg.levels = j.at("levels").get<int>();
        if (j.contains("range")) cfg.range = parse_range(j.at("range").get<std::string>());
        if (j.contains("slices")) cfg.slices = j.at("slices").get<std::size_t>();
        if (j.contains("axis")) cfg.axis = parse_axis(j.at("axis").get<std::string>());
        if (j.contains("direction")) cfg.direction = parse_direction(j.at("direction").get<std::string>());
        if (j.contains("vec")) cfg.vectorization = parse_vectorization(j.at("vec").get<std::string>());
        if (j.contains("dims")) cfg.dims = parse_dims(j.at("dims").get<std::string>());
        if (j.contains("format")) cfg.format = parse_volume_format(j.at("format").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(std::string("bad extraction config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

// --- manifest --------------------------------------------------------------

std::string ManifestEntry::id() const {
    if (!subject.empty()) {
        return subject;
    }
    std::string name = path.filename().string();
    for (const char* ext : {".nii.gz", ".nii", ".npy", ".raw"}) {
        const std::string e = ext;
        if (name.size() > e.size() && name.compare(name.size() - e.size(), e.size(), e) == 0) {
            return name.substr(0, name.size() - e.size());
        }
    }
    return path.stem().string();
}

void DatasetManifest::validate() const {
    config.validate();
    std::set<std::string> paths;
    std::set<std::string> ids;
    for (const auto& e : entries) {
        if (!paths.insert(e.path.lexically_normal().string()).second) {
            throw Error("manifest lists " + e.path.string() + " twice");
        }
        if (!ids.insert(e.id()).second) {
            throw Error("manifest id '" + e.id() + "' is not unique; set a subject for one of the entries");
        }
        if (!classes.empty() && std::find(classes.begin(), classes.end(), e.label) == classes.end()) {
            throw Error("label '" + e.label + "' of " + e.path.string() + " is not a declared class");
        }
        if (e.label.find(',') != std::string::npos || e.id().find(',') != std::string::npos) {
            throw Error("labels and ids must not contain commas");
        }
    }
}

DatasetManifest load_manifest(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    DatasetManifest m;
    try {
        if (j.contains("classes")) m.classes = j.at("classes").get<std::vector<std::string>>();
        if (j.contains("config")) m.config = config_from_json(j.at("config"));
        const fs::path base = path.parent_path();
        for (const auto& e : j.value("entries", json::array())) {
            ManifestEntry entry;
            entry.path = e.at("path").get<std::string>();
            if (entry.path.is_relative()) {
                entry.path = base / entry.path;
            }
            entry.label = e.at("label").get<std::string>();
            entry.subject = e.value("subject", "");
            m.entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    m.validate();
    return m;
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
    json entries = json::array();
    const fs::path base = fs::absolute(path).parent_path();
    for (const auto& e : m.entries) {
        json item{{"path", fs::absolute(e.path).lexically_relative(base).generic_string()},
                  {"label", e.label}};
        if (!e.subject.empty()) {
            item["subject"] = e.subject;
        }
        entries.push_back(std::move(item));
    }
    const json j{{"classes", m.classes}, {"config", config_to_json(m.config)}, {"entries", entries}};
    write_text(path, j.dump(2) + "\n");
}

// --- extraction ------------------------------------------------------------

CubicalFiltration filtration_for(const GrayVolume& volume, const ExtractionConfig& cfg) {
    cfg.validate();
    const GrayVolume sliced = cfg.slices > 0 ? select_middle_slices(volume, cfg.slices, cfg.axis) : volume;
    return CubicalFiltration::build(quantize(sliced, cfg.levels, cfg.range), cfg.direction);
}

Diagrams diagrams_for(const GrayVolume& volume, const ExtractionConfig& cfg) {
    return compute_diagrams(filtration_for(volume, cfg));
}

json diagrams_to_json(const Diagrams& d, int levels, Direction direction) {
    json dims = json::object();
    for (int k = 0; k < 3; ++k) {
        json pairs = json::array();
        for (const auto& p : d[k].pairs) {
            pairs.push_back(json::array({p.birth, p.essential() ? json(nullptr) : json(p.death)}));
        }
        dims[std::to_string(k)] = std::move(pairs);
    }
    return json{{"n_levels", levels}, {"direction", format_direction(direction)}, {"dims", dims}};
}

Diagrams diagrams_from_json(const json& j) {
    Diagrams d;
    try {
        const auto& dims = j.at("dims");
        for (int k = 0; k < 3; ++k) {
            for (const auto& pair : dims.at(std::to_string(k))) {
                PersistencePair p;
                p.birth = pair.at(0).get<int>();
                p.death = pair.at(1).is_null() ? kInfinity : pair.at(1).get<int>();
                d[k].pairs.push_back(p);
            }
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed diagram JSON: ") + e.what());
    }
    return d;
}

std::string format_feature(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ExtractSummary run_extract(const DatasetManifest& manifest, const fs::path& csv_path,
                           const std::optional<fs::path>& diagram_dir, int workers) {
    manifest.validate();
    const ExtractionConfig& cfg = manifest.config;
    if (diagram_dir) {
        fs::create_directories(*diagram_dir);
    }

    struct Row {
        bool ok = false;
        std::string line;
        std::string diagram_json;
        std::string error;
    };
    std::vector<Row> rows(manifest.entries.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            const auto& entry = manifest.entries[i];
            Row& row = rows[i];
            try {
                const GrayVolume volume = load_volume(entry.path, cfg.format);
                const Diagrams diagrams = diagrams_for(volume, cfg);
                const FeatureVector fv = assemble_features(diagrams, cfg.levels, cfg.vectorization, cfg.dims);
                std::string line = entry.id() + "," + entry.label;
                for (double v : fv.values) {
                    line += ",";
                    line += format_feature(v);
                }
                row.line = std::move(line);
                if (diagram_dir) {
                    row.diagram_json = diagrams_to_json(diagrams, cfg.levels, cfg.direction).dump() + "\n";
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(rows.size(), 1))));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::string csv = "id,label";
    for (const auto& name : feature_names(cfg.levels, cfg.vectorization, cfg.dims)) {
        csv += "," + name;
    }
    csv += "\n";
    ExtractSummary summary;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok) {
            summary.failures.emplace_back(manifest.entries[i].path.string(), rows[i].error);
            continue;
        }
        csv += rows[i].line + "\n";
        ++summary.processed;
        if (diagram_dir) {
            write_text(*diagram_dir / (manifest.entries[i].id() + ".json"), rows[i].diagram_json);
        }
    }
    if (csv_path.has_parent_path()) {
        fs::create_directories(csv_path.parent_path());
    }
    write_text(csv_path, csv);
    return summary;
}

// --- classification --------------------------------------------------------

Task parse_task(const std::string& text) {
    if (text == "binary") return Task::binary;
    if (text == "three_class" || text == "multiclass") return Task::three_class;
    throw Error("task must be binary or three_class, got '" + text + "'");
}

std::string format_task(Task task) {
    return task == Task::binary ? "binary" : "three_class";
}

LabeledDataset read_feature_csv(const fs::path& path, const std::vector<std::string>& classes) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(path.string() + ": empty CSV");
    }
    const auto header = split(line, ',');
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw Error(path.string() + ": header must start with id,label and name at least one feature");
    }
    LabeledDataset ds;
    ds.feature_names.assign(header.begin() + 2, header.end());
    ds.n_features = ds.feature_names.size();
    std::vector<std::string> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(cells.size()));
        }
        ds.sample_ids.push_back(cells[0]);
        labels.push_back(cells[1]);
        for (std::size_t c = 2; c < cells.size(); ++c) {
            double v = 0.0;
            const auto* first = cells[c].data();
            const auto* last = first + cells[c].size();
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
                throw Error(path.string() + ":" + std::to_string(line_no) + ": bad value '" + cells[c] + "' in column " +
                            header[c]);
            }
            ds.values.push_back(v);
        }
    }
    ds.n_samples = labels.size();

    if (!classes.empty()) {
        ds.class_names = classes;
    } else {
        const std::set<std::string> seen(labels.begin(), labels.end());
        const std::vector<std::string> canonical{"NC", "MCI", "AD"};
        const bool adni = std::all_of(seen.begin(), seen.end(), [&](const std::string& l) {
            return std::find(canonical.begin(), canonical.end(), l) != canonical.end();
        });
        if (adni && !seen.empty()) {
            for (const auto& c : canonical) {
                if (seen.count(c) != 0) ds.class_names.push_back(c);
            }
        } else {
            ds.class_names.assign(seen.begin(), seen.end());
        }
    }
    for (const auto& l : labels) {
        const auto it = std::find(ds.class_names.begin(), ds.class_names.end(), l);
        if (it == ds.class_names.end()) {
            throw Error(path.string() + ": label '" + l + "' is not among the declared classes");
        }
        ds.labels.push_back(static_cast<int>(it - ds.class_names.begin()));
    }
    ds.validate();
    return ds;
}

ClassifierReport run_classify(const LabeledDataset& input, Task task, ClassifierConfig cfg, int folds, int workers) {
    LabeledDataset ds = input;
    if (task == Task::binary) {
        if (ds.class_count() > 3) {
            throw Error("binary task expects at most three classes (negative class first)");
        }
        if (ds.class_count() == 3) {
            ds = merge_binary(ds);
        }
        if (ds.class_count() != 2) {
            throw Error("binary task needs two classes after merging");
        }
        cfg.objective = Objective::binary_logistic;
    } else {
        if (ds.class_count() < 2) {
            throw Error("multiclass task needs at least two classes");
        }
        cfg.objective = Objective::multiclass_softmax;
    }
    return cross_validate(ds, cfg, folds, workers);
}

namespace {

json metrics_json(const MetricSet& m, double auc) {
    return json{{"accuracy", m.accuracy},   {"precision", m.precision},     {"recall", m.recall},
                {"f1", m.f1},               {"sensitivity", m.sensitivity}, {"specificity", m.specificity},
                {"roc_auc", auc}};
}

}  // namespace

json report_to_json(const ClassifierReport& r, Task task) {
    const auto& c = r.config;
    json config{{"n_estimators", c.n_estimators},
                {"learning_rate", c.learning_rate},
                {"max_depth", c.max_depth},
                {"colsample_bytree", c.colsample_bytree},
                {"objective", c.objective == Objective::binary_logistic ? "binary_logistic" : "multiclass_softmax"},
                {"seed", c.seed},
                {"feature_selection", c.feature_selection.to_string()},
                {"reg_lambda", c.reg_lambda},
                {"min_child_weight", c.min_child_weight},
                {"min_split_loss", c.min_split_loss},
                {"max_bins", c.max_bins}};
    json folds = json::array();
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
        const auto& fr = r.per_fold[f];
        json item = metrics_json(fr.metrics, fr.roc_auc);
        item["fold"] = f;
        item["n_train"] = fr.n_train;
        item["n_test"] = fr.n_test;
        item["confusion"] = fr.confusion.counts;
        item["selected_features"] = fr.selected_features;
        item["zero_division"] = fr.metrics.zero_division;
        folds.push_back(std::move(item));
    }
    return json{{"task", format_task(task)},
                {"folds", r.folds},
                {"classes", r.class_names},
                {"config", config},
                {"mean", metrics_json(r.mean, r.mean_roc_auc)},
                {"per_fold", folds},
                {"confusion_total", r.total_confusion.counts},
                {"confusion_mean_normalized", r.mean_confusion_normalized},
                {"zero_division", r.mean.zero_division}};
}

std::string confusion_csv(const ClassifierReport& r) {
    std::string out = "true\\predicted";
    for (const auto& c : r.class_names) {
        out += "," + c;
    }
    out += "\n";
    for (std::size_t i = 0; i < r.mean_confusion_normalized.size(); ++i) {
        out += r.class_names[i];
        for (double v : r.mean_confusion_normalized[i]) {
            out += "," + format_feature(v);
        }
        out += "\n";
    }
    return out;
}

std::string roc_csv(const ClassifierReport& r) {
    std::string out = "fold,class,threshold,fpr,tpr\n";
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
        for (const auto& curve : r.per_fold[f].roc) {
            for (const auto& p : curve.points) {
                out += std::to_string(f) + "," + r.class_names[static_cast<std::size_t>(curve.positive_class)] + "," +
                       format_feature(p.threshold) + "," + format_feature(p.fpr) + "," + format_feature(p.tpr) + "\n";
            }
        }
    }
    return out;
}

// --- synthetic datasets ----------------------------------------------------

namespace {

void apply_phantom_fields(const json& j, PhantomSpec& s) {
    auto vec3 = [](const json& v) {
        const auto a = v.get<std::vector<double>>();
        if (a.size() != 3) {
            throw Error("phantom vectors need three components");
        }
        return std::array<double, 3>{a[0], a[1], a[2]};
    };
    if (j.contains("shape")) s.shape = parse_shape(j.at("shape").get<std::string>());
    if (j.contains("dims")) {
        const auto d = j.at("dims").get<std::vector<std::size_t>>();
        if (d.size() != 3) throw Error("phantom dims need three entries");
        s.dims = {d[0], d[1], d[2]};
    }
    if (j.contains("levels")) s.levels = j.at("levels").get<int>();
    if (j.contains("center")) s.center = vec3(j.at("center"));
    if (j.contains("center2")) s.center2 = vec3(j.at("center2"));
    if (j.contains("radius")) s.radius = j.at("radius").get<double>();
    if (j.contains("inner_radius")) s.inner_radius = j.at("inner_radius").get<double>();
    if (j.contains("tube_radius")) s.tube_radius = j.at("tube_radius").get<double>();
    if (j.contains("foreground_bin")) s.foreground_bin = j.at("foreground_bin").get<int>();
    if (j.contains("background_bin")) s.background_bin = j.at("background_bin").get<int>();
    if (j.contains("jitter")) s.jitter = j.at("jitter").get<int>();
}

}  // namespace

SynthConfig SynthConfig::from_json(const json& j) {
    SynthConfig cfg;
    try {
        PhantomSpec defaults;
        apply_phantom_fields(j, defaults);
        cfg.per_class = j.value("per_class", cfg.per_class);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.perturb = j.value("perturb", cfg.perturb);
        for (const auto& c : j.at("classes")) {
            PhantomSpec spec = defaults;
            apply_phantom_fields(c, spec);
            validate(spec);
            cfg.classes.emplace_back(c.at("label").get<std::string>(), spec);
        }
    } catch (const json::exception& e) {
        throw Error(std::string("bad synth config: ") + e.what());
    }
    if (cfg.classes.empty()) {
        throw Error("synth config declares no classes");
    }
    if (cfg.per_class < 1) {
        throw Error("per_class must be >= 1");
    }
    return cfg;
}

SynthConfig SynthConfig::default_three_class() {
    return from_json(json::parse(R"({
        "dims": [24, 24, 24], "levels": 100, "foreground_bin": 30, "background_bin": 70, "jitter": 1,
        "per_class": 10, "seed": 0, "perturb": true,
        "classes": [
            {"label": "ball", "shape": "solid_ball", "radius": 6},
            {"label": "shell", "shape": "hollow_shell", "radius": 7, "inner_radius": 4},
            {"label": "torus", "shape": "solid_torus", "radius": 6, "tube_radius": 2.5}
        ]})"));
}

std::vector<std::pair<std::string, PhantomSpec>> synth_specs(const SynthConfig& cfg) {
    std::vector<std::pair<std::string, PhantomSpec>> out;
    for (std::size_t c = 0; c < cfg.classes.size(); ++c) {
        const auto& [label, base] = cfg.classes[c];
        for (int i = 0; i < cfg.per_class; ++i) {
            const std::uint64_t seed = mix_seed(cfg.seed ^ mix_seed((static_cast<std::uint64_t>(c) << 32) + static_cast<std::uint64_t>(i)));
            PhantomSpec spec = base;
            spec.seed = seed;
            if (cfg.perturb) {
                spec = perturbed(base, seed);
            }
            out.emplace_back(label, spec);
        }
    }
    return out;
}

DatasetManifest run_synth(const SynthConfig& cfg, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw Error("cannot create output directory " + out_dir.string());
    }
    DatasetManifest manifest;
    int levels = 0;
    std::map<std::string, int> counters;
    for (const auto& [label, spec] : synth_specs(cfg)) {
        if (levels != 0 && spec.levels != levels) {
            throw Error("all synth classes must share one level count");
        }
        levels = spec.levels;
        if (std::find(manifest.classes.begin(), manifest.classes.end(), label) == manifest.classes.end()) {
            manifest.classes.push_back(label);
        }
        char name[64];
        std::snprintf(name, sizeof(name), "_%03d.npy", counters[label]++);
        const fs::path file = out_dir / (label + name);
        write_npy(generate(spec), file);
        manifest.entries.push_back({file, label, ""});
    }
    manifest.config.levels = levels;
    manifest.config.range = RangeMode::fixed(1, levels);
    save_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

}  // namespace voxtopo
