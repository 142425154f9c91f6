#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "metacomb/data_io.hpp"
#include "metacomb/pipeline.hpp"

using namespace metacomb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("metacomb_pipe_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

PredictionTable combined_table(std::vector<std::string> classes,
                               const std::vector<std::vector<double>>& cols) {
    PredictionTable t;
    t.source_model = "mlt";
    t.class_names = std::move(classes);
    const std::size_t n = cols.front().size();
    for (std::size_t i = 0; i < n; ++i) t.sample_ids.push_back("s" + std::to_string(i));
    t.scores.resize(n * t.class_names.size());
    for (std::size_t c = 0; c < t.class_names.size(); ++c) {
        for (std::size_t i = 0; i < n; ++i) t.set(i, c, cols[c][i]);
    }
    return t;
}

} // namespace

TEST_CASE("perfect predictions score 1 everywhere") {
    const auto table = combined_table({"a", "b"}, {{0.9, 0.1}, {0.2, 0.8}});
    GoldLabels gold;
    gold.sample_ids = table.sample_ids;
    gold.labels = LabelMatrix({"a", "b"}, 2);
    gold.labels.set(0, 0, true);
    gold.labels.set(1, 1, true);
    const auto report = evaluate_predictions(table, gold, nullptr, {});
    CHECK(report.macro_f1 == 1.0);
    CHECK(report.accuracy == 1.0);
}

TEST_CASE("binary complement framing scores both classes from one column") {
    const auto table = combined_table({"Hateful"}, {{0.7, 0.3, 0.6, 0.2}});
    GoldLabels gold;
    gold.sample_ids = table.sample_ids;
    gold.labels = LabelMatrix({"Hateful", "Non-hateful"}, 4);
    gold.labels.set(0, 0, true);
    gold.labels.set(1, 1, true);
    gold.labels.set(2, 1, true);  // false positive at 0.5
    gold.labels.set(3, 1, true);

    const auto report = evaluate_predictions(table, gold, nullptr, {});
    CHECK(report.class_names == std::vector<std::string>{"Hateful", "Non-hateful"});
    CHECK(report.per_class[0].counts.tp == 1);
    CHECK(report.per_class[0].counts.fp == 1);
    CHECK(report.per_class[1].counts.tp == 2);
    CHECK(report.accuracy == doctest::Approx(0.75));
    // Complement predictions make both accuracy modes agree.
    EvaluationOptions lw;
    lw.accuracy_mode = AccuracyMode::label_wise;
    CHECK(evaluate_predictions(table, gold, nullptr, lw).accuracy == report.accuracy);
}

TEST_CASE("trained thresholds flip verdicts against the 0.5 default") {
    const auto table = combined_table({"Hateful"}, {{0.42}});
    GoldLabels gold;
    gold.sample_ids = table.sample_ids;
    gold.labels = LabelMatrix({"Hateful", "Non-hateful"}, 1);
    gold.labels.set(0, 0, true);

    ThresholdVector tv;
    tv.class_names = {"Hateful"};
    tv.thresholds = {0.40};
    tv.achieved_f1 = {0.0};

    const auto with_default = evaluate_predictions(table, gold, nullptr, {});
    const auto with_tm = evaluate_predictions(table, gold, &tv, {});
    CHECK(with_default.accuracy == 0.0);
    CHECK(with_tm.accuracy == 1.0);
}

TEST_CASE("class mismatch without a complement is rejected") {
    const auto table = combined_table({"x"}, {{0.5}});
    GoldLabels gold;
    gold.sample_ids = table.sample_ids;
    gold.labels = LabelMatrix({"a", "b"}, 1);
    gold.labels.set(0, 0, true);
    CHECK_THROWS_AS((void)evaluate_predictions(table, gold, nullptr, {}), DataError);

    GoldLabels three;
    three.sample_ids = table.sample_ids;
    three.labels = LabelMatrix({"x", "y", "z"}, 1);
    three.labels.set(0, 0, true);
    CHECK_THROWS_AS((void)evaluate_predictions(table, three, nullptr, {}), DataError);
}

TEST_CASE("file pipeline runs end to end and is byte-deterministic") {
    TempDir dir_a, dir_b;
    const auto spec = binary_preset(11, 900);

    for (const auto* dir : {&dir_a, &dir_b}) {
        const auto files = cmd_generate(spec, dir->path);
        CHECK(files.size() >= 8);
        const auto cfg = PipelineConfig::load(dir->path / "config.json");
        cmd_train_combiner(cfg);
        cmd_train_thresholds(cfg);
        cmd_predict(cfg, "test");
        cmd_evaluate(cfg, false);
        cmd_evaluate(cfg, true);
        cmd_verify_theorem(cfg);
    }

    for (const char* name :
         {"config.json", "synth_spec.json", "combiner.json", "thresholds.json",
          "combined_test.csv", "evaluation_mlt.json", "evaluation_mlt_tm.json",
          "theorem_verification.json", "gold_dev.csv", "model_M3_test.csv"}) {
        CAPTURE(name);
        CHECK(read_text_file(dir_a.path / name) == read_text_file(dir_b.path / name));
    }

    // A binary task needs exactly one combiner, on the positive class.
    const auto model = CombinerModel::from_json_string(
        read_text_file(dir_a.path / "combiner.json"));
    CHECK(model.class_names == std::vector<std::string>{"Hateful"});
    CHECK(model.per_class.size() == 1);

    // The evaluation carries per-group accuracies from the generated tags.
    const auto j = nlohmann::ordered_json::parse(
        read_text_file(dir_a.path / "evaluation_mlt.json"));
    CHECK(j.contains("per_group"));
    CHECK(j["per_group"].size() == 3);
}

TEST_CASE("multilabel pipeline trains five combiners") {
    TempDir dir;
    cmd_generate(multilabel_preset(23, 1200), dir.path);
    const auto cfg = PipelineConfig::load(dir.path / "config.json");
    cmd_train_combiner(cfg);
    const auto model = CombinerModel::from_json_string(read_text_file(cfg.combiner_path()));
    CHECK(model.class_names == kDefaultTaxonomy);
    CHECK(model.per_class.size() == 5);
    for (const auto& p : model.per_class) CHECK(p.weights.size() == 5);

    cmd_train_thresholds(cfg);
    const auto tv = ThresholdVector::from_json_string(read_text_file(cfg.thresholds_path()));
    CHECK(tv.class_names == kDefaultTaxonomy);
    for (double t : tv.thresholds) {
        CHECK(t > 0.0);
        CHECK(t < 1.0);
    }
    cmd_evaluate(cfg, true);
    const auto j =
        nlohmann::ordered_json::parse(read_text_file(cfg.evaluation_path(true)));
    CHECK(j["per_class"].size() == 5);
    CHECK(j["accuracy_mode"] == "exact");
}

TEST_CASE("evaluate requires the threshold artifact when asked for TM") {
    TempDir dir;
    cmd_generate(binary_preset(3, 400), dir.path);
    const auto cfg = PipelineConfig::load(dir.path / "config.json");
    cmd_train_combiner(cfg);
    CHECK_THROWS_AS((void)cmd_evaluate(cfg, true), DataError);
}

TEST_CASE("config loading validates structure") {
    TempDir dir;
    std::ofstream(dir.path / "bad.json") << "{\"format_version\": \"1\"}";
    CHECK_THROWS_AS((void)PipelineConfig::load(dir.path / "bad.json"), DataError);
    std::ofstream(dir.path / "nojson.json") << "nope";
    CHECK_THROWS_AS((void)PipelineConfig::load(dir.path / "nojson.json"), DataError);
}

TEST_CASE("majority-biased combiners train thresholds below the 0.5 default") {
    int below = 0;
    const int n_seeds = 50;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const auto data = generate(binary_preset(9000 + seed, 2000));
        std::vector<std::size_t> dev_idx;
        for (std::size_t i = 0; i < data.gold.rows(); ++i) {
            if (data.gold.splits[i] == Split::dev) dev_idx.push_back(i);
        }
        std::vector<PredictionTable> dev_tables;
        for (const auto& t : data.model_tables) dev_tables.push_back(table_subset(t, dev_idx));
        const std::vector<std::string> pos = {"Hateful"};
        const auto dev_gold = data.gold.subset(dev_idx).select_classes(pos);
        TrainingConfig cfg;
        const auto model = train_br_combiners(dev_tables, dev_gold, cfg);
        const auto tv = train_cs_cut(predict_combined(model, dev_tables), dev_gold, GridSpec{});
        if (tv.thresholds[0] < 0.5) ++below;
    }
    CHECK(below >= 45);  // >= 90% of seeds
}

TEST_CASE("missing model csv fails after generation edits") {
    TempDir dir;
    cmd_generate(binary_preset(5, 400), dir.path);
    fs::remove(dir.path / "model_M2_dev.csv");
    const auto cfg = PipelineConfig::load(dir.path / "config.json");
    try {
        cmd_train_combiner(cfg);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("M2") != std::string::npos);
    }
    CHECK_FALSE(fs::exists(cfg.combiner_path()));
}
