#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "metacomb/combiner.hpp"
#include "metacomb/rng.hpp"

using namespace metacomb;

namespace {

// Overlapping two-cluster scores: informative but never separable.
void make_training_data(Rng& rng, std::size_t n, std::size_t k,
                        std::vector<std::vector<double>>& columns,
                        std::vector<std::uint8_t>& gold) {
    columns.assign(k, std::vector<double>(n));
    gold.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gold[i] = rng.bernoulli(0.4) ? 1 : 0;
        for (std::size_t j = 0; j < k; ++j) {
            columns[j][i] = gold[i] ? rng.beta(1.8, 1.2) : rng.beta(1.2, 1.8);
        }
    }
    gold[0] = 0;  // both labels present regardless of the draw
    gold[1] = 1;
}

} // namespace

TEST_CASE("BCE loss at the origin is ln 2") {
    std::vector<std::vector<double>> columns = {{0.1, 0.9, 0.4}};
    std::vector<std::uint8_t> gold = {0, 1, 1};
    CombinerParams p;
    p.weights = {0.0};
    CHECK(combiner_loss(p, columns, gold, 0.0) == std::log(2.0));
    CHECK(combiner_loss(p, columns, gold, 1e-6) == std::log(2.0));  // penalty vanishes at 0
}

TEST_CASE("gradient at the origin matches the hand computation") {
    std::vector<std::vector<double>> columns = {{1.0, 0.0}};
    std::vector<std::uint8_t> gold = {1, 0};
    CombinerParams p;
    p.weights = {0.0};
    const auto g = combiner_gradient(p, columns, gold, 0.0);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == -0.25);
    CHECK(g[1] == 0.0);
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(41);
    std::vector<std::vector<double>> columns;
    std::vector<std::uint8_t> gold;
    make_training_data(rng, 60, 3, columns, gold);
    const double l2 = 1e-6;
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        CombinerParams p;
        for (int j = 0; j < 3; ++j) p.weights.push_back(rng.uniform() * 4.0 - 2.0);
        p.bias = rng.uniform() * 4.0 - 2.0;
        const auto g = combiner_gradient(p, columns, gold, l2);
        for (std::size_t d = 0; d < 4; ++d) {
            CombinerParams lo = p, hi = p;
            if (d < 3) {
                lo.weights[d] -= h;
                hi.weights[d] += h;
            } else {
                lo.bias -= h;
                hi.bias += h;
            }
            const double fd = (combiner_loss(hi, columns, gold, l2) -
                               combiner_loss(lo, columns, gold, l2)) / (2.0 * h);
            CHECK(g[d] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("training is monotone and converges on non-separable data") {
    Rng rng(42);
    std::vector<std::vector<double>> columns;
    std::vector<std::uint8_t> gold;
    make_training_data(rng, 300, 3, columns, gold);

    TrainingConfig cfg;
    TrainingMeta meta;
    const auto params = train_class_combiner(columns, gold, cfg, &meta);

    REQUIRE(!meta.loss_trace.empty());
    // Accumulated per-sample terms can drift a ulp from ln 2 itself.
    CHECK(meta.loss_trace.front() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    for (std::size_t i = 1; i < meta.loss_trace.size(); ++i) {
        CHECK(meta.loss_trace[i] <= meta.loss_trace[i - 1]);
    }
    CHECK(meta.loss_trace.back() <= std::log(2.0));
    CHECK(meta.final_grad_norm <= 1e-6);
    CHECK(params.weights.size() == 3);
}

TEST_CASE("trained loss beats every probe point") {
    Rng rng(43);
    std::vector<std::vector<double>> columns;
    std::vector<std::uint8_t> gold;
    make_training_data(rng, 250, 4, columns, gold);

    TrainingConfig cfg;
    const auto params = train_class_combiner(columns, gold, cfg);
    const double trained_bce = combiner_loss(params, columns, gold, 0.0);

    for (std::size_t i = 0; i < 4; ++i) {
        CombinerParams probe;
        probe.weights.assign(4, 0.0);
        probe.weights[i] = 1.0;
        // The optimum of the regularized loss can trail a probe's raw BCE by
        // at most the probe's own penalty term.
        const double slack = 0.5 * cfg.l2_penalty * 1.0;
        CHECK(trained_bce <= combiner_loss(probe, columns, gold, 0.0) + slack);
    }
    for (int trial = 0; trial < 10; ++trial) {
        CombinerParams probe;
        double sq = 0.0;
        for (int j = 0; j < 4; ++j) {
            probe.weights.push_back(rng.uniform() * 6.0 - 3.0);
            sq += probe.weights[j] * probe.weights[j];
        }
        probe.bias = rng.uniform() * 4.0 - 2.0;
        sq += probe.bias * probe.bias;
        CHECK(trained_bce <=
              combiner_loss(probe, columns, gold, 0.0) + 0.5 * cfg.l2_penalty * sq);
    }
}

TEST_CASE("separable single-model data is classified perfectly") {
    std::vector<std::vector<double>> columns = {{0.9, 0.8, 0.75, 0.2, 0.1, 0.15}};
    std::vector<std::uint8_t> gold = {1, 1, 1, 0, 0, 0};
    TrainingConfig cfg;
    const auto params = train_class_combiner(columns, gold, cfg);
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const double score = biased_sigmoid(params, params.weights[0] * columns[0][i]);
        CHECK((score >= 0.5) == (gold[i] == 1));
    }
}

TEST_CASE("training rejects degenerate and malformed inputs") {
    std::vector<std::vector<double>> columns = {{0.1, 0.9}};
    std::vector<std::uint8_t> ones = {1, 1};
    TrainingConfig cfg;
    CHECK_THROWS_AS((void)train_class_combiner(columns, ones, cfg), DegenerateDataError);

    std::vector<std::vector<double>> with_nan = {{0.1, std::nan("")}};
    std::vector<std::uint8_t> gold = {0, 1};
    CHECK_THROWS_AS((void)train_class_combiner(with_nan, gold, cfg), DataError);

    std::vector<std::vector<double>> ragged = {{0.1, 0.9}, {0.3}};
    CHECK_THROWS_AS((void)train_class_combiner(ragged, gold, cfg), DimensionError);

    TrainingConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS((void)train_class_combiner(columns, gold, bad), ParameterError);
}

TEST_CASE("retraining is bit-identical") {
    Rng rng(44);
    std::vector<std::vector<double>> columns;
    std::vector<std::uint8_t> gold;
    make_training_data(rng, 150, 2, columns, gold);
    TrainingConfig cfg;
    TrainingMeta m1, m2;
    const auto p1 = train_class_combiner(columns, gold, cfg, &m1);
    const auto p2 = train_class_combiner(columns, gold, cfg, &m2);
    CHECK(p1.weights == p2.weights);
    CHECK(p1.bias == p2.bias);
    CHECK(m1.loss_trace == m2.loss_trace);
    CHECK(m1.epochs_run == m2.epochs_run);
}

namespace {

PredictionTable table_from_columns(const std::string& id, std::vector<std::string> classes,
                                   const std::vector<std::vector<double>>& per_class_cols) {
    PredictionTable t;
    t.source_model = id;
    t.class_names = std::move(classes);
    const std::size_t n = per_class_cols.front().size();
    for (std::size_t i = 0; i < n; ++i) t.sample_ids.push_back("s" + std::to_string(i));
    t.scores.resize(n * t.class_names.size());
    for (std::size_t c = 0; c < t.class_names.size(); ++c) {
        for (std::size_t i = 0; i < n; ++i) t.set(i, c, per_class_cols[c][i]);
    }
    return t;
}

} // namespace

TEST_CASE("train_br_combiners fits one combiner per class") {
    Rng rng(45);
    const std::size_t n = 120;
    std::vector<std::string> classes = {"A", "B"};
    std::vector<std::vector<double>> colsA(2), colsB(2);
    std::vector<std::uint8_t> goldA(n), goldB(n);
    for (std::size_t i = 0; i < n; ++i) {
        goldA[i] = rng.bernoulli(0.5) ? 1 : 0;
        goldB[i] = goldA[i];  // identical class data
    }
    goldA[0] = goldB[0] = 0;
    goldA[1] = goldB[1] = 1;
    std::vector<PredictionTable> tables;
    for (int k = 0; k < 2; ++k) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = goldA[i] ? rng.beta(2.0, 1.2) : rng.beta(1.2, 2.0);
        }
        tables.push_back(table_from_columns("M" + std::to_string(k + 1), classes, {col, col}));
    }
    GoldLabels gold;
    gold.sample_ids = tables[0].sample_ids;
    gold.labels = LabelMatrix(classes, n);
    for (std::size_t i = 0; i < n; ++i) {
        gold.labels.set(i, 0, goldA[i] != 0);
        gold.labels.set(i, 1, goldB[i] != 0);
    }

    TrainingConfig cfg;
    const auto model = train_br_combiners(tables, gold, cfg);
    CHECK(model.class_names == classes);
    CHECK(model.per_class.size() == 2);
    // Identical per-class data trains to identical parameters.
    CHECK(model.per_class[0].weights == model.per_class[1].weights);
    CHECK(model.per_class[0].bias == model.per_class[1].bias);
}

TEST_CASE("per-class results do not depend on class column order") {
    Rng rng(47);
    const std::size_t n = 100;
    std::vector<double> colA(n), colB(n);
    std::vector<std::uint8_t> goldA(n), goldB(n);
    for (std::size_t i = 0; i < n; ++i) {
        goldA[i] = rng.bernoulli(0.5) ? 1 : 0;
        goldB[i] = rng.bernoulli(0.3) ? 1 : 0;
        colA[i] = goldA[i] ? rng.beta(2.0, 1.2) : rng.beta(1.2, 2.0);
        colB[i] = goldB[i] ? rng.beta(2.2, 1.3) : rng.beta(1.3, 2.2);
    }
    goldA[0] = goldB[0] = 0;
    goldA[1] = goldB[1] = 1;

    const auto build = [&](bool swapped) {
        std::vector<std::string> classes =
            swapped ? std::vector<std::string>{"B", "A"} : std::vector<std::string>{"A", "B"};
        const auto& first = swapped ? colB : colA;
        const auto& second = swapped ? colA : colB;
        std::vector<PredictionTable> tables = {
            table_from_columns("M1", classes, {first, second})};
        GoldLabels gold;
        gold.sample_ids = tables[0].sample_ids;
        gold.labels = LabelMatrix(classes, n);
        for (std::size_t i = 0; i < n; ++i) {
            gold.labels.set(i, 0, (swapped ? goldB : goldA)[i] != 0);
            gold.labels.set(i, 1, (swapped ? goldA : goldB)[i] != 0);
        }
        TrainingConfig cfg;
        return train_br_combiners(tables, gold, cfg);
    };

    const auto forward = build(false);
    const auto swapped = build(true);
    CHECK(forward.params_for("A").weights == swapped.params_for("A").weights);
    CHECK(forward.params_for("A").bias == swapped.params_for("A").bias);
    CHECK(forward.params_for("B").weights == swapped.params_for("B").weights);
    CHECK(forward.params_for("B").bias == swapped.params_for("B").bias);
}

TEST_CASE("degenerate class errors carry the class name") {
    std::vector<std::string> classes = {"Always"};
    std::vector<double> col = {0.4, 0.6};
    auto table = table_from_columns("M1", classes, {col});
    GoldLabels gold;
    gold.sample_ids = table.sample_ids;
    gold.labels = LabelMatrix(classes, 2);
    gold.labels.set(0, 0, true);
    gold.labels.set(1, 0, true);
    TrainingConfig cfg;
    try {
        (void)train_br_combiners({&table, 1}, gold, cfg);
        FAIL("expected DegenerateDataError");
    } catch (const DegenerateDataError& e) {
        CHECK(std::string(e.what()).find("Always") != std::string::npos);
    }
}

TEST_CASE("predict_combined applies the biased sigmoid") {
    std::vector<std::string> classes = {"C"};
    auto t1 = table_from_columns("M1", classes, {{0.6}});
    auto t2 = table_from_columns("M2", classes, {{0.8}});
    CombinerModel model;
    model.model_ids = {"M1", "M2"};
    model.class_names = classes;
    CombinerParams p;
    p.weights = {0.5, 0.5};
    p.bias = 0.0;
    model.per_class = {p};
    model.meta.resize(1);

    std::vector<PredictionTable> tables = {t1, t2};
    const auto out = predict_combined(model, tables);
    CHECK(out.at(0, 0) == doctest::Approx(0.6681877721681662).epsilon(1e-12));
    CHECK(out.source_model == "mlt");

    // All-zero weights with zero bias sit at one half.
    model.per_class[0].weights = {0.0, 0.0};
    CHECK(predict_combined(model, tables).at(0, 0) == 0.5);
}

TEST_CASE("permuting models together with weights leaves predictions unchanged") {
    std::vector<std::string> classes = {"C"};
    auto t1 = table_from_columns("M1", classes, {{0.6, 0.2, 0.9}});
    auto t2 = table_from_columns("M2", classes, {{0.8, 0.4, 0.3}});

    CombinerModel m12;
    m12.model_ids = {"M1", "M2"};
    m12.class_names = classes;
    m12.per_class = {CombinerParams{{0.7, 0.2}, -0.4}};
    m12.meta.resize(1);

    CombinerModel m21;
    m21.model_ids = {"M2", "M1"};
    m21.class_names = classes;
    m21.per_class = {CombinerParams{{0.2, 0.7}, -0.4}};
    m21.meta.resize(1);

    std::vector<PredictionTable> tables = {t1, t2};
    CHECK(predict_combined(m12, tables).scores == predict_combined(m21, tables).scores);
}

TEST_CASE("predict_combined reports missing tables") {
    std::vector<std::string> classes = {"C"};
    auto t1 = table_from_columns("M1", classes, {{0.6}});
    CombinerModel model;
    model.model_ids = {"M1", "M2"};
    model.class_names = classes;
    model.per_class = {CombinerParams{{0.5, 0.5}, 0.0}};
    model.meta.resize(1);
    std::vector<PredictionTable> tables = {t1};
    try {
        (void)predict_combined(model, tables);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("M2") != std::string::npos);
    }
}

TEST_CASE("weight diagnostics") {
    CombinerParams two;
    two.weights = {1.246, 0.885};
    two.bias = -1.0;
    auto d = weight_diagnostics(two);
    CHECK(d.weight_sum == doctest::Approx(2.131).epsilon(1e-12));
    CHECK(d.sign_homogeneous);
    CHECK(d.bias_sign_consistent);

    CombinerParams five;
    five.weights = {0.327, 0.367, 0.496, 0.225, 0.419};
    five.bias = 0.3;  // positive bias with nonnegative weights is flagged
    d = weight_diagnostics(five);
    CHECK(d.weight_sum == doctest::Approx(1.834).epsilon(1e-12));
    CHECK(d.sign_homogeneous);
    CHECK_FALSE(d.bias_sign_consistent);

    CombinerParams unit;
    unit.weights = {1.0};
    unit.bias = -0.2;
    d = weight_diagnostics(unit);
    CHECK(d.weight_sum == 1.0);
    CHECK(d.sign_homogeneous);
    CHECK(d.bias_sign_consistent);

    CombinerParams negative;
    negative.weights = {-0.5, -0.25};
    negative.bias = 0.7;
    d = weight_diagnostics(negative);
    CHECK(d.sign_homogeneous);
    CHECK(d.bias_sign_consistent);
}

TEST_CASE("model JSON round-trips value-exact") {
    Rng rng(46);
    std::vector<std::vector<double>> columns;
    std::vector<std::uint8_t> gold_col;
    make_training_data(rng, 100, 2, columns, gold_col);

    std::vector<std::string> classes = {"C"};
    std::vector<PredictionTable> tables;
    tables.push_back(table_from_columns("M1", classes, {columns[0]}));
    tables.push_back(table_from_columns("M2", classes, {columns[1]}));
    GoldLabels gold;
    gold.sample_ids = tables[0].sample_ids;
    gold.labels = LabelMatrix(classes, gold_col.size());
    for (std::size_t i = 0; i < gold_col.size(); ++i) gold.labels.set(i, 0, gold_col[i] != 0);

    TrainingConfig cfg;
    cfg.seed = 99;
    const auto model = train_br_combiners(tables, gold, cfg);
    const std::string json = model.to_json_string();
    const auto reloaded = CombinerModel::from_json_string(json);

    CHECK(reloaded.model_ids == model.model_ids);
    CHECK(reloaded.per_class[0].weights == model.per_class[0].weights);
    CHECK(reloaded.per_class[0].bias == model.per_class[0].bias);
    CHECK(reloaded.meta[0].loss_trace == model.meta[0].loss_trace);
    CHECK(reloaded.config.seed == 99);
    CHECK(reloaded.to_json_string() == json);

    // Reloaded model predicts identically.
    CHECK(predict_combined(reloaded, tables).scores == predict_combined(model, tables).scores);
}

TEST_CASE("model JSON parse rejects garbage") {
    CHECK_THROWS_AS((void)CombinerModel::from_json_string("not json"), DataError);
    CHECK_THROWS_AS((void)CombinerModel::from_json_string("{}"), DataError);
}
