#include "metacomb/combiner.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace metacomb {

using ordered_json = nlohmann::ordered_json;

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ParameterError("learning_rate must be > 0");
    if (max_epochs <= 0) throw ParameterError("max_epochs must be > 0");
    if (!(grad_tolerance > 0.0)) throw ParameterError("grad_tolerance must be > 0");
    if (l2_penalty < 0.0) throw ParameterError("l2_penalty must be >= 0");
}

WeightDiagnostics weight_diagnostics(const CombinerParams& params) {
    WeightDiagnostics d;
    d.weight_sum = params.weight_sum();
    d.sign_homogeneous = params.sign_homogeneous();
    bool any_neg = false;
    for (double w : params.weights) {
        if (w < 0.0) any_neg = true;
    }
    // Nonnegative weights call for b < 0, nonpositive for b > 0 (all-zero
    // weights are treated as the nonnegative case).
    d.bias_sign_consistent =
        d.sign_homogeneous && (any_neg ? params.bias > 0.0 : params.bias < 0.0);
    return d;
}

namespace {

// ln(1 + e^z) without overflow.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

void check_training_inputs(const std::vector<std::vector<double>>& columns,
                           std::span<const std::uint8_t> gold) {
    if (columns.empty()) throw ParameterError("no model probability columns");
    const std::size_t n = gold.size();
    if (n < 2) throw DataError("need at least 2 samples to fit a combiner");
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k].size() != n) {
            throw DimensionError("model column " + std::to_string(k) + " has length " +
                                 std::to_string(columns[k].size()) + ", expected " +
                                 std::to_string(n));
        }
        for (double v : columns[k]) {
            if (!std::isfinite(v)) throw DataError("non-finite probability in training data");
        }
    }
}

double logit_for(const CombinerParams& p, const std::vector<std::vector<double>>& columns,
                 std::size_t sample) {
    double z = p.bias;
    for (std::size_t k = 0; k < columns.size(); ++k) z += p.weights[k] * columns[k][sample];
    return z;
}

double grad_norm(std::span<const double> g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
}

} // namespace

double combiner_loss(const CombinerParams& params,
                     const std::vector<std::vector<double>>& columns,
                     std::span<const std::uint8_t> gold, double l2_penalty) {
    check_training_inputs(columns, gold);
    const std::size_t n = gold.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = logit_for(params, columns, i);
        loss += softplus(z) - (gold[i] ? z : 0.0);
    }
    loss /= static_cast<double>(n);
    double sq = params.bias * params.bias;
    for (double w : params.weights) sq += w * w;
    return loss + 0.5 * l2_penalty * sq;
}

std::vector<double> combiner_gradient(const CombinerParams& params,
                                      const std::vector<std::vector<double>>& columns,
                                      std::span<const std::uint8_t> gold, double l2_penalty) {
    check_training_inputs(columns, gold);
    const std::size_t n = gold.size();
    const std::size_t k = columns.size();
    std::vector<double> g(k + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = sigmoid(logit_for(params, columns, i)) - (gold[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < k; ++j) g[j] += r * columns[j][i];
        g[k] += r;
    }
    for (double& v : g) v /= static_cast<double>(n);
    for (std::size_t j = 0; j < k; ++j) g[j] += l2_penalty * params.weights[j];
    g[k] += l2_penalty * params.bias;
    return g;
}

CombinerParams train_class_combiner(const std::vector<std::vector<double>>& columns,
                                    std::span<const std::uint8_t> gold,
                                    const TrainingConfig& cfg, TrainingMeta* meta) {
    cfg.validate();
    check_training_inputs(columns, gold);
    bool any0 = false, any1 = false;
    for (std::uint8_t v : gold) (v ? any1 : any0) = true;
    if (!any0 || !any1) {
        throw DegenerateDataError("gold column contains a single label; combiner fit undefined");
    }

    const std::size_t k = columns.size();
    CombinerParams params;
    params.weights.assign(k, 0.0);
    params.bias = 0.0;

    double loss = combiner_loss(params, columns, gold, cfg.l2_penalty);  // exactly ln 2
    TrainingMeta local;
    local.seed = cfg.seed;
    local.loss_trace.push_back(loss);

    double step = cfg.learning_rate;
    std::vector<double> g;
    int epoch = 0;
    for (; epoch < cfg.max_epochs; ++epoch) {
        g = combiner_gradient(params, columns, gold, cfg.l2_penalty);
        local.final_grad_norm = grad_norm(g);
        if (local.final_grad_norm <= cfg.grad_tolerance) break;

        // Monotone backtracking: halve until the step does not increase the
        // loss; double the starting step after a clean first-try acceptance.
        CombinerParams cand = params;
        double cand_loss = 0.0;
        int halvings = 0;
        bool accepted = false;
        for (; halvings < 60; ++halvings) {
            const double s = std::ldexp(step, -halvings);
            for (std::size_t j = 0; j < k; ++j) cand.weights[j] = params.weights[j] - s * g[j];
            cand.bias = params.bias - s * g[k];
            cand_loss = combiner_loss(cand, columns, gold, cfg.l2_penalty);
            if (cand_loss <= loss) { accepted = true; break; }
        }
        if (!accepted) break;  // numerical floor, no descent possible
        params = cand;
        loss = cand_loss;
        local.loss_trace.push_back(loss);
        step = halvings == 0 ? std::min(step * 2.0, 1e6) : std::ldexp(step, -halvings);
    }
    if (epoch == cfg.max_epochs) {
        g = combiner_gradient(params, columns, gold, cfg.l2_penalty);
        local.final_grad_norm = grad_norm(g);
    }
    local.epochs_run = epoch;
    if (meta) *meta = std::move(local);
    return params;
}

const CombinerParams& CombinerModel::params_for(const std::string& class_name) const {
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        if (class_names[c] == class_name) return per_class[c];
    }
    throw DataError("combiner model has no class '" + class_name + "'");
}

std::vector<const PredictionTable*> align_tables(std::span<const std::string> model_ids,
                                                 std::span<const PredictionTable> tables) {
    std::vector<const PredictionTable*> ordered;
    ordered.reserve(model_ids.size());
    for (const auto& id : model_ids) {
        const PredictionTable* found = nullptr;
        for (const auto& t : tables) {
            if (t.source_model == id) { found = &t; break; }
        }
        if (!found) throw DataError("missing prediction table for model '" + id + "'");
        ordered.push_back(found);
    }
    const PredictionTable& first = *ordered.front();
    for (const PredictionTable* t : ordered) {
        if (t->sample_ids != first.sample_ids) {
            throw DataError("prediction tables disagree on sample ids ('" + t->source_model +
                            "' vs '" + first.source_model + "')");
        }
        if (t->class_names != first.class_names) {
            throw DataError("prediction tables disagree on class columns ('" + t->source_model +
                            "' vs '" + first.source_model + "')");
        }
    }
    return ordered;
}

CombinerModel train_br_combiners(std::span<const PredictionTable> dev_tables,
                                 const GoldLabels& gold, const TrainingConfig& cfg) {
    cfg.validate();
    if (dev_tables.empty()) throw ParameterError("no base-model prediction tables");
    std::vector<std::string> ids;
    for (const auto& t : dev_tables) ids.push_back(t.source_model);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (ids[i] == ids[j]) throw DataError("duplicate model id '" + ids[i] + "'");
        }
    }
    const auto ordered = align_tables(ids, dev_tables);

    const PredictionTable& first = *ordered.front();
    if (first.sample_ids != gold.sample_ids) {
        throw DataError("prediction tables and gold labels disagree on sample ids");
    }
    if (first.class_names != gold.class_names()) {
        throw DataError("prediction tables and gold labels disagree on class columns");
    }

    CombinerModel model;
    model.model_ids = ids;
    model.class_names = first.class_names;
    model.config = cfg;

    for (std::size_t c = 0; c < model.class_names.size(); ++c) {
        std::vector<std::vector<double>> columns;
        columns.reserve(ordered.size());
        for (const PredictionTable* t : ordered) columns.push_back(t->column(c));
        const auto gold_col = gold.labels.column(c);
        TrainingMeta meta;
        try {
            model.per_class.push_back(train_class_combiner(columns, gold_col, cfg, &meta));
        } catch (const DegenerateDataError& e) {
            throw DegenerateDataError("class '" + model.class_names[c] + "': " + e.what());
        } catch (const DataError& e) {
            throw DataError("class '" + model.class_names[c] + "': " + e.what());
        }
        model.meta.push_back(std::move(meta));
    }
    return model;
}

PredictionTable predict_combined(const CombinerModel& model,
                                 std::span<const PredictionTable> tables) {
    const auto ordered = align_tables(model.model_ids, tables);
    const PredictionTable& first = *ordered.front();
    if (first.class_names != model.class_names) {
        throw DataError("prediction tables do not match the model's class columns");
    }

    PredictionTable out;
    out.sample_ids = first.sample_ids;
    out.class_names = model.class_names;
    out.source_model = "mlt";
    out.scores.resize(out.rows() * out.cols());

    std::vector<double> probs(model.model_ids.size());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t c = 0; c < out.cols(); ++c) {
            for (std::size_t k = 0; k < ordered.size(); ++k) probs[k] = ordered[k]->at(i, c);
            const auto& p = model.per_class[c];
            out.set(i, c, biased_sigmoid(p, combine_scores(p, probs)));
        }
    }
    return out;
}

std::string CombinerModel::to_json_string() const {
    ordered_json j;
    j["format_version"] = "1";
    j["model_ids"] = model_ids;
    j["classes"] = class_names;
    ordered_json per = ordered_json::object();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const auto& p = per_class[c];
        const auto d = weight_diagnostics(p);
        ordered_json e;
        e["weights"] = p.weights;
        e["bias"] = p.bias;
        e["weight_sum"] = d.weight_sum;
        e["sign_homogeneous"] = d.sign_homogeneous;
        e["bias_sign_consistent"] = d.bias_sign_consistent;
        per[class_names[c]] = e;
    }
    j["per_class"] = per;
    ordered_json tm;
    tm["seed"] = config.seed;
    tm["config"] = {{"learning_rate", config.learning_rate},
                    {"max_epochs", config.max_epochs},
                    {"grad_tolerance", config.grad_tolerance},
                    {"l2_penalty", config.l2_penalty}};
    ordered_json per_meta = ordered_json::object();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        ordered_json e;
        e["epochs_run"] = meta[c].epochs_run;
        e["final_gradient_norm"] = meta[c].final_grad_norm;
        e["loss_trace"] = meta[c].loss_trace;
        per_meta[class_names[c]] = e;
    }
    tm["per_class"] = per_meta;
    j["training_meta"] = tm;
    return j.dump(2) + "\n";
}

CombinerModel CombinerModel::from_json_string(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid combiner JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<std::string>() != "1") {
            throw DataError("unsupported combiner format_version");
        }
        CombinerModel model;
        model.model_ids = j.at("model_ids").get<std::vector<std::string>>();
        model.class_names = j.at("classes").get<std::vector<std::string>>();
        const auto& per = j.at("per_class");
        const auto& tm = j.at("training_meta");
        model.config.seed = tm.at("seed").get<std::uint64_t>();
        const auto& cfgj = tm.at("config");
        model.config.learning_rate = cfgj.at("learning_rate").get<double>();
        model.config.max_epochs = cfgj.at("max_epochs").get<int>();
        model.config.grad_tolerance = cfgj.at("grad_tolerance").get<double>();
        model.config.l2_penalty = cfgj.at("l2_penalty").get<double>();
        for (const auto& name : model.class_names) {
            const auto& e = per.at(name);
            CombinerParams p;
            p.weights = e.at("weights").get<std::vector<double>>();
            p.bias = e.at("bias").get<double>();
            if (p.weights.size() != model.model_ids.size()) {
                throw DataError("weight vector length does not match model_ids");
            }
            model.per_class.push_back(std::move(p));
            const auto& m = tm.at("per_class").at(name);
            TrainingMeta meta;
            meta.seed = model.config.seed;
            meta.epochs_run = m.at("epochs_run").get<int>();
            meta.final_grad_norm = m.at("final_gradient_norm").get<double>();
            meta.loss_trace = m.at("loss_trace").get<std::vector<double>>();
            model.meta.push_back(std::move(meta));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid combiner JSON: ") + e.what());
    }
}

} // namespace metacomb
