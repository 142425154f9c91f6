#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "metacomb/data_io.hpp"
#include "metacomb/log.hpp"
#include "metacomb/pipeline.hpp"

namespace {

using namespace metacomb;

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &g.base, &g.max, &g.step) != 3) {
        throw ParameterError("--grid expects base,max,step (e.g. 0.01,0.99,0.01)");
    }
    g.validate();
    return g;
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> grid;
    std::optional<std::string> accuracy_mode;
    bool fallback_argmax = false;
};

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg = PipelineConfig::load(opts.config_path);
    if (opts.seed) cfg.training.seed = *opts.seed;
    if (opts.output) cfg.output_dir = *opts.output;
    if (opts.grid) cfg.grid = parse_grid(*opts.grid);
    if (opts.accuracy_mode) cfg.evaluation.accuracy_mode = parse_accuracy_mode(*opts.accuracy_mode);
    if (opts.fallback_argmax) cfg.evaluation.fallback_argmax = true;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool eval_flags) {
    cmd->add_option("--config", opts.config_path, "Pipeline config JSON")->required();
    cmd->add_option("--seed", opts.seed, "Override the training seed");
    cmd->add_option("--output", opts.output, "Output directory for artifacts");
    cmd->add_option("--grid", opts.grid, "Threshold grid as base,max,step");
    if (eval_flags) {
        cmd->add_option("--accuracy-mode", opts.accuracy_mode, "Accuracy mode: exact|labelwise")
            ->check(CLI::IsMember({"exact", "labelwise"}));
        cmd->add_flag("--fallback-argmax", opts.fallback_argmax,
                      "Assign the top-scoring class when no class passes its threshold");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stacked-ensemble toolkit: probability combiner, per-class decision "
                 "thresholds, evaluation reports, and weight-sum bound checks"};
    app.require_subcommand(1);

    // generate
    std::string gen_spec_path;
    std::string gen_preset;
    std::string gen_output;
    std::optional<std::uint64_t> gen_seed;
    std::optional<std::size_t> gen_samples;
    auto* gen = app.add_subcommand("generate", "Write synthetic base-model predictions and gold "
                                               "labels plus a ready pipeline config");
    auto* spec_opt = gen->add_option("--config", gen_spec_path, "Synthetic spec JSON");
    auto* preset_opt =
        gen->add_option("--preset", gen_preset, "Built-in spec: binary|binary-flipped|multilabel")
            ->check(CLI::IsMember({"binary", "binary-flipped", "multilabel"}));
    spec_opt->excludes(preset_opt);
    gen->add_option("--seed", gen_seed, "Override the spec seed");
    gen->add_option("--n-samples", gen_samples, "Override the spec sample count");
    gen->add_option("--output", gen_output, "Output directory")->required();

    CommonOpts train_opts;
    auto* train = app.add_subcommand("train-combiner",
                                     "Fit per-class combiner weights on the dev split");
    add_common(train, train_opts, false);

    CommonOpts thr_opts;
    auto* thr = app.add_subcommand("train-thresholds",
                                   "Grid-search per-class F1-optimal thresholds on the dev split");
    add_common(thr, thr_opts, false);

    CommonOpts pred_opts;
    std::string pred_split = "test";
    auto* pred = app.add_subcommand("predict", "Write combined probability scores for a split");
    add_common(pred, pred_opts, false);
    pred->add_option("--split", pred_split, "Split to score (train|dev|test)")
        ->check(CLI::IsMember({"train", "dev", "test"}));

    CommonOpts eval_opts;
    std::string eval_split = "test";
    bool with_tm = false;
    auto* eval = app.add_subcommand("evaluate", "Report per-class P/R/F1, macro-F1 and accuracy");
    add_common(eval, eval_opts, true);
    eval->add_flag("--with-tm", with_tm, "Apply trained thresholds instead of the 0.5 default");
    eval->add_option("--split", eval_split, "Split to evaluate (train|dev|test)")
        ->check(CLI::IsMember({"train", "dev", "test"}));

    CommonOpts verify_opts;
    auto* verify = app.add_subcommand("verify-theorem",
                                      "Check the weight-sum bound interval per class on dev data");
    add_common(verify, verify_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            SyntheticSpec spec;
            if (!gen_spec_path.empty()) {
                spec = SyntheticSpec::from_json_string(read_text_file(gen_spec_path));
            } else if (gen_preset == "binary") {
                spec = binary_preset(gen_seed.value_or(0));
            } else if (gen_preset == "binary-flipped") {
                spec = binary_flipped_preset(gen_seed.value_or(0));
            } else if (gen_preset == "multilabel") {
                spec = multilabel_preset(gen_seed.value_or(0));
            } else {
                throw ParameterError("generate needs --config or --preset");
            }
            if (gen_seed) spec.seed = *gen_seed;
            if (gen_samples) spec.n_samples = *gen_samples;
            cmd_generate(spec, gen_output);
        } else if (train->parsed()) {
            cmd_train_combiner(resolve_config(train_opts));
        } else if (thr->parsed()) {
            cmd_train_thresholds(resolve_config(thr_opts));
        } else if (pred->parsed()) {
            cmd_predict(resolve_config(pred_opts), pred_split);
        } else if (eval->parsed()) {
            cmd_evaluate(resolve_config(eval_opts), with_tm, eval_split);
        } else if (verify->parsed()) {
            cmd_verify_theorem(resolve_config(verify_opts));
        }
    } catch (const std::exception& e) {
        log_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
