#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "scan/cli/commands.hpp"
#include "scan/util/error.hpp"

// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal numeric error.
int main(int argc, char** argv) {
    CLI::App app{"scan - synthesize SAXS curves, train shape classifiers, evaluate and predict"};
    app.require_subcommand(1);

    scan::cli::GenerateConfig gen;
    auto* generate = app.add_subcommand("generate", "generate a labeled synthetic dataset");
    generate->add_option("--classes", gen.classes,
                         "class names or 'all' (default all 12 classes)")
        ->delimiter(',');
    generate->add_option("--curves-per-class", gen.curves_per_class, "curves per class");
    generate->add_option("--seed", gen.seed, "generation seed");
    generate->add_option("--out", gen.out_dir, "output directory (default $SCAN_HOME or .)");
    generate->add_option("--threads", gen.threads, "worker threads (default: all cores)");
    generate->add_flag("--noiseless", gen.noiseless, "skip the Poisson counting-noise stage");

    scan::cli::EvaluateConfig ev;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validate classifiers on a dataset");
    evaluate->add_option("--dataset", ev.dataset_path, "dataset CSV")->required();
    evaluate->add_option("--qgrid", ev.qgrid_path, "q grid CSV (default: qgrid.csv next to dataset)");
    evaluate->add_option("--classifier", ev.classifiers,
                         "classifier names, 'all', 'all-stack' or 'top5-stack'")
        ->delimiter(',');
    evaluate->add_option("--stack", ev.stacks, "stacked ensembles: 'all' and/or 'top5'")
        ->delimiter(',');
    evaluate->add_option("--variant", ev.variants, "input variants: all, pca99, pca95")
        ->delimiter(',');
    evaluate->add_flag("--full-matrix", ev.full_matrix,
                       "evaluate 9 classifiers + 2 stacks across all 3 variants (33 reports)");
    evaluate->add_option("--folds", ev.folds, "cross-validation folds");
    evaluate->add_option("--seed", ev.seed, "fold-split and training seed");
    evaluate->add_option("--out", ev.out_dir, "report directory");
    evaluate->add_option("--threads", ev.threads, "worker threads");

    scan::cli::TrainConfig tr;
    auto* train = app.add_subcommand("train", "train model artifacts on a full dataset");
    train->add_option("--dataset", tr.dataset_path, "dataset CSV")->required();
    train->add_option("--qgrid", tr.qgrid_path, "q grid CSV");
    train->add_option("--classifier", tr.classifiers,
                      "classifier names, 'all', 'all-stack', 'top5-stack' "
                      "(default: random_forest gradient_boosted_trees)")
        ->delimiter(',');
    train->add_option("--variant", tr.variant, "input variant: all, pca99 or pca95");
    train->add_option("--seed", tr.seed, "training seed");
    train->add_option("--out", tr.out_dir, "artifact directory");
    train->add_option("--threads", tr.threads, "worker threads");

    scan::cli::PredictConfig pr;
    auto* predict = app.add_subcommand("predict", "classify curves with trained artifacts");
    predict->add_option("--model", pr.model_paths, "model artifact path (repeatable)")->required();
    predict->add_option("--dataset", pr.dataset_path, "curve CSV (label column optional)")
        ->required();
    predict->add_option("--qgrid", pr.qgrid_path, "q grid CSV of the input curves");
    predict->add_option("--out", pr.out_dir, "output directory");
    predict->add_option("--threads", pr.threads, "worker threads");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return scan::cli::cmd_generate(gen);
        if (evaluate->parsed()) return scan::cli::cmd_evaluate(ev);
        if (train->parsed()) return scan::cli::cmd_train(tr);
        if (predict->parsed()) return scan::cli::cmd_predict(pr);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const scan::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const scan::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
