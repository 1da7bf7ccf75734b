#include "scan/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include <json.hpp>

#include "scan/io/artifact.hpp"
#include "scan/io/csv.hpp"
#include "scan/pipeline.hpp"
#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"

namespace scan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int effective_threads(int flag) { return flag > 0 ? flag : hardware_threads(); }

std::string prepare_out_dir(const std::string& out_flag) {
    const std::string dir = resolve_out_dir(out_flag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

void write_manifest(const std::string& out_dir, const std::string& command, const json& flags) {
    json manifest;
    manifest["command"] = command;
    manifest["flags"] = flags;
    write_file_atomic(out_dir + "/" + command + "_manifest.json", manifest.dump(2) + "\n");
}

std::vector<ShapeClass> resolve_classes(const std::vector<std::string>& tokens) {
    std::vector<ShapeClass> classes;
    for (const auto& token : tokens) {
        if (token == "all") {
            for (int c = 0; c < kNumShapeClasses; ++c) classes.push_back(static_cast<ShapeClass>(c));
        } else {
            try {
                classes.push_back(shape_class_from_string(token));
            } catch (const DataError& e) {
                throw UsageError(e.what());
            }
        }
    }
    std::set<ShapeClass> unique(classes.begin(), classes.end());
    if (unique.size() != classes.size()) throw UsageError("duplicate class in --classes");
    if (classes.empty()) throw UsageError("no classes selected");
    return classes;
}

struct Selection {
    std::vector<Algorithm> individuals;
    bool stack_all = false;
    bool stack_top5 = false;
};

Selection resolve_selection(const std::vector<std::string>& classifiers,
                            const std::vector<std::string>& stacks, bool full_matrix) {
    Selection sel;
    std::set<Algorithm> chosen;
    for (const auto& token : classifiers) {
        if (token == "all") {
            for (Algorithm a : suite_algorithms()) chosen.insert(a);
        } else if (token == "all-stack") {
            sel.stack_all = true;
        } else if (token == "top5-stack") {
            sel.stack_top5 = true;
        } else {
            try {
                chosen.insert(algorithm_from_string(token));
            } catch (const DataError& e) {
                throw UsageError(e.what());
            }
        }
    }
    for (const auto& token : stacks) {
        if (token == "all") {
            sel.stack_all = true;
        } else if (token == "top5") {
            sel.stack_top5 = true;
        } else {
            throw UsageError("unknown stack '" + token + "' (expected all or top5)");
        }
    }
    if (full_matrix) {
        for (Algorithm a : suite_algorithms()) chosen.insert(a);
        sel.stack_all = sel.stack_top5 = true;
    }
    // deterministic suite order
    for (Algorithm a : suite_algorithms()) {
        if (chosen.count(a)) sel.individuals.push_back(a);
    }
    for (Algorithm a : chosen) {
        if (std::find(sel.individuals.begin(), sel.individuals.end(), a) ==
            sel.individuals.end()) {
            sel.individuals.push_back(a); // logistic_regression, selectable by name
        }
    }
    return sel;
}

ClassifierSpec make_spec(Algorithm a, std::uint64_t seed) {
    ClassifierSpec spec;
    spec.algorithm = a;
    spec.seed = seed;
    return spec;
}

StackSpec make_stack(const std::vector<Algorithm>& bases, std::uint64_t seed) {
    StackSpec stack;
    for (Algorithm a : bases) stack.bases.push_back(make_spec(a, seed));
    stack.seed = seed;
    stack.meta = make_spec(Algorithm::logistic_regression, seed);
    return stack;
}

std::string qgrid_path_for(const EvaluateConfig& c) {
    if (!c.qgrid_path.empty()) return c.qgrid_path;
    return (fs::path(c.dataset_path).parent_path() / "qgrid.csv").string();
}

Dataset load_dataset(const std::string& dataset_path, const std::string& qgrid_path) {
    const QGrid q = read_qgrid_csv(qgrid_path);
    return read_curves_csv(dataset_path, q);
}

void emit_report(const std::string& out_dir, const EvalReport& rep) {
    const std::string stem = out_dir + "/" + report_stem(rep);
    write_report_csv(stem + "_report.csv", rep);
    if (rep.failed) {
        std::cout << rep.classifier << " " << to_string(rep.variant) << " FAILED: " << rep.error
                  << "\n";
        return;
    }
    write_timing_csv(stem + "_timing.csv", rep);
    char line[64];
    std::snprintf(line, sizeof(line), "%.3f (%.3f)", rep.mean, rep.stddev);
    std::cout << rep.classifier << " " << to_string(rep.variant) << " " << line;
    if (!rep.pca_components.empty()) {
        std::cout << " [components:";
        for (int k : rep.pca_components) std::cout << " " << k;
        std::cout << "]";
    }
    std::cout << "\n";
}

} // namespace

std::string resolve_out_dir(const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (const char* home = std::getenv("SCAN_HOME"); home && *home) return home;
    return ".";
}

int cmd_generate(const GenerateConfig& config) {
    if (config.curves_per_class < 1) throw UsageError("--curves-per-class must be >= 1");
    const auto classes = resolve_classes(config.classes);
    const std::string out_dir = prepare_out_dir(config.out_dir);
    const int threads = effective_threads(config.threads);

    const QGrid q = QGrid::standard();
    GenerateOptions opts;
    opts.noiseless = config.noiseless;
    opts.threads = threads;
    const Dataset ds = generate_dataset(classes, config.curves_per_class, q, config.seed, opts);

    write_qgrid_csv(out_dir + "/qgrid.csv", q);
    write_dataset_csv(out_dir + "/dataset.csv", ds);

    json flags;
    flags["classes"] = config.classes;
    flags["curves_per_class"] = config.curves_per_class;
    flags["seed"] = config.seed;
    flags["noiseless"] = config.noiseless;
    flags["out"] = out_dir;
    write_manifest(out_dir, "generate", flags);

    const auto counts = ds.class_counts();
    std::cout << "generated " << ds.curves.size() << " curves:";
    for (int c = 0; c < kNumShapeClasses; ++c) {
        if (counts[c] > 0) {
            std::cout << " " << to_string(static_cast<ShapeClass>(c)) << "=" << counts[c];
        }
    }
    std::cout << "\nwrote " << out_dir << "/dataset.csv and " << out_dir << "/qgrid.csv\n";
    return 0;
}

int cmd_evaluate(const EvaluateConfig& config) {
    if (config.dataset_path.empty()) throw UsageError("--dataset is required");
    Selection sel = resolve_selection(config.classifiers, config.stacks, config.full_matrix);
    if (sel.individuals.empty() && !sel.stack_all && !sel.stack_top5) {
        for (Algorithm a : suite_algorithms()) sel.individuals.push_back(a);
    }
    std::vector<Variant> variants;
    if (config.full_matrix) {
        variants = {Variant::all, Variant::pca99, Variant::pca95};
    } else {
        for (const auto& v : config.variants) {
            try {
                variants.push_back(variant_from_string(v));
            } catch (const DataError& e) {
                throw UsageError(e.what());
            }
        }
    }
    if (variants.empty()) throw UsageError("no variant selected");

    const std::string out_dir = prepare_out_dir(config.out_dir);
    const int threads = effective_threads(config.threads);
    const Dataset ds = load_dataset(config.dataset_path, qgrid_path_for(config));

    json flags;
    flags["dataset"] = config.dataset_path;
    flags["qgrid"] = qgrid_path_for(config);
    flags["classifiers"] = config.classifiers;
    flags["stacks"] = config.stacks;
    flags["variants"] = config.variants;
    flags["full_matrix"] = config.full_matrix;
    flags["folds"] = config.folds;
    flags["seed"] = config.seed;
    flags["out"] = out_dir;
    write_manifest(out_dir, "evaluate", flags);

    // individuals first (stacked-top5 ranking needs them)
    std::vector<Algorithm> individuals = sel.individuals;
    if (sel.stack_top5) {
        for (Algorithm a : suite_algorithms()) {
            if (std::find(individuals.begin(), individuals.end(), a) == individuals.end()) {
                individuals.push_back(a);
            }
        }
    }
    std::vector<EvalEntry> entries;
    for (Algorithm a : individuals) entries.push_back(EvalEntry::single(make_spec(a, config.seed)));

    std::size_t succeeded = 0, failed = 0;
    const auto observer = [&](const EvalReport& rep) {
        emit_report(out_dir, rep);
        rep.failed ? ++failed : ++succeeded;
    };

    std::vector<EvalReport> individual_reports;
    if (!entries.empty()) {
        individual_reports =
            run_matrix(ds, entries, variants, config.folds, config.seed, threads, observer);
    }
    if (sel.stack_all) {
        const auto entry = EvalEntry::stacked("stacked_all", make_stack(suite_algorithms(),
                                                                        config.seed));
        run_matrix(ds, {entry}, variants, config.folds, config.seed, threads, observer);
    }
    if (sel.stack_top5) {
        for (Variant v : variants) {
            const auto top5 = top_algorithms(individual_reports, v, 5);
            if (top5.size() < 2) {
                std::cout << "stacked_top5 " << to_string(v)
                          << " FAILED: not enough individual results to rank\n";
                ++failed;
                continue;
            }
            const auto entry = EvalEntry::stacked("stacked_top5", make_stack(top5, config.seed));
            run_matrix(ds, {entry}, {v}, config.folds, config.seed, threads, observer);
        }
    }
    if (succeeded == 0) throw NumericError("every requested combination failed");
    return 0;
}

int cmd_train(const TrainConfig& config) {
    if (config.dataset_path.empty()) throw UsageError("--dataset is required");
    std::vector<std::string> classifier_tokens = config.classifiers;
    if (classifier_tokens.empty()) {
        classifier_tokens = {"random_forest", "gradient_boosted_trees"};
    }
    const Selection sel = resolve_selection(classifier_tokens, {}, false);
    Variant variant;
    try {
        variant = variant_from_string(config.variant);
    } catch (const DataError& e) {
        throw UsageError(e.what());
    }

    const std::string out_dir = prepare_out_dir(config.out_dir);
    const int threads = effective_threads(config.threads);
    EvaluateConfig grid_lookup;
    grid_lookup.dataset_path = config.dataset_path;
    grid_lookup.qgrid_path = config.qgrid_path;
    const Dataset ds = load_dataset(config.dataset_path, qgrid_path_for(grid_lookup));

    json flags;
    flags["dataset"] = config.dataset_path;
    flags["qgrid"] = qgrid_path_for(grid_lookup);
    flags["classifiers"] = classifier_tokens;
    flags["variant"] = config.variant;
    flags["seed"] = config.seed;
    flags["out"] = out_dir;
    write_manifest(out_dir, "train", flags);

    std::vector<EvalEntry> entries;
    for (Algorithm a : sel.individuals) entries.push_back(EvalEntry::single(make_spec(a, config.seed)));
    if (sel.stack_all) {
        entries.push_back(EvalEntry::stacked("stacked_all", make_stack(suite_algorithms(),
                                                                       config.seed)));
    }
    if (sel.stack_top5) {
        // rank by an internal cross-validation of the full suite
        std::vector<EvalEntry> suite;
        for (Algorithm a : suite_algorithms()) suite.push_back(EvalEntry::single(make_spec(a, config.seed)));
        const auto reports = run_matrix(ds, suite, {variant}, 5, config.seed, threads);
        const auto top5 = top_algorithms(reports, variant, 5);
        if (top5.size() < 2) throw NumericError("top5-stack: ranking failed");
        entries.push_back(EvalEntry::stacked("stacked_top5", make_stack(top5, config.seed)));
    }

    for (const auto& entry : entries) {
        const Pipeline pipeline = train_pipeline(ds, entry, variant, threads);
        const std::string path =
            out_dir + "/" + entry.name + "_" + to_string(variant) + ".scanmodel";
        save_model(pipeline, path);
        std::cout << "trained " << entry.name << " (" << to_string(variant) << ") -> " << path
                  << "\n";
    }
    return 0;
}

int cmd_predict(const PredictConfig& config) {
    if (config.model_paths.empty()) throw UsageError("at least one --model is required");
    if (config.dataset_path.empty()) throw UsageError("--dataset is required");

    const std::string out_dir = prepare_out_dir(config.out_dir);
    const int threads = effective_threads(config.threads);
    EvaluateConfig grid_lookup;
    grid_lookup.dataset_path = config.dataset_path;
    grid_lookup.qgrid_path = config.qgrid_path;
    const std::string qgrid_path = qgrid_path_for(grid_lookup);
    const Dataset ds = load_dataset(config.dataset_path, qgrid_path);

    json flags;
    flags["models"] = config.model_paths;
    flags["dataset"] = config.dataset_path;
    flags["qgrid"] = qgrid_path;
    flags["out"] = out_dir;
    write_manifest(out_dir, "predict", flags);

    std::vector<PredictionBlock> blocks;
    std::set<std::string> used_names;
    for (const auto& model_path : config.model_paths) {
        const Pipeline model = load_model(model_path);
        if (!model.q.matches(ds.q)) {
            throw DataError("q grid mismatch: model '" + model_path +
                            "' was trained on a different grid than the input curves");
        }
        std::string name = model.name.empty() ? "model" : model.name;
        int suffix = 2;
        while (used_names.count(name)) {
            name = (model.name.empty() ? "model" : model.name) + "_" + std::to_string(suffix++);
        }
        used_names.insert(name);

        const Eigen::MatrixXd proba = model.predict_proba(ds, threads);
        PredictionBlock block;
        block.name = name;
        block.labels.reserve(proba.rows());
        block.confidences.reserve(proba.rows());
        long long correct = 0, labeled = 0;
        for (Eigen::Index i = 0; i < proba.rows(); ++i) {
            const int arg = argmax_lowest(proba.row(i));
            block.labels.push_back(model.class_names[arg]);
            block.confidences.push_back(proba(i, arg));
            if (ds.curves[i].label) {
                ++labeled;
                if (to_string(static_cast<ShapeClass>(*ds.curves[i].label)) ==
                    model.class_names[arg]) {
                    ++correct;
                }
            }
        }
        if (labeled > 0) {
            char acc[64];
            std::snprintf(acc, sizeof(acc), "%.6f",
                          static_cast<double>(correct) / static_cast<double>(labeled));
            std::cout << name << " accuracy: " << acc << "\n";
        }
        blocks.push_back(std::move(block));
    }

    const std::string out_path = out_dir + "/predictions.csv";
    write_predictions_csv(out_path, ds.curves.size(), blocks);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace scan::cli
