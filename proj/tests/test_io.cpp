#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scan/io/artifact.hpp"
#include "scan/io/csv.hpp"
#include "scan/pipeline.hpp"
#include "scan/util/text.hpp"

using namespace scan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("scan_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

Dataset small_dataset(std::uint64_t seed) {
    return generate_dataset({ShapeClass::sphere, ShapeClass::teubner_strey,
                             ShapeClass::sphere_cylinder_mix},
                            4, QGrid::standard(), seed);
}

} // namespace

TEST_CASE("dataset csv round trip preserves everything") {
    TempDir dir;
    const Dataset ds = small_dataset(5);
    write_qgrid_csv(dir.file("qgrid.csv"), ds.q);
    write_dataset_csv(dir.file("dataset.csv"), ds);

    const QGrid q = read_qgrid_csv(dir.file("qgrid.csv"));
    REQUIRE(q.size() == ds.q.size());
    CHECK(q.matches(ds.q));

    const Dataset back = read_curves_csv(dir.file("dataset.csv"), q);
    REQUIRE(back.curves.size() == ds.curves.size());
    for (std::size_t i = 0; i < ds.curves.size(); ++i) {
        CHECK(back.curves[i].label == ds.curves[i].label);
        REQUIRE(back.curves[i].params.has_value());
        CHECK(params_to_json(*back.curves[i].params) == params_to_json(*ds.curves[i].params));
        // 9-significant-digit contract
        for (std::size_t j = 0; j < q.size(); ++j) {
            CHECK(format_sig9(back.curves[i].intensity[j]) ==
                  format_sig9(ds.curves[i].intensity[j]));
        }
    }

    // writing the parsed dataset reproduces the file byte for byte
    write_dataset_csv(dir.file("again.csv"), back);
    CHECK(slurp(dir.file("again.csv")) == slurp(dir.file("dataset.csv")));
}

TEST_CASE("csv schema errors carry row context") {
    TempDir dir;
    const QGrid q(std::vector<double>{0.1, 0.2, 0.3});

    {
        std::ofstream out(dir.file("short_row.csv"));
        out << "label,I_0,I_1,I_2\n";
        out << "sphere,1,2,3\n";
        out << "sphere,1,2\n"; // missing a field
    }
    CHECK_THROWS_WITH_AS(static_cast<void>(read_curves_csv(dir.file("short_row.csv"), q)),
                         doctest::Contains("row 2"), DataError);

    {
        std::ofstream out(dir.file("bad_header.csv"));
        out << "label,I_0,I_1\n";
        out << "sphere,1,2\n";
    }
    CHECK_THROWS_AS(static_cast<void>(read_curves_csv(dir.file("bad_header.csv"), q)), DataError);

    {
        std::ofstream out(dir.file("bad_cell.csv"));
        out << "label,I_0,I_1,I_2\n";
        out << "sphere,1,abc,3\n";
    }
    CHECK_THROWS_WITH_AS(static_cast<void>(read_curves_csv(dir.file("bad_cell.csv"), q)),
                         doctest::Contains("row 1"), DataError);

    {
        std::ofstream out(dir.file("nonfinite.csv"));
        out << "label,I_0,I_1,I_2\n";
        out << "sphere,1,inf,3\n";
    }
    CHECK_THROWS_WITH_AS(static_cast<void>(read_curves_csv(dir.file("nonfinite.csv"), q)),
                         doctest::Contains("non-finite"), DataError);

    {
        std::ofstream out(dir.file("negative.csv"));
        out << "label,I_0,I_1,I_2\n";
        out << "sphere,1,-2,3\n";
    }
    CHECK_THROWS_AS(static_cast<void>(read_curves_csv(dir.file("negative.csv"), q)), DataError);
}

TEST_CASE("label column is optional") {
    TempDir dir;
    const QGrid q(std::vector<double>{0.1, 0.2, 0.3});
    {
        std::ofstream out(dir.file("unlabeled.csv"));
        out << "I_0,I_1,I_2\n";
        out << "1,2,3\n";
        out << "4,5,6\n";
    }
    const Dataset ds = read_curves_csv(dir.file("unlabeled.csv"), q);
    REQUIRE(ds.curves.size() == 2);
    CHECK_FALSE(ds.labeled());
    CHECK_FALSE(ds.curves[0].label.has_value());
    CHECK(ds.curves[1].intensity == std::vector<double>{4.0, 5.0, 6.0});
}

TEST_CASE("grid/file point count mismatch is rejected") {
    TempDir dir;
    const Dataset ds = small_dataset(6);
    write_dataset_csv(dir.file("dataset.csv"), ds);
    const QGrid wrong(std::vector<double>{0.1, 0.2, 0.3});
    CHECK_THROWS_WITH_AS(static_cast<void>(read_curves_csv(dir.file("dataset.csv"), wrong)),
                         doctest::Contains("intensity columns"), DataError);
}

TEST_CASE("predictions csv formatting") {
    TempDir dir;
    PredictionBlock a;
    a.name = "random_forest";
    a.labels = {"sphere", "dab"};
    a.confidences = {0.7, 1.0 / 12.0};
    PredictionBlock b;
    b.name = "knn";
    b.labels = {"disk", "dab"};
    b.confidences = {1.0, 0.25};
    write_predictions_csv(dir.file("predictions.csv"), 2, {a, b});

    const std::string text = slurp(dir.file("predictions.csv"));
    CHECK(text ==
          "row_id,random_forest_label,random_forest_confidence,knn_label,knn_confidence\n"
          "0,sphere,0.700000,disk,1.000000\n"
          "1,dab,0.083333,dab,0.250000\n");

    PredictionBlock misaligned;
    misaligned.name = "x";
    misaligned.labels = {"sphere"};
    misaligned.confidences = {0.5};
    CHECK_THROWS_AS(write_predictions_csv(dir.file("bad.csv"), 2, {misaligned}), DataError);
}

TEST_CASE("atomic writes leave no temp files") {
    TempDir dir;
    write_file_atomic(dir.file("out.txt"), "payload");
    CHECK(slurp(dir.file("out.txt")) == "payload");
    CHECK_FALSE(fs::exists(dir.file("out.txt.tmp")));
}

TEST_CASE("model artifact round trip is prediction-identical") {
    TempDir dir;
    const Dataset ds = small_dataset(7);
    ClassifierSpec spec;
    spec.algorithm = Algorithm::random_forest;
    spec.rf_trees = 12;
    spec.seed = 3;
    const Pipeline trained = train_pipeline(ds, EvalEntry::single(spec), Variant::pca95, 2);
    REQUIRE(trained.pca.has_value());
    save_model(trained, dir.file("model.scanmodel"));

    const Pipeline loaded = load_model(dir.file("model.scanmodel"));
    CHECK(loaded.name == "random_forest");
    CHECK(loaded.variant == Variant::pca95);
    CHECK(loaded.class_names == trained.class_names);
    CHECK(loaded.dataset_fingerprint == trained.dataset_fingerprint);

    const Dataset probe = small_dataset(8);
    const Eigen::MatrixXd a = trained.predict_proba(probe, 2);
    const Eigen::MatrixXd b = loaded.predict_proba(probe, 2);
    CHECK(a == b);

    // saving the loaded pipeline reproduces the artifact byte for byte
    save_model(loaded, dir.file("model2.scanmodel"));
    CHECK(slurp(dir.file("model2.scanmodel")) == slurp(dir.file("model.scanmodel")));
}

TEST_CASE("artifact corruption and version checks") {
    TempDir dir;
    const Dataset ds = small_dataset(9);
    ClassifierSpec spec;
    spec.algorithm = Algorithm::gaussian_nb;
    const Pipeline trained = train_pipeline(ds, EvalEntry::single(spec), Variant::all, 1);
    const std::string path = dir.file("model.scanmodel");
    save_model(trained, path);

    std::string bytes = slurp(path);
    {
        std::string corrupted = bytes;
        corrupted[bytes.size() / 2] ^= 0x01;
        write_file_atomic(dir.file("corrupt.scanmodel"), corrupted);
        CHECK_THROWS_WITH_AS(static_cast<void>(load_model(dir.file("corrupt.scanmodel"))),
                             doctest::Contains("checksum"), DataError);
    }
    {
        std::string future = bytes;
        future[8] = 9; // bump the version field
        write_file_atomic(dir.file("future.scanmodel"), future);
        CHECK_THROWS_WITH_AS(static_cast<void>(load_model(dir.file("future.scanmodel"))),
                             doctest::Contains("version"), DataError);
    }
    {
        write_file_atomic(dir.file("trunc.scanmodel"), bytes.substr(0, bytes.size() / 3));
        CHECK_THROWS_WITH_AS(static_cast<void>(load_model(dir.file("trunc.scanmodel"))),
                             doctest::Contains("truncated"), DataError);
    }
    {
        write_file_atomic(dir.file("not_model.scanmodel"), "definitely not an artifact file");
        CHECK_THROWS_AS(static_cast<void>(load_model(dir.file("not_model.scanmodel"))), DataError);
    }
}

TEST_CASE("grid mismatch between model and curves is a hard error") {
    const Dataset ds = small_dataset(10);
    ClassifierSpec spec;
    spec.algorithm = Algorithm::gaussian_nb;
    const Pipeline trained = train_pipeline(ds, EvalEntry::single(spec), Variant::all, 1);

    Dataset shifted = small_dataset(11);
    std::vector<double> q2 = shifted.q.values();
    for (double& v : q2) v *= 1.001;
    shifted.q = QGrid(q2);
    CHECK_THROWS_WITH_AS(static_cast<void>(trained.predict_proba(shifted, 1)),
                         doctest::Contains("grid"), DataError);
}

TEST_CASE("report csv structure") {
    TempDir dir;
    EvalReport r;
    r.classifier = "knn";
    r.variant = Variant::pca95;
    r.fold_accuracies = {0.5, 0.75, 1.0};
    r.mean = 0.75;
    r.stddev = 0.2041241452319315;
    r.confusion = {{3, 1}, {0, 4}};
    r.class_ids = {0, 8};
    r.pca_components = {2, 2, 3};
    write_report_csv(dir.file("report.csv"), r);
    const std::string text = slurp(dir.file("report.csv"));
    CHECK(text == "classifier,knn\n"
                  "variant,pca95\n"
                  "n_folds,3\n"
                  "fold_accuracies,0.5,0.75,1\n"
                  "mean,0.75\n"
                  "stddev,0.2041241452319315\n"
                  "summary,0.750 (0.204)\n"
                  "pca_components,2,2,3\n"
                  "classes,sphere,dab\n"
                  "confusion_matrix\n"
                  "sphere,3,1\n"
                  "dab,0,4\n");
}
