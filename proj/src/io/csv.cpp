#include "scan/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scan/util/error.hpp"
#include "scan/util/text.hpp"

namespace scan {

namespace {

using nlohmann::json;

constexpr int kParamSlots = 8;

void csv_append_quoted(std::string& out, const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

std::vector<std::string> csv_split(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("unterminated quote at " + where);
    fields.push_back(std::move(cur));
    return fields;
}

std::array<double, kParamSlots> params_to_slots(const ModelParams& p) {
    std::array<double, kParamSlots> s{};
    s[0] = p.scale;
    s[1] = p.background;
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SphereGeom>) {
                s[2] = g.radius;
                s[3] = g.pd;
            } else if constexpr (std::is_same_v<T, FuzzySphereGeom>) {
                s[2] = g.radius;
                s[3] = g.sigma_fuzzy;
                s[4] = g.pd;
            } else if constexpr (std::is_same_v<T, EllipsoidGeom>) {
                s[2] = g.r_equatorial;
                s[3] = g.aspect;
                s[4] = g.pd;
            } else if constexpr (std::is_same_v<T, CylinderGeom>) {
                s[2] = g.radius;
                s[3] = g.length;
                s[4] = g.pd;
            } else if constexpr (std::is_same_v<T, HollowCylinderGeom>) {
                s[2] = g.radius;
                s[3] = g.length;
                s[4] = g.core_radius;
                s[5] = g.pd;
            } else if constexpr (std::is_same_v<T, DabGeom>) {
                s[2] = g.xi;
            } else if constexpr (std::is_same_v<T, PolymerEvGeom>) {
                s[2] = g.rg;
                s[3] = g.nu;
            } else if constexpr (std::is_same_v<T, TeubnerStreyGeom>) {
                s[2] = g.d_period;
                s[3] = g.xi;
            } else if constexpr (std::is_same_v<T, MixtureGeom>) {
                s[2] = g.weight;
                s[3] = g.sphere.radius;
                s[4] = g.sphere.pd;
                s[5] = g.cylinder.radius;
                s[6] = g.cylinder.length;
                s[7] = g.cylinder.pd;
            }
        },
        p.geom);
    return s;
}

} // namespace

std::string params_to_json(const ModelParams& p) {
    json j;
    j["class"] = to_string(p.shape);
    j["scale"] = p.scale;
    j["background"] = p.background;
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SphereGeom>) {
                j["radius"] = g.radius;
                j["pd"] = g.pd;
            } else if constexpr (std::is_same_v<T, FuzzySphereGeom>) {
                j["radius"] = g.radius;
                j["sigma_fuzzy"] = g.sigma_fuzzy;
                j["pd"] = g.pd;
            } else if constexpr (std::is_same_v<T, EllipsoidGeom>) {
                j["r_equatorial"] = g.r_equatorial;
                j["aspect"] = g.aspect;
                j["pd"] = g.pd;
            } else if constexpr (std::is_same_v<T, CylinderGeom>) {
                j["radius"] = g.radius;
                j["length"] = g.length;
                j["pd"] = g.pd;
            } else if constexpr (std::is_same_v<T, HollowCylinderGeom>) {
                j["radius"] = g.radius;
                j["length"] = g.length;
                j["core_radius"] = g.core_radius;
                j["pd"] = g.pd;
            } else if constexpr (std::is_same_v<T, DabGeom>) {
                j["xi"] = g.xi;
            } else if constexpr (std::is_same_v<T, PolymerEvGeom>) {
                j["rg"] = g.rg;
                j["nu"] = g.nu;
            } else if constexpr (std::is_same_v<T, TeubnerStreyGeom>) {
                j["d_period"] = g.d_period;
                j["xi"] = g.xi;
            } else if constexpr (std::is_same_v<T, MixtureGeom>) {
                j["weight"] = g.weight;
                j["sphere"] = {{"radius", g.sphere.radius}, {"pd", g.sphere.pd}};
                j["cylinder"] = {{"radius", g.cylinder.radius},
                                 {"length", g.cylinder.length},
                                 {"pd", g.cylinder.pd}};
            }
        },
        p.geom);
    return j.dump();
}

ModelParams params_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    ModelParams p;
    p.shape = shape_class_from_string(j.at("class").get<std::string>());
    p.scale = j.at("scale").get<double>();
    p.background = j.at("background").get<double>();
    switch (p.shape) {
        case ShapeClass::sphere:
            p.geom = SphereGeom{j.at("radius"), j.at("pd")};
            break;
        case ShapeClass::fuzzy_sphere:
            p.geom = FuzzySphereGeom{j.at("radius"), j.at("sigma_fuzzy"), j.at("pd")};
            break;
        case ShapeClass::ellipsoid_prolate:
        case ShapeClass::ellipsoid_oblate:
            p.geom = EllipsoidGeom{j.at("r_equatorial"), j.at("aspect"), j.at("pd")};
            break;
        case ShapeClass::cylinder_long:
        case ShapeClass::disk:
            p.geom = CylinderGeom{j.at("radius"), j.at("length"), j.at("pd")};
            break;
        case ShapeClass::cylinder_hollow:
        case ShapeClass::cylinder_long_hollow:
            p.geom = HollowCylinderGeom{j.at("radius"), j.at("length"), j.at("core_radius"),
                                        j.at("pd")};
            break;
        case ShapeClass::dab:
            p.geom = DabGeom{j.at("xi")};
            break;
        case ShapeClass::polymer_excluded_volume:
            p.geom = PolymerEvGeom{j.at("rg"), j.at("nu")};
            break;
        case ShapeClass::teubner_strey:
            p.geom = TeubnerStreyGeom{j.at("d_period"), j.at("xi")};
            break;
        case ShapeClass::sphere_cylinder_mix: {
            MixtureGeom g;
            g.weight = j.at("weight");
            g.sphere = SphereGeom{j.at("sphere").at("radius"), j.at("sphere").at("pd")};
            g.cylinder = CylinderGeom{j.at("cylinder").at("radius"), j.at("cylinder").at("length"),
                                      j.at("cylinder").at("pd")};
            p.geom = g;
            break;
        }
    }
    return p;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    std::string out;
    out.reserve(ds.curves.size() * 6000 + 4096);
    out += "label";
    for (int i = 0; i < kParamSlots; ++i) out += ",p" + std::to_string(i);
    out += ",meta_json";
    for (std::size_t i = 0; i < ds.q.size(); ++i) out += ",I_" + std::to_string(i);
    out += '\n';

    for (const auto& curve : ds.curves) {
        if (curve.label) out += to_string(static_cast<ShapeClass>(*curve.label));
        std::array<double, kParamSlots> slots{};
        std::string meta = "{}";
        if (curve.params) {
            slots = params_to_slots(*curve.params);
            meta = params_to_json(*curve.params);
        } else if (!curve.meta.empty()) {
            meta = curve.meta;
        }
        for (double s : slots) {
            out += ',';
            out += format_sig9(s);
        }
        out += ',';
        csv_append_quoted(out, meta);
        for (double v : curve.intensity) {
            out += ',';
            out += format_sig9(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_qgrid_csv(const std::string& path, const QGrid& q) {
    std::string out = "q\n";
    for (double v : q.values()) {
        out += format_sig9(v);
        out += '\n';
    }
    write_file_atomic(path, out);
}

QGrid read_qgrid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open q grid file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "q") {
        throw DataError("q grid file '" + path + "' must start with header 'q'");
    }
    std::vector<double> values;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const double v = parse_double(line, path + " row " + std::to_string(row));
        if (!std::isfinite(v)) throw DataError("non-finite q value at row " + std::to_string(row));
        values.push_back(v);
    }
    return QGrid(std::move(values));
}

Dataset read_curves_csv(const std::string& path, const QGrid& q) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = csv_split(line, "header");
    std::size_t col = 0;
    bool has_label = false;
    if (col < header.size() && header[col] == "label") {
        has_label = true;
        ++col;
    }
    bool has_params = false;
    if (col < header.size() && header[col] == "p0") {
        int slot = 0;
        while (col < header.size() && header[col] == "p" + std::to_string(slot)) {
            ++col;
            ++slot;
        }
        if (slot != kParamSlots || col >= header.size() || header[col] != "meta_json") {
            throw DataError("malformed parameter block in header (expected p0..p7,meta_json)");
        }
        ++col;
        has_params = true;
    }
    const std::size_t first_intensity = col;
    std::size_t n_points = 0;
    while (col < header.size() && header[col] == "I_" + std::to_string(n_points)) {
        ++col;
        ++n_points;
    }
    if (col != header.size() || n_points == 0) {
        throw DataError("header must end with contiguous I_0..I_{n-1} columns");
    }
    if (n_points != q.size()) {
        throw DataError("dataset has " + std::to_string(n_points) +
                        " intensity columns, q grid has " + std::to_string(q.size()) + " points");
    }

    Dataset ds;
    ds.q = q;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "row " + std::to_string(row);
        const auto fields = csv_split(line, where);
        if (fields.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        Curve curve;
        if (has_label && !fields[0].empty()) {
            curve.label = static_cast<int>(shape_class_from_string(fields[0]));
        }
        if (has_params) {
            curve.meta = fields[first_intensity - 1];
            if (curve.meta != "{}" && !curve.meta.empty()) {
                try {
                    curve.params = params_from_json(curve.meta);
                } catch (const std::exception&) {
                    // provenance only; tolerate records we cannot parse
                }
            }
        }
        curve.intensity.resize(n_points);
        for (std::size_t i = 0; i < n_points; ++i) {
            const double v = parse_double(fields[first_intensity + i],
                                          where + " column I_" + std::to_string(i));
            if (!std::isfinite(v)) {
                throw DataError(where + ": non-finite intensity in column I_" + std::to_string(i));
            }
            if (v < 0.0) {
                throw DataError(where + ": negative intensity in column I_" + std::to_string(i));
            }
            curve.intensity[i] = v;
        }
        ds.curves.push_back(std::move(curve));
    }
    if (ds.curves.empty()) throw DataError("dataset file '" + path + "' has no data rows");
    return ds;
}

void write_predictions_csv(const std::string& path, std::size_t n_rows,
                           const std::vector<PredictionBlock>& blocks) {
    for (const auto& b : blocks) {
        if (b.labels.size() != n_rows || b.confidences.size() != n_rows) {
            throw DataError("prediction block '" + b.name + "' is not aligned with the curves");
        }
    }
    std::string out = "row_id";
    for (const auto& b : blocks) {
        out += ',' + b.name + "_label," + b.name + "_confidence";
    }
    out += '\n';
    for (std::size_t i = 0; i < n_rows; ++i) {
        out += std::to_string(i);
        for (const auto& b : blocks) {
            out += ',';
            out += b.labels[i];
            out += ',';
            out += format_fixed6(b.confidences[i]);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::string report_stem(const EvalReport& report) {
    return report.classifier + "_" + to_string(report.variant);
}

namespace {

std::string summary_line(const EvalReport& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f (%.3f)", r.mean, r.stddev);
    return buf;
}

} // namespace

void write_report_csv(const std::string& path, const EvalReport& r) {
    std::string out;
    out += "classifier," + r.classifier + '\n';
    out += "variant," + to_string(r.variant) + '\n';
    if (r.failed) {
        std::string msg = r.error;
        for (char& c : msg) {
            if (c == ',' || c == '\n') c = ';';
        }
        out += "error," + msg + '\n';
        write_file_atomic(path, out);
        return;
    }
    out += "n_folds," + std::to_string(r.fold_accuracies.size()) + '\n';
    out += "fold_accuracies";
    for (double a : r.fold_accuracies) out += ',' + format_full(a);
    out += '\n';
    out += "mean," + format_full(r.mean) + '\n';
    out += "stddev," + format_full(r.stddev) + '\n';
    out += "summary," + summary_line(r) + '\n';
    if (!r.pca_components.empty()) {
        out += "pca_components";
        for (int k : r.pca_components) out += ',' + std::to_string(k);
        out += '\n';
    }
    out += "classes";
    for (int c : r.class_ids) out += ',' + to_string(static_cast<ShapeClass>(c));
    out += '\n';
    out += "confusion_matrix\n";
    for (std::size_t i = 0; i < r.confusion.size(); ++i) {
        out += to_string(static_cast<ShapeClass>(r.class_ids[i]));
        for (long long v : r.confusion[i]) out += ',' + std::to_string(v);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_timing_csv(const std::string& path, const EvalReport& r) {
    char buf[64];
    std::string out;
    out += "classifier," + r.classifier + '\n';
    out += "variant," + to_string(r.variant) + '\n';
    std::snprintf(buf, sizeof(buf), "%.6f", r.train_seconds);
    out += "train_seconds," + std::string(buf) + '\n';
    std::snprintf(buf, sizeof(buf), "%.6f", r.eval_seconds);
    out += "eval_seconds," + std::string(buf) + '\n';
    write_file_atomic(path, out);
}

} // namespace scan
