#include "scan/io/artifact.hpp"

#include <cstring>
#include <fstream>

#include "scan/io/csv.hpp"
#include "scan/util/error.hpp"

namespace scan {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'A', 'N', 'M', 'O', 'D', 'L'};

} // namespace

void save_model(const Pipeline& p, const std::string& path) {
    if (!p.classifier) throw DataError("cannot save an untrained pipeline");

    BinaryWriter payload;
    payload.put_string(p.name);
    payload.put_vector(p.q.values());
    payload.put<std::int32_t>(static_cast<std::int32_t>(p.variant));
    payload.put<std::uint64_t>(p.train_seed);
    payload.put<std::uint64_t>(p.dataset_fingerprint);
    payload.put<std::uint64_t>(p.class_names.size());
    for (const auto& name : p.class_names) payload.put_string(name);
    payload.put_vector_xd(p.preprocessor.column_means());
    payload.put_vector_xd(p.preprocessor.column_stds());
    payload.put<std::uint8_t>(p.pca ? 1 : 0);
    if (p.pca) {
        payload.put_vector_xd(p.pca->mean);
        payload.put_matrix(p.pca->components);
        payload.put_vector_xd(p.pca->eigenvalues);
        payload.put_vector_xd(p.pca->explained_ratio);
        payload.put<double>(p.pca->total_variance);
        payload.put<double>(p.pca->threshold);
    }
    save_classifier(payload, *p.classifier);

    const auto& bytes = payload.bytes();
    std::string out;
    out.reserve(bytes.size() + 32);
    out.append(kMagic, sizeof(kMagic));
    const std::uint32_t version = kArtifactVersion;
    out.append(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t size = bytes.size();
    out.append(reinterpret_cast<const char*>(&size), sizeof(size));
    out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    const std::uint32_t crc = crc32(bytes.data(), bytes.size());
    out.append(reinterpret_cast<const char*>(&crc), sizeof(crc));
    write_file_atomic(path, out);
}

Pipeline load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model artifact '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (data.size() < sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t) +
                          sizeof(std::uint32_t)) {
        throw DataError("model artifact '" + path + "' is truncated");
    }
    if (std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
        throw DataError("'" + path + "' is not a model artifact (bad magic)");
    }
    std::uint32_t version = 0;
    std::memcpy(&version, data.data() + sizeof(kMagic), sizeof(version));
    if (version != kArtifactVersion) {
        throw DataError("model artifact version " + std::to_string(version) +
                        " is not supported (expected " + std::to_string(kArtifactVersion) + ")");
    }
    std::uint64_t size = 0;
    std::memcpy(&size, data.data() + sizeof(kMagic) + sizeof(version), sizeof(size));
    const std::size_t header = sizeof(kMagic) + sizeof(version) + sizeof(size);
    if (data.size() != header + size + sizeof(std::uint32_t)) {
        throw DataError("model artifact '" + path + "' is truncated");
    }
    const auto* payload = reinterpret_cast<const std::uint8_t*>(data.data() + header);
    std::uint32_t stored_crc = 0;
    std::memcpy(&stored_crc, data.data() + header + size, sizeof(stored_crc));
    if (crc32(payload, size) != stored_crc) {
        throw DataError("model artifact '" + path + "' failed its checksum");
    }

    BinaryReader r(payload, size);
    Pipeline p;
    p.name = r.get_string();
    p.q = QGrid(r.get_vector<double>());
    p.variant = static_cast<Variant>(r.get<std::int32_t>());
    p.train_seed = r.get<std::uint64_t>();
    p.dataset_fingerprint = r.get<std::uint64_t>();
    p.class_names.resize(r.get<std::uint64_t>());
    for (auto& name : p.class_names) name = r.get_string();
    Eigen::VectorXd means = r.get_vector_xd();
    Eigen::VectorXd stds = r.get_vector_xd();
    p.preprocessor.set_statistics(std::move(means), std::move(stds));
    if (r.get<std::uint8_t>() != 0) {
        PcaModel pca;
        pca.mean = r.get_vector_xd();
        pca.components = r.get_matrix();
        pca.eigenvalues = r.get_vector_xd();
        pca.explained_ratio = r.get_vector_xd();
        pca.total_variance = r.get<double>();
        pca.threshold = r.get<double>();
        p.pca = std::move(pca);
    }
    p.classifier = load_classifier(r);
    return p;
}

} // namespace scan
