#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "scan/util/error.hpp"

namespace scan {

/// Append-only byte sink for model serialization. Scalars are written as
/// little-endian raw bytes (the build targets little-endian hosts; the
/// artifact loader rejects foreign files via magic + checksum).
class BinaryWriter {
public:
    const std::vector<std::uint8_t>& bytes() const { return buf_; }

    template <typename T>
    void put(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }

    void put_string(const std::string& s) {
        put<std::uint64_t>(s.size());
        const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
        buf_.insert(buf_.end(), p, p + s.size());
    }

    template <typename T>
    void put_vector(const std::vector<T>& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        put<std::uint64_t>(v.size());
        const auto* p = reinterpret_cast<const std::uint8_t*>(v.data());
        buf_.insert(buf_.end(), p, p + v.size() * sizeof(T));
    }

    void put_matrix(const Eigen::MatrixXd& m) {
        put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
        put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
        const auto* p = reinterpret_cast<const std::uint8_t*>(m.data());
        buf_.insert(buf_.end(), p, p + sizeof(double) * m.size());
    }

    void put_vector_xd(const Eigen::VectorXd& v) {
        put<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
        const auto* p = reinterpret_cast<const std::uint8_t*>(v.data());
        buf_.insert(buf_.end(), p, p + sizeof(double) * v.size());
    }

private:
    std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader over a byte buffer produced by BinaryWriter.
class BinaryReader {
public:
    BinaryReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    template <typename T>
    T get() {
        static_assert(std::is_trivially_copyable_v<T>);
        require(sizeof(T));
        T v;
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string get_string() {
        const auto n = get<std::uint64_t>();
        require(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

    template <typename T>
    std::vector<T> get_vector() {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto n = get<std::uint64_t>();
        require(n * sizeof(T));
        std::vector<T> v(n);
        std::memcpy(v.data(), data_ + pos_, n * sizeof(T));
        pos_ += n * sizeof(T);
        return v;
    }

    Eigen::MatrixXd get_matrix() {
        const auto rows = get<std::uint64_t>();
        const auto cols = get<std::uint64_t>();
        require(rows * cols * sizeof(double));
        Eigen::MatrixXd m(rows, cols);
        std::memcpy(m.data(), data_ + pos_, rows * cols * sizeof(double));
        pos_ += rows * cols * sizeof(double);
        return m;
    }

    Eigen::VectorXd get_vector_xd() {
        const auto n = get<std::uint64_t>();
        require(n * sizeof(double));
        Eigen::VectorXd v(n);
        std::memcpy(v.data(), data_ + pos_, n * sizeof(double));
        pos_ += n * sizeof(double);
        return v;
    }

    bool exhausted() const { return pos_ == size_; }

private:
    void require(std::size_t n) const {
        if (pos_ + n > size_) throw DataError("model artifact truncated");
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

/// CRC-32 (IEEE 802.3 polynomial, reflected).
inline std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
    static const auto table = [] {
        std::vector<std::uint32_t> t(256);
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xffffffffu;
    for (std::size_t i = 0; i < size; ++i) c = table[(c ^ data[i]) & 0xffu] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

} // namespace scan
