#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tigre/tensor.hpp"

namespace tigre {

/// Flat, versioned binary container: string metadata plus named arrays of
/// f64 or i64 values. Array payloads round-trip bit-exactly.
///
/// Layout (little-endian):
///   magic "TGAR" | u32 version
///   u32 nstrings  { u32 klen, bytes, u32 vlen, bytes }*
///   u64 narrays   { u32 nlen, bytes, u8 dtype, u32 ndim, u64 dims[], payload }*
/// dtype: 0 = f64, 1 = i64.
class Archive {
public:
    static constexpr std::uint32_t kVersion = 1;

    void put_string(const std::string& key, const std::string& value);
    void put_f64(const std::string& name, ad::Shape shape, const std::vector<double>& data);
    void put_i64(const std::string& name, std::vector<std::int64_t> data);
    void put_tensor(const std::string& name, const ad::Tensor& t);

    bool has_string(const std::string& key) const;
    const std::string& get_string(const std::string& key) const;
    bool has_array(const std::string& name) const;
    const std::vector<double>& get_f64(const std::string& name) const;
    const std::vector<std::int64_t>& get_i64(const std::string& name) const;
    const ad::Shape& get_shape(const std::string& name) const;

    std::vector<std::string> array_names() const;

    void save(const std::filesystem::path& path) const;
    static Archive load(const std::filesystem::path& path);

private:
    struct ArrayEntry {
        std::string name;
        std::uint8_t dtype;  // 0 f64, 1 i64
        ad::Shape shape;
        std::vector<double> f64;
        std::vector<std::int64_t> i64;
    };
    const ArrayEntry& entry(const std::string& name) const;

    std::map<std::string, std::string> strings_;
    std::vector<ArrayEntry> arrays_;
};

} // namespace tigre
