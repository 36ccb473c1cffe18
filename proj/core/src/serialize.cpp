#include "tigre/serialize.hpp"

#include <cstring>
#include <fstream>

#include "tigre/errors.hpp"

namespace tigre {

namespace {

constexpr char kMagic[4] = {'T', 'G', 'A', 'R'};

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DataError("archive: truncated file");
    return v;
}

void write_str(std::ostream& os, const std::string& s) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_str(std::istream& is) {
    auto len = read_pod<std::uint32_t>(is);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw DataError("archive: truncated string");
    return s;
}

} // namespace

void Archive::put_string(const std::string& key, const std::string& value) {
    strings_[key] = value;
}

void Archive::put_f64(const std::string& name, ad::Shape shape, const std::vector<double>& data) {
    ArrayEntry e;
    e.name = name;
    e.dtype = 0;
    e.shape = std::move(shape);
    e.f64 = data;
    arrays_.push_back(std::move(e));
}

void Archive::put_i64(const std::string& name, std::vector<std::int64_t> data) {
    ArrayEntry e;
    e.name = name;
    e.dtype = 1;
    e.shape = {data.size()};
    e.i64 = std::move(data);
    arrays_.push_back(std::move(e));
}

void Archive::put_tensor(const std::string& name, const ad::Tensor& t) {
    put_f64(name, t.shape(), {t.values().begin(), t.values().end()});
}

bool Archive::has_string(const std::string& key) const { return strings_.count(key) > 0; }

const std::string& Archive::get_string(const std::string& key) const {
    auto it = strings_.find(key);
    if (it == strings_.end()) throw DataError("archive: missing string key " + key);
    return it->second;
}

bool Archive::has_array(const std::string& name) const {
    for (const auto& e : arrays_)
        if (e.name == name) return true;
    return false;
}

const Archive::ArrayEntry& Archive::entry(const std::string& name) const {
    for (const auto& e : arrays_)
        if (e.name == name) return e;
    throw DataError("archive: missing array " + name);
}

const std::vector<double>& Archive::get_f64(const std::string& name) const {
    const auto& e = entry(name);
    if (e.dtype != 0) throw DataError("archive: array is not f64: " + name);
    return e.f64;
}

const std::vector<std::int64_t>& Archive::get_i64(const std::string& name) const {
    const auto& e = entry(name);
    if (e.dtype != 1) throw DataError("archive: array is not i64: " + name);
    return e.i64;
}

const ad::Shape& Archive::get_shape(const std::string& name) const { return entry(name).shape; }

std::vector<std::string> Archive::array_names() const {
    std::vector<std::string> names;
    names.reserve(arrays_.size());
    for (const auto& e : arrays_) names.push_back(e.name);
    return names;
}

void Archive::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("archive: cannot open for writing: " + path.string());
    os.write(kMagic, 4);
    write_pod<std::uint32_t>(os, kVersion);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(strings_.size()));
    for (const auto& [k, v] : strings_) {
        write_str(os, k);
        write_str(os, v);
    }
    write_pod<std::uint64_t>(os, arrays_.size());
    for (const auto& e : arrays_) {
        write_str(os, e.name);
        write_pod<std::uint8_t>(os, e.dtype);
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(e.shape.size()));
        for (std::size_t d : e.shape) write_pod<std::uint64_t>(os, d);
        if (e.dtype == 0)
            os.write(reinterpret_cast<const char*>(e.f64.data()),
                     static_cast<std::streamsize>(e.f64.size() * sizeof(double)));
        else
            os.write(reinterpret_cast<const char*>(e.i64.data()),
                     static_cast<std::streamsize>(e.i64.size() * sizeof(std::int64_t)));
    }
    if (!os) throw DataError("archive: write failed: " + path.string());
}

Archive Archive::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("archive: cannot open: " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("archive: bad magic in " + path.string());
    const auto version = read_pod<std::uint32_t>(is);
    if (version != kVersion) throw DataError("archive: unsupported version");
    Archive a;
    const auto nstrings = read_pod<std::uint32_t>(is);
    for (std::uint32_t i = 0; i < nstrings; ++i) {
        std::string k = read_str(is);
        a.strings_[k] = read_str(is);
    }
    const auto narrays = read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < narrays; ++i) {
        ArrayEntry e;
        e.name = read_str(is);
        e.dtype = read_pod<std::uint8_t>(is);
        const auto ndim = read_pod<std::uint32_t>(is);
        std::size_t numel = 1;
        for (std::uint32_t k = 0; k < ndim; ++k) {
            e.shape.push_back(static_cast<std::size_t>(read_pod<std::uint64_t>(is)));
            numel *= e.shape.back();
        }
        if (e.dtype == 0) {
            e.f64.resize(numel);
            is.read(reinterpret_cast<char*>(e.f64.data()),
                    static_cast<std::streamsize>(numel * sizeof(double)));
        } else if (e.dtype == 1) {
            e.i64.resize(numel);
            is.read(reinterpret_cast<char*>(e.i64.data()),
                    static_cast<std::streamsize>(numel * sizeof(std::int64_t)));
        } else {
            throw DataError("archive: unknown dtype");
        }
        if (!is) throw DataError("archive: truncated payload");
        a.arrays_.push_back(std::move(e));
    }
    return a;
}

} // namespace tigre
