#include "voxtopo/volume_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <regex>

namespace voxtopo {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// gzread passes uncompressed files through unchanged.
std::string read_maybe_gzipped(const fs::path& path) {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (gz == nullptr) {
        throw Error("cannot open " + path.string());
    }
    std::string data;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) {
        data.append(buf, static_cast<std::size_t>(n));
    }
    int errnum = 0;
    const char* msg = gzerror(gz, &errnum);
    const std::string err = (n < 0 && msg != nullptr) ? msg : "";
    gzclose(gz);
    if (n < 0) {
        throw Error("failed to read " + path.string() + ": " + err);
    }
    return data;
}

enum class ScalarKind { unsigned_int, signed_int, floating, boolean };

struct ScalarType {
    ScalarKind kind;
    std::size_t size;
    bool big_endian;
};

template <typename T>
T load_scalar(const char* p, bool swap) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if (swap) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

double decode_scalar(const char* p, const ScalarType& t) {
    const bool swap = t.big_endian != (std::endian::native == std::endian::big);
    switch (t.kind) {
        case ScalarKind::boolean:
            return *p != 0 ? 1.0 : 0.0;
        case ScalarKind::unsigned_int:
            switch (t.size) {
                case 1: return load_scalar<std::uint8_t>(p, false);
                case 2: return load_scalar<std::uint16_t>(p, swap);
                case 4: return load_scalar<std::uint32_t>(p, swap);
                case 8: return static_cast<double>(load_scalar<std::uint64_t>(p, swap));
            }
            break;
        case ScalarKind::signed_int:
            switch (t.size) {
                case 1: return load_scalar<std::int8_t>(p, false);
                case 2: return load_scalar<std::int16_t>(p, swap);
                case 4: return load_scalar<std::int32_t>(p, swap);
                case 8: return static_cast<double>(load_scalar<std::int64_t>(p, swap));
            }
            break;
        case ScalarKind::floating:
            switch (t.size) {
                case 4: return load_scalar<float>(p, swap);
                case 8: return load_scalar<double>(p, swap);
            }
            break;
    }
    throw Error("unsupported scalar size " + std::to_string(t.size));
}

std::vector<double> decode_payload(const char* data, std::size_t count, const ScalarType& t) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = decode_scalar(data + i * t.size, t);
    }
    return out;
}

// --- NPY -------------------------------------------------------------------

ScalarType parse_npy_descr(const std::string& descr) {
    if (descr.size() < 3) {
        throw Error("unsupported NPY dtype '" + descr + "'");
    }
    const char order = descr[0];
    const char kind = descr[1];
    const std::size_t size = std::stoul(descr.substr(2));
    ScalarType t{ScalarKind::floating, size, order == '>'};
    if (order != '<' && order != '>' && order != '|' && order != '=') {
        throw Error("unsupported NPY byte order in '" + descr + "'");
    }
    if (order == '=') {
        t.big_endian = std::endian::native == std::endian::big;
    }
    switch (kind) {
        case 'u': t.kind = ScalarKind::unsigned_int; break;
        case 'i': t.kind = ScalarKind::signed_int; break;
        case 'f': t.kind = ScalarKind::floating; break;
        case 'b': t.kind = ScalarKind::boolean; break;
        default: throw Error("unsupported NPY dtype '" + descr + "'");
    }
    const bool ok = (t.kind == ScalarKind::floating) ? (size == 4 || size == 8)
                    : (t.kind == ScalarKind::boolean) ? size == 1
                                                      : (size == 1 || size == 2 || size == 4 || size == 8);
    if (!ok) {
        throw Error("unsupported NPY dtype '" + descr + "'");
    }
    return t;
}

// --- NIfTI-1 ---------------------------------------------------------------

constexpr std::size_t kNiftiHeaderSize = 348;

ScalarType nifti_scalar(int datatype, bool big_endian) {
    switch (datatype) {
        case 2: return {ScalarKind::unsigned_int, 1, big_endian};
        case 4: return {ScalarKind::signed_int, 2, big_endian};
        case 512: return {ScalarKind::unsigned_int, 2, big_endian};
        case 16: return {ScalarKind::floating, 4, big_endian};
    }
    throw Error("unsupported NIfTI datatype " + std::to_string(datatype));
}

Dims dims_from_shape(const std::vector<std::size_t>& shape, bool fortran) {
    if (shape.size() != 2 && shape.size() != 3) {
        throw Error("array rank must be 2 or 3, got " + std::to_string(shape.size()));
    }
    for (std::size_t s : shape) {
        if (s == 0) {
            throw Error("array has a zero-length axis");
        }
    }
    if (shape.size() == 2) {
        return fortran ? Dims{shape[0], shape[1], 1} : Dims{shape[1], shape[0], 1};
    }
    return fortran ? Dims{shape[0], shape[1], shape[2]} : Dims{shape[2], shape[1], shape[0]};
}

}  // namespace

VolumeFormat parse_volume_format(const std::string& name) {
    if (name == "auto") return VolumeFormat::automatic;
    if (name == "nifti1" || name == "nifti") return VolumeFormat::nifti1;
    if (name == "npy") return VolumeFormat::npy;
    if (name == "raw") return VolumeFormat::raw;
    throw Error("unknown volume format '" + name + "'");
}

GrayVolume load_npy(const fs::path& path) {
    const std::string data = read_file(path);
    if (data.size() < 10 || data.compare(0, 6, "\x93NUMPY") != 0) {
        throw Error(path.string() + " is not an NPY file");
    }
    const auto major = static_cast<unsigned char>(data[6]);
    std::size_t header_len = 0;
    std::size_t header_start = 0;
    if (major == 1) {
        header_len = load_scalar<std::uint16_t>(data.data() + 8, std::endian::native == std::endian::big);
        header_start = 10;
    } else if (major == 2 || major == 3) {
        if (data.size() < 12) {
            throw Error(path.string() + ": truncated NPY header");
        }
        header_len = load_scalar<std::uint32_t>(data.data() + 8, std::endian::native == std::endian::big);
        header_start = 12;
    } else {
        throw Error(path.string() + ": unsupported NPY version " + std::to_string(major));
    }
    if (header_start + header_len > data.size()) {
        throw Error(path.string() + ": truncated NPY header");
    }
    const std::string header = data.substr(header_start, header_len);

    std::smatch m;
    if (!std::regex_search(header, m, std::regex(R"('descr'\s*:\s*'([^']+)')"))) {
        throw Error(path.string() + ": NPY header lacks 'descr'");
    }
    const ScalarType type = parse_npy_descr(m[1]);
    if (!std::regex_search(header, m, std::regex(R"('fortran_order'\s*:\s*(True|False))"))) {
        throw Error(path.string() + ": NPY header lacks 'fortran_order'");
    }
    const bool fortran = m[1] == "True";
    if (!std::regex_search(header, m, std::regex(R"('shape'\s*:\s*\(([^)]*)\))"))) {
        throw Error(path.string() + ": NPY header lacks 'shape'");
    }
    std::vector<std::size_t> shape;
    const std::string shape_text = m[1];
    const std::regex number(R"(\d+)");
    for (auto it = std::sregex_iterator(shape_text.begin(), shape_text.end(), number); it != std::sregex_iterator(); ++it) {
        shape.push_back(std::stoull(it->str()));
    }
    const Dims dims = dims_from_shape(shape, fortran);

    const std::size_t offset = header_start + header_len;
    const std::size_t expected = dims.count() * type.size;
    if (data.size() - offset != expected) {
        throw Error(path.string() + ": payload has " + std::to_string(data.size() - offset) + " bytes, header implies " +
                    std::to_string(expected));
    }
    return GrayVolume(dims, decode_payload(data.data() + offset, dims.count(), type));
}

GrayVolume load_nifti(const fs::path& path) {
    const std::string data = read_maybe_gzipped(path);
    if (data.size() < kNiftiHeaderSize) {
        throw Error(path.string() + ": file shorter than a NIfTI-1 header");
    }
    const char* h = data.data();
    bool big_endian = std::endian::native == std::endian::big;
    if (load_scalar<std::int32_t>(h, false) != static_cast<std::int32_t>(kNiftiHeaderSize)) {
        big_endian = !big_endian;
        if (load_scalar<std::int32_t>(h, true) != static_cast<std::int32_t>(kNiftiHeaderSize)) {
            throw Error(path.string() + ": sizeof_hdr is not 348");
        }
    }
    const bool swap = big_endian != (std::endian::native == std::endian::big);
    if (std::memcmp(h + 344, "n+1\0", 4) != 0) {
        throw Error(path.string() + ": magic is not \"n+1\" (only single-file NIfTI-1 is supported)");
    }

    std::int16_t dim[8];
    for (int i = 0; i < 8; ++i) {
        dim[i] = load_scalar<std::int16_t>(h + 40 + 2 * i, swap);
    }
    const int rank = dim[0];
    if (rank < 2 || rank > 7) {
        throw Error(path.string() + ": NIfTI rank " + std::to_string(rank) + " is not 2 or 3");
    }
    for (int i = 4; i <= rank; ++i) {
        if (dim[i] != 1) {
            throw Error(path.string() + ": NIfTI rank " + std::to_string(rank) + " is not 2 or 3");
        }
    }
    for (int i = 1; i <= std::min(rank, 3); ++i) {
        if (dim[i] < 1) {
            throw Error(path.string() + ": non-positive NIfTI dim");
        }
    }
    const Dims dims{static_cast<std::size_t>(dim[1]), static_cast<std::size_t>(dim[2]),
                    rank >= 3 ? static_cast<std::size_t>(dim[3]) : 1};

    const auto datatype = load_scalar<std::int16_t>(h + 70, swap);
    const ScalarType type = nifti_scalar(datatype, big_endian);
    const auto vox_offset = static_cast<std::size_t>(load_scalar<float>(h + 108, swap));
    const float slope = load_scalar<float>(h + 112, swap);
    const float inter = load_scalar<float>(h + 116, swap);

    const std::size_t offset = std::max(vox_offset, kNiftiHeaderSize);
    const std::size_t expected = dims.count() * type.size;
    if (data.size() < offset || data.size() - offset < expected) {
        throw Error(path.string() + ": payload shorter than header dims imply");
    }
    std::vector<double> voxels = decode_payload(data.data() + offset, dims.count(), type);
    if (slope != 0.0f && std::isfinite(slope)) {
        const double a = slope;
        const double b = std::isfinite(inter) ? inter : 0.0;
        for (double& v : voxels) {
            v = v * a + b;
        }
    }
    return GrayVolume(dims, std::move(voxels));
}

GrayVolume load_raw(const fs::path& path, const fs::path& sidecar) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(sidecar));
    } catch (const nlohmann::json::exception& e) {
        throw Error(sidecar.string() + ": " + e.what());
    }
    if (!meta.contains("dims") || !meta["dims"].is_array()) {
        throw Error(sidecar.string() + ": sidecar needs a \"dims\" array");
    }
    std::vector<std::size_t> d = meta["dims"].get<std::vector<std::size_t>>();
    if (d.size() == 2) {
        d.push_back(1);
    }
    if (d.size() != 3) {
        throw Error(sidecar.string() + ": dims must have 2 or 3 entries");
    }
    const std::string dtype = meta.value("dtype", "uint8");
    const std::string order = meta.value("byte_order", "little");
    if (order != "little" && order != "big") {
        throw Error(sidecar.string() + ": byte_order must be little or big");
    }
    const bool big = order == "big";
    ScalarType type{};
    if (dtype == "uint8") type = {ScalarKind::unsigned_int, 1, big};
    else if (dtype == "int16") type = {ScalarKind::signed_int, 2, big};
    else if (dtype == "uint16") type = {ScalarKind::unsigned_int, 2, big};
    else if (dtype == "float32") type = {ScalarKind::floating, 4, big};
    else throw Error(sidecar.string() + ": unsupported dtype '" + dtype + "'");

    if (d[0] == 0 || d[1] == 0 || d[2] == 0) {
        throw Error(sidecar.string() + ": dims must be positive");
    }
    const Dims dims{d[0], d[1], d[2]};
    const std::string data = read_file(path);
    if (data.size() != dims.count() * type.size) {
        throw Error(path.string() + ": payload has " + std::to_string(data.size()) + " bytes, sidecar implies " +
                    std::to_string(dims.count() * type.size));
    }
    return GrayVolume(dims, decode_payload(data.data(), dims.count(), type));
}

GrayVolume load_volume(const fs::path& path, VolumeFormat format) {
    if (!fs::exists(path)) {
        throw Error("no such file: " + path.string());
    }
    const std::string name = path.filename().string();
    if (format == VolumeFormat::automatic) {
        if (ends_with(name, ".nii") || ends_with(name, ".nii.gz")) format = VolumeFormat::nifti1;
        else if (ends_with(name, ".npy")) format = VolumeFormat::npy;
        else format = VolumeFormat::raw;
    }
    switch (format) {
        case VolumeFormat::nifti1: return load_nifti(path);
        case VolumeFormat::npy: return load_npy(path);
        case VolumeFormat::raw: {
            fs::path sidecar = path;
            sidecar += ".json";
            if (!fs::exists(sidecar)) {
                sidecar = path;
                sidecar.replace_extension(".json");
            }
            if (!fs::exists(sidecar)) {
                throw Error(path.string() + ": raw volume without a JSON sidecar");
            }
            return load_raw(path, sidecar);
        }
        case VolumeFormat::automatic: break;
    }
    throw Error("unreachable volume format");
}

namespace {

void write_npy_payload(const fs::path& path, const Dims& dims, const std::string& descr, const std::string& payload) {
    std::string header = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': (" + std::to_string(dims.nz) +
                         ", " + std::to_string(dims.ny) + ", " + std::to_string(dims.nx) + "), }";
    // Pad so that magic + length + header is a multiple of 64 and ends in '\n'.
    const std::size_t total = 10 + header.size() + 1;
    header.append((64 - total % 64) % 64, ' ');
    header.push_back('\n');

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write("\x93NUMPY\x01\x00", 8);
    const auto len = static_cast<std::uint16_t>(header.size());
    const char len_bytes[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
    out.write(len_bytes, 2);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

template <typename T>
void append_le(std::string& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T checked_integer(double v) {
    if (v != std::floor(v) || v < static_cast<double>(std::numeric_limits<T>::min()) ||
        v > static_cast<double>(std::numeric_limits<T>::max())) {
        throw Error("voxel value " + std::to_string(v) + " does not fit the requested integer dtype");
    }
    return static_cast<T>(v);
}

}  // namespace

void write_npy(const GrayVolume& vol, const fs::path& path, NpyDtype dtype) {
    std::string payload;
    std::string descr;
    switch (dtype) {
        case NpyDtype::uint8:
            descr = "|u1";
            for (double v : vol.voxels()) payload.push_back(static_cast<char>(checked_integer<std::uint8_t>(v)));
            break;
        case NpyDtype::uint16:
            descr = "<u2";
            for (double v : vol.voxels()) append_le(payload, checked_integer<std::uint16_t>(v));
            break;
        case NpyDtype::float64:
            descr = "<f8";
            for (double v : vol.voxels()) append_le(payload, v);
            break;
    }
    write_npy_payload(path, vol.dims(), descr, payload);
}

void write_npy(const QuantizedVolume& vol, const fs::path& path) {
    std::string payload;
    if (vol.levels() <= 255) {
        for (auto b : vol.bins()) payload.push_back(static_cast<char>(b));
        write_npy_payload(path, vol.dims(), "|u1", payload);
    } else {
        for (auto b : vol.bins()) append_le(payload, static_cast<std::uint16_t>(b));
        write_npy_payload(path, vol.dims(), "<u2", payload);
    }
}

}  // namespace voxtopo
