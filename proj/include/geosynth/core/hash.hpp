#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "geosynth/core/error.hpp"
#include "geosynth/core/rng.hpp"

namespace geosynth {

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n, std::uint64_t h = kFnvOffset64) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime64;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << v;
    return os.str();
}

/// Content hash used by the manifest. FNV-1a 64 is enough to detect
/// accidental corruption and verify reruns; it is not cryptographic.
inline std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for hashing: " + path);
    std::uint64_t h = kFnvOffset64;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a64_bytes(buf, static_cast<std::size_t>(in.gcount()), h);
    return hex64(h);
}

inline std::string hash_bytes(const void* data, std::size_t n) {
    return hex64(fnv1a64_bytes(data, n));
}

} // namespace geosynth
