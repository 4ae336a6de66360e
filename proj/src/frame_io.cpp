// SPDX-License-Identifier: Apache-2.0
#include "fhdfrc/frame_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace fhdfrc {
namespace {

constexpr char kMagic[4] = {'F', 'H', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "frame files assume a little-endian host");

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error(Errc::Io, "truncated frame file");
    return v;
}

}  // namespace

void write_frame(const std::string& path, const FrameFile& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, f.L);
    put(os, f.H);
    put(os, f.fs);
    put(os, static_cast<std::uint64_t>(f.samples.size()));
    put(os, f.payload_bits);
    for (const Complex& c : f.samples) {
        put(os, static_cast<float>(c.real()));
        put(os, static_cast<float>(c.imag()));
    }
    if (!os) throw Error(Errc::Io, "failed writing '" + path + "'");
}

FrameFile read_frame(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::Io, "cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error(Errc::Io, "not a frame file");
    if (take<std::uint32_t>(is) != kVersion) throw Error(Errc::Io, "unsupported frame file version");
    FrameFile f;
    f.L = take<std::uint32_t>(is);
    f.H = take<std::uint32_t>(is);
    f.fs = take<double>(is);
    const auto n = take<std::uint64_t>(is);
    f.payload_bits = take<std::uint64_t>(is);
    if (n != static_cast<std::uint64_t>(f.L) * f.H) throw Error(Errc::Io, "sample count does not match L x H");
    f.samples.resize(static_cast<size_t>(n));
    for (auto& c : f.samples) {
        float re = take<float>(is);
        float im = take<float>(is);
        c = {re, im};
    }
    return f;
}

std::vector<std::uint8_t> bytes_to_bits(const std::string& bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (unsigned char b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
    return bits;
}

std::string bits_to_bytes(const std::vector<std::uint8_t>& bits) {
    std::string out((bits.size() + 7) / 8, '\0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] = static_cast<char>(static_cast<unsigned char>(out[i / 8]) | (0x80u >> (i % 8)));
    return out;
}

}  // namespace fhdfrc
