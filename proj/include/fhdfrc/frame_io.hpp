// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "fhdfrc/channel.hpp"

namespace fhdfrc {

/// Binary frame file: "FHDF", u32 version, u32 L, u32 H, f64 fs, u64 sample count,
/// u64 payload bits, then interleaved little-endian float32 I/Q.
struct FrameFile {
    std::uint32_t L = 0;
    std::uint32_t H = 0;
    double fs = 0.0;
    std::uint64_t payload_bits = 0;
    CVec samples;
};

void write_frame(const std::string& path, const FrameFile& f);
FrameFile read_frame(const std::string& path);

/// Bytes to bits, most significant bit first; and back, zero-padding the last byte.
std::vector<std::uint8_t> bytes_to_bits(const std::string& bytes);
std::string bits_to_bytes(const std::vector<std::uint8_t>& bits);

}  // namespace fhdfrc
