// Copyright 2026  The sasvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sasv/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t off, const char *tag) {
  return std::memcmp(b.data() + off, tag, 4) == 0;
}

void PutU16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void PutTag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw FormatError("truncated RIFF header");
  if (!TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE"))
    throw FormatError("not a RIFF/WAVE file");

  std::optional<FmtChunk> fmt;
  std::size_t pos = 12;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 8) throw FormatError("truncated chunk header");
    const std::uint32_t size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;

    if (TagIs(bytes, pos, "fmt ")) {
      if (size < 16 || available < size) throw FormatError("truncated fmt chunk");
      FmtChunk f;
      f.format = ReadU16(bytes, body);
      f.channels = ReadU16(bytes, body + 2);
      f.sample_rate = ReadU32(bytes, body + 4);
      f.block_align = ReadU16(bytes, body + 12);
      f.bits = ReadU16(bytes, body + 14);
      if (f.format == kFormatExtensible) {
        if (size < 40) throw FormatError("truncated WAVE_FORMAT_EXTENSIBLE fmt chunk");
        // First two bytes of the sub-format GUID carry the real format tag.
        f.format = ReadU16(bytes, body + 24);
      }
      fmt = f;
    } else if (TagIs(bytes, pos, "data")) {
      if (!fmt) throw FormatError("data chunk precedes fmt chunk");
      if (fmt->channels != 1)
        throw FormatError("only mono audio is supported, file has " +
                          std::to_string(fmt->channels) + " channels");
      if (fmt->sample_rate == 0) throw FormatError("sample rate is zero");
      const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
      const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
      if (!pcm16 && !float32)
        throw FormatError("unsupported encoding (format tag " +
                          std::to_string(fmt->format) + ", " +
                          std::to_string(fmt->bits) + " bits)");
      const std::size_t width = pcm16 ? 2 : 4;
      if (available < size)
        throw FormatError("data chunk truncated: header declares " +
                          std::to_string(size / width) + " frames, file holds " +
                          std::to_string(available / width));
      if (size % width != 0) throw FormatError("data chunk size is not a whole number of frames");

      AudioBuffer audio;
      audio.sample_rate = fmt->sample_rate;
      audio.samples.resize(size / width);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        const std::size_t off = body + i * width;
        if (pcm16) {
          const auto v = static_cast<std::int16_t>(ReadU16(bytes, off));
          audio.samples[i] = static_cast<double>(v) / 32768.0;
        } else {
          audio.samples[i] = static_cast<double>(
              std::bit_cast<float>(ReadU32(bytes, off)));
        }
      }
      return audio;
    } else if (available < size) {
      throw FormatError("truncated chunk");
    }
    pos = body + size + (size & 1u);
  }
  throw FormatError(fmt ? "missing data chunk" : "missing fmt chunk");
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioBuffer &audio,
                                    WavEncoding encoding) {
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t width = pcm16 ? 2 : 4;
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * width);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, pcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, audio.sample_rate);
  PutU32(out, audio.sample_rate * width);
  PutU16(out, width);
  PutU16(out, static_cast<std::uint16_t>(width * 8));
  PutTag(out, "data");
  PutU32(out, data_size);
  for (double x : audio.samples) {
    if (pcm16) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }
  return out;
}

void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio,
              WavEncoding encoding) {
  const auto bytes = EncodeWav(audio, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace sasv
