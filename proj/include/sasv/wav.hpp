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

#ifndef SASV_WAV_HPP_
#define SASV_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sasv {

/// Mono audio normalized to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  std::uint32_t sample_rate = 0;

  bool valid() const { return sample_rate > 0 && !samples.empty(); }
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Decodes a RIFF/WAVE byte image. Accepts mono 16-bit PCM and mono 32-bit
/// IEEE float (plain or WAVE_FORMAT_EXTENSIBLE). 16-bit samples map to v/32768.
AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes);

AudioBuffer ReadWav(const std::filesystem::path &path);

/// Encodes mono audio. PCM16 output rounds and saturates.
std::vector<std::uint8_t> EncodeWav(const AudioBuffer &audio,
                                    WavEncoding encoding);

void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio,
              WavEncoding encoding);

}  // namespace sasv

#endif  // SASV_WAV_HPP_
