/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Audio decoding and short-time spectral analysis.
//
// All acoustic statistics operate on a mono AudioClip at its native sample
// rate; no resampling is performed anywhere in the toolkit.

#ifndef AGL_AUDIO_HPP_
#define AGL_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace agl::audio {

inline constexpr std::size_t kDefaultWindowSize = 2048;
inline constexpr std::size_t kDefaultHopSize = 1024;
inline constexpr std::size_t kMinWindowSize = 16;

// A decoded mono signal. Samples are guaranteed to lie in [-1, +1].
class AudioClip {
 public:
  // Throws Error(kValidation) if a sample is outside [-1, +1] or not finite,
  // or if the sample rate is zero.
  AudioClip(std::vector<double> samples, std::uint32_t sample_rate_hz);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::uint32_t sample_rate_hz() const { return sample_rate_hz_; }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  // Returns a copy with every sample multiplied by `gain`, clamped to
  // [-1, +1].
  AudioClip Scaled(double gain) const;

 private:
  std::vector<double> samples_;
  std::uint32_t sample_rate_hz_;
};

// Decodes a RIFF/WAVE container holding PCM16 or IEEE float32 data with one
// or two channels. Stereo input is averaged per frame. Integer samples are
// scaled by 1/32768 so that -32768 maps to exactly -1.0.
//
// Throws Error(kDecode) on a malformed or truncated container and
// Error(kUnsupportedFormat) on any other codec, bit depth or channel count.
AudioClip DecodeWav(std::span<const std::byte> bytes);
AudioClip ReadWavFile(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };

// Encodes a mono clip. PCM16 rounds to the nearest code and saturates at
// +32767, so decoding a PCM16-decoded clip and re-encoding it is exact.
std::vector<std::byte> EncodeWav(const AudioClip& clip,
                                 WavEncoding encoding = WavEncoding::kPcm16);
void WriteWavFile(const std::filesystem::path& path, const AudioClip& clip,
                  WavEncoding encoding = WavEncoding::kPcm16);

// Squared-magnitude STFT. Rows are frequency bins 0..window_size/2, columns
// are frames.
class PowerSpectrogram {
 public:
  // Wraps an explicit energy matrix given band-major (`energy[f * frames + t]`).
  // Throws Error(kValidation) on a negative or non-finite entry or on a size
  // mismatch.
  PowerSpectrogram(std::vector<double> energy, std::size_t num_bands,
                   std::size_t num_frames, std::size_t window_size = 0,
                   std::size_t hop_size = 0, std::uint32_t sample_rate_hz = 0);

  std::size_t num_bands() const { return num_bands_; }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t window_size() const { return window_size_; }
  std::size_t hop_size() const { return hop_size_; }
  std::uint32_t sample_rate_hz() const { return sample_rate_hz_; }

  double at(std::size_t band, std::size_t frame) const {
    return energy_[band * num_frames_ + frame];
  }
  std::span<const double> band(std::size_t f) const {
    return std::span<const double>(energy_).subspan(f * num_frames_,
                                                    num_frames_);
  }
  std::span<const double> data() const { return energy_; }

 private:
  std::vector<double> energy_;
  std::size_t num_bands_;
  std::size_t num_frames_;
  std::size_t window_size_;
  std::size_t hop_size_;
  std::uint32_t sample_rate_hz_;
};

// floor((n - window) / hop) + 1 for n >= window, else 0.
std::size_t FrameCount(std::size_t num_samples, std::size_t window_size,
                       std::size_t hop_size);

// Periodic Hann window of the given length.
std::vector<double> HannWindow(std::size_t window_size);

// Throws Error(kValidation) for window_size < 16 or hop_size < 1, and
// Error(kTooShort) when the clip holds fewer than window_size samples.
PowerSpectrogram ComputePowerSpectrogram(
    const AudioClip& clip, std::size_t window_size = kDefaultWindowSize,
    std::size_t hop_size = kDefaultHopSize);

}  // namespace agl::audio

#endif  // AGL_AUDIO_HPP_
