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

#include "agl/audio.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>

#include "agl/error.hpp"
#include "agl/io.hpp"

namespace agl::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

  void Require(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kDecode,
                  std::string("truncated WAVE data while reading ") + what);
    }
  }

  std::string Tag() {
    Require(4, "chunk tag");
    std::string tag(4, '\0');
    std::memcpy(tag.data(), bytes_.data() + pos_, 4);
    pos_ += 4;
    return tag;
  }

  std::uint16_t U16() {
    Require(2, "u16");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 2;
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }

  std::uint32_t U32() {
    Require(4, "u32");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 4;
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }

  std::span<const std::byte> Take(std::size_t n, const char* what) {
    Require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void Skip(std::size_t n) { pos_ += std::min(n, remaining()); }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

FormatChunk ParseFormat(std::span<const std::byte> body) {
  ByteReader r(body);
  if (body.size() < 16) {
    throw Error(ErrorCode::kDecode, "fmt chunk shorter than 16 bytes");
  }
  FormatChunk fmt;
  fmt.format = r.U16();
  fmt.channels = r.U16();
  fmt.sample_rate = r.U32();
  r.U32();  // byte rate
  fmt.block_align = r.U16();
  fmt.bits_per_sample = r.U16();
  if (fmt.format == kFormatExtensible) {
    if (body.size() < 40) {
      throw Error(ErrorCode::kDecode, "truncated WAVE_FORMAT_EXTENSIBLE block");
    }
    r.U16();  // cbSize
    r.U16();  // valid bits
    r.U32();  // channel mask
    fmt.format = r.U16();  // first two bytes of the subformat GUID
  }
  return fmt;
}

float LoadFloat(const std::byte* p) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) {
    bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  }
  return std::bit_cast<float>(bits);
}

std::int16_t LoadI16(const std::byte* p) {
  const auto lo = static_cast<unsigned char>(p[0]);
  const auto hi = static_cast<unsigned char>(p[1]);
  return static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
}

void PutU16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void PutU32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
  }
}

void PutTag(std::vector<std::byte>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

// FFTW's planner is not thread-safe; execution with the new-array interface
// is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(),
                                 FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_.get(); }
  const fftw_complex* output() const { return out_.get(); }
  void Execute() { fftw_execute_dft_r2c(plan_, in_.get(), out_.get()); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwDeleter> in_;
  std::unique_ptr<fftw_complex, FftwDeleter> out_;
  fftw_plan plan_;
};

}  // namespace

AudioClip::AudioClip(std::vector<double> samples, std::uint32_t sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ == 0) {
    throw Error(ErrorCode::kValidation, "sample rate must be positive");
  }
  for (double s : samples_) {
    if (!(s >= -1.0 && s <= 1.0)) {
      throw Error(ErrorCode::kValidation,
                  "audio sample outside [-1, +1] or not finite");
    }
  }
}

AudioClip AudioClip::Scaled(double gain) const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [gain](double s) { return std::clamp(s * gain, -1.0, 1.0); });
  return AudioClip(std::move(out), sample_rate_hz_);
}

AudioClip DecodeWav(std::span<const std::byte> bytes) {
  ByteReader r(bytes);
  if (r.Tag() != "RIFF") throw Error(ErrorCode::kDecode, "missing RIFF tag");
  r.U32();  // RIFF size; many writers get it wrong, so it is not trusted.
  if (r.Tag() != "WAVE") throw Error(ErrorCode::kDecode, "missing WAVE tag");

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::byte>> data;
  while (r.remaining() >= 8 && !data) {
    const std::string tag = r.Tag();
    const std::uint32_t size = r.U32();
    if (tag == "fmt ") {
      fmt = ParseFormat(r.Take(size, "fmt chunk"));
    } else if (tag == "data") {
      if (!fmt) throw Error(ErrorCode::kDecode, "data chunk before fmt chunk");
      data = r.Take(size, "data chunk");
    } else {
      r.Skip(size);
    }
    if (size % 2 == 1) r.Skip(1);
  }
  if (!fmt) throw Error(ErrorCode::kDecode, "missing fmt chunk");
  if (!data) throw Error(ErrorCode::kDecode, "missing data chunk");
  if (fmt->sample_rate == 0) throw Error(ErrorCode::kDecode, "zero sample rate");

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits_per_sample == 16;
  const bool f32 = fmt->format == kFormatFloat && fmt->bits_per_sample == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported WAVE codec (format " +
                    std::to_string(fmt->format) + ", " +
                    std::to_string(fmt->bits_per_sample) + " bits)");
  }
  if (fmt->channels != 1 && fmt->channels != 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported channel count " + std::to_string(fmt->channels));
  }
  const std::size_t bytes_per_sample = fmt->bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (fmt->block_align != frame_bytes) {
    throw Error(ErrorCode::kDecode, "block alignment does not match format");
  }
  if (data->size() % frame_bytes != 0) {
    throw Error(ErrorCode::kDecode, "data chunk ends mid-frame");
  }

  const std::size_t frames = data->size() / frame_bytes;
  std::vector<double> samples(frames);
  const std::byte* p = data->data();
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt->channels; ++c) {
      double v;
      if (pcm16) {
        v = LoadI16(p) / 32768.0;
      } else {
        const float f = LoadFloat(p);
        if (!std::isfinite(f)) {
          throw Error(ErrorCode::kDecode, "non-finite float sample");
        }
        v = f;
      }
      acc += v;
      p += bytes_per_sample;
    }
    samples[i] = std::clamp(acc / fmt->channels, -1.0, 1.0);
  }
  return AudioClip(std::move(samples), fmt->sample_rate);
}

AudioClip ReadWavFile(const std::filesystem::path& path) {
  const std::string content = io::ReadFile(path);
  return DecodeWav(std::as_bytes(std::span(content.data(), content.size())));
}

std::vector<std::byte> EncodeWav(const AudioClip& clip, WavEncoding encoding) {
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(clip.size() * block_align);

  std::vector<std::byte> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, pcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, clip.sample_rate_hz());
  PutU32(out, clip.sample_rate_hz() * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_size);
  for (double s : clip.samples()) {
    if (pcm16) {
      const double code = std::clamp(std::nearbyint(s * 32768.0), -32768.0,
                                     32767.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  return out;
}

void WriteWavFile(const std::filesystem::path& path, const AudioClip& clip,
                  WavEncoding encoding) {
  const auto bytes = EncodeWav(clip, encoding);
  io::WriteFileAtomic(
      path, std::string(reinterpret_cast<const char*>(bytes.data()),
                        bytes.size()));
}

PowerSpectrogram::PowerSpectrogram(std::vector<double> energy,
                                   std::size_t num_bands,
                                   std::size_t num_frames,
                                   std::size_t window_size,
                                   std::size_t hop_size,
                                   std::uint32_t sample_rate_hz)
    : energy_(std::move(energy)),
      num_bands_(num_bands),
      num_frames_(num_frames),
      window_size_(window_size),
      hop_size_(hop_size),
      sample_rate_hz_(sample_rate_hz) {
  if (energy_.size() != num_bands_ * num_frames_) {
    throw Error(ErrorCode::kValidation, "spectrogram size mismatch");
  }
  for (double e : energy_) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error(ErrorCode::kValidation,
                  "spectrogram energy must be finite and non-negative");
    }
  }
}

std::size_t FrameCount(std::size_t num_samples, std::size_t window_size,
                       std::size_t hop_size) {
  if (num_samples < window_size || hop_size == 0) return 0;
  return (num_samples - window_size) / hop_size + 1;
}

std::vector<double> HannWindow(std::size_t window_size) {
  std::vector<double> w(window_size);
  for (std::size_t n = 0; n < window_size; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(window_size));
  }
  return w;
}

PowerSpectrogram ComputePowerSpectrogram(const AudioClip& clip,
                                         std::size_t window_size,
                                         std::size_t hop_size) {
  if (window_size < kMinWindowSize) {
    throw Error(ErrorCode::kValidation, "window size must be at least 16");
  }
  if (hop_size < 1) throw Error(ErrorCode::kValidation, "hop size must be >= 1");
  if (clip.size() < window_size) {
    throw Error(ErrorCode::kTooShort,
                "clip has " + std::to_string(clip.size()) +
                    " samples, shorter than the " +
                    std::to_string(window_size) + "-sample window");
  }

  const std::size_t frames = FrameCount(clip.size(), window_size, hop_size);
  const std::size_t bands = window_size / 2 + 1;
  const auto window = HannWindow(window_size);
  const auto samples = clip.samples();

  RealFft fft(window_size);
  std::vector<double> energy(bands * frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* frame = samples.data() + t * hop_size;
    double* in = fft.input();
    for (std::size_t n = 0; n < window_size; ++n) in[n] = frame[n] * window[n];
    fft.Execute();
    const fftw_complex* out = fft.output();
    for (std::size_t f = 0; f < bands; ++f) {
      energy[f * frames + t] = out[f][0] * out[f][0] + out[f][1] * out[f][1];
    }
  }
  return PowerSpectrogram(std::move(energy), bands, frames, window_size,
                          hop_size, clip.sample_rate_hz());
}

}  // namespace agl::audio
