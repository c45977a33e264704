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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "agl/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace agl::audio {
namespace {

using agl::testing::kRate;

std::vector<std::byte> Bytes(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int b : v) out.push_back(static_cast<std::byte>(b));
  return out;
}

void PutU32(std::vector<std::byte>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::byte>((v >> (8 * i)) & 0xff);
}
void PutU16(std::vector<std::byte>& b, std::size_t at, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) b[at + i] = static_cast<std::byte>((v >> (8 * i)) & 0xff);
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

AudioClip RandomClip(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<double> x(n);
  for (auto& s : x) s = u(rng);
  return AudioClip(std::move(x), kRate);
}

TEST(AudioClipTest, RejectsOutOfRangeSamples) {
  EXPECT_EQ(CodeOf([] { AudioClip({0.0, 1.5}, kRate); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { AudioClip({std::nan("")}, kRate); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { AudioClip({0.0}, 0); }), ErrorCode::kValidation);
  EXPECT_NO_THROW(AudioClip({-1.0, 1.0}, kRate));
}

TEST(AudioClipTest, ScaledClamps) {
  const AudioClip c({0.5, -0.75}, kRate);
  const auto s = c.Scaled(2.0);
  EXPECT_EQ(s.samples()[0], 1.0);
  EXPECT_EQ(s.samples()[1], -1.0);
}

TEST(WavTest, Pcm16RoundTripIsSampleExact) {
  std::mt19937_64 rng(3);
  const auto clip = RandomClip(rng, 5000);
  const auto once = DecodeWav(EncodeWav(clip));
  const auto twice = DecodeWav(EncodeWav(once));
  ASSERT_EQ(once.size(), clip.size());
  ASSERT_EQ(twice.size(), once.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_EQ(once.samples()[i], twice.samples()[i]);
    EXPECT_LE(std::fabs(once.samples()[i] - clip.samples()[i]), 1.0 / 32768.0);
  }
  EXPECT_EQ(once.sample_rate_hz(), kRate);
}

TEST(WavTest, Float32RoundTrip) {
  const AudioClip clip({0.25, -0.5, 1.0, -1.0}, 44100);
  const auto back = DecodeWav(EncodeWav(clip, WavEncoding::kFloat32));
  ASSERT_EQ(back.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.samples()[i], clip.samples()[i]);
  EXPECT_EQ(back.sample_rate_hz(), 44100u);
}

TEST(WavTest, MostNegativeCodeIsMinusOne) {
  auto bytes = EncodeWav(AudioClip({0.0}, kRate));
  const std::size_t data = bytes.size() - 2;
  bytes[data] = std::byte{0x00};
  bytes[data + 1] = std::byte{0x80};
  EXPECT_EQ(DecodeWav(bytes).samples()[0], -1.0);
}

TEST(WavTest, StereoIsAveraged) {
  auto bytes = EncodeWav(AudioClip({0.0, 0.0}, kRate));
  // Reinterpret the two mono frames as one stereo frame.
  PutU16(bytes, 22, 2);
  PutU32(bytes, 28, kRate * 4);
  PutU16(bytes, 32, 4);
  const std::size_t data = bytes.size() - 4;
  PutU16(bytes, data, 16384);      // 0.5
  PutU16(bytes, data + 2, 0xC000);  // -0.5 + ... = -16384
  const auto clip = DecodeWav(bytes);
  ASSERT_EQ(clip.size(), 1u);
  EXPECT_EQ(clip.samples()[0], 0.0);
}

TEST(WavTest, Errors) {
  EXPECT_EQ(CodeOf([] { DecodeWav(Bytes({'R', 'I', 'F'})); }), ErrorCode::kDecode);
  auto bytes = EncodeWav(AudioClip({0.1, 0.2, 0.3}, kRate));
  auto not_wave = bytes;
  not_wave[8] = std::byte{'X'};
  EXPECT_EQ(CodeOf([&] { DecodeWav(not_wave); }), ErrorCode::kDecode);
  auto truncated = bytes;
  truncated.resize(truncated.size() - 3);
  EXPECT_EQ(CodeOf([&] { DecodeWav(truncated); }), ErrorCode::kDecode);
  auto adpcm = bytes;
  PutU16(adpcm, 20, 2);
  EXPECT_EQ(CodeOf([&] { DecodeWav(adpcm); }), ErrorCode::kUnsupportedFormat);
  auto pcm24 = bytes;
  PutU16(pcm24, 34, 24);
  EXPECT_EQ(CodeOf([&] { DecodeWav(pcm24); }), ErrorCode::kUnsupportedFormat);
  auto six = bytes;
  PutU16(six, 22, 6);
  EXPECT_EQ(CodeOf([&] { DecodeWav(six); }), ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CodeOf([] { ReadWavFile("/nonexistent/x.wav"); }), ErrorCode::kIo);
}

TEST(WavTest, FileRoundTrip) {
  agl::testing::TempDir dir;
  const auto clip = agl::testing::Chirp();
  WriteWavFile(dir / "c.wav", clip);
  const auto back = ReadWavFile(dir / "c.wav");
  EXPECT_EQ(back.size(), clip.size());
}

TEST(FrameCountTest, FormulaOnRandomTriples) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> n(0, 100000), w(16, 4096), h(1, 4096);
  for (int i = 0; i < 100; ++i) {
    const std::size_t N = n(rng), W = w(rng), H = h(rng);
    const std::size_t expected = N < W ? 0 : (N - W) / H + 1;
    EXPECT_EQ(FrameCount(N, W, H), expected);
    // The last frame fits and one more would not.
    if (expected > 0) {
      EXPECT_LE((expected - 1) * H + W, N);
      EXPECT_GT(expected * H + W, N);
    }
  }
}

TEST(HannWindowTest, PeriodicForm) {
  const auto w = HannWindow(16);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[8], 1.0, 1e-15);
  EXPECT_NEAR(w[4], 0.5, 1e-15);
  EXPECT_NEAR(w[12], 0.5, 1e-15);
}

TEST(SpectrogramTest, ShapeAndErrors) {
  const auto spec = ComputePowerSpectrogram(agl::testing::Chirp(), 2048, 1024);
  EXPECT_EQ(spec.num_bands(), 1025u);
  EXPECT_EQ(spec.num_frames(), FrameCount(agl::testing::kClipSamples, 2048, 1024));
  EXPECT_EQ(CodeOf([] { ComputePowerSpectrogram(AudioClip({0.0, 0.0}, kRate), 16, 1); }),
            ErrorCode::kTooShort);
  EXPECT_EQ(CodeOf([] { ComputePowerSpectrogram(agl::testing::Chirp(), 8, 4); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ComputePowerSpectrogram(agl::testing::Chirp(), 2048, 0); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { PowerSpectrogram({1.0, -1.0}, 1, 2); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { PowerSpectrogram({1.0}, 1, 2); }), ErrorCode::kValidation);
}

TEST(SpectrogramTest, SilenceIsAllZero) {
  const auto spec = ComputePowerSpectrogram(agl::testing::DigitalSilence());
  for (double e : spec.data()) EXPECT_EQ(e, 0.0);
}

TEST(SpectrogramTest, MatchesDirectDft) {
  std::mt19937_64 rng(23);
  const auto clip = RandomClip(rng, 3000);
  const auto spec = ComputePowerSpectrogram(clip, 256, 100);
  const auto oracle = agl::testing::DirectDftPower(clip.samples(), 256, 100);
  ASSERT_EQ(oracle.size(), spec.num_frames());
  for (std::size_t t = 0; t < oracle.size(); ++t) {
    long double peak = 0;
    for (auto v : oracle[t]) peak = std::max(peak, v);
    ASSERT_EQ(oracle[t].size(), spec.num_bands());
    for (std::size_t f = 0; f < spec.num_bands(); ++f) {
      EXPECT_LE(std::fabs(static_cast<long double>(spec.at(f, t)) - oracle[t][f]),
                1e-12L * peak)
          << "frame " << t << " bin " << f;
    }
  }
}

TEST(SpectrogramTest, BinCenteredSinePeaksAtItsBin) {
  for (std::size_t k0 : {5u, 64u, 300u}) {
    const std::size_t W = 1024;
    std::vector<double> x(8192);
    for (std::size_t n = 0; n < x.size(); ++n) {
      x[n] = 0.5 * std::sin(2 * std::numbers::pi * static_cast<double>(k0 * n) / W);
    }
    const AudioClip clip(std::move(x), kRate);
    const auto spec = ComputePowerSpectrogram(clip, W, 512);
    const auto oracle = agl::testing::DirectDftPower(clip.samples(), W, 512);
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
      std::size_t best = 0, oracle_best = 0;
      for (std::size_t f = 0; f < spec.num_bands(); ++f) {
        if (spec.at(f, t) > spec.at(best, t)) best = f;
        if (oracle[t][f] > oracle[t][oracle_best]) oracle_best = f;
      }
      EXPECT_EQ(best, k0);
      EXPECT_EQ(oracle_best, k0);
    }
  }
}

TEST(SpectrogramTest, ScalingIsQuadratic) {
  std::mt19937_64 rng(29);
  const auto clip = RandomClip(rng, 4096);
  for (double c : {0.5, 0.1, -1.0}) {
    const auto a = ComputePowerSpectrogram(clip, 512, 256);
    const auto b = ComputePowerSpectrogram(clip.Scaled(c), 512, 256);
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      EXPECT_TRUE(agl::testing::RelClose(b.data()[i], c * c * a.data()[i], 1e-9))
          << i << ": " << b.data()[i] << " vs " << c * c * a.data()[i];
    }
  }
}

}  // namespace
}  // namespace agl::audio
