// auscult/pipeline/wav.cpp
//
// Copyright 2026 the auscult authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "auscult/pipeline/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "auscult/error.hpp"

namespace auscult {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kBitsPerSample = 16;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void write_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void write_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path.string());

  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on WAV file: " + path.string());

  const std::string name = path.filename().string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(name + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  std::size_t data_off = 0;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_len = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw FormatError(name + ": chunk at offset " + std::to_string(pos) +
                        " runs past end of file");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError(name + ": fmt chunk too short");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = read_u16(f + 0);
      const std::uint16_t channels = read_u16(f + 2);
      const std::uint16_t bits = read_u16(f + 14);
      if (format != kFormatPcm) {
        throw FormatError(name + ": unsupported audio format code " + std::to_string(format) +
                          " (only PCM is supported)");
      }
      if (channels != 1) {
        throw FormatError(name + ": " + std::to_string(channels) +
                          " channels (only mono is supported)");
      }
      if (bits != kBitsPerSample) {
        throw FormatError(name + ": " + std::to_string(bits) +
                          " bits per sample (only 16 is supported)");
      }
      sample_rate = read_u32(f + 4);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    // RIFF chunks are word-aligned; odd-length bodies carry a pad byte.
    pos = body + chunk_len + (chunk_len & 1u);
  }

  if (!have_fmt) throw FormatError(name + ": missing fmt chunk");
  if (data_off == 0) throw FormatError(name + ": missing data chunk");
  if (sample_rate == 0) throw FormatError(name + ": sample rate is zero");
  if (data_len % 2 != 0) throw FormatError(name + ": data chunk has odd byte count");

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  const std::size_t n = data_len / 2;
  w.samples.resize(n);
  const unsigned char* p = bytes.data() + data_off;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int16_t s = static_cast<std::int16_t>(read_u16(p + 2 * i));
    w.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return w;
}

void save_wav(const std::filesystem::path& path, const Waveform& w) {
  if (w.sample_rate <= 0) {
    throw InvalidParameterError("WAV sample rate must be positive, got " +
                                std::to_string(w.sample_rate));
  }
  const std::uint32_t n = static_cast<std::uint32_t>(w.samples.size());
  const std::uint32_t data_len = 2 * n;
  const std::uint32_t byte_rate = static_cast<std::uint32_t>(w.sample_rate) * 2;

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  write_tag(out, "RIFF");
  write_u32(out, 36 + data_len);
  write_tag(out, "WAVE");
  write_tag(out, "fmt ");
  write_u32(out, 16);
  write_u16(out, kFormatPcm);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  write_u32(out, byte_rate);
  write_u16(out, 2);  // block align
  write_u16(out, kBitsPerSample);
  write_tag(out, "data");
  write_u32(out, data_len);

  for (double x : w.samples) {
    double scaled = std::round(x * 32768.0);
    if (scaled > 32767.0) scaled = 32767.0;
    if (scaled < -32768.0) scaled = -32768.0;
    write_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open WAV file for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failure on WAV file: " + path.string());
}

}  // namespace auscult
