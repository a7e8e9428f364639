// Copyright (c) 2026 codecshield authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "codecshield/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace codecshield {

namespace {

void PutU32(std::string* out, uint32_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
  out->push_back(static_cast<char>((v >> 16) & 0xff));
  out->push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t GetU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

int16_t QuantizeSample(double s) {
  long k = std::lround(s * 32768.0);
  if (k > 32767) k = 32767;
  if (k < -32768) k = -32768;
  return static_cast<int16_t>(k);
}

void WriteWav(const Waveform& w, const std::filesystem::path& path) {
  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  const uint32_t data_bytes = n * 2;
  const uint32_t sample_rate = static_cast<uint32_t>(w.sample_rate);

  std::string buf;
  buf.reserve(44 + data_bytes);
  buf.append("RIFF");
  PutU32(&buf, 36 + data_bytes);
  buf.append("WAVE");
  buf.append("fmt ");
  PutU32(&buf, 16);           // PCM fmt chunk size
  PutU16(&buf, 1);            // format tag: PCM
  PutU16(&buf, 1);            // mono
  PutU32(&buf, sample_rate);
  PutU32(&buf, sample_rate * 2);  // byte rate
  PutU16(&buf, 2);            // block align
  PutU16(&buf, 16);           // bits per sample
  buf.append("data");
  PutU32(&buf, data_bytes);
  for (double s : w.samples) {
    PutU16(&buf, static_cast<uint16_t>(QuantizeSample(s)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw IoError("short write: " + path.string());
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  std::string raw((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  const uint8_t* p = reinterpret_cast<const uint8_t*>(raw.data());
  const size_t size = raw.size();

  if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t off = 12;
  while (off + 8 <= size) {
    const uint8_t* hdr = p + off;
    uint32_t chunk_len = GetU32(hdr + 4);
    size_t body = off + 8;
    if (body + chunk_len > size) {
      throw FormatError("truncated chunk in " + path.string());
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError("short fmt chunk: " + path.string());
      format_tag = GetU16(p + body);
      channels = GetU16(p + body + 2);
      sample_rate = GetU32(p + body + 4);
      bits = GetU16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) {
    throw FormatError("missing fmt or data chunk: " + path.string());
  }
  if (format_tag != 1) {
    throw FormatError("unsupported format tag " + std::to_string(format_tag) +
                      " (want PCM): " + path.string());
  }
  if (channels != 1) {
    throw FormatError("unsupported channel count " + std::to_string(channels) +
                      " (want mono): " + path.string());
  }
  if (bits != 16) {
    throw FormatError("unsupported bit depth " + std::to_string(bits) +
                      " (want 16): " + path.string());
  }

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  const size_t n = data_len / 2;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int16_t k = static_cast<int16_t>(GetU16(p + data_off + 2 * i));
    w.samples[i] = static_cast<double>(k) / 32768.0;
  }
  return w;
}

}  // namespace codecshield
