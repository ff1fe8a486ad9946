// Copyright 2026 The smattr Authors.
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

#include "smattr/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "smattr/error.hpp"

namespace smattr {
namespace {

static_assert(std::endian::native == std::endian::little,
              "float map encoding assumes a little-endian host");

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenFile(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    Fail(ErrorKind::kIo, "cannot open " + path + ": " + std::strerror(errno));
  }
  return f;
}

std::vector<std::uint8_t> ReadBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteBytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path);
}

template <typename T>
void Put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T Get(const std::vector<std::uint8_t>& in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

[[noreturn]] void PngError(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text != nullptr) *text = message;
  png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

const nlohmann::json& Field(const nlohmann::json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    Fail(ErrorKind::kFormat, std::string("missing field '") + name + "'");
  }
  return doc.at(name);
}

nlohmann::json BreakdownToJson(const ScoreBreakdown& b) {
  return {{"conf", b.conf},
          {"eff", b.eff},
          {"cons", b.cons},
          {"colla", b.colla},
          {"total", b.total}};
}

ScoreBreakdown BreakdownFromJson(const nlohmann::json& j) {
  ScoreBreakdown b;
  b.conf = Field(j, "conf").get<double>();
  b.eff = Field(j, "eff").get<double>();
  b.cons = Field(j, "cons").get<double>();
  b.colla = Field(j, "colla").get<double>();
  b.total = Field(j, "total").get<double>();
  return b;
}

}  // namespace

Image ReadImage(const std::string& path) {
  FilePtr file = OpenFile(path, "rb");
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    Fail(ErrorKind::kIo, path + ": not a PNG file");
  }
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           PngError, PngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorKind::kIo, path + ": cannot allocate PNG reader");
  }
  // libpng reports errors by longjmp back to the setjmp below.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorKind::kIo, path + ": corrupt PNG (" + message + ")");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);
  const bool supported =
      bit_depth == 8 &&
      (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_RGB);
  if (!supported) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorKind::kIo, path + ": only 8-bit grayscale or RGB PNG is supported");
  }
  const int channels = color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  pixels.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Eigen::ArrayXf data(static_cast<Eigen::Index>(pixels.size()));
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    data[static_cast<Eigen::Index>(i)] = static_cast<float>(pixels[i]) / 255.0f;
  }
  return Image::FromData(static_cast<int>(height), static_cast<int>(width),
                         channels, std::move(data));
}

void WriteImage(const Image& image, const std::string& path) {
  std::vector<png_byte> pixels(static_cast<std::size_t>(image.size()));
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    const float v = std::clamp(image.data[i], 0.0f, 1.0f);
    pixels[i] = static_cast<png_byte>(std::lround(v * 255.0f));
  }
  std::vector<png_bytep> rows(image.height);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  for (int r = 0; r < image.height; ++r) rows[r] = pixels.data() + r * stride;

  FilePtr file = OpenFile(path, "wb");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            PngError, PngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorKind::kIo, path + ": cannot allocate PNG writer");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorKind::kIo, path + ": PNG write failed (" + message + ")");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> EncodeFloatMap(const SaliencyMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 4 * static_cast<std::size_t>(map.values.size()));
  out.insert(out.end(), {'S', 'M', 'A', 'P'});
  Put<std::uint16_t>(out, kFloatMapVersion);
  Put<std::uint16_t>(out, 0);
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(map.width()));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(map.height()));
  const auto* raw = reinterpret_cast<const std::uint8_t*>(map.values.data());
  out.insert(out.end(), raw, raw + 4 * map.values.size());
  return out;
}

SaliencyMap DecodeFloatMap(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "SMAP", 4) != 0) {
    Fail(ErrorKind::kFormat, "float map: bad magic");
  }
  if (Get<std::uint16_t>(bytes, 4) != kFloatMapVersion ||
      Get<std::uint16_t>(bytes, 6) != 0) {
    Fail(ErrorKind::kFormat, "float map: unsupported version");
  }
  const std::uint32_t width = Get<std::uint32_t>(bytes, 8);
  const std::uint32_t height = Get<std::uint32_t>(bytes, 12);
  const std::uint64_t payload = 4ULL * width * height;
  if (width == 0 || height == 0 || bytes.size() - 16 != payload) {
    Fail(ErrorKind::kFormat, "float map: payload length does not match header");
  }
  RowMajorArray<float> values(height, width);
  std::memcpy(values.data(), bytes.data() + 16, payload);
  try {
    return SaliencyMap::FromValues(std::move(values));
  } catch (const Error& e) {
    Fail(ErrorKind::kFormat, std::string("float map: ") + e.what());
  }
}

SaliencyMap ReadFloatMap(const std::string& path) {
  try {
    return DecodeFloatMap(ReadBytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) {
      Fail(ErrorKind::kFormat, path + ": " + e.what());
    }
    throw;
  }
}

void WriteFloatMap(const SaliencyMap& map, const std::string& path) {
  WriteBytes(path, EncodeFloatMap(map));
}

SaliencyMap ReadFloatMapCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  auto parse_row = [&](const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        Fail(ErrorKind::kFormat, path + ": bad number '" + cell + "'");
      }
    }
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorKind::kFormat, path + ": empty file");
  const std::vector<double> header = parse_row(line);
  if (header.size() != 2 || header[0] < 1 || header[1] < 1 ||
      header[0] != std::floor(header[0]) || header[1] != std::floor(header[1])) {
    Fail(ErrorKind::kFormat, path + ": header must be 'width,height'");
  }
  const int width = static_cast<int>(header[0]);
  const int height = static_cast<int>(header[1]);
  RowMajorArray<float> values(height, width);
  for (int r = 0; r < height; ++r) {
    if (!std::getline(in, line)) {
      Fail(ErrorKind::kFormat, path + ": fewer rows than declared");
    }
    const std::vector<double> row = parse_row(line);
    if (static_cast<int>(row.size()) != width) {
      Fail(ErrorKind::kFormat,
           path + ": row " + std::to_string(r) + " has wrong length");
    }
    for (int c = 0; c < width; ++c) values(r, c) = static_cast<float>(row[c]);
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      Fail(ErrorKind::kFormat, path + ": more rows than declared");
    }
  }
  try {
    return SaliencyMap::FromValues(std::move(values));
  } catch (const Error& e) {
    Fail(ErrorKind::kFormat, path + ": " + e.what());
  }
}

SaliencyMap ReadSaliency(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") {
    return ReadFloatMapCsv(path);
  }
  return ReadFloatMap(path);
}

nlohmann::json RegionSetToJson(const RegionSet& regions) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : regions.elements) elements.push_back(e.patch_ids);
  return {{"n", regions.grid.n},
          {"m", regions.m},
          {"d", regions.d},
          {"patch_h", regions.grid.patch_h},
          {"patch_w", regions.grid.patch_w},
          {"elements", elements}};
}

RegionSet RegionSetFromJson(const nlohmann::json& doc) {
  try {
    RegionSet regions;
    regions.grid.n = Field(doc, "n").get<int>();
    regions.m = Field(doc, "m").get<int>();
    regions.d = Field(doc, "d").get<int>();
    regions.grid.patch_h = Field(doc, "patch_h").get<int>();
    regions.grid.patch_w = Field(doc, "patch_w").get<int>();
    if (regions.grid.patch_h < 1 || regions.grid.patch_w < 1) {
      Fail(ErrorKind::kFormat, "patch size must be positive");
    }
    const auto& elements = Field(doc, "elements");
    for (std::size_t i = 0; i < elements.size(); ++i) {
      regions.elements.push_back(RegionElement{
          static_cast<int>(i), elements.at(i).get<std::vector<int>>()});
    }
    ValidateRegionSet(regions);
    return regions;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("region set: ") + e.what());
  } catch (const Error& e) {
    Fail(ErrorKind::kFormat, std::string("region set: ") + e.what());
  }
}

void WriteRegionSet(const RegionSet& regions, const std::string& path) {
  WriteTextFile(path, RegionSetToJson(regions).dump(2) + "\n");
}

RegionSet ReadRegionSet(const std::string& path) {
  return RegionSetFromJson(ReadJsonFile(path));
}

nlohmann::json ResultToJson(const ResultDocument& doc, bool include_timing) {
  const AttributionResult& r = doc.result;
  nlohmann::json breakdowns = nlohmann::json::array();
  for (const auto& b : r.breakdowns) breakdowns.push_back(BreakdownToJson(b));
  nlohmann::json out = {{"tool_version", doc.tool_version},
                        {"config", doc.config},
                        {"mode", GreedyModeName(r.mode)},
                        {"initial_value", r.initial_value},
                        {"order", r.order},
                        {"gains", r.gains},
                        {"values", r.values},
                        {"breakdowns", breakdowns}};
  if (include_timing) out["timing_ms"] = r.timing_ms;
  return out;
}

ResultDocument ResultFromJson(const nlohmann::json& json) {
  try {
    ResultDocument doc;
    doc.tool_version = Field(json, "tool_version").get<std::string>();
    doc.config = json.value("config", nlohmann::json::object());
    AttributionResult& r = doc.result;
    r.mode = ParseGreedyMode(Field(json, "mode").get<std::string>());
    r.initial_value = Field(json, "initial_value").get<double>();
    r.order = Field(json, "order").get<std::vector<int>>();
    r.gains = Field(json, "gains").get<std::vector<double>>();
    r.values = Field(json, "values").get<std::vector<double>>();
    for (const auto& b : Field(json, "breakdowns")) {
      r.breakdowns.push_back(BreakdownFromJson(b));
    }
    if (json.contains("timing_ms")) {
      r.timing_ms = json.at("timing_ms").get<std::vector<double>>();
    }
    ValidateAttributionResult(r);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("result: ") + e.what());
  } catch (const Error& e) {
    Fail(ErrorKind::kFormat, std::string("result: ") + e.what());
  }
}

void WriteResult(const ResultDocument& doc, const std::string& path,
                 bool include_timing) {
  WriteTextFile(path, ResultToJson(doc, include_timing).dump(2) + "\n");
}

ResultDocument ReadResult(const std::string& path) {
  return ResultFromJson(ReadJsonFile(path));
}

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, path + ": " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot open " + path + " for writing");
  out << text;
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path);
}

}  // namespace smattr
