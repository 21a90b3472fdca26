#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "axrel/net/engine.hpp"
#include "axrel/net/model.hpp"
#include "axrel/quant/quant.hpp"

namespace axrel::io {

namespace fs = std::filesystem;

// Flat little-endian float32 arrays.
std::vector<float> read_f32(const fs::path& path);
void write_f32(const fs::path& path, std::span<const float> values);

// JSON model manifest; weight/bias paths resolve relative to the manifest.
// Throws ModelLoadFailure.
net::FloatModel load_model(const fs::path& manifest);
void save_model(const fs::path& manifest, const net::FloatModel& model);

// "AXDS" | u32 version | u32 rows | u32 cols | f32 features[rows*cols] | i32 labels[rows]
net::Dataset load_dataset(const fs::path& path);
void save_dataset(const fs::path& path, const net::Dataset& data);

// Quantized tensor text form; the scale is written as a hex float so reloads
// are bit-exact.
struct StoredTensor {
  quant::QuantScheme scheme;
  bool is_protected = false;
  std::vector<quant::Word> words;
};
std::string to_text(const StoredTensor& t);
StoredTensor stored_tensor_from_text(const std::string& text);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace axrel::io
