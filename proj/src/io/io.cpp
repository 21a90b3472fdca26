#include "axrel/io/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "axrel/error.hpp"

namespace axrel::io {

using nlohmann::json;

namespace {

template <typename T>
T from_le(const unsigned char* p) {
  static_assert(sizeof(T) == 4);
  std::uint32_t v = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
                    (std::uint32_t{p[3]} << 24);
  return std::bit_cast<T>(v);
}

template <typename T>
void to_le(T value, std::string& out) {
  static_assert(sizeof(T) == 4);
  const auto v = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

std::string read_bytes(const fs::path& path, Errc code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "short write to '" + path.string() + "'");
}

}  // namespace

std::string read_text(const fs::path& path) {
  return read_bytes(path, Errc::IoError);
}

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, text);
}

std::vector<float> read_f32(const fs::path& path) {
  const std::string bytes = read_bytes(path, Errc::ModelLoadFailure);
  if (bytes.size() % 4 != 0) {
    throw Error(Errc::ModelLoadFailure, "'" + path.string() + "' is not a whole number of float32 values");
  }
  std::vector<float> out(bytes.size() / 4);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = from_le<float>(p + 4 * i);
  return out;
}

void write_f32(const fs::path& path, std::span<const float> values) {
  std::string bytes;
  bytes.reserve(values.size() * 4);
  for (float v : values) to_le(v, bytes);
  write_bytes(path, bytes);
}

net::FloatModel load_model(const fs::path& manifest) {
  json doc;
  try {
    doc = json::parse(read_bytes(manifest, Errc::ModelLoadFailure));
  } catch (const json::exception& e) {
    throw Error(Errc::ModelLoadFailure, "'" + manifest.string() + "': " + e.what());
  }
  const fs::path base = manifest.parent_path();
  net::FloatModel model;
  try {
    if (doc.value("format", "") != "axrel-model-v1") {
      throw Error(Errc::ModelLoadFailure, "'" + manifest.string() + "': expected format axrel-model-v1");
    }
    for (const auto& jl : doc.at("layers")) {
      net::FloatLayer l;
      auto& s = l.spec;
      s.id = jl.at("id").get<std::string>();
      s.kind = net::parse_layer_kind(jl.value("kind", "dense"));
      s.in_dim = jl.at("in_dim").get<std::size_t>();
      s.out_dim = jl.at("out_dim").get<std::size_t>();
      if (s.kind == net::LayerKind::Conv2dAsMatmul) {
        const auto& c = jl.at("conv");
        s.conv = {c.at("in_channels").get<unsigned>(), c.at("height").get<unsigned>(),
                  c.at("width").get<unsigned>(), c.at("kernel").get<unsigned>(),
                  c.at("out_channels").get<unsigned>()};
      }
      s.activation = net::parse_activation(jl.value("activation", "relu"));
      s.backend = arith::parse_label(jl.value("backend", "Exact"), jl.value("backend_width", 8U));
      if (jl.contains("protection")) {
        const auto& p = jl["protection"];
        s.msb_triplication = p.value("msb_triplication", false);
        const std::string clamp = p.value("clamp", "none");
        if (clamp != "none") s.clamp = net::parse_clamp_method(clamp);
      }
      l.weights = read_f32(base / jl.at("weights").get<std::string>());
      l.bias = read_f32(base / jl.at("bias").get<std::string>());
      l.input_scale = jl.at("input_scale").get<double>();
      if (jl.contains("bounds")) {
        const auto& b = jl["bounds"];
        l.bounds = net::Bounds{b.at(0).get<double>(), b.at(1).get<double>()};
      }
      model.layers.push_back(std::move(l));
    }
    model.validate();
  } catch (const json::exception& e) {
    throw Error(Errc::ModelLoadFailure, "'" + manifest.string() + "': " + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::ModelLoadFailure) throw;
    throw Error(Errc::ModelLoadFailure, "'" + manifest.string() + "': " + e.what());
  }
  return model;
}

void save_model(const fs::path& manifest, const net::FloatModel& model) {
  json doc;
  doc["format"] = "axrel-model-v1";
  doc["layers"] = json::array();
  const fs::path base = manifest.parent_path();
  for (const auto& l : model.layers) {
    const auto& s = l.spec;
    json jl;
    jl["id"] = s.id;
    jl["kind"] = std::string(net::to_string(s.kind));
    jl["in_dim"] = s.in_dim;
    jl["out_dim"] = s.out_dim;
    if (s.kind == net::LayerKind::Conv2dAsMatmul) {
      jl["conv"] = {{"in_channels", s.conv.in_channels}, {"height", s.conv.height},
                    {"width", s.conv.width},             {"kernel", s.conv.kernel},
                    {"out_channels", s.conv.out_channels}};
    }
    jl["activation"] = std::string(net::to_string(s.activation));
    jl["backend"] = arith::to_label(s.backend);
    jl["backend_width"] = s.backend.n;
    jl["protection"] = {{"msb_triplication", s.msb_triplication},
                        {"clamp", s.clamp ? std::string(net::to_string(*s.clamp)) : "none"}};
    jl["weights"] = s.id + ".weight.f32";
    jl["bias"] = s.id + ".bias.f32";
    jl["input_scale"] = l.input_scale;
    if (l.bounds) jl["bounds"] = {l.bounds->lower, l.bounds->upper};
    write_f32(base / (s.id + ".weight.f32"), l.weights);
    write_f32(base / (s.id + ".bias.f32"), l.bias);
    doc["layers"].push_back(std::move(jl));
  }
  write_text(manifest, doc.dump(2) + "\n");
}

net::Dataset load_dataset(const fs::path& path) {
  const std::string bytes = read_bytes(path, Errc::IoError);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 16 || std::memcmp(p, "AXDS", 4) != 0) {
    throw Error(Errc::ParseError, "'" + path.string() + "' is not an AXDS dataset");
  }
  if (from_le<std::uint32_t>(p + 4) != 1) {
    throw Error(Errc::ParseError, "'" + path.string() + "': unsupported dataset version");
  }
  net::Dataset d;
  d.rows = from_le<std::uint32_t>(p + 8);
  d.cols = from_le<std::uint32_t>(p + 12);
  const std::size_t expected = 16 + 4 * (d.rows * d.cols + d.rows);
  if (bytes.size() != expected) {
    throw Error(Errc::ParseError, "'" + path.string() + "': size " + std::to_string(bytes.size()) +
                                      " does not match header (" + std::to_string(expected) + ")");
  }
  d.features.resize(d.rows * d.cols);
  d.labels.resize(d.rows);
  const unsigned char* q = p + 16;
  for (auto& f : d.features) {
    f = from_le<float>(q);
    q += 4;
  }
  for (auto& l : d.labels) {
    l = from_le<std::int32_t>(q);
    q += 4;
  }
  return d;
}

void save_dataset(const fs::path& path, const net::Dataset& data) {
  data.validate();
  std::string bytes = "AXDS";
  to_le(std::uint32_t{1}, bytes);
  to_le(static_cast<std::uint32_t>(data.rows), bytes);
  to_le(static_cast<std::uint32_t>(data.cols), bytes);
  for (float f : data.features) to_le(f, bytes);
  for (auto l : data.labels) to_le(l, bytes);
  write_bytes(path, bytes);
}

std::string to_text(const StoredTensor& t) {
  char scale[64];
  std::snprintf(scale, sizeof scale, "%a", t.scheme.scale);
  std::ostringstream os;
  os << "#qtensor v1\n"
     << "bits=" << t.scheme.bits << "\n"
     << "scale=" << scale << "\n"
     << "protected=" << (t.is_protected ? 1 : 0) << "\n"
     << "count=" << t.words.size() << "\n";
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    os << t.words[i] << ((i + 1) % 16 == 0 || i + 1 == t.words.size() ? '\n' : ' ');
  }
  return os.str();
}

StoredTensor stored_tensor_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "#qtensor v1") {
    throw Error(Errc::ParseError, "missing '#qtensor v1' header");
  }
  StoredTensor t;
  std::size_t count = 0;
  auto field = [&](const char* key) {
    if (!std::getline(is, line) || line.rfind(std::string(key) + "=", 0) != 0) {
      throw Error(Errc::ParseError, std::string("qtensor: expected '") + key + "='");
    }
    return line.substr(std::strlen(key) + 1);
  };
  try {
    t.scheme.bits = static_cast<unsigned>(std::stoul(field("bits")));
    t.scheme.scale = std::strtod(field("scale").c_str(), nullptr);
    t.is_protected = field("protected") == "1";
    count = std::stoull(field("count"));
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "qtensor: malformed header value");
  }
  const unsigned width = t.is_protected ? quant::protected_width(t.scheme.bits) : t.scheme.bits;
  t.words.reserve(count);
  quant::Word w;
  while (is >> w) {
    if (w >> width) throw Error(Errc::CodeOutOfRange, "qtensor word exceeds stored width");
    t.words.push_back(w);
  }
  if (t.words.size() != count) throw Error(Errc::ParseError, "qtensor: word count mismatch");
  return t;
}

}  // namespace axrel::io
