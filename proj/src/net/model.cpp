#include "axrel/net/model.hpp"

#include "axrel/error.hpp"

namespace axrel::net {

std::size_t LayerSpec::rows() const noexcept {
  return kind == LayerKind::Dense ? out_dim : conv.out_channels;
}

std::size_t LayerSpec::fan_in() const noexcept {
  return kind == LayerKind::Dense ? in_dim
                                  : std::size_t{conv.in_channels} * conv.kernel * conv.kernel;
}

std::size_t LayerSpec::positions() const noexcept {
  return kind == LayerKind::Dense ? 1 : std::size_t{conv.out_height()} * conv.out_width();
}

namespace {

void validate_spec(const LayerSpec& s, bool last) {
  if (s.in_dim == 0 || s.out_dim == 0) {
    throw Error(Errc::ShapeMismatch, "layer '" + s.id + "' has a zero dimension");
  }
  if (s.kind == LayerKind::Conv2dAsMatmul) {
    const auto& c = s.conv;
    if (c.in_channels == 0 || c.kernel == 0 || c.out_channels == 0 || c.kernel > c.height ||
        c.kernel > c.width) {
      throw Error(Errc::ShapeMismatch, "layer '" + s.id + "' has invalid conv geometry");
    }
    if (s.in_dim != std::size_t{c.in_channels} * c.height * c.width ||
        s.out_dim != std::size_t{c.out_channels} * c.out_height() * c.out_width()) {
      throw Error(Errc::ShapeMismatch, "layer '" + s.id + "' dims disagree with conv geometry");
    }
  }
  if (s.activation == Activation::Softmax && !last) {
    throw Error(Errc::InvalidConfig, "layer '" + s.id + "': softmax is only allowed on the final layer");
  }
  s.backend.validate();
}

}  // namespace

void FloatModel::validate() const {
  if (layers.empty()) throw Error(Errc::ShapeMismatch, "model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    validate_spec(l.spec, i + 1 == layers.size());
    if (i > 0 && layers[i - 1].spec.out_dim != l.spec.in_dim) {
      throw Error(Errc::ShapeMismatch, "layer '" + l.spec.id + "' input does not match previous output");
    }
    if (l.weights.size() != l.spec.weight_count()) {
      throw Error(Errc::ShapeMismatch, "layer '" + l.spec.id + "' weight count " +
                                           std::to_string(l.weights.size()) + " != " +
                                           std::to_string(l.spec.weight_count()));
    }
    if (l.bias.size() != l.spec.rows()) {
      throw Error(Errc::ShapeMismatch, "layer '" + l.spec.id + "' bias length mismatch");
    }
    if (!(l.input_scale > 0.0)) {
      throw Error(Errc::InvalidConfig, "layer '" + l.spec.id + "' input_scale must be positive");
    }
  }
}

std::uint64_t FloatModel::param_count() const {
  std::uint64_t n = 0;
  for (const auto& l : layers) n += l.weights.size();
  return n;
}

void NetworkModel::validate() const {
  if (layers.empty()) throw Error(Errc::ShapeMismatch, "model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    validate_spec(l.spec, i + 1 == layers.size());
    if (i > 0 && layers[i - 1].spec.out_dim != l.spec.in_dim) {
      throw Error(Errc::ShapeMismatch, "layer '" + l.spec.id + "' input does not match previous output");
    }
    if (l.stored.size() != l.spec.weight_count() || l.bias.size() != l.spec.rows()) {
      throw Error(Errc::ShapeMismatch, "layer '" + l.spec.id + "' parameter count mismatch");
    }
    if (l.spec.clamp && !l.bounds) {
      throw Error(Errc::InvalidConfig, "layer '" + l.spec.id + "' uses clamping but has no bounds");
    }
    if (l.bounds && l.bounds->lower > l.bounds->upper) {
      throw Error(Errc::InvalidConfig, "layer '" + l.spec.id + "' has lower bound above upper bound");
    }
  }
}

std::uint64_t NetworkModel::param_count() const {
  std::uint64_t n = 0;
  for (const auto& l : layers) n += l.stored.size();
  return n;
}

std::uint64_t NetworkModel::memory_bits() const {
  std::uint64_t bits = 0;
  for (const auto& l : layers) {
    bits += quant::protected_memory_bits(l.stored.size(), l.scheme.bits, l.spec.msb_triplication);
  }
  return bits;
}

std::uint64_t NetworkModel::mac_count() const {
  std::uint64_t n = 0;
  for (const auto& l : layers) n += l.spec.mac_count();
  return n;
}

std::vector<faults::TensorShape> NetworkModel::weight_shape() const {
  std::vector<faults::TensorShape> shape;
  for (const auto& l : layers) shape.push_back({l.stored.size(), l.stored_width()});
  return shape;
}

std::vector<faults::ActivationLayerShape> NetworkModel::activation_shape() const {
  std::vector<faults::ActivationLayerShape> shape;
  for (std::uint32_t i = 0; i < layers.size(); ++i) {
    shape.push_back({i, layers[i].spec.in_dim, kActivationBits});
  }
  return shape;
}

NetworkModel quantize_model(const FloatModel& model, unsigned bits) {
  model.validate();
  NetworkModel out;
  for (const auto& l : model.layers) {
    auto q = quant::quantize(l.weights, bits);
    QuantizedLayer ql;
    ql.spec = l.spec;
    ql.scheme = q.scheme;
    ql.stored = l.spec.msb_triplication ? quant::protect_all(q.codes, bits) : std::move(q.codes);
    ql.bias = l.bias;
    ql.input_scale = l.input_scale;
    ql.bounds = l.bounds;
    out.layers.push_back(std::move(ql));
  }
  out.validate();
  return out;
}

NetworkModel with_protection(NetworkModel model, bool msb_triplication) {
  for (auto& l : model.layers) {
    if (l.spec.msb_triplication == msb_triplication) continue;
    l.stored = msb_triplication ? quant::protect_all(l.stored, l.scheme.bits)
                                : quant::decode_all(l.stored, l.scheme.bits);
    l.spec.msb_triplication = msb_triplication;
  }
  return model;
}

FloatModel with_protection(FloatModel model, bool msb_triplication) {
  for (auto& l : model.layers) l.spec.msb_triplication = msb_triplication;
  return model;
}

NetworkModel with_clamp(NetworkModel model, std::optional<ClampMethod> method) {
  for (auto& l : model.layers) l.spec.clamp = method;
  model.validate();
  return model;
}

NetworkModel with_bounds(NetworkModel model, std::span<const Bounds> bounds) {
  if (bounds.size() != model.layers.size()) {
    throw Error(Errc::ShapeMismatch, "one Bounds entry per layer required");
  }
  for (std::size_t i = 0; i < bounds.size(); ++i) model.layers[i].bounds = bounds[i];
  model.validate();
  return model;
}

NetworkModel with_backend(NetworkModel model, const arith::MultConfig& backend) {
  backend.validate();
  for (auto& l : model.layers) l.spec.backend = backend;
  return model;
}

std::string_view to_string(LayerKind k) noexcept {
  return k == LayerKind::Dense ? "dense" : "conv2d";
}

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::None: return "none";
    case Activation::ReLU: return "relu";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

std::string_view to_string(ClampMethod m) noexcept {
  switch (m) {
    case ClampMethod::LowerBound: return "m1";
    case ClampMethod::UpperBound: return "m2";
    case ClampMethod::SignBased: return "m3";
  }
  return "?";
}

LayerKind parse_layer_kind(const std::string& s) {
  if (s == "dense") return LayerKind::Dense;
  if (s == "conv2d") return LayerKind::Conv2dAsMatmul;
  throw Error(Errc::InvalidConfig, "unknown layer kind '" + s + "'");
}

Activation parse_activation(const std::string& s) {
  if (s == "none") return Activation::None;
  if (s == "relu") return Activation::ReLU;
  if (s == "softmax") return Activation::Softmax;
  throw Error(Errc::InvalidConfig, "unknown activation '" + s + "'");
}

ClampMethod parse_clamp_method(const std::string& s) {
  if (s == "m1" || s == "lower") return ClampMethod::LowerBound;
  if (s == "m2" || s == "upper") return ClampMethod::UpperBound;
  if (s == "m3" || s == "sign") return ClampMethod::SignBased;
  throw Error(Errc::InvalidConfig, "unknown clamp method '" + s + "'");
}

}  // namespace axrel::net
