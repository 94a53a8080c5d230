#include "trajsfm/motionseg/segnet.h"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "trajsfm/util/binary_io.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"

namespace trajsfm {
namespace {

// Weights are stored as float; activations are evaluated in double.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using FloatMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kLayerNormEps = 1e-5;
constexpr double kInstanceNormEps = 1e-3;
constexpr double kLogitClamp = 30.0;
constexpr char kMagic[4] = {'S', 'G', 'N', 'W'};

using Shape = std::vector<uint32_t>;

void AddAffine(std::vector<std::pair<std::string, Shape>>& out,
               const std::string& name, uint32_t out_dim, uint32_t in_dim) {
  out.push_back({name + ".weight", {out_dim, in_dim}});
  out.push_back({name + ".bias", {out_dim}});
}

void AddNorm(std::vector<std::pair<std::string, Shape>>& out,
             const std::string& name, uint32_t dim) {
  out.push_back({name + ".weight", {dim}});
  out.push_back({name + ".bias", {dim}});
}

class ForwardPass {
 public:
  explicit ForwardPass(const SegNetWeights& weights) : w_(weights) {
    for (const auto& [name, t] : weights.tensors) {
      const Eigen::Index rows = t.dims[0];
      const Eigen::Index cols = t.dims.size() > 1 ? t.dims[1] : 1;
      params_[name] = Eigen::Map<const FloatMat>(t.data.data(), rows, cols).cast<double>();
    }
  }

  const Mat& M(const std::string& name) const {
    const auto it = params_.find(name);
    if (it == params_.end()) throw ValidationError("missing weight tensor " + name);
    return it->second;
  }
  Vec V(const std::string& name) const { return M(name).col(0).transpose(); }

  // x W^T + b, rows are samples.
  Mat Affine(const Mat& x, const std::string& name) const {
    Mat y = x * M(name + ".weight").transpose();
    y.rowwise() += V(name + ".bias");
    return y;
  }

  Mat LayerNorm(const Mat& x, const std::string& name) const {
    const auto gamma = V(name + ".weight");
    const auto beta = V(name + ".bias");
    Mat y(x.rows(), x.cols());
    for (int r = 0; r < x.rows(); ++r) {
      const double mean = x.row(r).mean();
      const double var = (x.row(r).array() - mean).square().mean();
      const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
      y.row(r) = ((x.row(r).array() - mean) * inv * gamma.array() + beta.array()).matrix();
    }
    return y;
  }

  // Per-column normalization over the rows (the point or cluster population),
  // then per-column scale and shift.
  Mat InstanceNorm(const Mat& x, const std::string& name) const {
    const auto gamma = V(name + ".weight");
    const auto beta = V(name + ".bias");
    const Vec mean = x.colwise().mean();
    Mat centered = x.rowwise() - mean;
    const Vec var = centered.array().square().colwise().mean().matrix();
    for (int c = 0; c < x.cols(); ++c) {
      const double scale = gamma(c) / std::sqrt(var(c) + kInstanceNormEps);
      centered.col(c) = (centered.col(c).array() * scale + beta(c)).matrix();
    }
    return centered;
  }

  static Mat Relu(const Mat& x) { return x.cwiseMax(0.0); }

  static void SoftmaxRows(Mat& x) {
    for (int r = 0; r < x.rows(); ++r) {
      const double m = x.row(r).maxCoeff();
      x.row(r) = (x.row(r).array() - m).exp().matrix();
      x.row(r) /= x.row(r).sum();
    }
  }

  static void CheckFinite(const Mat& x, const std::string& layer) {
    if (!x.allFinite()) throw NumericError("non-finite activation after " + layer);
  }

  // Pooled (1 x C) feature of one window from its valid rows only.
  Vec EncodeWindow(const TrajectoryWindow& window) const {
    const SegNetConfig& cfg = w_.config;
    const int valid = window.valid();
    Mat h = window.features.topRows(valid).cast<double>();
    h = Affine(Relu(Affine(h, "embed.0")), "embed.1");
    CheckFinite(h, "embed");
    const int head_dim = cfg.channels / cfg.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    for (int b = 0; b < cfg.encoder_blocks; ++b) {
      const std::string p = "encoder." + std::to_string(b) + ".";
      const Mat a = LayerNorm(h, p + "norm1");
      const Mat q = Affine(a, p + "attn.q");
      const Mat k = Affine(a, p + "attn.k");
      const Mat v = Affine(a, p + "attn.v");
      Mat heads(valid, cfg.channels);
      for (int hd = 0; hd < cfg.heads; ++hd) {
        const int off = hd * head_dim;
        Mat s = q.middleCols(off, head_dim) * k.middleCols(off, head_dim).transpose() * scale;
        SoftmaxRows(s);
        heads.middleCols(off, head_dim) = s * v.middleCols(off, head_dim);
      }
      h += Affine(heads, p + "attn.out");
      const Mat f = LayerNorm(h, p + "norm2");
      h += Affine(Relu(Affine(f, p + "ffn.0")), p + "ffn.1");
      CheckFinite(h, "encoder." + std::to_string(b));
    }
    return h.colwise().maxCoeff();
  }

  std::vector<double> Decode(const Mat& features) const {
    const SegNetConfig& cfg = w_.config;
    // Soft assignment of points to clusters.
    Mat s = Affine(Relu(InstanceNorm(features, "decoder.pool.norm")),
                   "decoder.pool.assign");
    SoftmaxRows(s);
    const Vec mass = s.colwise().sum();
    Mat clusters = s.transpose() * features;
    for (int k = 0; k < cfg.clusters; ++k) clusters.row(k) /= mass(k) + 1e-6;
    CheckFinite(clusters, "decoder.pool");

    for (int l = 0; l < cfg.context_layers; ++l) {
      const std::string p = "decoder.context." + std::to_string(l) + ".";
      clusters += Affine(Relu(InstanceNorm(clusters, p + "norm1")), p + "channel");
      const Mat z = Relu(InstanceNorm(clusters, p + "norm2"));
      Mat mixed = M(p + "cluster.weight") * z;
      mixed.colwise() += V(p + "cluster.bias").transpose();
      clusters += mixed;
      CheckFinite(clusters, "decoder.context." + std::to_string(l));
    }

    Mat a = Affine(Relu(InstanceNorm(features, "decoder.unpool.norm")),
                   "decoder.unpool.assign");
    SoftmaxRows(a);
    Mat fused(features.rows(), 2 * cfg.channels);
    fused.leftCols(cfg.channels) = features;
    fused.rightCols(cfg.channels) = a * clusters;
    Mat y = Affine(fused, "decoder.fuse");
    CheckFinite(y, "decoder.unpool");

    for (int l = 0; l < cfg.pointcn_layers; ++l) {
      const std::string p = "decoder.pointcn." + std::to_string(l);
      y += Relu(InstanceNorm(Affine(y, p), p + ".norm"));
      CheckFinite(y, p);
    }
    const Mat logits = Affine(y, "decoder.head");
    CheckFinite(logits, "decoder.head");
    std::vector<double> out(logits.rows());
    for (int r = 0; r < logits.rows(); ++r) {
      const double z = std::clamp(logits(r, 0), -kLogitClamp,
                                  kLogitClamp);
      out[r] = 1.0 / (1.0 + std::exp(-z));
    }
    return out;
  }

 private:
  const SegNetWeights& w_;
  std::map<std::string, Mat> params_;
};

}  // namespace

const Tensor& SegNetWeights::Get(const std::string& name) const {
  const auto it = tensors.find(name);
  if (it == tensors.end()) throw ValidationError("missing weight tensor " + name);
  return it->second;
}

std::vector<std::pair<std::string, std::vector<uint32_t>>> ExpectedTensors(
    const SegNetConfig& cfg) {
  const uint32_t c = cfg.channels;
  const uint32_t k = cfg.clusters;
  std::vector<std::pair<std::string, Shape>> out;
  AddAffine(out, "embed.0", c, kFeatureDim);
  AddAffine(out, "embed.1", c, c);
  for (int b = 0; b < cfg.encoder_blocks; ++b) {
    const std::string p = "encoder." + std::to_string(b) + ".";
    AddNorm(out, p + "norm1", c);
    AddAffine(out, p + "attn.q", c, c);
    AddAffine(out, p + "attn.k", c, c);
    AddAffine(out, p + "attn.v", c, c);
    AddAffine(out, p + "attn.out", c, c);
    AddNorm(out, p + "norm2", c);
    AddAffine(out, p + "ffn.0", cfg.feedforward, c);
    AddAffine(out, p + "ffn.1", c, cfg.feedforward);
  }
  AddNorm(out, "decoder.pool.norm", c);
  AddAffine(out, "decoder.pool.assign", k, c);
  for (int l = 0; l < cfg.context_layers; ++l) {
    const std::string p = "decoder.context." + std::to_string(l) + ".";
    AddNorm(out, p + "norm1", c);
    AddAffine(out, p + "channel", c, c);
    AddNorm(out, p + "norm2", c);
    AddAffine(out, p + "cluster", k, k);
  }
  AddNorm(out, "decoder.unpool.norm", c);
  AddAffine(out, "decoder.unpool.assign", k, c);
  AddAffine(out, "decoder.fuse", c, 2 * c);
  for (int l = 0; l < cfg.pointcn_layers; ++l) {
    const std::string p = "decoder.pointcn." + std::to_string(l);
    AddAffine(out, p, c, c);
    AddNorm(out, p + ".norm", c);
  }
  AddAffine(out, "decoder.head", 1, c);
  return out;
}

void ValidateWeights(const SegNetWeights& weights) {
  const SegNetConfig& cfg = weights.config;
  if (cfg.channels <= 0 || cfg.clusters <= 0 || cfg.heads <= 0 ||
      cfg.channels % cfg.heads != 0) {
    throw ValidationError("channels " + std::to_string(cfg.channels) +
                          " not divisible by " + std::to_string(cfg.heads) +
                          " heads");
  }
  const auto expected = ExpectedTensors(cfg);
  std::set<std::string> names;
  for (const auto& [name, shape] : expected) {
    names.insert(name);
    const auto it = weights.tensors.find(name);
    if (it == weights.tensors.end()) {
      throw ValidationError("missing weight tensor " + name);
    }
    if (it->second.dims != shape) {
      throw ValidationError("weight tensor " + name + " has wrong shape");
    }
    if (it->second.data.size() != it->second.size()) {
      throw ValidationError("weight tensor " + name + " payload size mismatch");
    }
    for (const float v : it->second.data) {
      if (!std::isfinite(v)) {
        throw ValidationError("weight tensor " + name + " is not finite");
      }
    }
  }
  for (const auto& [name, tensor] : weights.tensors) {
    if (!names.count(name)) throw ValidationError("unexpected weight tensor " + name);
  }
}

SegNetWeights RandomWeights(const SegNetConfig& config, uint64_t seed) {
  SegNetWeights weights;
  weights.config = config;
  std::mt19937_64 rng(seed);
  for (const auto& [name, shape] : ExpectedTensors(config)) {
    Tensor t;
    t.dims = shape;
    t.data.resize(t.size());
    const bool is_norm = name.find("norm") != std::string::npos;
    if (shape.size() == 2) {
      const float bound = std::sqrt(6.0f / static_cast<float>(shape[0] + shape[1]));
      std::uniform_real_distribution<float> dist(-bound, bound);
      for (auto& v : t.data) v = dist(rng);
    } else {
      std::uniform_real_distribution<float> dist(-0.1f, 0.1f);
      const bool is_gain = is_norm && name.ends_with(".weight");
      for (auto& v : t.data) v = (is_gain ? 1.0f : 0.0f) + dist(rng);
    }
    weights.tensors.emplace(name, std::move(t));
  }
  return weights;
}

SegNetWeights LoadWeights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights " + path);
  const std::string magic = ReadBytes(in, 4, "SGNW magic");
  if (magic != std::string(kMagic, 4)) {
    throw FormatError(path + ": bad magic, expected SGNW");
  }
  const auto version = ReadLittleEndian<uint32_t>(in, "SGNW version");
  if (version != kWeightsVersion) {
    throw FormatError(path + ": unsupported SGNW version " + std::to_string(version));
  }
  SegNetWeights weights;
  weights.config.channels = static_cast<int>(ReadLittleEndian<uint32_t>(in, "SGNW channels"));
  weights.config.clusters = static_cast<int>(ReadLittleEndian<uint32_t>(in, "SGNW clusters"));
  while (in.peek() != std::char_traits<char>::eof()) {
    const auto name_len = ReadLittleEndian<uint16_t>(in, "tensor name length");
    const std::string name = ReadBytes(in, name_len, "tensor name");
    const auto rank = ReadLittleEndian<uint8_t>(in, "tensor rank");
    Tensor t;
    for (int d = 0; d < rank; ++d) {
      t.dims.push_back(ReadLittleEndian<uint32_t>(in, "tensor dims of " + name));
    }
    t.data.resize(t.size());
    for (auto& v : t.data) v = ReadLittleEndian<float>(in, "tensor payload of " + name);
    if (!weights.tensors.emplace(name, std::move(t)).second) {
      throw FormatError(path + ": duplicate tensor " + name);
    }
  }
  ValidateWeights(weights);
  return weights;
}

void SaveWeights(const SegNetWeights& weights, const std::string& path) {
  ValidateWeights(weights);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  WriteLittleEndian<uint32_t>(out, kWeightsVersion);
  WriteLittleEndian<uint32_t>(out, weights.config.channels);
  WriteLittleEndian<uint32_t>(out, weights.config.clusters);
  for (const auto& [name, shape] : ExpectedTensors(weights.config)) {
    const Tensor& t = weights.Get(name);
    WriteLittleEndian<uint16_t>(out, static_cast<uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WriteLittleEndian<uint8_t>(out, static_cast<uint8_t>(t.dims.size()));
    for (const auto d : t.dims) WriteLittleEndian<uint32_t>(out, d);
    for (const float v : t.data) WriteLittleEndian<float>(out, v);
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<double> SegNetForward(const std::vector<TrajectoryWindow>& windows,
                                  const SegNetWeights& weights, int num_threads) {
  if (windows.size() < 2) {
    throw ValidationError("segmentation network needs at least 2 windows, got " +
                          std::to_string(windows.size()));
  }
  for (const auto& w : windows) {
    if (w.features.rows() != w.length() || w.valid() == 0) {
      throw ValidationError("window of trajectory " + std::to_string(w.trajectory) +
                            " has no valid rows or inconsistent shape");
    }
  }
  const ForwardPass net(weights);
  Mat pooled(windows.size(), weights.config.channels);
  ParallelFor(windows.size(), num_threads,
              [&](size_t n) { pooled.row(n) = net.EncodeWindow(windows[n]); });
  return net.Decode(pooled);
}

}  // namespace trajsfm
