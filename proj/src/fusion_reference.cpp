// SPDX-License-Identifier: Apache-2.0
#include "tcqa/fusion_reference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tcqa/error.hpp"
#include "tcqa/text.hpp"

namespace tcqa::fusion {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in [lo, hi) from the top 53 bits; identical on every platform.
double uniform(std::uint64_t bits, double lo, double hi) noexcept {
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Eigen::VectorXd hashed_vector(std::uint64_t key, int d) {
  std::uint64_t state = key;
  Eigen::VectorXd v(d);
  for (int k = 0; k < d; ++k) v[k] = uniform(splitmix64(state), -1.0, 1.0);
  return v;
}

// Domain tags keep text and image streams apart for the same seed.
constexpr std::uint64_t kTextTag = 0x7465787400000000ULL;
constexpr std::uint64_t kImageTag = 0x696D616700000000ULL;

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t tag, std::uint64_t value) {
  std::uint64_t state = seed ^ tag;
  const auto a = splitmix64(state);
  state = a ^ value;
  return splitmix64(state);
}

Eigen::VectorXd forward(const Vec4& b, const MlpParams& p, Activation act) {
  Eigen::VectorXd h = p.w1 * b + p.c1;
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = activate(act, h[i]);
  return p.w2 * h + p.c2;
}

}  // namespace

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::Gelu: return "gelu";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "gelu";
}

std::optional<Activation> parse_activation(std::string_view name) noexcept {
  if (name == "gelu") return Activation::Gelu;
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  return std::nullopt;
}

std::string_view to_string(TokenKind k) noexcept {
  switch (k) {
    case TokenKind::Layout: return "layout";
    case TokenKind::Text: return "text";
    case TokenKind::Image: return "image";
    case TokenKind::Question: return "question";
  }
  return "";
}

void FusionConfig::validate() const {
  if (d < 1 || hidden < 1) throw Error(ErrorCode::InvalidArgument, "d and hidden must be >= 1");
  if (n_image_tokens < 0) throw Error(ErrorCode::InvalidArgument, "n_image_tokens must be >= 0");
}

MlpParams init_params(const FusionConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  auto fill = [&](auto& m, double bound) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng(), -bound, bound);
  };
  MlpParams p;
  p.w1.resize(cfg.hidden, 4);
  p.c1.resize(cfg.hidden);
  p.w2.resize(cfg.d, cfg.hidden);
  p.c2.resize(cfg.d);
  const double b1 = 1.0 / std::sqrt(4.0);
  const double b2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
  fill(p.w1, b1);
  fill(p.c1, b1);
  fill(p.w2, b2);
  fill(p.c2, b2);
  return p;
}

Vec4 normalize_bbox(const BBox& b, Px page_width, Px page_height) {
  if (page_width <= 0 || page_height <= 0) throw Error(ErrorCode::InvalidArgument, "page dimensions must be positive");
  if (b.x1 < 0 || b.y1 < 0 || b.x2 > page_width || b.y2 > page_height || b.x1 > b.x2 || b.y1 > b.y2) {
    throw Error(ErrorCode::OutOfPage, "bbox (" + std::to_string(b.x1) + "," + std::to_string(b.y1) + ")-(" +
                                          std::to_string(b.x2) + "," + std::to_string(b.y2) + ") exceeds page " +
                                          std::to_string(page_width) + "x" + std::to_string(page_height));
  }
  const auto w = static_cast<double>(page_width);
  const auto h = static_cast<double>(page_height);
  return {static_cast<double>(b.x1) / w, static_cast<double>(b.y1) / h, static_cast<double>(b.x2) / w,
          static_cast<double>(b.y2) / h};
}

double activate(Activation a, double x) noexcept {
  switch (a) {
    case Activation::Gelu: return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Tanh: return std::tanh(x);
  }
  return x;
}

double activate_derivative(Activation a, double x) noexcept {
  switch (a) {
    case Activation::Gelu: {
      const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
      return cdf + x * pdf;
    }
    case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

Eigen::VectorXd layout_embed(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg) {
  if ((b_norm.array() < 0.0).any() || (b_norm.array() > 1.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "normalized bbox must lie in [0,1]^4");
  }
  return forward(b_norm, params, cfg.activation);
}

Jacobian layout_embed_jacobian(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg) {
  const Eigen::VectorXd z = params.w1 * b_norm + params.c1;
  Eigen::VectorXd slope(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) slope[i] = activate_derivative(cfg.activation, z[i]);
  return params.w2 * slope.asDiagonal() * params.w1;
}

Jacobian finite_difference_jacobian(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg,
                                    double eps) {
  Jacobian j(params.w2.rows(), 4);
  for (int k = 0; k < 4; ++k) {
    Vec4 plus = b_norm;
    Vec4 minus = b_norm;
    plus[k] += eps;
    minus[k] -= eps;
    j.col(k) = (forward(plus, params, cfg.activation) - forward(minus, params, cfg.activation)) / (2.0 * eps);
  }
  return j;
}

std::vector<Eigen::VectorXd> toy_text_embed(std::string_view text, const FusionConfig& cfg) {
  std::vector<Eigen::VectorXd> out;
  for (char32_t cp : decode_utf8(text)) out.push_back(hashed_vector(mix_key(cfg.seed, kTextTag, cp), cfg.d));
  return out;
}

std::vector<Eigen::VectorXd> image_placeholders(const FusionConfig& cfg) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(cfg.n_image_tokens));
  for (int k = 0; k < cfg.n_image_tokens; ++k) {
    out.push_back(hashed_vector(mix_key(cfg.seed, kImageTag, static_cast<std::uint64_t>(k)), cfg.d));
  }
  return out;
}

std::vector<TokenKind> FusionSequence::kinds() const {
  std::vector<TokenKind> out;
  out.reserve(positions.size());
  for (const auto& p : positions) out.push_back(p.kind);
  return out;
}

std::size_t expected_length(const LayoutDocument& doc, std::string_view question, const FusionConfig& cfg) {
  std::size_t n = doc.spans.size();
  for (const auto& s : doc.spans) n += decode_utf8(s.text).size();
  return n + static_cast<std::size_t>(cfg.n_image_tokens) + decode_utf8(question).size();
}

FusionSequence assemble_sequence(const LayoutDocument& doc, std::string_view question, const MlpParams& params,
                                 const FusionConfig& cfg) {
  cfg.validate();
  FusionSequence seq;
  seq.positions.reserve(expected_length(doc, question, cfg));
  for (std::size_t i = 0; i < doc.spans.size(); ++i) {
    const auto& span = doc.spans[i];
    const Vec4 b = normalize_bbox(span.bbox, doc.page_width, doc.page_height);
    seq.positions.push_back({layout_embed(b, params, cfg), TokenKind::Layout, i});
    for (auto& e : toy_text_embed(span.text, cfg)) seq.positions.push_back({std::move(e), TokenKind::Text, i});
  }
  for (auto& e : image_placeholders(cfg)) seq.positions.push_back({std::move(e), TokenKind::Image, std::nullopt});
  for (auto& e : toy_text_embed(question, cfg)) {
    seq.positions.push_back({std::move(e), TokenKind::Question, std::nullopt});
  }
  return seq;
}

bool has_block_order(const FusionSequence& seq, const FusionConfig& cfg) {
  const auto& pos = seq.positions;
  std::size_t i = 0;
  std::size_t span = 0;
  while (i < pos.size() && pos[i].kind == TokenKind::Layout) {
    if (pos[i].span_index != span) return false;
    ++i;
    std::size_t texts = 0;
    while (i < pos.size() && pos[i].kind == TokenKind::Text) {
      if (pos[i].span_index != span) return false;
      ++i;
      ++texts;
    }
    if (texts == 0) return false;
    ++span;
  }
  for (int k = 0; k < cfg.n_image_tokens; ++k, ++i) {
    if (i >= pos.size() || pos[i].kind != TokenKind::Image || pos[i].span_index) return false;
  }
  for (; i < pos.size(); ++i) {
    if (pos[i].kind != TokenKind::Question || pos[i].span_index) return false;
  }
  return true;
}

double gradcheck(const MlpParams& params, const FusionConfig& cfg, int trials, ExecPolicy policy) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "gradcheck needs at least one trial");
  cfg.validate();
  std::mt19937_64 rng(cfg.seed ^ 0x6772616463686BULL);
  std::vector<Vec4> inputs(static_cast<std::size_t>(trials));
  for (auto& b : inputs) {
    for (int k = 0; k < 4; ++k) b[k] = uniform(rng(), 0.0, 1.0);
  }
  std::vector<double> worst(inputs.size(), 0.0);
  parallel_for(inputs.size(), policy, [&](std::size_t t) {
    const Jacobian analytic = layout_embed_jacobian(inputs[t], params, cfg);
    const Jacobian numeric = finite_difference_jacobian(inputs[t], params, cfg, 1e-6);
    double err = 0.0;
    for (Eigen::Index row = 0; row < analytic.rows(); ++row) {
      const double diff = (analytic.row(row) - numeric.row(row)).norm();
      const double denom = std::max({analytic.row(row).norm(), numeric.row(row).norm(), 1e-8});
      err = std::max(err, diff / denom);
    }
    worst[t] = err;
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace tcqa::fusion
