// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tcqa/layout_engine.hpp"
#include "tcqa/parallel.hpp"

namespace tcqa::fusion {

enum class Activation { Gelu, Relu, Tanh };
std::string_view to_string(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view name) noexcept;

struct FusionConfig {
  int d = 32;
  int hidden = 64;
  Activation activation = Activation::Gelu;
  int n_image_tokens = 4;
  std::uint64_t seed = 0;

  /// Throws Error{InvalidArgument}.
  void validate() const;
};

/// Two-layer MLP mapping a normalized box to one d-wide token:
/// e = W2 * act(W1 * b + c1) + c2.
struct MlpParams {
  Eigen::MatrixXd w1;  // hidden x 4
  Eigen::VectorXd c1;  // hidden
  Eigen::MatrixXd w2;  // d x hidden
  Eigen::VectorXd c2;  // d
};

/// Seeded uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer.
MlpParams init_params(const FusionConfig& cfg);

using Vec4 = Eigen::Vector4d;
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, 4>;

/// (x1/W, y1/H, x2/W, y2/H). Throws Error{OutOfPage} when the box leaves the
/// page, Error{InvalidArgument} for an empty page.
Vec4 normalize_bbox(const BBox& b, Px page_width, Px page_height);

double activate(Activation a, double x) noexcept;
double activate_derivative(Activation a, double x) noexcept;

Eigen::VectorXd layout_embed(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg);
/// Analytic d x 4 Jacobian of layout_embed.
Jacobian layout_embed_jacobian(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg);
/// Central differences, step eps, one coordinate at a time.
Jacobian finite_difference_jacobian(const Vec4& b_norm, const MlpParams& params, const FusionConfig& cfg,
                                    double eps = 1e-6);

/// One vector per Unicode scalar value; identical characters map to
/// identical vectors regardless of position.
std::vector<Eigen::VectorXd> toy_text_embed(std::string_view text, const FusionConfig& cfg);

/// Opaque stand-ins for image encoder outputs.
std::vector<Eigen::VectorXd> image_placeholders(const FusionConfig& cfg);

enum class TokenKind { Layout, Text, Image, Question };
std::string_view to_string(TokenKind k) noexcept;

struct SequencePosition {
  Eigen::VectorXd embedding;
  TokenKind kind;
  std::optional<std::size_t> span_index;
};

/// [layout_0, text_0..., layout_1, text_1..., image..., question...]
struct FusionSequence {
  std::vector<SequencePosition> positions;

  std::size_t size() const noexcept { return positions.size(); }
  std::vector<TokenKind> kinds() const;
};

/// Expected sequence length: spans + span characters + image tokens +
/// question characters.
std::size_t expected_length(const LayoutDocument& doc, std::string_view question, const FusionConfig& cfg);

FusionSequence assemble_sequence(const LayoutDocument& doc, std::string_view question, const MlpParams& params,
                                 const FusionConfig& cfg);

/// True when kinds form (layout text+)* image{n} question*, with span
/// indices increasing from 0.
bool has_block_order(const FusionSequence& seq, const FusionConfig& cfg);

/// Max over trials and output coordinates of
/// |g_analytic - g_fd| / max(|g_analytic|, |g_fd|, 1e-8), where g is the
/// gradient of one output coordinate w.r.t. the box. Inputs are drawn
/// uniformly from [0,1]^4 with cfg.seed. Throws Error{InvalidArgument} when
/// trials < 1.
double gradcheck(const MlpParams& params, const FusionConfig& cfg, int trials,
                 ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace tcqa::fusion
