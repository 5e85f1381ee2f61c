#include "pmri/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmri/error.hpp"
#include "pmri/fft.hpp"

namespace pmri {
namespace {

void check_inputs(const MagnitudeImage& pred, const MagnitudeImage& target) {
  if (!pred.pixels.same_shape(target.pixels)) throw Error(ErrorCode::kDimMismatch, "pred and target differ in shape");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(pred.pixels.data().begin(), pred.pixels.data().end(), finite))
    throw Error(ErrorCode::kNonFiniteInput, "pred contains NaN or Inf");
  if (!std::all_of(target.pixels.data().begin(), target.pixels.data().end(), finite))
    throw Error(ErrorCode::kNonFiniteInput, "target contains NaN or Inf");
}

// F(pred) - F(target) = F(pred - target) by linearity.
ComplexImage spectrum_of_difference(const MagnitudeImage& pred, const MagnitudeImage& target) {
  ComplexImage diff(pred.ny(), pred.nx());
  for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] = pred.pixels.data()[i] - target.pixels.data()[i];
  return fft2_centered(diff);
}

LossBreakdown pixel_terms(const MagnitudeImage& pred, const MagnitudeImage& target, double disc_score) {
  check_inputs(pred, target);
  if (!(disc_score > 0.0 && disc_score <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "discriminator score must lie in (0, 1]");

  LossBreakdown out;
  out.adv = -std::log(std::max(disc_score, kScoreClamp));
  const auto& p = pred.pixels.data();
  const auto& t = target.pixels.data();
  const double n = static_cast<double>(p.size());
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - t[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  out.l1 = abs_sum / n;
  out.l2 = sq_sum / n;

  const ComplexImage spec = spectrum_of_difference(pred, target);
  double dc_sum = 0.0;
  for (const auto& v : spec.data()) dc_sum += std::abs(v);
  out.dc = dc_sum / n;
  return out;
}

void finish_total(LossBreakdown& b, const LossWeights& w) {
  b.total = b.adv + w.lambda_1 * b.l1 + w.lambda_2 * b.l2 + w.lambda_dc * b.dc + w.lambda_f * b.feat;
}

}  // namespace

std::vector<double> PooledFeatureExtractor::features(const MagnitudeImage& img) const {
  const std::size_t by = (img.ny() + block_ - 1) / block_;
  const std::size_t bx = (img.nx() + block_ - 1) / block_;
  RealImage pooled(by, bx);
  for (std::size_t y = 0; y < by; ++y) {
    for (std::size_t x = 0; x < bx; ++x) {
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t yy = y * block_; yy < std::min(img.ny(), (y + 1) * block_); ++yy) {
        for (std::size_t xx = x * block_; xx < std::min(img.nx(), (x + 1) * block_); ++xx) {
          acc += img(yy, xx);
          ++count;
        }
      }
      pooled(y, x) = acc / static_cast<double>(count);
    }
  }
  std::vector<double> feats(pooled.data());
  // Forward differences capture edge structure at the pooled scale.
  for (std::size_t y = 0; y < by; ++y) {
    for (std::size_t x = 0; x + 1 < bx; ++x) feats.push_back(pooled(y, x + 1) - pooled(y, x));
  }
  for (std::size_t y = 0; y + 1 < by; ++y) {
    for (std::size_t x = 0; x < bx; ++x) feats.push_back(pooled(y + 1, x) - pooled(y, x));
  }
  return feats;
}

LossBreakdown generator_loss(const MagnitudeImage& pred, const MagnitudeImage& target, double disc_score_on_pred,
                             const FeatureExtractor& fx, const LossWeights& w) {
  LossBreakdown b = pixel_terms(pred, target, disc_score_on_pred);
  const auto fp = fx.features(pred);
  const auto ft = fx.features(target);
  if (fp.size() != ft.size() || fp.empty())
    throw Error(ErrorCode::kDimMismatch, "feature vectors differ in length or are empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    const double d = fp[i] - ft[i];
    acc += d * d;
  }
  b.feat = acc / static_cast<double>(fp.size());
  if (!std::isfinite(b.feat)) throw Error(ErrorCode::kNonFiniteInput, "feature extractor produced NaN or Inf");
  finish_total(b, w);
  return b;
}

LossBreakdown generator_loss(const MagnitudeImage& pred, const MagnitudeImage& target, double disc_score_on_pred,
                             const LossWeights& w) {
  LossBreakdown b = pixel_terms(pred, target, disc_score_on_pred);
  finish_total(b, w);
  return b;
}

double discriminator_loss(double score_real, double score_fake) {
  if (std::isnan(score_real) || std::isnan(score_fake))
    throw Error(ErrorCode::kNonFiniteInput, "discriminator score is NaN");
  const double real = std::clamp(score_real, kScoreClamp, 1.0 - kScoreClamp);
  const double fake = std::clamp(score_fake, kScoreClamp, 1.0 - kScoreClamp);
  return -std::log(real) - std::log(1.0 - fake);
}

RealImage pixel_loss_gradient(const MagnitudeImage& pred, const MagnitudeImage& target, const LossWeights& w) {
  check_inputs(pred, target);
  const std::size_t n = pred.pixels.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  RealImage grad(pred.ny(), pred.nx());

  // d|D_k|/d(pred) = Re(F^H (D / |D|)) for the unitary transform F.
  ComplexImage phase = spectrum_of_difference(pred, target);
  for (auto& v : phase.data()) {
    const double mag = std::abs(v);
    v = mag > 0.0 ? v / mag : cdouble{};
  }
  const ComplexImage back = ifft2_centered(phase);

  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred.pixels.data()[i] - target.pixels.data()[i];
    const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    grad.data()[i] = inv_n * (w.lambda_1 * sign + w.lambda_2 * 2.0 * d + w.lambda_dc * back.data()[i].real());
  }
  return grad;
}

LossWeights loss_schedule(std::size_t epoch) {
  if (epoch < 30) return {120.0, 30.0, 0.0, 0.0};
  if (epoch <= 50) {
    const double t = static_cast<double>(epoch - 30) / 20.0;
    return {120.0 + t * (30.0 - 120.0), 30.0 + t * (120.0 - 30.0), 0.0, 0.0};
  }
  if (epoch <= 100) return {30.0, 120.0, 0.0, 0.0};
  return {30.0, 120.0, 30.0, 100.0};
}

}  // namespace pmri
