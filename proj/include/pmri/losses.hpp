#pragma once

#include <cstddef>
#include <vector>

#include "pmri/types.hpp"

namespace pmri {

// Weights of the composite generator objective.
struct LossWeights {
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
  double lambda_dc = 0.0;
  double lambda_f = 0.0;

  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

// One evaluation of the generator objective, term by term.
// total = adv + lambda_1*l1 + lambda_2*l2 + lambda_dc*dc + lambda_f*feat.
struct LossBreakdown {
  double adv = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double dc = 0.0;
  double feat = 0.0;
  double total = 0.0;
};

// Locked perceptual feature map. Implementations must be deterministic.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::vector<double> features(const MagnitudeImage& img) const = 0;
};

// Block-mean pooling followed by a fixed gradient-magnitude read-out; a cheap
// stand-in extractor for tests and the CLI.
class PooledFeatureExtractor final : public FeatureExtractor {
 public:
  explicit PooledFeatureExtractor(std::size_t block = 4) : block_(block == 0 ? 1 : block) {}
  std::vector<double> features(const MagnitudeImage& img) const override;

 private:
  std::size_t block_;
};

inline constexpr double kScoreClamp = 1e-7;

// disc_score_on_pred in (0, 1] (clamped below at 1e-7). adv = -log(score);
// l1/l2 are pixel means; dc = mean |F(pred) - F(target)| under the centered
// unitary DFT; feat = mean squared feature difference.
// Errors: DimMismatch, NonFiniteInput, InvalidArgument (score out of range).
LossBreakdown generator_loss(const MagnitudeImage& pred, const MagnitudeImage& target, double disc_score_on_pred,
                             const FeatureExtractor& fx, const LossWeights& w);

// Same as generator_loss but without a feature extractor (feat = 0).
LossBreakdown generator_loss(const MagnitudeImage& pred, const MagnitudeImage& target, double disc_score_on_pred,
                             const LossWeights& w);

// -log(score_real) - log(1 - score_fake), scores clamped to [1e-7, 1 - 1e-7].
double discriminator_loss(double score_real, double score_fake);

// Gradient of lambda_1*l1 + lambda_2*l2 + lambda_dc*dc with respect to pred.
// Subgradient 0 where pred == target (l1) or a DFT difference vanishes (dc).
RealImage pixel_loss_gradient(const MagnitudeImage& pred, const MagnitudeImage& target, const LossWeights& w);

// Training weights per epoch:
//   [0, 30)    (120, 30, 0, 0)
//   [30, 50]   lambda_1, lambda_2 ramp linearly to (30, 120)
//   (50, 100]  (30, 120, 0, 0)
//   > 100      (30, 120, 30, 100)
LossWeights loss_schedule(std::size_t epoch);

}  // namespace pmri
