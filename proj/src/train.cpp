#include "ansep/train.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ansep {

namespace {

template <typename M>
void run_loop(M& model, const Dataset& ds, const TrainConfig& cfg,
              RunRecord& rec) {
  model.set_data(ds);
  rec.mean_target_sq = model.mean_target_sq();

  Rng probe_rng(mix_seed(cfg.seed, 31));
  const CircleConfig probe = probe_rng.circle_config(cfg.n);
  CircleConfig swapped = probe;
  std::swap(swapped[0], swapped[1]);
  auto spot_check = [&] {
    const Cx v = model.forward_one(probe);
    const Cx w = model.forward_one(swapped);
    rec.antisym_violation = std::max(
        rec.antisym_violation, std::abs(v + w) / std::max(std::abs(v), 1e-30));
  };
  spot_check();

  for (int it = 0; it < cfg.iterations; ++it) {
    const double loss = model.loss_and_grad();
    rec.normalized_mse.push_back(loss / rec.mean_target_sq);
    if (!std::isfinite(loss) || loss > 1e6) {
      rec.diverged = true;
      rec.param_digest = param_digest(model.parameters());
      return;
    }
    model.gd_step(cfg.learning_rate);
    if ((it + 1) % 1000 == 0) spot_check();
  }
  rec.normalized_mse.push_back(model.loss_only() / rec.mean_target_sq);
  rec.param_digest = param_digest(model.parameters());
}

}  // namespace

Dataset sample_dataset(int n, int count, const HardFnParams& params,
                       std::uint64_t seed) {
  params.validate();
  if (n != params.n)
    throw std::invalid_argument("sample_dataset: n does not match params");
  if (count < 1) throw std::invalid_argument("sample_dataset: count < 1");
  HardFn g(params);
  Rng rng(seed);
  Dataset ds;
  ds.x.reserve(count);
  ds.target.reserve(count);
  for (int s = 0; s < count; ++s) {
    ds.x.push_back(rng.circle_config(n));
    // the C factor is dropped from the regression target
    ds.target.push_back(g.eval(ds.x.back()) / params.C);
  }
  return ds;
}

void TrainConfig::validate() const {
  if (n < 2) throw std::invalid_argument("TrainConfig: n < 2");
  if (samples < 1) throw std::invalid_argument("TrainConfig: samples < 1");
  if (iterations < 0) throw std::invalid_argument("TrainConfig: iterations < 0");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("TrainConfig: learning rate <= 0");
  if (width < 1) throw std::invalid_argument("TrainConfig: width < 1");
  if (det_count < 1) throw std::invalid_argument("TrainConfig: det_count < 1");
  if (n != target.n)
    throw std::invalid_argument("TrainConfig: n does not match target params");
  target.validate();
}

RunRecord train_run(const TrainConfig& config) {
  config.validate();
  RunRecord rec;
  rec.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = sample_dataset(config.n, config.samples, config.target,
                                    mix_seed(config.seed, 17));
  if (config.kind == ModelKind::slater) {
    SlaterModel<float> model(config.n, config.det_count, config.width,
                             mix_seed(config.seed, 23));
    run_loop(model, ds, config, rec);
  } else {
    JastrowModel<float> model(config.n, config.width, mix_seed(config.seed, 23));
    run_loop(model, ds, config, rec);
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace ansep
