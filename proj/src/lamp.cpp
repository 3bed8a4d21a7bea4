#include "uvlce/lamp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uvlce/errors.hpp"
#include "uvlce/kernels.hpp"
#include "uvlce/rng.hpp"

namespace uvlce {

namespace {

// v <- y - Phi x_prev + b v ; returns sigma = ||v|| / sqrt(P)
double residual_step(const Matrix& phi, const double* y, const double* x_prev, double b,
                     double* v, double* scratch_p) {
  const int p = phi.rows();
  kernels::matvec(phi, x_prev, scratch_p);
  for (int i = 0; i < p; ++i) v[i] = y[i] - scratch_p[i] + b * v[i];
  return kernels::norm2(v, p) / std::sqrt(static_cast<double>(p));
}

// r = x_prev + B v ; x = soft(r, zeta * sigma)
void shrink_step(const Matrix& b_mat, double zeta, double sigma, const double* x_prev,
                 const double* v, double* r_out, double* x_out) {
  const int n = b_mat.rows();
  kernels::matvec(b_mat, v, r_out);
  for (int k = 0; k < n; ++k) r_out[k] += x_prev[k];
  kernels::soft_threshold(r_out, n, zeta * sigma, x_out);
}

}  // namespace

LampParams untrained_params(const ObservationMatrix& phi, int depth) {
  if (depth < 1) throw ConfigError("network depth must be >= 1");
  LampParams params;
  params.provenance = phi.provenance;
  params.layers.reserve(depth);
  const Matrix bt = transpose(phi.entries);
  for (int t = 0; t < depth; ++t) params.layers.push_back({bt, 1.0});
  return params;
}

std::vector<double> lamp_forward(const std::vector<double>& y, const ObservationMatrix& phi,
                                 const LampParams& params, IterationTrace* trace) {
  const int p = phi.rows(), n = phi.cols();
  if (static_cast<int>(y.size()) != p)
    throw DimensionMismatch("measurement length vs matrix rows");
  if (params.depth() < 1) throw ConfigError("network has no layers");
  if (trace) trace->clear();

  std::vector<double> x(n, 0.0), v(p, 0.0), r(n), scratch(p);
  for (int t = 1; t <= params.depth(); ++t) {
    const LampLayer& layer = params.layers[t - 1];
    if (layer.b.rows() != n || layer.b.cols() != p)
      throw DimensionMismatch("layer " + std::to_string(t) + " has wrong shape");
    const double b =
        (t > 1) ? kernels::count_above(x.data(), n, kSupportEps) / double(p) : 0.0;
    const double sigma = residual_step(phi.entries, y.data(), x.data(), b, v.data(), scratch.data());
    shrink_step(layer.b, layer.zeta, sigma, x.data(), v.data(), r.data(), x.data());
    if (!kernels::all_finite(v.data(), p) || !kernels::all_finite(x.data(), n))
      throw NonFinite("forward pass diverged at layer " + std::to_string(t));
    if (trace) trace->push_back({v, sigma, r, x, b});
  }
  return x;
}

std::vector<double> lamp_infer(const std::vector<double>& y, const ObservationMatrix& phi,
                               const LampParams& params) {
  if (!(params.provenance == phi.provenance))
    throw ProvenanceMismatch("network was trained against a different observation matrix");
  return lamp_forward(y, phi, params);
}

double dataset_loss(const LampParams& params, const ObservationMatrix& phi, const Dataset& data) {
  if (data.size() < 1) throw ConfigError("empty dataset");
  const int d = data.size();
  std::vector<double> per_sample(d);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < d; ++s) {
    const std::vector<double> xh = lamp_forward(data.y[s], phi, params);
    double e = 0.0;
    for (std::size_t k = 0; k < xh.size(); ++k) {
      const double diff = xh[k] - data.x[s][k];
      e += diff * diff;
    }
    per_sample[s] = e;
  }
  double total = 0.0;
  for (int s = 0; s < d; ++s) total += per_sample[s];
  return total / d;
}

LayerGradient layer_gradients(const IterationState& last, const std::vector<double>& x_true,
                              double zeta) {
  const int n = static_cast<int>(last.estimate.size());
  const int p = static_cast<int>(last.residual.size());
  if (static_cast<int>(x_true.size()) != n) throw DimensionMismatch("x_true length");

  LayerGradient grad;
  grad.d_b = Matrix(n, p);
  const double tau = zeta * last.sigma;
  double zsum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = last.linear[k];
    if (std::fabs(r) > tau) {  // strict: the kink itself contributes 0
      const double g = 2.0 * (last.estimate[k] - x_true[k]);
      double* row = grad.d_b.row(k);
      for (int i = 0; i < p; ++i) row[i] = g * last.residual[i];
      zsum += g * (r > 0.0 ? 1.0 : -1.0);
    }
  }
  grad.d_zeta = -last.sigma * zsum;
  return grad;
}

void adam_step(double* param, const double* grad, int n, AdamState& state, const AdamConfig& cfg) {
  if (static_cast<int>(state.m.size()) != n)
    throw DimensionMismatch("Adam state size vs parameter size");
  state.step += 1;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    param[i] -= cfg.learning_rate * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + cfg.epsilon);
  }
}

namespace {

void validate_train_config(const TrainConfig& cfg) {
  if (cfg.train_size < 1 || cfg.test_size < 1) throw ConfigError("dataset sizes must be >= 1");
  if (!(cfg.adam.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (cfg.adam.beta1 <= 0.0 || cfg.adam.beta1 >= 1.0 || cfg.adam.beta2 <= 0.0 ||
      cfg.adam.beta2 >= 1.0)
    throw ConfigError("Adam betas must lie in (0, 1)");
  if (cfg.epochs_per_layer < 1) throw ConfigError("epochs_per_layer must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (cfg.max_layers < 1) throw ConfigError("max_layers must be >= 1");
  if (cfg.snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
}

// Per-sample state entering the layer being trained. Earlier layers are
// frozen, so (x_prev, v, sigma) are constants for the whole layer; training
// then only ever evaluates the single new layer.
struct LayerCache {
  Matrix x_prev;              // D x N
  Matrix v;                   // D x P
  std::vector<double> sigma;  // D
};

LayerCache make_cache(const Dataset& ds, int n, int p) {
  LayerCache c;
  const int d = ds.size();
  c.x_prev = Matrix(d, n);
  c.v = Matrix(d, p);
  c.sigma.resize(d);
  return c;
}

// advance the cache to the state entering layer `t` (params holds t-1
// retained layers); for t == 1 this is x_prev = 0, v = y
void cache_entry_state(LayerCache& c, const Dataset& ds, const ObservationMatrix& phi,
                       const LampParams& params) {
  const int d = ds.size();
  const int p = phi.rows(), n = phi.cols();
  const int t = params.depth() + 1;
#pragma omp parallel for schedule(static)
  for (int s = 0; s < d; ++s) {
    std::vector<double> scratch(p), r(n);
    double* x = c.x_prev.row(s);
    double* v = c.v.row(s);
    if (t == 1) {
      std::fill(x, x + n, 0.0);
      std::fill(v, v + p, 0.0);
      c.sigma[s] = residual_step(phi.entries, ds.y[s].data(), x, 0.0, v, scratch.data());
    } else {
      // one step: apply the just-retained layer, then the new residual
      const LampLayer& prev = params.layers.back();
      std::vector<double> x_new(n);
      shrink_step(prev.b, prev.zeta, c.sigma[s], x, v, r.data(), x_new.data());
      std::copy(x_new.begin(), x_new.end(), x);
      const double b = kernels::count_above(x, n, kSupportEps) / double(p);
      c.sigma[s] = residual_step(phi.entries, ds.y[s].data(), x, b, v, scratch.data());
    }
  }
}

// mean squared error of the candidate layer over a cached set
double cached_loss(const LayerCache& c, const Dataset& ds, const Matrix& b_mat, double zeta) {
  const int d = ds.size();
  const int n = b_mat.rows();
  std::vector<double> per_sample(d);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < d; ++s) {
    std::vector<double> r(n), x(n);
    shrink_step(b_mat, zeta, c.sigma[s], c.x_prev.row(s), c.v.row(s), r.data(), x.data());
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      const double diff = x[k] - ds.x[s][k];
      e += diff * diff;
    }
    per_sample[s] = e;
  }
  double total = 0.0;
  for (int s = 0; s < d; ++s) total += per_sample[s];
  return total / d;
}

// NMSE of the candidate layer over a cached set
double cached_nmse(const LayerCache& c, const Dataset& ds, const Matrix& b_mat, double zeta) {
  const int d = ds.size();
  const int n = b_mat.rows();
  std::vector<double> per_sample(d);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < d; ++s) {
    std::vector<double> r(n), x(n);
    shrink_step(b_mat, zeta, c.sigma[s], c.x_prev.row(s), c.v.row(s), r.data(), x.data());
    double e = 0.0, ref = 0.0;
    for (int k = 0; k < n; ++k) {
      const double diff = x[k] - ds.x[s][k];
      e += diff * diff;
      ref += ds.x[s][k] * ds.x[s][k];
    }
    per_sample[s] = e / ref;
  }
  double total = 0.0;
  for (int s = 0; s < d; ++s) total += per_sample[s];
  return total / d;
}

}  // namespace

TrainResult train_layerwise(const Dataset& train, const Dataset& holdout,
                            const ObservationMatrix& phi, const TrainConfig& cfg,
                            const EpochCallback& per_epoch) {
  validate_train_config(cfg);
  if (train.size() < 1 || holdout.size() < 1) throw ConfigError("empty dataset");
  if (!train.provenance.compatible_with(holdout.provenance))
    throw ProvenanceMismatch("training and holdout datasets disagree on provenance");
  if (!(train.provenance.matrix == phi.provenance))
    throw ProvenanceMismatch("dataset was generated against a different observation matrix");
  const int p = phi.rows(), n = phi.cols();
  if (static_cast<int>(train.y[0].size()) != p || static_cast<int>(train.x[0].size()) != n)
    throw DimensionMismatch("dataset sample dimensions vs observation matrix");

  const int d = train.size();
  const int batch = std::min(cfg.batch_size, d);
  const int num_batches = d / batch;
  Rng rng(cfg.seed);

  TrainResult result;
  result.params.provenance = phi.provenance;
  const Matrix phi_t = transpose(phi.entries);

  LayerCache tc = make_cache(train, n, p);
  LayerCache hc = make_cache(holdout, n, p);

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);

  Matrix gm(batch, n), vb(batch, p), grad_b(n, p);
  std::vector<double> dzeta_s(batch);

  double prev_metric = 0.0;
  for (int t = 1; t <= cfg.max_layers; ++t) {
    cache_entry_state(tc, train, phi, result.params);
    cache_entry_state(hc, holdout, phi, result.params);

    Matrix b_mat = phi_t;
    double zeta = 1.0;
    AdamState state_b(n * p), state_z(1);

    const bool on_train = cfg.stop_metric == StopMetric::train_loss;
    auto metric_of = [&](const Matrix& bm, double z) {
      return on_train ? cached_loss(tc, train, bm, z) : cached_loss(hc, holdout, bm, z);
    };

    double best_metric = metric_of(b_mat, zeta);
    const double metric_init = best_metric;
    Matrix best_b = b_mat;
    double best_zeta = zeta;

    for (int epoch = 1; epoch <= cfg.epochs_per_layer; ++epoch) {
      // deterministic Fisher-Yates shuffle
      for (int i = d - 1; i >= 1; --i) {
        const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(order[i], order[j]);
      }
      for (int ib = 0; ib < num_batches; ++ib) {
        const int* idx = order.data() + ib * batch;
#pragma omp parallel for schedule(static)
        for (int s = 0; s < batch; ++s) {
          std::vector<double> r(n), x(n);
          const int ds_i = idx[s];
          const double sig = tc.sigma[ds_i];
          shrink_step(b_mat, zeta, sig, tc.x_prev.row(ds_i), tc.v.row(ds_i), r.data(), x.data());
          const double tau = zeta * sig;
          const double* xt = train.x[ds_i].data();
          double zsum = 0.0;
          double* gm_row = gm.row(s);
          for (int k = 0; k < n; ++k) {
            if (std::fabs(r[k]) > tau) {
              const double g = 2.0 * (x[k] - xt[k]);
              gm_row[k] = g;
              zsum += g * (r[k] > 0.0 ? 1.0 : -1.0);
            } else {
              gm_row[k] = 0.0;
            }
          }
          dzeta_s[s] = -sig * zsum;
          std::copy(tc.v.row(ds_i), tc.v.row(ds_i) + p, vb.row(s));
        }
        std::fill(grad_b.data(), grad_b.data() + grad_b.size(), 0.0);
        kernels::outer_accumulate(gm, vb, grad_b);
        const double inv_batch = 1.0 / batch;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n * p; ++i) grad_b.data()[i] *= inv_batch;
        double dzeta = 0.0;
        for (int s = 0; s < batch; ++s) dzeta += dzeta_s[s];
        dzeta *= inv_batch;

        adam_step(b_mat.data(), grad_b.data(), n * p, state_b, cfg.adam);
        adam_step(&zeta, &dzeta, 1, state_z, cfg.adam);
        if (zeta < kZetaFloor) zeta = kZetaFloor;
      }
      if (epoch % cfg.snapshot_every == 0 || epoch == cfg.epochs_per_layer) {
        const double m = metric_of(b_mat, zeta);
        if (m < best_metric) {
          best_metric = m;
          best_b = b_mat;
          best_zeta = zeta;
        }
      }
      if (per_epoch)
        per_epoch(t, epoch, cached_loss(tc, train, b_mat, zeta),
                  cached_nmse(hc, holdout, b_mat, zeta));
    }

    if (t > 1 && best_metric > prev_metric) {
      result.stop_reason = StopReason::probe_worse;
      result.probe_layer = t;
      result.probe_metric = best_metric;
      return result;
    }

    LayerRecord rec;
    rec.layer = t;
    rec.metric_init = metric_init;
    rec.metric_end = best_metric;
    rec.train_loss = cached_loss(tc, train, best_b, best_zeta);
    rec.holdout_loss = cached_loss(hc, holdout, best_b, best_zeta);
    result.history.push_back(rec);
    result.params.layers.push_back({std::move(best_b), best_zeta});
    prev_metric = best_metric;

    if (best_metric == 0.0) {
      result.stop_reason = StopReason::zero_loss;
      return result;
    }
  }
  result.stop_reason = StopReason::max_layers;
  return result;
}

}  // namespace uvlce
