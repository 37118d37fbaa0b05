#include "gnnlab/model.hpp"

#include <cmath>

#include "gnnlab/error.hpp"
#include "gnnlab/rng.hpp"

namespace gnnlab {

ModelParams init_gaussian(int h, int r, double kappa, std::uint64_t seed) {
  if (h < 1 || r < 1) throw InputError("model dimensions must be at least 1");
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  ModelParams params;
  params.h = h;
  params.r = r;
  params.kappa = kappa;
  params.weights.resize(static_cast<std::size_t>(h) * r);
  RngStream rng(seed, RngDomain::init);
  for (auto& w : params.weights) w = kappa * rng.next_normal();
  return params;
}

std::vector<double> balanced_sign_vector(int h) {
  if (h < 2 || h % 2 != 0)
    throw InputError("CE readout vector needs an even hidden dimension");
  std::vector<double> v(static_cast<std::size_t>(h), -1.0);
  for (int j = 0; j < h / 2; ++j) v[static_cast<std::size_t>(j)] = 1.0;
  return v;
}

std::vector<double> aggregate_features(const AdjRows& rows,
                                       const std::vector<double>& features,
                                       int feature_dim) {
  std::size_t m = rows.rows.size();
  auto r = static_cast<std::size_t>(feature_dim);
  std::vector<double> agg(m * r, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* out = agg.data() + i * r;
    for (const auto& e : rows.rows[i]) {
      const double* x = features.data() + static_cast<std::size_t>(e.col) * r;
      for (std::size_t f = 0; f < r; ++f) out[f] += e.value * x[f];
    }
  }
  return agg;
}

namespace {

std::vector<double> forward_from_agg(const std::vector<double>& agg, std::size_t m,
                                     const ModelParams& params) {
  auto r = static_cast<std::size_t>(params.r);
  auto h = static_cast<std::size_t>(params.h);
  std::vector<double> z(m * h, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* a = agg.data() + i * r;
    for (std::size_t j = 0; j < h; ++j) {
      const double* w = params.weights.data() + j * r;
      double pre = 0.0;
      for (std::size_t f = 0; f < r; ++f) pre += a[f] * w[f];
      z[i * h + j] = pre > 0.0 ? params.activation_scale * pre : 0.0;
    }
  }
  return z;
}

double check_pm1(int label) {
  if (label != 1 && label != -1)
    throw InputError("CE labels must be -1 or +1, got " + std::to_string(label));
  return static_cast<double>(label);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

std::vector<double> forward(const AdjRows& rows, const std::vector<double>& features,
                            int feature_dim, const ModelParams& params) {
  if (feature_dim != params.r)
    throw InputError("feature dimension does not match model");
  if (features.size() % static_cast<std::size_t>(feature_dim) != 0)
    throw InputError("feature matrix size is not a multiple of the feature dim");
  auto agg = aggregate_features(rows, features, feature_dim);
  return forward_from_agg(agg, rows.rows.size(), params);
}

std::vector<double> forward_aggregated(const std::vector<double>& aggregates,
                                       std::size_t row_count,
                                       const ModelParams& params) {
  if (aggregates.size() != row_count * static_cast<std::size_t>(params.r))
    throw InputError("aggregate matrix size mismatch");
  return forward_from_agg(aggregates, row_count, params);
}

double loss_mse(const std::vector<double>& z, int h,
                const std::vector<int>& labels, int num_classes) {
  if (h != num_classes)
    throw InputError("MSE needs hidden dimension equal to the class count");
  std::size_t m = labels.size();
  if (z.size() != m * static_cast<std::size_t>(h))
    throw InputError("output matrix size mismatch");
  if (m == 0) throw InputError("loss over an empty set");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* zi = z.data() + i * static_cast<std::size_t>(h);
    double sq = 0.0;
    for (int j = 0; j < h; ++j) {
      double target = labels[i] == j ? 1.0 : 0.0;
      double d = zi[j] - target;
      sq += d * d;
    }
    total += 0.5 * sq;
  }
  return total / static_cast<double>(m);
}

double loss_ce(const std::vector<double>& z, int h, const std::vector<double>& v,
               const std::vector<int>& labels_pm1) {
  if (v.size() != static_cast<std::size_t>(h))
    throw InputError("readout vector length mismatch");
  std::size_t m = labels_pm1.size();
  if (z.size() != m * static_cast<std::size_t>(h))
    throw InputError("output matrix size mismatch");
  if (m == 0) throw InputError("loss over an empty set");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* zi = z.data() + i * static_cast<std::size_t>(h);
    double yhat = 0.0;
    for (int j = 0; j < h; ++j) yhat += zi[j] * v[static_cast<std::size_t>(j)];
    total += softplus(-check_pm1(labels_pm1[i]) * yhat);
  }
  return total / static_cast<double>(m);
}

std::vector<double> grad_mse(const AdjRows& rows, const std::vector<double>& features,
                             int feature_dim, const ModelParams& params,
                             const std::vector<int>& labels) {
  if (labels.size() != rows.rows.size())
    throw InputError("label count does not match row count");
  auto agg = aggregate_features(rows, features, feature_dim);
  std::size_t m = rows.rows.size();
  auto r = static_cast<std::size_t>(params.r);
  auto h = static_cast<std::size_t>(params.h);
  std::vector<double> grad(h * r, 0.0);
  double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* a = agg.data() + i * r;
    for (std::size_t j = 0; j < h; ++j) {
      const double* w = params.weights.data() + j * r;
      double pre = 0.0;
      for (std::size_t f = 0; f < r; ++f) pre += a[f] * w[f];
      if (pre <= 0.0) continue;  // ReLU indicator is strict
      double zij = params.activation_scale * pre;
      double target = labels[i] == static_cast<int>(j) ? 1.0 : 0.0;
      double coeff = inv_m * (zij - target) * params.activation_scale;
      double* g = grad.data() + j * r;
      for (std::size_t f = 0; f < r; ++f) g[f] += coeff * a[f];
    }
  }
  return grad;
}

std::vector<double> grad_ce(const AdjRows& rows, const std::vector<double>& features,
                            int feature_dim, const ModelParams& params,
                            const std::vector<int>& labels_pm1) {
  if (!params.v)
    throw InputError("CE gradient needs the fixed readout vector");
  if (labels_pm1.size() != rows.rows.size())
    throw InputError("label count does not match row count");
  const auto& v = *params.v;
  if (v.size() != static_cast<std::size_t>(params.h))
    throw InputError("readout vector length mismatch");
  auto agg = aggregate_features(rows, features, feature_dim);
  std::size_t m = rows.rows.size();
  auto r = static_cast<std::size_t>(params.r);
  auto h = static_cast<std::size_t>(params.h);
  std::vector<double> grad(h * r, 0.0);
  double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* a = agg.data() + i * r;
    double y = check_pm1(labels_pm1[i]);
    std::vector<double> active(h, 0.0);
    double yhat = 0.0;
    for (std::size_t j = 0; j < h; ++j) {
      const double* w = params.weights.data() + j * r;
      double pre = 0.0;
      for (std::size_t f = 0; f < r; ++f) pre += a[f] * w[f];
      if (pre > 0.0) {
        active[j] = 1.0;
        yhat += params.activation_scale * pre * v[j];
      }
    }
    // l(x) = log(1 + exp(-x)) at x = y*yhat; l'(x) = -1/(1 + exp(x)).
    double lprime = -1.0 / (1.0 + std::exp(y * yhat));
    double coeff = inv_m * lprime * y * params.activation_scale;
    for (std::size_t j = 0; j < h; ++j) {
      if (active[j] == 0.0) continue;
      double cj = coeff * v[j];
      double* g = grad.data() + j * r;
      for (std::size_t f = 0; f < r; ++f) g[f] += cj * a[f];
    }
  }
  return grad;
}

std::vector<int> to_pm1_labels(const std::vector<int>& labels) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0)
      out[i] = -1;
    else if (labels[i] == 1)
      out[i] = 1;
    else
      throw InputError("CE expects binary labels {0, 1}; got " +
                       std::to_string(labels[i]));
  }
  return out;
}

}  // namespace gnnlab
