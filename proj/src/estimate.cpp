#include "netbench/estimate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace netbench {

namespace {

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = sample_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

// Type-7 quantile (linear interpolation) on a sorted copy.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct FitCore {
  double amplitude = 0.0;
  double f = 0.0;
  double se_amplitude = 0.0;
  double se_f = 0.0;
  int iterations = 0;
};

double model_sse(const std::vector<int>& ms, const std::vector<double>& ys,
                 const std::vector<double>& w, double a, double f) {
  double sse = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double r = ys[i] - a * std::pow(f, ms[i]);
    sse += w[i] * r * r;
  }
  return sse;
}

// Levenberg-Marquardt on (A, f) with analytic Jacobian, seeded by log-linear
// regression over the positive means.
FitCore fit_core(const std::vector<int>& ms, const std::vector<double>& ys,
                 const std::vector<double>& variances, const FitOptions& options) {
  const std::size_t n = ms.size();
  if (n < 3) throw std::invalid_argument("fit_decay: need at least 3 distinct m values");

  double y_max = 0.0;
  for (double y : ys) y_max = std::max(y_max, y);
  if (y_max <= 0.0) throw NoSignalError("fit_decay: no positive means; nothing to fit");
  if (y_max < 1e-13) throw NoSignalError("fit_decay: decay means are all consistent with zero");

  std::vector<double> weights(n, 1.0);
  if (options.weighted) {
    double var_floor = 0.0;
    for (double v : variances) var_floor = std::max(var_floor, v);
    var_floor = std::max(var_floor * 1e-8, 1e-30);
    for (std::size_t i = 0; i < n; ++i) weights[i] = 1.0 / std::max(variances[i], var_floor);
  }

  // Non-positive means are excluded here only; the nonlinear stage sees all.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ys[i] <= 0.0) continue;
    const double x = static_cast<double>(ms[i]);
    const double ly = std::log(ys[i]);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
    ++pos;
  }
  double a = 0.5;
  double f = 0.9;
  if (pos >= 2) {
    const double denom = pos * sxx - sx * sx;
    if (std::abs(denom) > 1e-30) {
      const double slope = (pos * sxy - sx * sy) / denom;
      const double intercept = (sy - slope * sx) / pos;
      f = std::exp(slope);
      a = std::exp(intercept);
    }
  } else {
    a = y_max;
  }
  f = std::min(1.2, std::max(1e-6, f));

  double lambda = 1e-6;
  double sse = model_sse(ms, ys, weights, a, f);
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const int m = ms[i];
      const double fm1 = std::pow(f, m - 1);
      const double fm = fm1 * f;
      const double r = ys[i] - a * fm;
      const Eigen::Vector2d j(fm, a * m * fm1);
      h += weights[i] * j * j.transpose();
      g += weights[i] * j * r;
    }
    if (g.lpNorm<Eigen::Infinity>() < options.gradient_tol) break;

    bool stepped = false;
    for (int attempt = 0; attempt < 50; ++attempt) {
      Eigen::Matrix2d damped = h;
      damped(0, 0) += lambda * std::max(h(0, 0), 1e-30);
      damped(1, 1) += lambda * std::max(h(1, 1), 1e-30);
      const Eigen::Vector2d delta = damped.ldlt().solve(g);
      const double a_try = a + delta(0);
      const double f_try = std::min(1.5, std::max(1e-9, f + delta(1)));
      const double sse_try = model_sse(ms, ys, weights, a_try, f_try);
      if (sse_try <= sse + 1e-18) {
        a = a_try;
        f = f_try;
        sse = sse_try;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 3.0;
    }
    if (!stepped) break;
  }
  if (f <= 0.0) throw NoSignalError("fit_decay: decay rate collapsed to zero");
  f = std::min(f, 1.0);

  // Sandwich covariance of the unweighted estimator with per-m variances of
  // the means; falls back to residual-based scaling when none are supplied.
  Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d jvj = Eigen::Matrix2d::Zero();
  double total_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int m = ms[i];
    const double fm1 = std::pow(f, m - 1);
    const Eigen::Vector2d j(fm1 * f, a * m * fm1);
    jtj += weights[i] * j * j.transpose();
    jvj += weights[i] * weights[i] * variances[i] * j * j.transpose();
    total_var += variances[i];
  }
  FitCore out;
  out.amplitude = a;
  out.f = f;
  out.iterations = iter;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  const double det = jtj.determinant();
  if (det > 1e-300) {
    const Eigen::Matrix2d inv = jtj.inverse();
    if (total_var > 0.0) {
      cov = inv * jvj * inv;
    } else if (n > 2) {
      cov = inv * (sse / static_cast<double>(n - 2));
    }
  }
  out.se_amplitude = std::sqrt(std::max(0.0, cov(0, 0)));
  out.se_f = std::sqrt(std::max(0.0, cov(1, 1)));
  return out;
}

}  // namespace

FitResult fit_decay_points(const std::vector<int>& m_values, const std::vector<double>& means,
                           const std::vector<double>& mean_variances, const FitOptions& options) {
  if (m_values.size() != means.size() || m_values.size() != mean_variances.size()) {
    throw std::invalid_argument("fit_decay_points: length mismatch");
  }
  const FitCore core = fit_core(m_values, means, mean_variances, options);
  FitResult result;
  result.amplitude = core.amplitude;
  result.f = core.f;
  result.se_amplitude = core.se_amplitude;
  result.se_f = core.se_f;
  result.iterations = core.iterations;
  result.m_values = m_values;
  result.method = options.weighted ? "weighted-least-squares" : "least-squares";
  result.residuals.reserve(m_values.size());
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    result.residuals.push_back(means[i] - core.amplitude * std::pow(core.f, m_values[i]));
  }
  // Until a bootstrap refines them, report plain normal-theory intervals.
  result.ci_amplitude = {core.amplitude - 1.96 * core.se_amplitude,
                         core.amplitude + 1.96 * core.se_amplitude};
  result.ci_f = {core.f - 1.96 * core.se_f, core.f + 1.96 * core.se_f};
  return result;
}

namespace {

void dataset_moments(const DecayDataset& dataset, std::vector<double>& means,
                     std::vector<double>& mean_variances) {
  means.clear();
  mean_variances.clear();
  for (int m : dataset.m_values) {
    const std::vector<double> values = dataset.values_at(m);
    means.push_back(sample_mean(values));
    mean_variances.push_back(sample_variance(values) / static_cast<double>(values.size()));
  }
}

}  // namespace

FitResult fit_decay(const DecayDataset& dataset, const FitOptions& options) {
  std::vector<double> means;
  std::vector<double> variances;
  dataset_moments(dataset, means, variances);
  return fit_decay_points(dataset.m_values, means, variances, options);
}

void bootstrap_ci(const DecayDataset& dataset, FitResult& fit, const BootstrapOptions& options) {
  if (options.resamples < 200) {
    throw std::invalid_argument("bootstrap_ci: need at least 200 resamples");
  }
  std::vector<std::vector<double>> groups;
  groups.reserve(dataset.m_values.size());
  for (int m : dataset.m_values) {
    groups.push_back(dataset.values_at(m));
    if (groups.back().size() < 5) {
      throw std::invalid_argument("bootstrap_ci: need at least 5 sequences per m");
    }
  }

  std::vector<double> t_f;
  std::vector<double> t_a;
  t_f.reserve(options.resamples);
  t_a.reserve(options.resamples);
  std::vector<double> means(groups.size());
  std::vector<double> variances(groups.size());
  std::vector<double> draw;
  for (int b = 0; b < options.resamples; ++b) {
    Rng rng = make_rng(derive_seed(options.seed, static_cast<std::uint64_t>(b), 0xb007ULL));
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const std::vector<double>& pool = groups[gi];
      draw.resize(pool.size());
      for (double& x : draw) x = pool[uniform_index(rng, pool.size())];
      means[gi] = sample_mean(draw);
      variances[gi] = sample_variance(draw) / static_cast<double>(draw.size());
    }
    try {
      const FitCore core = fit_core(dataset.m_values, means, variances, FitOptions{});
      if (core.se_f > 0.0) t_f.push_back((core.f - fit.f) / core.se_f);
      if (core.se_amplitude > 0.0) t_a.push_back((core.amplitude - fit.amplitude) / core.se_amplitude);
    } catch (const NoSignalError&) {
      // Degenerate resample; skip.
    }
  }

  auto interval = [](double center, double se, std::vector<double>& ts) {
    std::array<double, 2> ci{center, center};
    if (se > 0.0 && ts.size() >= 10) {
      ci[0] = center - quantile(ts, 0.975) * se;
      ci[1] = center - quantile(ts, 0.025) * se;
    }
    if (ci[0] > center) ci[0] = center;
    if (ci[1] < center) ci[1] = center;
    return ci;
  };
  fit.ci_f = interval(fit.f, fit.se_f, t_f);
  fit.ci_amplitude = interval(fit.amplitude, fit.se_amplitude, t_a);
  fit.method += "+bootstrap-t";
}

double depolarizing_to_average(double f, int d) {
  if (d < 2) throw std::invalid_argument("depolarizing_to_average: d >= 2");
  return ((d - 1) * f + 1.0) / d;
}

SymmetricLinkFidelity symmetric_link_fidelity(double f_net, int d) {
  if (f_net <= 0.0 || f_net > 1.0 + 1e-12) {
    throw std::invalid_argument("symmetric_link_fidelity: f_net must be in (0, 1]");
  }
  SymmetricLinkFidelity out;
  out.f_link = std::sqrt(std::min(f_net, 1.0));
  out.f_avg = depolarizing_to_average(out.f_link, d);
  return out;
}

double fisher_information(double f, int m, double amplitude, double variance) {
  if (f <= 0.0 || f >= 1.0) throw std::invalid_argument("fisher_information: f in (0, 1)");
  if (m < 1) throw std::invalid_argument("fisher_information: m >= 1");
  if (variance <= 0.0) throw std::invalid_argument("fisher_information: variance > 0");
  const double fm1 = std::pow(f, m - 1);
  return amplitude * amplitude * fm1 * fm1 * static_cast<double>(m) * static_cast<double>(m) /
         variance;
}

double optimal_bounce_count(double f) {
  if (f <= 0.0 || f >= 1.0) {
    throw std::invalid_argument("optimal_bounce_count: f must be in (0, 1)");
  }
  return -1.0 / (2.0 * std::log(f));
}

double crb_cost_bound(double f, double amplitude) {
  const double m_star = optimal_bounce_count(f);
  const double fm1 = std::pow(f, m_star - 1.0);
  return 8.0 * amplitude * amplitude * m_star * fm1 * fm1;
}

VarianceComponents variance_decomposition(const DecayDataset& dataset, int m) {
  if (!dataset.has_branch_expectations) {
    throw std::runtime_error("variance_decomposition: dataset lacks exact branch expectations");
  }
  std::vector<double> coin_means;
  double diff_acc = 0.0;
  double meas_acc = 0.0;
  for (const DecayRecord& rec : dataset.records) {
    if (rec.m != m) continue;
    coin_means.push_back(0.5 * (rec.p_plus - rec.p_minus));
    const double spread = 0.5 * (rec.p_plus + rec.p_minus);
    diff_acc += spread * spread;
    meas_acc += 0.5 * (rec.p_plus * (1.0 - rec.p_plus) + rec.p_minus * (1.0 - rec.p_minus));
  }
  if (coin_means.size() < 2) {
    throw std::invalid_argument("variance_decomposition: insufficient replicates at m");
  }
  const double n = static_cast<double>(coin_means.size());
  VarianceComponents out;
  out.v_gate = 0.5 * sample_variance(coin_means);
  out.v_diff = 0.5 * diff_acc / n;
  if (dataset.shot_model != ShotModel::exact && dataset.shots > 0) {
    out.v_meas = 0.5 * (meas_acc / n) / static_cast<double>(dataset.shots);
  }
  return out;
}

StatReport make_stat_report(double f, double amplitude, int m_max) {
  StatReport report;
  report.m_star = optimal_bounce_count(f);
  report.crb_variance_lower_bound = 1.0 / crb_cost_bound(f, amplitude);
  if (m_max <= 0) {
    m_max = static_cast<int>(std::ceil(4.0 * std::max(1.0, report.m_star)));
  }
  m_max = std::min(m_max, 100000);
  for (int m = 1; m <= m_max; ++m) {
    report.m_grid.push_back(m);
    const double info = fisher_information(f, m, amplitude);
    report.fisher_per_sample.push_back(info);
    report.fisher_per_cost.push_back(info / static_cast<double>(m));
  }
  return report;
}

}  // namespace netbench
