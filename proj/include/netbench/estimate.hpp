#pragma once

#include "netbench/protocol.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace netbench {

// Degenerate decay data (no usable signal for the exponential fit).
class NoSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitResult {
  double amplitude = 0.0;  // A in b_m = A f^m
  double f = 0.0;
  std::array<double, 2> ci_amplitude{0.0, 0.0};  // 95% interval
  std::array<double, 2> ci_f{0.0, 0.0};
  double se_amplitude = 0.0;
  double se_f = 0.0;
  std::vector<int> m_values;
  std::vector<double> residuals;  // per m: mean - A f^m
  int iterations = 0;
  std::string method;
};

struct FitOptions {
  bool weighted = false;  // inverse-variance weights from per-m sequence spreads
  int max_iterations = 200;
  double gradient_tol = 1e-12;
};

// Nonlinear least squares of the per-m means against A f^m, seeded by a
// log-linear regression over the positive means.
FitResult fit_decay(const DecayDataset& dataset, const FitOptions& options = {});
FitResult fit_decay_points(const std::vector<int>& m_values, const std::vector<double>& means,
                           const std::vector<double>& mean_variances, const FitOptions& options = {});

struct BootstrapOptions {
  int resamples = 1000;
  std::uint64_t seed = 1;
};

// Nonparametric bootstrap over sequences within each m; Studentized
// (bootstrap-t) 95% intervals written back into the fit result.
void bootstrap_ci(const DecayDataset& dataset, FitResult& fit, const BootstrapOptions& options = {});

// F = ((d-1) f + 1) / d.
double depolarizing_to_average(double f, int d);

struct SymmetricLinkFidelity {
  double f_link = 0.0;  // sqrt of the fitted network fidelity
  double f_avg = 0.0;   // average-fidelity convention
};

// Per-direction link fidelity when both directions are known to be equal
// (e.g. teleportation-implemented links).
SymmetricLinkFidelity symmetric_link_fidelity(double f_net, int d);

// Gaussian-model Fisher information A^2 f^(2m-2) m^2 / V for one sample of
// the per-sequence mean at bounce count m.
double fisher_information(double f, int m, double amplitude, double variance = 0.125);

// Maximizer of the per-cost information m f^(2m-2): -1 / (2 ln f).
double optimal_bounce_count(double f);

// Maximum per-transmission Fisher information at the variance bound
// V_diff = 1/8; the reciprocal lower-bounds the estimator variance per unit
// sampling cost.
double crb_cost_bound(double f, double amplitude);

// Law-of-total-variance components of the per-sequence outcome distribution
// D(f, m), in the fitted-statistic convention (coin-averaged signed mean, so
// every component carries a factor 1/2 and V_diff saturates at 1/8).
struct VarianceComponents {
  double v_gate = 0.0;  // randomness of the gate sequence
  double v_meas = 0.0;  // shot noise
  double v_diff = 0.0;  // ending-gate coin
  double total() const { return v_gate + v_meas + v_diff; }
};

VarianceComponents variance_decomposition(const DecayDataset& dataset, int m);

struct StatReport {
  std::vector<int> m_grid;
  std::vector<double> fisher_per_sample;
  std::vector<double> fisher_per_cost;
  double m_star = 0.0;
  double crb_variance_lower_bound = 0.0;
  std::vector<VarianceComponents> variance_components;  // per m when available
  std::vector<int> variance_m_values;
};

StatReport make_stat_report(double f, double amplitude, int m_max = 0);

}  // namespace netbench
