#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hfentropy::arma {

/// x_t - mean = sum ar_i (x_{t-i} - mean) + e_t + sum ma_j e_{t-j}, e_t ~ N(0, innovation_variance).
struct ArmaModel {
    int p = 0;
    int q = 0;
    std::vector<double> ar;
    std::vector<double> ma;
    double mean = 0.0;
    double innovation_variance = 0.0;
    /// Conditional Gaussian log-likelihood, -n/2 (ln(2 pi sigma^2) + 1).
    double log_likelihood = 0.0;
    /// -2 log_likelihood + (p + q + 1) ln n.
    double bic = 0.0;
    std::size_t n = 0;
    int iterations = 0;
};

struct FitOptions {
    int max_iterations = 500;
    /// Stop when the relative change of the sum of squares drops below this.
    double relative_tolerance = 1e-9;
};

/// Conditional-sum-of-squares fit started from a Hannan-Rissanen estimate and
/// refined with BFGS over the stationary and invertible region.
///
/// Requires n > 10 (p + q + 1) and a non-constant series (InputError).
/// Throws FitError when the optimizer does not converge within the iteration cap.
ArmaModel fit_arma(std::span<const double> series, int p, int q, const FitOptions& options = {});

struct GridEntry {
    int p = 0;
    int q = 0;
    bool ok = false;
    double bic = 0.0;
    std::string message;
};

struct OrderSelection {
    ArmaModel best;
    std::vector<GridEntry> grid;
};

/// Fits every (p, q) with p + q <= max_total_order and keeps the lowest BIC.
/// Ties go to the smaller p + q, then the smaller q.
/// Throws SelectionError when no fit succeeds.
OrderSelection select_order(std::span<const double> series, int max_total_order,
                            const FitOptions& options = {});

struct ResidualSeries {
    std::vector<double> values;
    std::size_t burn_in = 0;
    ArmaModel model;
};

/// One-step prediction errors of the demeaned series under `model`; the first
/// max(p, q) are dropped.
ResidualSeries residuals(std::span<const double> series, const ArmaModel& model);

struct Acf {
    /// acf[i] is the autocorrelation at lag i + 1.
    std::vector<double> values;
    /// 1.96 / sqrt(n)
    double band = 0.0;
};

/// Biased sample autocorrelation for lags 1..max_lag. Requires max_lag < n / 2.
Acf sample_acf(std::span<const double> series, int max_lag);

}  // namespace hfentropy::arma
