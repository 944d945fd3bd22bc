#include "hfentropy/arma.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hfentropy/error.hpp"
#include "hfentropy/lag_polynomial.hpp"

namespace hfentropy::arma {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> demean(std::span<const double> x, double& mean) {
    mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> y(x.begin(), x.end());
    for (auto& v : y) v -= mean;
    return y;
}

// Conditional sum of squares with e_t = 0 for t < p. When `grad` is set it
// receives dCSS/d(ar, ma), and `jtj` the Gauss-Newton matrix sum d_t d_t'.
class CssObjective {
public:
    CssObjective(const std::vector<double>& y, int p, int q) : y_(y), p_(p), q_(q) {
        e_.assign(y.size(), 0.0);
    }

    double value(const VectorXd& x, VectorXd* grad = nullptr, MatrixXd* jtj = nullptr) {
        const auto p = static_cast<std::size_t>(p_);
        const auto q = static_cast<std::size_t>(q_);
        const std::size_t m = p + q;
        const std::size_t n = y_.size();
        std::vector<double> a(x.data(), x.data() + p);
        std::vector<double> b(x.data() + p, x.data() + m);
        if (!is_stationary(a) || !is_invertible(b)) return kInf;

        const bool want_derivatives = grad != nullptr || jtj != nullptr;
        if (want_derivatives) {
            d_.assign(m * n, 0.0);
            if (grad) grad->setZero(static_cast<Eigen::Index>(m));
            if (jtj) jtj->setZero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        }
        std::vector<double> dt(m);
        long double css = 0.0L;
        for (std::size_t t = p; t < n; ++t) {
            double e = y_[t];
            for (std::size_t i = 0; i < p; ++i) e -= a[i] * y_[t - 1 - i];
            for (std::size_t j = 0; j < q && t >= p + 1 + j; ++j) e -= b[j] * e_[t - 1 - j];
            e_[t] = e;
            css += static_cast<long double>(e) * e;
            if (!want_derivatives) continue;

            for (std::size_t k = 0; k < m; ++k) {
                double v;
                if (k < p) {
                    v = -y_[t - 1 - k];
                } else {
                    const std::size_t j = k - p;
                    v = t >= p + 1 + j ? -e_[t - 1 - j] : 0.0;
                }
                for (std::size_t l = 0; l < q && t >= p + 1 + l; ++l) v -= b[l] * d_[k * n + t - 1 - l];
                d_[k * n + t] = v;
                dt[k] = v;
            }
            for (std::size_t k = 0; k < m; ++k) {
                if (grad) (*grad)(static_cast<Eigen::Index>(k)) += 2.0 * e * dt[k];
                if (jtj) {
                    for (std::size_t l = 0; l <= k; ++l) {
                        (*jtj)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) += dt[k] * dt[l];
                    }
                }
            }
        }
        const double scale = 1.0 / static_cast<double>(n - p);
        if (grad) *grad *= scale;
        if (jtj) {
            *jtj = jtj->selfadjointView<Eigen::Lower>();
            *jtj *= 2.0 * scale;
        }
        return static_cast<double>(css) * scale;
    }

    const std::vector<double>& innovations() const { return e_; }

private:
    const std::vector<double>& y_;
    int p_;
    int q_;
    std::vector<double> e_;
    std::vector<double> d_;
};

// Yule-Walker AR(order) coefficients by Levinson-Durbin.
std::vector<double> yule_walker(const std::vector<double>& y, int order) {
    const std::size_t n = y.size();
    std::vector<double> acov(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        long double s = 0.0L;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) s += y[t] * y[t - static_cast<std::size_t>(k)];
        acov[static_cast<std::size_t>(k)] = static_cast<double>(s / static_cast<long double>(n));
    }
    std::vector<double> phi;
    double v = acov[0];
    for (int k = 1; k <= order; ++k) {
        double num = acov[static_cast<std::size_t>(k)];
        for (int i = 0; i < k - 1; ++i) num -= phi[static_cast<std::size_t>(i)] * acov[static_cast<std::size_t>(k - 1 - i)];
        const double r = num / v;
        std::vector<double> next(static_cast<std::size_t>(k));
        for (int i = 0; i < k - 1; ++i) {
            next[static_cast<std::size_t>(i)] =
                phi[static_cast<std::size_t>(i)] - r * phi[static_cast<std::size_t>(k - 2 - i)];
        }
        next[static_cast<std::size_t>(k - 1)] = r;
        phi = std::move(next);
        v *= 1.0 - r * r;
        if (!(v > 0.0)) break;
    }
    return phi;
}

// Hannan-Rissanen: long AR residuals as proxies for the innovations, then OLS.
VectorXd hannan_rissanen(const std::vector<double>& y, int p, int q) {
    const std::size_t n = y.size();
    std::vector<double> ehat(n, 0.0);
    std::size_t start = static_cast<std::size_t>(p);
    if (q > 0) {
        const int long_order = 2 * static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
        const auto ar = yule_walker(y, long_order);
        const std::size_t m = ar.size();
        for (std::size_t t = m; t < n; ++t) {
            double e = y[t];
            for (std::size_t i = 0; i < m; ++i) e -= ar[i] * y[t - 1 - i];
            ehat[t] = e;
        }
        start = std::max(start, m + static_cast<std::size_t>(q));
    }
    const auto k = static_cast<Eigen::Index>(p + q);
    MatrixXd xtx = MatrixXd::Zero(k, k);
    VectorXd xty = VectorXd::Zero(k);
    VectorXd row(k);
    for (std::size_t t = start; t < n; ++t) {
        for (int i = 0; i < p; ++i) row(i) = y[t - 1 - static_cast<std::size_t>(i)];
        for (int j = 0; j < q; ++j) row(p + j) = ehat[t - 1 - static_cast<std::size_t>(j)];
        xtx.selfadjointView<Eigen::Lower>().rankUpdate(row);
        xty += row * y[t];
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();
    VectorXd beta = xtx.ldlt().solve(xty);
    if (!beta.allFinite()) beta.setZero();
    return beta;
}

bool admissible(const VectorXd& x, int p) {
    std::vector<double> a(x.data(), x.data() + p);
    std::vector<double> b(x.data() + p, x.data() + x.size());
    return is_stationary(a) && is_invertible(b);
}

void shrink_to_admissible(VectorXd& x, int p, int q) {
    for (int attempt = 0; attempt < 500 && !admissible(x, p); ++attempt) {
        for (int i = 0; i < p; ++i) x(i) *= std::pow(0.9, i + 1);
        for (int j = 0; j < q; ++j) x(p + j) *= std::pow(0.9, j + 1);
    }
    if (!admissible(x, p)) x.setZero();
}

void finish_model(ArmaModel& model, double sigma2) {
    const auto n = static_cast<double>(model.n);
    model.innovation_variance = sigma2;
    model.log_likelihood = -0.5 * n * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
    model.bic = -2.0 * model.log_likelihood + static_cast<double>(model.p + model.q + 1) * std::log(n);
}

}  // namespace

ArmaModel fit_arma(std::span<const double> series, int p, int q, const FitOptions& options) {
    if (p < 0 || q < 0) throw InputError("ARMA orders must be non-negative");
    const std::size_t n = series.size();
    if (n <= static_cast<std::size_t>(10 * (p + q + 1))) {
        throw InputError("ARMA(" + std::to_string(p) + "," + std::to_string(q) + ") needs more than " +
                         std::to_string(10 * (p + q + 1)) + " observations");
    }
    ArmaModel model;
    model.p = p;
    model.q = q;
    model.n = n;
    const std::vector<double> y = demean(series, model.mean);
    double ss = 0.0;
    for (double v : y) ss += v * v;
    if (!(ss > 0.0)) throw InputError("ARMA fit of a constant series");

    CssObjective objective(y, p, q);
    const int m = p + q;
    if (m == 0) {
        finish_model(model, objective.value(VectorXd()));
        return model;
    }

    VectorXd x = hannan_rissanen(y, p, q);
    shrink_to_admissible(x, p, q);

    VectorXd g(m);
    MatrixXd jtj(m, m);
    double f = objective.value(x, &g, &jtj);
    if (!std::isfinite(f)) {
        x.setZero();
        f = objective.value(x, &g, &jtj);
    }
    // BFGS with the Gauss-Newton inverse as the initial inverse Hessian.
    MatrixXd h = jtj.ldlt().solve(MatrixXd::Identity(m, m));
    if (!h.allFinite() || h.diagonal().minCoeff() <= 0.0) h = MatrixXd::Identity(m, m);

    int iter = 0;
    bool converged = false;
    VectorXd g_new(m);
    while (iter < options.max_iterations) {
        ++iter;
        VectorXd dir = -h * g;
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            h = MatrixXd::Identity(m, m);
            dir = -g;
            slope = -g.squaredNorm();
        }
        if (slope == 0.0) {
            converged = true;
            break;
        }
        double step = 1.0;
        double f_new = kInf;
        VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + step * dir;
            f_new = objective.value(x_new);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No decrease is available along the search direction at working precision.
            converged = true;
            break;
        }
        objective.value(x_new, &g_new);
        const double rel = std::abs(f - f_new) / std::max(std::abs(f), std::numeric_limits<double>::min());
        const VectorXd s = x_new - x;
        const VectorXd yk = g_new - g;
        const double sy = s.dot(yk);
        if (sy > 1e-16 * s.norm() * yk.norm()) {
            const double rho = 1.0 / sy;
            const MatrixXd i_m = MatrixXd::Identity(m, m);
            h = (i_m - rho * s * yk.transpose()) * h * (i_m - rho * yk * s.transpose()) + rho * s * s.transpose();
        }
        x = x_new;
        f = f_new;
        g = g_new;
        if (rel < options.relative_tolerance) {
            converged = true;
            break;
        }
    }
    model.iterations = iter;
    if (!converged) {
        throw FitError("ARMA(" + std::to_string(p) + "," + std::to_string(q) + ") did not converge in " +
                           std::to_string(options.max_iterations) + " iterations",
                       p, q, f, iter);
    }
    if (!admissible(x, p)) {
        throw FitError("ARMA(" + std::to_string(p) + "," + std::to_string(q) +
                           ") estimate left the stationary and invertible region",
                       p, q, f, iter);
    }
    model.ar.assign(x.data(), x.data() + p);
    model.ma.assign(x.data() + p, x.data() + m);
    finish_model(model, f);
    return model;
}

OrderSelection select_order(std::span<const double> series, int max_total_order, const FitOptions& options) {
    if (max_total_order < 0) throw InputError("max_total_order must be non-negative");
    OrderSelection out;
    bool have_best = false;
    for (int total = 0; total <= max_total_order; ++total) {
        for (int q = 0; q <= total; ++q) {
            const int p = total - q;
            GridEntry entry{p, q, false, 0.0, {}};
            try {
                ArmaModel model = fit_arma(series, p, q, options);
                entry.ok = true;
                entry.bic = model.bic;
                // Visiting order already encodes the tie-break, so only a strictly lower BIC wins.
                if (!have_best || model.bic < out.best.bic) {
                    out.best = std::move(model);
                    have_best = true;
                }
            } catch (const FitError& e) {
                entry.message = e.what();
                entry.bic = e.best_objective();
            } catch (const InputError& e) {
                entry.message = e.what();
            }
            out.grid.push_back(std::move(entry));
        }
    }
    if (!have_best) throw SelectionError("no ARMA order could be fitted");
    return out;
}

ResidualSeries residuals(std::span<const double> series, const ArmaModel& model) {
    if (static_cast<int>(model.ar.size()) != model.p || static_cast<int>(model.ma.size()) != model.q) {
        throw InputError("model coefficients do not match its orders");
    }
    const auto burn = static_cast<std::size_t>(std::max(model.p, model.q));
    if (series.size() <= burn) throw InputError("series shorter than the residual burn-in");
    const auto p = static_cast<std::size_t>(model.p);
    const auto q = static_cast<std::size_t>(model.q);
    std::vector<double> e(series.size(), 0.0);
    for (std::size_t t = p; t < series.size(); ++t) {
        double v = series[t] - model.mean;
        for (std::size_t i = 0; i < p; ++i) v -= model.ar[i] * (series[t - 1 - i] - model.mean);
        for (std::size_t j = 0; j < q && t >= p + 1 + j; ++j) v -= model.ma[j] * e[t - 1 - j];
        e[t] = v;
    }
    ResidualSeries out;
    out.burn_in = burn;
    out.model = model;
    out.values.assign(e.begin() + static_cast<std::ptrdiff_t>(burn), e.end());
    return out;
}

Acf sample_acf(std::span<const double> series, int max_lag) {
    const std::size_t n = series.size();
    if (max_lag < 0 || 2 * static_cast<std::size_t>(max_lag) >= n) {
        throw InputError("sample ACF needs 0 <= max_lag < n/2");
    }
    double mean = 0.0;
    const std::vector<double> y = demean(series, mean);
    long double c0 = 0.0L;
    for (double v : y) c0 += static_cast<long double>(v) * v;
    if (!(c0 > 0.0L)) throw InputError("sample ACF of a constant series");
    Acf out;
    out.band = 1.96 / std::sqrt(static_cast<double>(n));
    for (int k = 1; k <= max_lag; ++k) {
        long double c = 0.0L;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
            c += static_cast<long double>(y[t]) * y[t - static_cast<std::size_t>(k)];
        }
        out.values.push_back(static_cast<double>(c / c0));
    }
    return out;
}

}  // namespace hfentropy::arma
