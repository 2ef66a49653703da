#ifndef PROBCUB_CUBATURE_HPP
#define PROBCUB_CUBATURE_HPP

#include <functional>
#include <optional>
#include <utility>

#include "probcub/kernel_means.hpp"
#include "probcub/kernels.hpp"
#include "probcub/point_sets.hpp"

namespace probcub {

enum class PosteriorFamily { Gaussian, StudentT };

// Posterior distribution over the value of the integral Pi[f].
struct CubaturePosterior {
    double mean = 0.0;
    // For StudentT this is the squared scale; quantiles are
    // mean +- t_q(dof) * sqrt(variance).
    double variance = 0.0;
    PosteriorFamily family = PosteriorFamily::Gaussian;
    int dof = 0;  // StudentT only; equals n
    // Additive worst-case-error bound term, present iff the kernel mean was
    // empirical (the variance above already includes it).
    std::optional<double> inflation;
    Vector weights;
    int n = 0;
    double jitter = 0.0;
    bool variance_clamped = false;  // round-off negative clamped to zero
};

// w = K^{-1} z with z_i = mean_at(km, x_i); never forms the inverse.
Vector bc_weights(const Kernel& kernel, const KernelMean& km, const PointSet& X,
                  double* jitter_out = nullptr);

// Gaussian posterior: mean = w.f, variance = PiPi[k] - z.w. An empty X gives
// the prior Gaussian(0, PiPi[k]).
CubaturePosterior bc_posterior(const Kernel& kernel, const KernelMean& km,
                               const PointSet& X, const Vector& f_values);

// Amplitude-marginalised posterior for c = lambda*c0 under p(lambda) ~ 1/lambda:
// Student-t with the Gaussian mean, scale^2 = (f.C0^{-1}f / n) * (PiPi - z.w),
// and n degrees of freedom. kernel0 must have unit amplitude; n >= 2.
CubaturePosterior bc_posterior_studentt(const Kernel& kernel0,
                                        const KernelMean& km0, const PointSet& X,
                                        const Vector& f_values);

// Squared worst-case error of an arbitrary weight vector:
// w.Kw - 2 w.z + PiPi[k], clamped at zero within round-off.
double wce_squared(const Kernel& kernel, const KernelMean& km, const PointSet& X,
                   const Vector& w);

struct EBResult {
    Vector sigma;
    double log_marginal;
};

// Empirical-Bayes lengthscale selection with the amplitude profiled out:
// maximises -(n/2) log(f.C0^{-1}f) - (1/2) log det C0 over a log-spaced grid,
// then golden-section refinement per coordinate (relative tolerance 1e-3).
// `family(sigma)` must build the unit-amplitude kernel for a given sigma
// vector (length 1 in isotropic mode, length d in per-dimension mode).
EBResult eb_lengthscale(const std::function<Kernel(const Vector&)>& family,
                        const PointSet& X, const Vector& f_values,
                        const std::vector<double>& sigma_grid,
                        int sigma_dim = 1);

// The default recorded grid: 32 log-spaced points per decade over [1e-3,1e3].
std::vector<double> default_sigma_grid();

// Bayesian cubature against an empirical kernel mean, with the posterior
// standard deviation inflated by the kernel-mean error bound:
// sd = sqrt(aPiaPi[k] - az.K^{-1}az) + mean_error_bound(kernel, m, delta).
// km_emp must be built from samples disjoint from X.
CubaturePosterior approx_bc_posterior(const Kernel& kernel,
                                      const KernelMean& km_emp,
                                      const PointSet& X, const Vector& f_values,
                                      double delta = 0.05,
                                      double effective_m = -1.0);

// Central 100(1-gamma)% credible interval.
std::pair<double, double> credible_interval(const CubaturePosterior& post,
                                            double gamma);

namespace stats {
double normal_quantile(double p);              // Phi^{-1}(p)
double student_t_quantile(double p, int dof);  // F_t^{-1}(p)
double normal_cdf(double x);
double student_t_cdf(double x, int dof);
}  // namespace stats

}  // namespace probcub

#endif
