#ifndef PROBCUB_MEASURES_HPP
#define PROBCUB_MEASURES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "probcub/point_sets.hpp"

namespace probcub {

struct UniformBox {
    Vector lo;
    Vector hi;
};

struct GaussianMixture {
    Vector weights;                 // simplex
    std::vector<Vector> means;
    std::vector<Matrix> covariances;  // SPD
};

// The spherical measure on S^d (unit sphere in R^{d+1}), total mass 1.
struct UniformSphere {
    int d;
};

// Atomic measure sum_j w_j delta_{x_j}; weights may be negative.
struct EmpiricalMeasure {
    Matrix points;   // m x d
    Vector weights;  // length m
};

// Unnormalised tempered density: t * log_likelihood + log_prior.
struct PowerPosterior {
    std::function<double(const Vector&)> log_likelihood;
    std::function<double(const Vector&)> log_prior;
    double t = 1.0;
    int dim = 0;
};

// Immutable target distribution. All operations are const and thread-safe;
// samplers take an explicit seed and hold no state.
class Measure {
public:
    using Variant = std::variant<UniformBox, GaussianMixture, UniformSphere,
                                 EmpiricalMeasure, PowerPosterior>;

    static Measure uniform_box(Vector lo, Vector hi);
    static Measure gaussian_mixture(Vector weights, std::vector<Vector> means,
                                    std::vector<Matrix> covariances);
    static Measure uniform_sphere(int d);
    static Measure empirical(Matrix points, Vector weights);
    static Measure power_posterior(std::function<double(const Vector&)> loglik,
                                   std::function<double(const Vector&)> logprior,
                                   double t, int dim);

    // Ambient dimension of points drawn from / evaluated under the measure
    // (d+1 for UniformSphere(d)).
    int dim() const;

    // log pi(x); unnormalised for PowerPosterior. Throws UnsupportedOperation
    // for Empirical, ArgumentError on dimension mismatch.
    double log_density(const Vector& x) const;

    // n i.i.d. draws; pure function of (measure, n, seed).
    // Throws UnsupportedOperation for PowerPosterior (use mcmc_points).
    Matrix sample(int n, std::uint64_t seed) const;

    template <typename T>
    bool holds() const { return std::holds_alternative<T>(*v_); }
    template <typename T>
    const T& get() const { return std::get<T>(*v_); }
    const Variant& variant() const { return *v_; }

    const char* name() const;

private:
    explicit Measure(Variant v);
    std::shared_ptr<const Variant> v_;  // immutable, cheap to copy
};

}  // namespace probcub

#endif
