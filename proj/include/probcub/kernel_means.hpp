#ifndef PROBCUB_KERNEL_MEANS_HPP
#define PROBCUB_KERNEL_MEANS_HPP

#include <memory>
#include <optional>

#include "probcub/kernels.hpp"
#include "probcub/measures.hpp"
#include "probcub/point_sets.hpp"

namespace probcub {

// mu(pi)(x) = int k(x',x) dpi(x') together with the initial error
// PiPi[k] = int int k dpi dpi.
//
// Analytic form exists for the whitelisted (kernel, measure) pairs; everything
// else must go through the Empirical form. Immutable and thread-safe.
class KernelMean {
public:
    // Throws UnsupportedPair when no closed form is catalogued.
    static KernelMean analytic(Kernel kernel, Measure measure);

    // Empirical approximation sum_j w_j k(x_j, .) built from m samples.
    static KernelMean empirical(Kernel kernel, PointSet samples, Vector weights);
    static KernelMean empirical_uniform(Kernel kernel, PointSet samples);

    double mean_at(const Vector& x) const;
    Vector mean_at(const PointSet& X) const;

    // PiPi[k] >= 0.
    double initial_error() const;

    bool is_empirical() const { return samples_.has_value(); }
    const Kernel& kernel() const { return kernel_; }
    const PointSet& samples() const;       // Empirical form only
    const Vector& sample_weights() const;  // Empirical form only

private:
    KernelMean(Kernel k, std::optional<Measure> m, std::optional<PointSet> s,
               Vector w);
    Kernel kernel_;
    std::optional<Measure> measure_;
    std::optional<PointSet> samples_;
    Vector weights_;
    double initial_error_ = 0.0;
};

// The high-probability bound of the empirical kernel-mean error for m uniform
// i.i.d. samples: 2/sqrt(m) * sup_x sqrt(k(x,x)) + sqrt(log(2/delta)/(2m)).
// `effective_m`, when positive, replaces m (effective-sample-size override
// for dependent samples).
double mean_error_bound(const Kernel& kernel, int m, double delta,
                        double effective_m = -1.0);

}  // namespace probcub

#endif
