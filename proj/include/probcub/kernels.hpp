#ifndef PROBCUB_KERNELS_HPP
#define PROBCUB_KERNELS_HPP

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "probcub/point_sets.hpp"

namespace probcub {

// k(x,x') = min(x,x') on [0,1].
struct BrownianKernel {};

// Tensor product over dimensions of half-integer Materns; alpha = p + 1/2,
// p in {1,2,3}, evaluated in closed polynomial-times-exponential form with
// sqrt(2*alpha)*|x_i-y_i|/sigma_i as the scaled distance.
struct MaternTPKernel {
    double alpha;       // 1.5, 2.5 or 3.5
    Vector sigma;       // per-dimension lengthscales, all > 0
    double lambda;      // amplitude
};

// lambda * exp(-|x-y|^2 / (2 sigma^2)).
struct ExpQuadraticKernel {
    double sigma;
    double lambda;
};

// Weighted Sobolev kernel on [0,1]^d built from Bernoulli polynomials:
// k(x,y) = sum_u gamma_u prod_{i in u} eta(x_i, y_i) with
// eta(s,t) = sum_{k=1..alpha} B_k(s)B_k(t)/(k!)^2 - (-1)^alpha B_{2alpha}(|s-t|)/(2alpha)!.
struct WeightedSobolevKernel {
    int alpha;  // 1, 2 or 3
    int d;
    // Explicit subset weights. order_gammas[k], when non-empty, adds
    // gamma_u = order_gammas[k] for every |u| = k (k <= 3), evaluated through
    // elementary symmetric polynomials instead of subset enumeration.
    std::vector<std::pair<std::vector<int>, double>> subset_gammas;
    std::vector<double> order_gammas;
};

// k(x,x') = 8/3 - |x-x'|_2 on S^2.
struct SphereSobolev32Kernel {};

struct GramResult {
    Matrix K;       // raw symmetric Gram matrix (no jitter on the diagonal)
    double jitter;  // diagonal shift needed for a successful Cholesky
};

// Immutable positive-definite kernel; eval and gram are pure.
class Kernel {
public:
    using Variant = std::variant<BrownianKernel, MaternTPKernel,
                                 ExpQuadraticKernel, WeightedSobolevKernel,
                                 SphereSobolev32Kernel>;

    static Kernel brownian();
    static Kernel matern_tp(double alpha, Vector sigma, double lambda);
    static Kernel matern_tp(double alpha, double sigma, int d, double lambda);
    static Kernel exp_quadratic(double sigma, double lambda);
    // Weighted Sobolev with explicit subset weights (subsets use 0-based
    // coordinate indices).
    static Kernel weighted_sobolev(
        int alpha, int d,
        std::vector<std::pair<std::vector<int>, double>> subset_gammas);
    // gamma_u = order_gammas[|u|] for |u| <= order_gammas.size()-1 (<= 3).
    static Kernel weighted_sobolev_order(int alpha, int d,
                                         std::vector<double> order_gammas);
    static Kernel sphere_sobolev32();

    // Symmetric in (x,y); throws ArgumentError on dimension/domain violation.
    double eval(const Vector& x, const Vector& y) const;

    // Gram matrix over a deduplicated point set, together with the jitter the
    // escalation policy had to add for Cholesky to succeed. Throws
    // ConditioningError past 1e-6 * tr(K)/n.
    GramResult gram(const PointSet& X) const;

    // sup_x k(x,x) over the kernel's domain (analytic where the diagonal is
    // constant, a fine-grid maximum for WeightedSobolev).
    double sup_diag() const;

    template <typename T>
    bool holds() const { return std::holds_alternative<T>(*v_); }
    template <typename T>
    const T& get() const { return std::get<T>(*v_); }
    const Variant& variant() const { return *v_; }

    const char* name() const;

private:
    explicit Kernel(Variant v);
    std::shared_ptr<const Variant> v_;
};

struct CholeskyResult {
    Eigen::LLT<Matrix> llt;  // factor of K + jitter*I
    double jitter;
};

// Attempts Cholesky; on failure adds 1e-12*tr(K)/n to the diagonal and
// escalates x10 up to 1e-6*tr(K)/n, then throws ConditioningError.
CholeskyResult cholesky_with_jitter(const Matrix& K);

namespace matern1d {
// Unit-amplitude half-integer Matern in 1-d with scaled distance
// t = sqrt(2*alpha)*r/sigma, plus the antiderivatives used by the analytic
// kernel means: F(u) = int_0^u k(r) dr and H(u) = int_0^u r k(r) dr.
double eval(double alpha, double sigma, double r);
double integral_F(double alpha, double sigma, double u);
double integral_H(double alpha, double sigma, double u);
}  // namespace matern1d

namespace bernoulli {
// Bernoulli polynomial B_n(x), n <= 6.
double poly(int n, double x);
}

}  // namespace probcub

#endif
