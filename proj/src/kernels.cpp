#include "probcub/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "probcub/errors.hpp"

namespace probcub {

namespace bernoulli {

double poly(int n, double x) {
    switch (n) {
        case 0: return 1.0;
        case 1: return x - 0.5;
        case 2: return (x - 1.0) * x + 1.0 / 6.0;
        case 3: return ((x - 1.5) * x + 0.5) * x;
        case 4: return ((x - 2.0) * x + 1.0) * x * x - 1.0 / 30.0;
        case 5: return (((x - 2.5) * x + 5.0 / 3.0) * x * x - 1.0 / 6.0) * x;
        case 6: return (((x - 3.0) * x + 2.5) * x * x - 0.5) * x * x + 1.0 / 42.0;
        default: throw ArgumentError("bernoulli::poly: n must be <= 6");
    }
}

}  // namespace bernoulli

namespace matern1d {

namespace {
double scale_factor(double alpha) {
    if (alpha == 1.5) return std::sqrt(3.0);
    if (alpha == 2.5) return std::sqrt(5.0);
    if (alpha == 3.5) return std::sqrt(7.0);
    throw ArgumentError("matern: alpha must be 3/2, 5/2 or 7/2");
}
}  // namespace

double eval(double alpha, double sigma, double r) {
    const double t = scale_factor(alpha) * std::abs(r) / sigma;
    if (alpha == 1.5) return (1.0 + t) * std::exp(-t);
    if (alpha == 2.5) return (1.0 + t + t * t / 3.0) * std::exp(-t);
    return (1.0 + t + 0.4 * t * t + t * t * t / 15.0) * std::exp(-t);
}

double integral_F(double alpha, double sigma, double u) {
    const double b = scale_factor(alpha) / sigma;
    const double e = std::exp(-b * u);
    if (alpha == 1.5) return 2.0 / b - e * (u + 2.0 / b);
    if (alpha == 2.5)
        return 8.0 / (3.0 * b) - e * (8.0 / (3.0 * b) + 5.0 * u / 3.0 + b * u * u / 3.0);
    return 16.0 / (5.0 * b) -
           e * (16.0 / (5.0 * b) + 2.2 * u + 0.6 * b * u * u + b * b * u * u * u / 15.0);
}

double integral_H(double alpha, double sigma, double u) {
    const double b = scale_factor(alpha) / sigma;
    const double e = std::exp(-b * u);
    if (alpha == 1.5)
        return 3.0 / (b * b) - e * (3.0 / (b * b) + 3.0 * u / b + u * u);
    if (alpha == 2.5)
        return 5.0 / (b * b) -
               e * (5.0 / (b * b) + 5.0 * u / b + 2.0 * u * u + b * u * u * u / 3.0);
    return 7.0 / (b * b) -
           e * (7.0 / (b * b) + 7.0 * u / b + 3.0 * u * u + 2.0 * b * u * u * u / 3.0 +
                b * b * u * u * u * u / 15.0);
}

}  // namespace matern1d

Kernel::Kernel(Variant v) : v_(std::make_shared<const Variant>(std::move(v))) {}

Kernel Kernel::brownian() { return Kernel(BrownianKernel{}); }

Kernel Kernel::matern_tp(double alpha, Vector sigma, double lambda) {
    if (alpha != 1.5 && alpha != 2.5 && alpha != 3.5)
        throw ArgumentError("matern_tp: alpha must be 3/2, 5/2 or 7/2");
    if (sigma.size() == 0 || sigma.minCoeff() <= 0.0)
        throw ArgumentError("matern_tp: lengthscales must be > 0");
    if (!(lambda > 0.0)) throw ArgumentError("matern_tp: lambda must be > 0");
    return Kernel(MaternTPKernel{alpha, std::move(sigma), lambda});
}

Kernel Kernel::matern_tp(double alpha, double sigma, int d, double lambda) {
    if (d < 1) throw ArgumentError("matern_tp: d must be >= 1");
    return matern_tp(alpha, Vector::Constant(d, sigma), lambda);
}

Kernel Kernel::exp_quadratic(double sigma, double lambda) {
    if (!(sigma > 0.0) || !(lambda > 0.0))
        throw ArgumentError("exp_quadratic: sigma and lambda must be > 0");
    return Kernel(ExpQuadraticKernel{sigma, lambda});
}

namespace {
void validate_sobolev(int alpha, int d) {
    if (alpha < 1 || alpha > 3)
        throw ArgumentError("weighted_sobolev: alpha must be 1, 2 or 3");
    if (d < 1) throw ArgumentError("weighted_sobolev: d must be >= 1");
}
}  // namespace

Kernel Kernel::weighted_sobolev(
    int alpha, int d,
    std::vector<std::pair<std::vector<int>, double>> subset_gammas) {
    validate_sobolev(alpha, d);
    for (auto& [u, g] : subset_gammas) {
        std::sort(u.begin(), u.end());
        if (std::adjacent_find(u.begin(), u.end()) != u.end())
            throw ArgumentError("weighted_sobolev: duplicate coordinate in subset");
        if (!u.empty() && (u.front() < 0 || u.back() >= d))
            throw ArgumentError("weighted_sobolev: subset index out of range");
        if (u.size() > 3)
            throw ArgumentError(
                "weighted_sobolev: weight maps are truncated at |u| <= 3");
        if (!(g > 0.0)) throw ArgumentError("weighted_sobolev: gamma_u must be > 0");
    }
    return Kernel(WeightedSobolevKernel{alpha, d, std::move(subset_gammas), {}});
}

Kernel Kernel::weighted_sobolev_order(int alpha, int d,
                                      std::vector<double> order_gammas) {
    validate_sobolev(alpha, d);
    if (order_gammas.empty())
        throw ArgumentError("weighted_sobolev: empty weight list");
    if (order_gammas.size() > 4)
        throw ArgumentError(
            "weighted_sobolev: order weights truncated at d_max <= 3 "
            "(full subset closures are exponential)");
    if (static_cast<int>(order_gammas.size()) == d + 1 && d > 20)
        throw ArgumentError("weighted_sobolev: full 2^d subset sum refused for d > 20");
    return Kernel(WeightedSobolevKernel{alpha, d, {}, std::move(order_gammas)});
}

Kernel Kernel::sphere_sobolev32() { return Kernel(SphereSobolev32Kernel{}); }

const char* Kernel::name() const {
    return std::visit(
        [](const auto& k) -> const char* {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, BrownianKernel>) return "Brownian";
            else if constexpr (std::is_same_v<T, MaternTPKernel>) return "MaternTP";
            else if constexpr (std::is_same_v<T, ExpQuadraticKernel>) return "ExpQuadratic";
            else if constexpr (std::is_same_v<T, WeightedSobolevKernel>) return "WeightedSobolev";
            else return "SphereSobolev32";
        },
        *v_);
}

namespace {

constexpr double kDomainTol = 1e-9;

void check_unit_interval(const Vector& x, const char* who) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < -kDomainTol || x[i] > 1.0 + kDomainTol)
            throw ArgumentError(std::string(who) + ": point outside [0,1]^d");
}

void check_unit_sphere(const Vector& x) {
    if (x.size() != 3)
        throw ArgumentError("SphereSobolev32: points must be in R^3");
    if (std::abs(x.norm() - 1.0) > kDomainTol)
        throw ArgumentError("SphereSobolev32: point not on S^2");
}

// Per-dimension Sobolev component eta(s,t).
double sobolev_eta(int alpha, double s, double t) {
    double acc = 0.0;
    static const double inv_fact_sq[4] = {0.0, 1.0, 0.25, 1.0 / 36.0};
    for (int k = 1; k <= alpha; ++k)
        acc += bernoulli::poly(k, s) * bernoulli::poly(k, t) * inv_fact_sq[k];
    static const double inv_fact2a[4] = {0.0, 0.5, 1.0 / 24.0, 1.0 / 720.0};
    const double sign = (alpha % 2 == 0) ? 1.0 : -1.0;  // -(-1)^alpha
    acc -= sign * bernoulli::poly(2 * alpha, std::abs(s - t)) * inv_fact2a[alpha];
    return acc;
}

double weighted_sobolev_eval(const WeightedSobolevKernel& k, const Vector& x,
                             const Vector& y) {
    check_unit_interval(x, "WeightedSobolev");
    check_unit_interval(y, "WeightedSobolev");
    double total = 0.0;
    if (!k.order_gammas.empty()) {
        // e_0..e_3 of the per-dimension values via power sums.
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        const int kmax = static_cast<int>(k.order_gammas.size()) - 1;
        for (int i = 0; i < k.d; ++i) {
            const double e = sobolev_eta(k.alpha, x[i], y[i]);
            s1 += e;
            if (kmax >= 2) s2 += e * e;
            if (kmax >= 3) s3 += e * e * e;
        }
        total += k.order_gammas[0];
        if (kmax >= 1) total += k.order_gammas[1] * s1;
        if (kmax >= 2) total += k.order_gammas[2] * 0.5 * (s1 * s1 - s2);
        if (kmax >= 3)
            total += k.order_gammas[3] * (s1 * s1 * s1 - 3.0 * s1 * s2 + 2.0 * s3) / 6.0;
    }
    for (const auto& [u, g] : k.subset_gammas) {
        double prod = g;
        for (int i : u) prod *= sobolev_eta(k.alpha, x[i], y[i]);
        total += prod;
    }
    return total;
}

}  // namespace

double Kernel::eval(const Vector& x, const Vector& y) const {
    if (x.size() != y.size())
        throw ArgumentError("Kernel::eval: dimension mismatch");
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, BrownianKernel>) {
                if (x.size() != 1) throw ArgumentError("Brownian: d must be 1");
                check_unit_interval(x, "Brownian");
                check_unit_interval(y, "Brownian");
                return std::min(x[0], y[0]);
            } else if constexpr (std::is_same_v<T, MaternTPKernel>) {
                if (x.size() != k.sigma.size())
                    throw ArgumentError("MaternTP: dimension mismatch");
                double prod = k.lambda;
                for (Eigen::Index i = 0; i < x.size(); ++i)
                    prod *= matern1d::eval(k.alpha, k.sigma[i], x[i] - y[i]);
                return prod;
            } else if constexpr (std::is_same_v<T, ExpQuadraticKernel>) {
                const double r2 = (x - y).squaredNorm();
                return k.lambda * std::exp(-r2 / (2.0 * k.sigma * k.sigma));
            } else if constexpr (std::is_same_v<T, WeightedSobolevKernel>) {
                if (static_cast<int>(x.size()) != k.d)
                    throw ArgumentError("WeightedSobolev: dimension mismatch");
                return weighted_sobolev_eval(k, x, y);
            } else {
                check_unit_sphere(x);
                check_unit_sphere(y);
                return 8.0 / 3.0 - (x - y).norm();
            }
        },
        *v_);
}

CholeskyResult cholesky_with_jitter(const Matrix& K) {
    const Eigen::Index n = K.rows();
    const double scale = K.trace() / std::max<Eigen::Index>(n, 1);
    double jitter = 0.0;
    const double cap = 1e-6 * scale;
    while (true) {
        Matrix Kj = K;
        if (jitter > 0.0) Kj.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(Kj);
        if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
        if (jitter == 0.0)
            jitter = 1e-12 * scale;
        else
            jitter *= 10.0;
        if (jitter > cap * (1.0 + 1e-12))
            throw ConditioningError(
                "cholesky_with_jitter: factorisation failed at maximum jitter " +
                std::to_string(cap),
                scale / cap);
    }
}

GramResult Kernel::gram(const PointSet& X) const {
    const Eigen::Index n = X.size();
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector xi = X.row(i);
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = eval(xi, X.row(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    if (n == 0) return {std::move(K), 0.0};
    CholeskyResult chol = cholesky_with_jitter(K);  // may throw
    return {std::move(K), chol.jitter};
}

double Kernel::sup_diag() const {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, BrownianKernel>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, MaternTPKernel>) {
                return k.lambda;
            } else if constexpr (std::is_same_v<T, ExpQuadraticKernel>) {
                return k.lambda;
            } else if constexpr (std::is_same_v<T, WeightedSobolevKernel>) {
                // The diagonal is not constant; scan eta(s,s) on a fine grid.
                const int grid = 10000;
                double mx = 0.0;
                for (int g = 0; g <= grid; ++g) {
                    const double s = static_cast<double>(g) / grid;
                    mx = std::max(mx, sobolev_eta(k.alpha, s, s));
                }
                double total = 0.0;
                if (!k.order_gammas.empty()) {
                    double binom = 1.0;  // C(d, j)
                    for (size_t j = 0; j < k.order_gammas.size(); ++j) {
                        if (j > 0) binom *= static_cast<double>(k.d - j + 1) / j;
                        total += k.order_gammas[j] * binom * std::pow(mx, static_cast<double>(j));
                    }
                }
                for (const auto& [u, g] : k.subset_gammas)
                    total += g * std::pow(mx, static_cast<double>(u.size()));
                return total;
            } else {
                return 8.0 / 3.0;
            }
        },
        *v_);
}

}  // namespace probcub
