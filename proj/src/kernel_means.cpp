#include "probcub/kernel_means.hpp"

#include <cmath>
#include <mutex>

#include "probcub/errors.hpp"

namespace probcub {

namespace {

constexpr double kBoxTol = 1e-12;

bool is_unit_box(const UniformBox& b) {
    for (Eigen::Index i = 0; i < b.lo.size(); ++i)
        if (std::abs(b.lo[i]) > kBoxTol || std::abs(b.hi[i] - 1.0) > kBoxTol)
            return false;
    return true;
}

// Per-dimension box average of the unit-amplitude Matern:
// (F(x-lo) + F(hi-x)) / (hi-lo).
double matern_box_mean_1d(double alpha, double sigma, double x, double lo,
                          double hi) {
    return (matern1d::integral_F(alpha, sigma, x - lo) +
            matern1d::integral_F(alpha, sigma, hi - x)) /
           (hi - lo);
}

// Per-dimension double box average: 2 (L F(L) - H(L)) / L^2.
double matern_box_init_1d(double alpha, double sigma, double lo, double hi) {
    const double L = hi - lo;
    return 2.0 *
           (L * matern1d::integral_F(alpha, sigma, L) -
            matern1d::integral_H(alpha, sigma, L)) /
           (L * L);
}

double expquad_box_mean_1d(double sigma, double x, double lo, double hi) {
    const double s = sigma * std::sqrt(2.0);
    return sigma * std::sqrt(M_PI / 2.0) *
           (std::erf((hi - x) / s) - std::erf((lo - x) / s)) / (hi - lo);
}

double expquad_box_init_1d(double sigma, double lo, double hi) {
    const double L = hi - lo;
    const double t1 = L * sigma * std::sqrt(M_PI / 2.0) * std::erf(L / (sigma * std::sqrt(2.0)));
    const double t2 = sigma * sigma * (1.0 - std::exp(-L * L / (2.0 * sigma * sigma)));
    return 2.0 * (t1 - t2) / (L * L);
}

}  // namespace

struct KernelMeanState {
    enum class Pair {
        MaternBox,
        ExpQuadBox,
        ExpQuadMixture,
        SobolevUnitBox,
        SphereConst,
        BrownianUnit,
        Atoms,  // weighted kernel sum: Empirical measure or Empirical form
    };
    Pair pair;
    bool form_empirical = false;
    // Atoms path
    Matrix atom_points;
    Vector atom_weights;
    // lazy initial error for the atoms path
    mutable std::once_flag init_once;
    mutable double lazy_initial = 0.0;
};

namespace {

double sobolev_empty_gamma(const WeightedSobolevKernel& k) {
    double g0 = 0.0;
    if (!k.order_gammas.empty()) g0 += k.order_gammas[0];
    for (const auto& [u, g] : k.subset_gammas)
        if (u.empty()) g0 += g;
    return g0;
}

}  // namespace

// Shared implementation object; KernelMean itself stays copyable.
namespace {
struct Resolved {
    KernelMeanState::Pair pair;
    Matrix atoms;
    Vector atom_w;
};

Resolved resolve_pair(const Kernel& kernel, const Measure& measure) {
    if (measure.holds<EmpiricalMeasure>()) {
        const auto& e = measure.get<EmpiricalMeasure>();
        return {KernelMeanState::Pair::Atoms, e.points, e.weights};
    }
    if (kernel.holds<MaternTPKernel>() && measure.holds<UniformBox>()) {
        const auto& k = kernel.get<MaternTPKernel>();
        const auto& b = measure.get<UniformBox>();
        if (k.sigma.size() != b.lo.size())
            throw ArgumentError("kernel mean: kernel/measure dimension mismatch");
        return {KernelMeanState::Pair::MaternBox, {}, {}};
    }
    if (kernel.holds<ExpQuadraticKernel>() && measure.holds<UniformBox>())
        return {KernelMeanState::Pair::ExpQuadBox, {}, {}};
    if (kernel.holds<ExpQuadraticKernel>() && measure.holds<GaussianMixture>())
        return {KernelMeanState::Pair::ExpQuadMixture, {}, {}};
    if (kernel.holds<WeightedSobolevKernel>() && measure.holds<UniformBox>()) {
        const auto& k = kernel.get<WeightedSobolevKernel>();
        const auto& b = measure.get<UniformBox>();
        if (static_cast<int>(b.lo.size()) != k.d)
            throw ArgumentError("kernel mean: kernel/measure dimension mismatch");
        if (!is_unit_box(b))
            throw UnsupportedPair("WeightedSobolev", "UniformBox (non-unit)");
        return {KernelMeanState::Pair::SobolevUnitBox, {}, {}};
    }
    if (kernel.holds<SphereSobolev32Kernel>() && measure.holds<UniformSphere>()) {
        if (measure.get<UniformSphere>().d != 2)
            throw UnsupportedPair("SphereSobolev32", "UniformSphere(d != 2)");
        return {KernelMeanState::Pair::SphereConst, {}, {}};
    }
    if (kernel.holds<BrownianKernel>() && measure.holds<UniformBox>()) {
        const auto& b = measure.get<UniformBox>();
        if (b.lo.size() != 1 || !is_unit_box(b))
            throw UnsupportedPair("Brownian", "UniformBox (non [0,1])");
        return {KernelMeanState::Pair::BrownianUnit, {}, {}};
    }
    // Table-1 rows outside the implemented catalogue (Wendland TP, splines,
    // polynomial TP, gradient-based, trigonometric) land here as well.
    throw UnsupportedPair(kernel.name(), measure.name());
}
}  // namespace

KernelMean::KernelMean(Kernel k, std::optional<Measure> m,
                       std::optional<PointSet> s, Vector w)
    : kernel_(std::move(k)), measure_(std::move(m)), samples_(std::move(s)),
      weights_(std::move(w)) {}

KernelMean KernelMean::analytic(Kernel kernel, Measure measure) {
    Resolved r = resolve_pair(kernel, measure);
    KernelMean km(std::move(kernel), std::move(measure), std::nullopt, {});
    km.pair_ = static_cast<int>(r.pair);
    if (r.pair == KernelMeanState::Pair::Atoms) {
        PointSet atoms;
        atoms.points = std::move(r.atoms);  // the atoms ARE the measure; no dedup
        atoms.provenance = Provenance::UserSupplied;
        km.samples_ = std::move(atoms);
        km.weights_ = std::move(r.atom_w);
    }
    km.compute_initial_error();
    return km;
}

KernelMean KernelMean::empirical(Kernel kernel, PointSet samples, Vector weights) {
    if (samples.size() == 0)
        throw ArgumentError("empirical kernel mean: samples must be nonempty");
    if (weights.size() != samples.size())
        throw ArgumentError("empirical kernel mean: weights/samples length mismatch");
    KernelMean km(std::move(kernel), std::nullopt, std::move(samples),
                  std::move(weights));
    km.pair_ = static_cast<int>(KernelMeanState::Pair::Atoms);
    km.form_empirical_ = true;
    return km;
}

KernelMean KernelMean::empirical_uniform(Kernel kernel, PointSet samples) {
    const Eigen::Index m = samples.size();
    return empirical(std::move(kernel), std::move(samples),
                     Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

const PointSet& KernelMean::samples() const {
    if (!samples_) throw UnsupportedOperation("kernel mean has no sample form");
    return *samples_;
}

const Vector& KernelMean::sample_weights() const {
    if (!samples_) throw UnsupportedOperation("kernel mean has no sample form");
    return weights_;
}

double KernelMean::mean_at(const Vector& x) const {
    using P = KernelMeanState::Pair;
    switch (static_cast<P>(pair_)) {
        case P::MaternBox: {
            const auto& k = kernel_.get<MaternTPKernel>();
            const auto& b = measure_->get<UniformBox>();
            if (x.size() != b.lo.size())
                throw ArgumentError("mean_at: dimension mismatch");
            double prod = k.lambda;
            for (Eigen::Index i = 0; i < x.size(); ++i)
                prod *= matern_box_mean_1d(k.alpha, k.sigma[i], x[i], b.lo[i], b.hi[i]);
            return prod;
        }
        case P::ExpQuadBox: {
            const auto& k = kernel_.get<ExpQuadraticKernel>();
            const auto& b = measure_->get<UniformBox>();
            if (x.size() != b.lo.size())
                throw ArgumentError("mean_at: dimension mismatch");
            double prod = k.lambda;
            for (Eigen::Index i = 0; i < x.size(); ++i)
                prod *= expquad_box_mean_1d(k.sigma, x[i], b.lo[i], b.hi[i]);
            return prod;
        }
        case P::ExpQuadMixture: {
            const auto& k = kernel_.get<ExpQuadraticKernel>();
            const auto& g = measure_->get<GaussianMixture>();
            const Eigen::Index d = x.size();
            double acc = 0.0;
            for (size_t j = 0; j < g.means.size(); ++j) {
                Matrix V = g.covariances[j];
                V.diagonal().array() += k.sigma * k.sigma;
                Eigen::LLT<Matrix> llt(V);
                const Vector half = llt.matrixL().solve(x - g.means[j]);
                double logdet = 0.0;
                for (Eigen::Index i = 0; i < d; ++i)
                    logdet += std::log(llt.matrixL()(i, i));
                acc += g.weights[static_cast<Eigen::Index>(j)] *
                       std::exp(d * std::log(k.sigma) - logdet -
                                0.5 * half.squaredNorm());
            }
            return k.lambda * acc;
        }
        case P::SobolevUnitBox:
            return sobolev_empty_gamma(kernel_.get<WeightedSobolevKernel>());
        case P::SphereConst: {
            if (x.size() != 3 || std::abs(x.norm() - 1.0) > 1e-9)
                throw ArgumentError("mean_at: point not on S^2");
            return 4.0 / 3.0;
        }
        case P::BrownianUnit: {
            if (x.size() != 1) throw ArgumentError("mean_at: d must be 1");
            return x[0] - 0.5 * x[0] * x[0];
        }
        case P::Atoms: {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < samples_->size(); ++j)
                acc += weights_[j] * kernel_.eval(samples_->row(j), x);
            return acc;
        }
    }
    throw std::logic_error("unreachable");
}

Vector KernelMean::mean_at(const PointSet& X) const {
    Vector z(X.size());
    for (Eigen::Index i = 0; i < X.size(); ++i) z[i] = mean_at(X.row(i));
    return z;
}

void KernelMean::compute_initial_error() {
    using P = KernelMeanState::Pair;
    switch (static_cast<P>(pair_)) {
        case P::MaternBox: {
            const auto& k = kernel_.get<MaternTPKernel>();
            const auto& b = measure_->get<UniformBox>();
            double prod = k.lambda;
            for (Eigen::Index i = 0; i < b.lo.size(); ++i)
                prod *= matern_box_init_1d(k.alpha, k.sigma[i], b.lo[i], b.hi[i]);
            initial_error_ = prod;
            break;
        }
        case P::ExpQuadBox: {
            const auto& k = kernel_.get<ExpQuadraticKernel>();
            const auto& b = measure_->get<UniformBox>();
            double prod = k.lambda;
            for (Eigen::Index i = 0; i < b.lo.size(); ++i)
                prod *= expquad_box_init_1d(k.sigma, b.lo[i], b.hi[i]);
            initial_error_ = prod;
            break;
        }
        case P::ExpQuadMixture: {
            const auto& k = kernel_.get<ExpQuadraticKernel>();
            const auto& g = measure_->get<GaussianMixture>();
            const Eigen::Index d = g.means[0].size();
            double acc = 0.0;
            for (size_t j = 0; j < g.means.size(); ++j) {
                for (size_t l = 0; l < g.means.size(); ++l) {
                    Matrix V = g.covariances[j] + g.covariances[l];
                    V.diagonal().array() += k.sigma * k.sigma;
                    Eigen::LLT<Matrix> llt(V);
                    const Vector half = llt.matrixL().solve(g.means[j] - g.means[l]);
                    double logdet = 0.0;
                    for (Eigen::Index i = 0; i < d; ++i)
                        logdet += std::log(llt.matrixL()(i, i));
                    acc += g.weights[static_cast<Eigen::Index>(j)] *
                           g.weights[static_cast<Eigen::Index>(l)] *
                           std::exp(d * std::log(k.sigma) - logdet -
                                    0.5 * half.squaredNorm());
                }
            }
            initial_error_ = k.lambda * acc;
            break;
        }
        case P::SobolevUnitBox:
            initial_error_ = sobolev_empty_gamma(kernel_.get<WeightedSobolevKernel>());
            break;
        case P::SphereConst:
            initial_error_ = 4.0 / 3.0;
            break;
        case P::BrownianUnit:
            initial_error_ = 1.0 / 3.0;
            break;
        case P::Atoms: {
            // w' K w over the atoms; deferred until needed (m can be large).
            initial_error_ = -1.0;
            break;
        }
    }
}

double KernelMean::initial_error() const {
    using P = KernelMeanState::Pair;
    if (static_cast<P>(pair_) != P::Atoms) return initial_error_;
    std::call_once(*init_once_, [&] {
        double acc = 0.0;
        const Eigen::Index m = samples_->size();
        for (Eigen::Index j = 0; j < m; ++j) {
            const Vector xj = samples_->row(j);
            for (Eigen::Index l = 0; l <= j; ++l) {
                const double v = kernel_.eval(xj, samples_->row(l));
                acc += (l == j ? 1.0 : 2.0) * weights_[j] * weights_[l] * v;
            }
        }
        *lazy_initial_ = std::max(acc, 0.0);
    });
    return *lazy_initial_;
}

double mean_error_bound(const Kernel& kernel, int m, double delta,
                        double effective_m) {
    if (m < 1) throw ArgumentError("mean_error_bound: m must be >= 1");
    if (!(delta > 0.0 && delta <= 1.0))
        throw ArgumentError("mean_error_bound: delta must be in (0,1]");
    const double meff = effective_m > 0.0 ? effective_m : static_cast<double>(m);
    const double sup = std::sqrt(kernel.sup_diag());
    return 2.0 * sup / std::sqrt(meff) +
           std::sqrt(std::log(2.0 / delta) / (2.0 * meff));
}

}  // namespace probcub
