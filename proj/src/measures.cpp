#include "probcub/measures.hpp"

#include <cmath>
#include <numeric>

#include "probcub/errors.hpp"
#include "probcub/rng.hpp"

namespace probcub {

Measure::Measure(Variant v) : v_(std::make_shared<const Variant>(std::move(v))) {}

Measure Measure::uniform_box(Vector lo, Vector hi) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw ArgumentError("uniform_box: lo/hi size mismatch");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw ArgumentError("uniform_box: requires lo < hi componentwise");
    return Measure(UniformBox{std::move(lo), std::move(hi)});
}

Measure Measure::gaussian_mixture(Vector weights, std::vector<Vector> means,
                                  std::vector<Matrix> covariances) {
    const auto k = static_cast<size_t>(weights.size());
    if (k == 0 || means.size() != k || covariances.size() != k)
        throw ArgumentError("gaussian_mixture: component count mismatch");
    if (weights.minCoeff() < 0.0)
        throw ArgumentError("gaussian_mixture: weights must be nonnegative");
    if (std::abs(weights.sum() - 1.0) > 1e-12)
        throw ArgumentError("gaussian_mixture: weights must sum to 1 within 1e-12");
    const Eigen::Index d = means[0].size();
    for (size_t j = 0; j < k; ++j) {
        if (means[j].size() != d || covariances[j].rows() != d ||
            covariances[j].cols() != d)
            throw ArgumentError("gaussian_mixture: inconsistent dimensions");
        Eigen::LLT<Matrix> llt(covariances[j]);
        if (llt.info() != Eigen::Success)
            throw ArgumentError("gaussian_mixture: covariance " +
                                std::to_string(j) + " is not SPD");
    }
    return Measure(GaussianMixture{std::move(weights), std::move(means),
                                   std::move(covariances)});
}

Measure Measure::uniform_sphere(int d) {
    if (d < 1) throw ArgumentError("uniform_sphere: d must be >= 1");
    return Measure(UniformSphere{d});
}

Measure Measure::empirical(Matrix points, Vector weights) {
    if (points.rows() == 0 || points.rows() != weights.size())
        throw ArgumentError("empirical: points/weights mismatch");
    if (!weights.allFinite())
        throw ArgumentError("empirical: weights must be finite");
    return Measure(EmpiricalMeasure{std::move(points), std::move(weights)});
}

Measure Measure::power_posterior(std::function<double(const Vector&)> loglik,
                                 std::function<double(const Vector&)> logprior,
                                 double t, int dim) {
    if (!(t >= 0.0 && t <= 1.0))
        throw ArgumentError("power_posterior: t must be in [0,1]");
    if (dim < 1) throw ArgumentError("power_posterior: dim must be >= 1");
    return Measure(PowerPosterior{std::move(loglik), std::move(logprior), t, dim});
}

int Measure::dim() const {
    return std::visit(
        [](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformBox>)
                return static_cast<int>(m.lo.size());
            else if constexpr (std::is_same_v<T, GaussianMixture>)
                return static_cast<int>(m.means[0].size());
            else if constexpr (std::is_same_v<T, UniformSphere>)
                return m.d + 1;  // ambient dimension
            else if constexpr (std::is_same_v<T, EmpiricalMeasure>)
                return static_cast<int>(m.points.cols());
            else
                return m.dim;
        },
        *v_);
}

const char* Measure::name() const {
    return std::visit(
        [](const auto& m) -> const char* {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformBox>) return "UniformBox";
            else if constexpr (std::is_same_v<T, GaussianMixture>) return "GaussianMixture";
            else if constexpr (std::is_same_v<T, UniformSphere>) return "UniformSphere";
            else if constexpr (std::is_same_v<T, EmpiricalMeasure>) return "Empirical";
            else return "PowerPosterior";
        },
        *v_);
}

namespace {

double log_gaussian(const Vector& x, const Vector& mean, const Matrix& cov) {
    const Eigen::Index d = x.size();
    Eigen::LLT<Matrix> llt(cov);
    const Vector diff = x - mean;
    const Vector half = llt.matrixL().solve(diff);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        logdet += std::log(llt.matrixL()(i, i));
    return -0.5 * d * std::log(2.0 * M_PI) - logdet - 0.5 * half.squaredNorm();
}

}  // namespace

double Measure::log_density(const Vector& x) const {
    if (x.size() != dim())
        throw ArgumentError("log_density: point has dimension " +
                            std::to_string(x.size()) + ", measure has " +
                            std::to_string(dim()));
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformBox>) {
                double logvol = 0.0;
                for (Eigen::Index i = 0; i < m.lo.size(); ++i) {
                    if (x[i] < m.lo[i] || x[i] > m.hi[i])
                        return -std::numeric_limits<double>::infinity();
                    logvol += std::log(m.hi[i] - m.lo[i]);
                }
                return -logvol;
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double best = -std::numeric_limits<double>::infinity();
                std::vector<double> terms(m.means.size());
                for (size_t j = 0; j < m.means.size(); ++j) {
                    terms[j] = m.weights[static_cast<Eigen::Index>(j)] <= 0.0
                                   ? -std::numeric_limits<double>::infinity()
                                   : std::log(m.weights[static_cast<Eigen::Index>(j)]) +
                                         log_gaussian(x, m.means[j], m.covariances[j]);
                    best = std::max(best, terms[j]);
                }
                if (!std::isfinite(best)) return best;
                double s = 0.0;
                for (double t : terms) s += std::exp(t - best);
                return best + std::log(s);
            } else if constexpr (std::is_same_v<T, UniformSphere>) {
                if (std::abs(x.norm() - 1.0) > 1e-9)
                    throw ArgumentError("log_density: point not on the sphere");
                return 0.0;  // density w.r.t. the normalised spherical measure
            } else if constexpr (std::is_same_v<T, EmpiricalMeasure>) {
                throw UnsupportedOperation(
                    "log_density: atomic measures have no density");
            } else {
                return m.t * m.log_likelihood(x) + m.log_prior(x);
            }
        },
        *v_);
}

Matrix Measure::sample(int n, std::uint64_t seed) const {
    if (n < 1) throw ArgumentError("sample: n must be >= 1");
    const int d = dim();
    Rng rng(mix_seed(seed, 0x5a6d70));
    return std::visit(
        [&](const auto& m) -> Matrix {
            using T = std::decay_t<decltype(m)>;
            Matrix out(n, d);
            if constexpr (std::is_same_v<T, UniformBox>) {
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < d; ++k)
                        out(i, k) = rng.uniform(m.lo[k], m.hi[k]);
                return out;
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                std::vector<Eigen::LLT<Matrix>> llts;
                llts.reserve(m.covariances.size());
                for (const auto& c : m.covariances) llts.emplace_back(c);
                for (int i = 0; i < n; ++i) {
                    const double u = rng.uniform01();
                    size_t j = 0;
                    double acc = 0.0;
                    for (; j + 1 < m.means.size(); ++j) {
                        acc += m.weights[static_cast<Eigen::Index>(j)];
                        if (u < acc) break;
                    }
                    Vector g(d);
                    for (int k = 0; k < d; ++k) g[k] = rng.normal();
                    out.row(i) = (m.means[j] + Matrix(llts[j].matrixL()) * g).transpose();
                }
                return out;
            } else if constexpr (std::is_same_v<T, UniformSphere>) {
                for (int i = 0; i < n; ++i) {
                    Vector g(d);
                    double norm = 0.0;
                    do {
                        for (int k = 0; k < d; ++k) g[k] = rng.normal();
                        norm = g.norm();
                    } while (norm == 0.0);
                    out.row(i) = (g / norm).transpose();
                }
                return out;
            } else if constexpr (std::is_same_v<T, EmpiricalMeasure>) {
                if (m.weights.minCoeff() < 0.0)
                    throw UnsupportedOperation(
                        "sample: empirical measure with negative weights");
                const double total = m.weights.sum();
                if (!(total > 0.0))
                    throw UnsupportedOperation("sample: empirical weights sum to 0");
                for (int i = 0; i < n; ++i) {
                    const double u = rng.uniform01() * total;
                    Eigen::Index j = 0;
                    double acc = 0.0;
                    for (; j + 1 < m.weights.size(); ++j) {
                        acc += m.weights[j];
                        if (u < acc) break;
                    }
                    out.row(i) = m.points.row(j);
                }
                return out;
            } else {
                throw UnsupportedOperation(
                    "sample: PowerPosterior is not directly sampleable; use mcmc_points");
            }
        },
        *v_);
}

}  // namespace probcub
