#ifndef PROBCUB_POINT_SETS_HPP
#define PROBCUB_POINT_SETS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace probcub {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Provenance { MC, MCMC, QMC, SphericalDesign, UserSupplied };

// Ordered states {x_i}, one row per point. Construction guarantees that no
// two rows coincide within 1e-12 in sup-norm.
struct PointSet {
    Matrix points;  // n x d
    Provenance provenance = Provenance::UserSupplied;
    int qmc_order = 0;         // for QMC provenance
    int qmc_base = 0;          // for QMC provenance
    int design_t = 0;          // for SphericalDesign provenance (0 = unknown)
    std::optional<std::uint64_t> seed;
    bool dedup_reduced = false;        // dedup removed at least one draw
    double acceptance_rate = -1.0;     // MCMC only

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
    Vector row(Eigen::Index i) const { return points.row(i).transpose(); }
};

inline constexpr double kDedupTolerance = 1e-12;

// Removes rows matching an earlier row within kDedupTolerance in sup-norm.
// Keeps first occurrences and preserves order; idempotent.
Matrix dedup_points(const Matrix& pts, bool* removed_any = nullptr);

PointSet make_point_set(Matrix pts, Provenance prov,
                        std::optional<std::uint64_t> seed = std::nullopt);

class Measure;  // measures.hpp

// I.i.d. draws from a directly sampleable measure, deduplicated.
PointSet mc_points(const Measure& measure, int n, std::uint64_t seed);

// Random-walk Metropolis with isotropic Gaussian proposals of scale `step`.
// The chain has n states starting at x0; duplicates from rejected moves are
// discarded. Throws DegenerateChainError if no move was ever accepted (n >= 2).
PointSet mcmc_points(const std::function<double(const Vector&)>& log_density,
                     const Vector& x0, int n, double step, std::uint64_t seed);

// Base-2 digital net with 2^m points in [0,1)^d. order = 1 gives a Sobol-type
// net; order in {2,3} applies digit interlacing of an (order*d)-dimensional
// order-1 net. Throws CapacityError if d*order exceeds the embedded
// generating-matrix dimensions.
PointSet digital_net(int d, int m, int order = 1);

// Reads a whitespace-separated x y z file ('#' comments allowed); points must
// be unit vectors within 1e-6 and are renormalised exactly. The design
// strength t is parsed from a "sf<t>.<n>" filename when present, else taken
// from the override.
PointSet load_sphere_design(const std::string& path, int t_override = 0);

struct FillDistance {
    double value;          // grid approximation to h_X (an underestimate)
    double grid_margin;    // at most this much below the true h_X
};

// sup_x min_i |x - x_i|_2 over a regular grid on [box_lo, box_hi]; d <= 4.
FillDistance fill_distance(const PointSet& X, const Vector& box_lo,
                           const Vector& box_hi, int grid_per_dim);

// CSV export with header "x1,...,xd".
void write_points_csv(const PointSet& X, const std::string& path);

}  // namespace probcub

#endif
