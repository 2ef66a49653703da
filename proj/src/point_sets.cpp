#include "probcub/point_sets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "probcub/errors.hpp"
#include "probcub/measures.hpp"
#include "probcub/rng.hpp"
#include "probcub/sobol_directions.hpp"

namespace probcub {

Matrix dedup_points(const Matrix& pts, bool* removed_any) {
    const Eigen::Index n = pts.rows();
    std::vector<Eigen::Index> keep;
    keep.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        bool dup = false;
        for (Eigen::Index j : keep) {
            if ((pts.row(i) - pts.row(j)).cwiseAbs().maxCoeff() <= kDedupTolerance) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    if (removed_any) *removed_any = keep.size() != static_cast<size_t>(n);
    Matrix out(static_cast<Eigen::Index>(keep.size()), pts.cols());
    for (size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = pts.row(keep[r]);
    return out;
}

PointSet make_point_set(Matrix pts, Provenance prov,
                        std::optional<std::uint64_t> seed) {
    PointSet ps;
    bool removed = false;
    ps.points = dedup_points(pts, &removed);
    ps.dedup_reduced = removed;
    ps.provenance = prov;
    ps.seed = seed;
    return ps;
}

PointSet mc_points(const Measure& measure, int n, std::uint64_t seed) {
    if (n < 1) throw ArgumentError("mc_points: n must be >= 1");
    PointSet ps = make_point_set(measure.sample(n, seed), Provenance::MC, seed);
    return ps;
}

PointSet mcmc_points(const std::function<double(const Vector&)>& log_density,
                     const Vector& x0, int n, double step, std::uint64_t seed) {
    if (n < 1) throw ArgumentError("mcmc_points: n must be >= 1");
    if (!(step > 0)) throw ArgumentError("mcmc_points: step must be > 0");
    const double lp0 = log_density(x0);
    if (!std::isfinite(lp0))
        throw ArgumentError("mcmc_points: log_density not finite at x0");

    Rng rng(mix_seed(seed, 0x6d636d63));
    const Eigen::Index d = x0.size();
    Matrix chain(n, d);
    chain.row(0) = x0.transpose();
    Vector cur = x0;
    double lp_cur = lp0;
    long accepted = 0;
    for (int i = 1; i < n; ++i) {
        Vector prop = cur;
        for (Eigen::Index k = 0; k < d; ++k) prop[k] += step * rng.normal();
        const double lp_prop = log_density(prop);
        const double u = rng.uniform01();
        if (std::isfinite(lp_prop) && std::log(std::max(u, 1e-300)) < lp_prop - lp_cur) {
            cur = prop;
            lp_cur = lp_prop;
            ++accepted;
        }
        chain.row(i) = cur.transpose();
    }
    if (n >= 2 && accepted == 0)
        throw DegenerateChainError("mcmc_points: no proposal accepted over " +
                                   std::to_string(n - 1) + " transitions");
    PointSet ps = make_point_set(std::move(chain), Provenance::MCMC, seed);
    ps.acceptance_rate = n >= 2 ? static_cast<double>(accepted) / (n - 1) : 1.0;
    return ps;
}

namespace {

// First 2^m Sobol points of a net column, Gray-code order, as 32-bit integers.
void sobol_integers(int d, int m, std::vector<std::vector<std::uint32_t>>& x) {
    const std::uint32_t n = m == 0 ? 1u : (1u << m);
    x.assign(n, std::vector<std::uint32_t>(d, 0u));
    std::vector<std::uint32_t> state(d, 0u);
    for (std::uint32_t i = 1; i < n; ++i) {
        unsigned c = 0;
        std::uint32_t v = i - 1;  // Antonov-Saleev: lowest zero bit of i-1
        while (v & 1u) { v >>= 1; ++c; }
        for (int j = 0; j < d; ++j) state[j] ^= detail::kSobolDirections[j][c];
        for (int j = 0; j < d; ++j) x[i][j] = state[j];
    }
}

}  // namespace

PointSet digital_net(int d, int m, int order) {
    if (d < 1) throw ArgumentError("digital_net: d must be >= 1");
    if (m < 0) throw ArgumentError("digital_net: m must be >= 0");
    if (order < 1 || order > 3)
        throw ArgumentError("digital_net: order must be in {1,2,3}");
    const long base_dims = static_cast<long>(d) * order;
    if (base_dims > detail::kSobolMaxDim)
        throw CapacityError("digital_net: d*order = " + std::to_string(base_dims) +
                            " exceeds the " + std::to_string(detail::kSobolMaxDim) +
                            " embedded generating-matrix dimensions");
    if (m > 30) throw ArgumentError("digital_net: m must be <= 30");

    std::vector<std::vector<std::uint32_t>> xi;
    sobol_integers(static_cast<int>(base_dims), m, xi);
    const std::uint32_t n = m == 0 ? 1u : (1u << m);
    Matrix pts(n, d);
    if (order == 1) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j)
                pts(i, j) = static_cast<double>(xi[i][j]) * 0x1.0p-32;
    } else {
        // Digit interlacing: output digit r of dimension j comes from digit
        // ceil(r/order) of base component order*j + ((r-1) mod order).
        const int out_bits = std::min(52, order * detail::kSobolBits);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) {
                double val = 0.0;
                for (int r = 1; r <= out_bits; ++r) {
                    const int comp = order * j + (r - 1) % order;
                    const int digit = (r - 1) / order;  // 0-based digit index
                    const std::uint32_t bit =
                        (xi[i][comp] >> (detail::kSobolBits - 1 - digit)) & 1u;
                    if (bit) val += std::ldexp(1.0, -r);
                }
                pts(i, j) = val;
            }
        }
    }
    PointSet ps = make_point_set(std::move(pts), Provenance::QMC);
    ps.qmc_order = order;
    ps.qmc_base = 2;
    return ps;
}

PointSet load_sphere_design(const std::string& path, int t_override) {
    std::ifstream in(path);
    if (!in) throw FileError("load_sphere_design: cannot open " + path);
    std::vector<Vector> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z))
            throw ParseError("load_sphere_design: expected 3 coordinates", lineno);
        std::string rest;
        if (ls >> rest)
            throw ParseError("load_sphere_design: trailing tokens", lineno);
        Vector p(3);
        p << x, y, z;
        const double norm = p.norm();
        if (std::abs(norm - 1.0) > 1e-6)
            throw ValidationError("load_sphere_design: point on line " +
                                  std::to_string(lineno) + " has norm " +
                                  std::to_string(norm));
        rows.push_back(p / norm);
    }
    if (rows.empty()) throw ValidationError("load_sphere_design: no points in " + path);
    Matrix pts(static_cast<Eigen::Index>(rows.size()), 3);
    for (size_t i = 0; i < rows.size(); ++i)
        pts.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    PointSet ps = make_point_set(std::move(pts), Provenance::SphericalDesign);

    int t = t_override;
    if (t == 0) {
        // Womersley convention: sf<t>.<n>
        const auto base_pos = path.find_last_of("/\\");
        std::string base = base_pos == std::string::npos ? path : path.substr(base_pos + 1);
        if (base.rfind("sf", 0) == 0) {
            size_t i = 2, start = 2;
            while (i < base.size() && std::isdigit(static_cast<unsigned char>(base[i]))) ++i;
            if (i > start) t = std::stoi(base.substr(start, i - start));
        }
    }
    ps.design_t = t;
    return ps;
}

FillDistance fill_distance(const PointSet& X, const Vector& box_lo,
                           const Vector& box_hi, int grid_per_dim) {
    const Eigen::Index d = box_lo.size();
    if (d != box_hi.size() || d != X.dim())
        throw ArgumentError("fill_distance: dimension mismatch");
    if (d > 4) throw UnsupportedOperation("fill_distance: d > 4 not supported");
    if (grid_per_dim < 8) throw ArgumentError("fill_distance: grid_per_dim must be >= 8");
    if (X.size() == 0) throw ArgumentError("fill_distance: empty point set");

    double diag2 = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double h = (box_hi[k] - box_lo[k]) / (grid_per_dim - 1);
        diag2 += h * h;
    }
    long total = 1;
    for (Eigen::Index k = 0; k < d; ++k) total *= grid_per_dim;

    double worst = 0.0;
    Vector g(d);
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (Eigen::Index k = 0; k < d; ++k) {
            const long j = rem % grid_per_dim;
            rem /= grid_per_dim;
            g[k] = box_lo[k] + (box_hi[k] - box_lo[k]) * j / (grid_per_dim - 1);
        }
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < X.size(); ++i)
            best = std::min(best, (X.points.row(i).transpose() - g).norm());
        worst = std::max(worst, best);
    }
    return {worst, std::sqrt(diag2)};
}

void write_points_csv(const PointSet& X, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileError("write_points_csv: cannot open " + path);
    for (Eigen::Index k = 0; k < X.dim(); ++k)
        out << (k ? "," : "") << "x" << (k + 1);
    out << "\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < X.size(); ++i) {
        for (Eigen::Index k = 0; k < X.dim(); ++k)
            out << (k ? "," : "") << X.points(i, k);
        out << "\n";
    }
}

}  // namespace probcub
