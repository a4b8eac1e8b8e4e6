#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "shape_data.hpp"

namespace torsion {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kMaxCombinations = 5e6;

double binomial(int m, int k)
{
    if (k < 0 || k > m)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (m - k + i) / i;
    return r;
}

// Calls fn on every k-subset of {0..m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn)
{
    if (k > m || k <= 0)
        return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

Eigen::VectorXd to_eigen(const Point& p)
{
    return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

Point to_point(const Eigen::VectorXd& v)
{
    return Point(v.data(), v.data() + v.size());
}

// Orthonormal basis of the complement of unit vector `a` (columns).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& a)
{
    const Eigen::Index d = a.size();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return q.rightCols(d - 1);
}

struct FacetSystem
{
    bool empty = false;
    bool duplicate = false;
    Eigen::MatrixXd basis;
    Eigen::VectorXd origin;
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    double height = 0.0; // signed distance of the hyperplane from the origin
};

// Restricts {a y <= b} to the hyperplane of row i, in facet coordinates.
FacetSystem restrict_to_facet(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::Index i,
                              double tol)
{
    FacetSystem f;
    const Eigen::Index m = a.rows();
    const double norm = a.row(i).norm();
    const Eigen::VectorXd unit = a.row(i).transpose() / norm;
    f.height = b(i) / norm;
    f.origin = f.height * unit;
    f.basis = complement_basis(unit);

    std::vector<Eigen::Index> kept;
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (Eigen::Index j = 0; j < m; ++j) {
        if (j == i)
            continue;
        const Eigen::VectorXd aj = a.row(j).transpose();
        const double nj = aj.norm();
        const double slack = b(j) - aj.dot(f.origin);
        const Eigen::VectorXd local = f.basis.transpose() * aj;
        if (local.norm() <= tol * std::max(1.0, nj)) {
            // Parallel constraint: constant on the facet.
            if (slack < -tol) {
                f.empty = true;
                return f;
            }
            if (j < i && aj.dot(unit) > 0.0 && std::abs(slack) <= tol) {
                f.duplicate = true;
                return f;
            }
            continue;
        }
        rows.push_back(local);
        rhs.push_back(slack);
    }
    const Eigen::Index d = a.cols() - 1;
    f.a.resize(static_cast<Eigen::Index>(rows.size()), d);
    f.b.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        f.a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        f.b(static_cast<Eigen::Index>(r)) = rhs[r];
    }
    return f;
}

std::vector<Point> enumerate_vertices(const std::vector<HalfSpace>& hs, int n, double tol)
{
    const int m = static_cast<int>(hs.size());
    if (binomial(m, n) > kMaxCombinations)
        throw std::invalid_argument("polytope has too many constraints for vertex enumeration");
    std::vector<Point> vertices;
    for_each_subset(m, n, [&](const std::vector<int>& idx) {
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd c(n);
        for (int r = 0; r < n; ++r) {
            a.row(r) = to_eigen(hs[idx[r]].normal).transpose();
            c(r) = hs[idx[r]].offset;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-10);
        if (lu.rank() < n)
            return;
        const Eigen::VectorXd x = lu.solve(c);
        for (const auto& h : hs)
            if (to_eigen(h.normal).dot(x) > h.offset + tol)
                return;
        for (const auto& v : vertices)
            if ((to_eigen(v) - x).norm() <= tol)
                return;
        vertices.push_back(to_point(x));
    });
    return vertices;
}

// A nonzero recession direction exists iff the normals do not positively span R^n.
bool is_bounded(const std::vector<HalfSpace>& hs, int n, double tol)
{
    const int m = static_cast<int>(hs.size());
    if (m < n + 1)
        return false;
    Eigen::MatrixXd all(m, n);
    for (int i = 0; i < m; ++i)
        all.row(i) = to_eigen(hs[i].normal).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> full(all);
    full.setThreshold(1e-10);
    if (full.rank() < n)
        return false;
    if (binomial(m, n - 1) > kMaxCombinations)
        throw std::invalid_argument("polytope has too many constraints for boundedness check");
    bool bounded = true;
    for_each_subset(m, n - 1, [&](const std::vector<int>& idx) {
        if (!bounded)
            return;
        Eigen::MatrixXd a(n - 1, n);
        for (int r = 0; r < n - 1; ++r)
            a.row(r) = all.row(idx[r]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-10);
        if (lu.rank() < n - 1)
            return;
        Eigen::VectorXd d = lu.kernel().col(0);
        d.normalize();
        for (double sign : {1.0, -1.0}) {
            const Eigen::VectorXd ad = sign * (all * d);
            if (ad.maxCoeff() <= tol) {
                bounded = false;
                return;
            }
        }
    });
    return bounded;
}

} // namespace

double lasserre_volume(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol)
{
    const Eigen::Index d = a.cols();
    if (d == 1) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < a.rows(); ++j) {
            const double aj = a(j, 0);
            if (aj > tol)
                hi = std::min(hi, b(j) / aj);
            else if (aj < -tol)
                lo = std::max(lo, b(j) / aj);
            else if (b(j) < -tol)
                return 0.0;
        }
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("unbounded section in volume recursion");
        return std::max(0.0, hi - lo);
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double norm = a.row(i).norm();
        if (norm <= tol) {
            if (b(i) < -tol)
                return 0.0;
            continue;
        }
        const FacetSystem f = restrict_to_facet(a, b, i, tol);
        if (f.empty || f.duplicate || f.height == 0.0)
            continue;
        total += f.height * lasserre_volume(f.a, f.b, tol);
    }
    return std::max(0.0, total / static_cast<double>(d));
}

std::pair<Point, double> chebyshev_ball(const std::vector<HalfSpace>& hs, int n, double tol)
{
    // maximize r subject to a_i . x + r <= c_i (unit a_i); optimum sits at a vertex.
    const int m = static_cast<int>(hs.size());
    if (binomial(m, n + 1) > kMaxCombinations)
        throw std::invalid_argument("polytope has too many constraints for inscribed ball");
    Point best_center;
    double best_radius = -std::numeric_limits<double>::infinity();
    for_each_subset(m, n + 1, [&](const std::vector<int>& idx) {
        Eigen::MatrixXd a(n + 1, n + 1);
        Eigen::VectorXd c(n + 1);
        for (int r = 0; r <= n; ++r) {
            a.row(r).head(n) = to_eigen(hs[idx[r]].normal).transpose();
            a(r, n) = 1.0;
            c(r) = hs[idx[r]].offset;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-10);
        if (lu.rank() < n + 1)
            return;
        const Eigen::VectorXd z = lu.solve(c);
        const double r = z(n);
        if (r <= best_radius)
            return;
        const Eigen::VectorXd x = z.head(n);
        for (const auto& h : hs)
            if (to_eigen(h.normal).dot(x) + r > h.offset + tol)
                return;
        best_radius = r;
        best_center = to_point(x);
    });
    if (best_center.empty())
        throw std::invalid_argument("polytope has no inscribed ball");
    return {best_center, best_radius};
}

Polytope Polytope::create(int n, std::vector<HalfSpace> hs, bool require_bounded)
{
    if (n < 2)
        throw std::invalid_argument("dimension must be >= 2");
    if (hs.empty())
        throw std::invalid_argument("polytope needs at least one half-space");
    double scale = 1.0;
    for (const auto& h : hs) {
        if (static_cast<int>(h.normal.size()) != n)
            throw std::invalid_argument("half-space normal has wrong dimension");
        double norm2 = 0.0;
        for (double v : h.normal) {
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite half-space normal");
            norm2 += v * v;
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > kUnitTolerance)
            throw std::invalid_argument("half-space normals must be unit vectors");
        if (!std::isfinite(h.offset))
            throw std::invalid_argument("non-finite half-space offset");
        scale = std::max(scale, std::abs(h.offset));
    }

    auto data = std::make_shared<Data>();
    data->dimension = n;
    data->half_spaces = std::move(hs);
    data->boundary_faces = data->half_spaces.size();
    data->tolerance = 1e-10 * scale;
    const double tol = data->tolerance;

    data->bounded = is_bounded(data->half_spaces, n, tol);
    if (!data->bounded) {
        if (require_bounded)
            throw std::invalid_argument("polytope is unbounded");
        Polytope p;
        p.data_ = std::move(data);
        return p;
    }

    data->vertices = enumerate_vertices(data->half_spaces, n, tol);
    if (data->vertices.size() < static_cast<std::size_t>(n + 1))
        throw std::invalid_argument("polytope is empty or has empty interior");
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (const auto& v : data->vertices)
        centroid += to_eigen(v);
    centroid /= static_cast<double>(data->vertices.size());
    for (const auto& h : data->half_spaces)
        if (h.offset - to_eigen(h.normal).dot(centroid) <= 1e3 * tol)
            throw std::invalid_argument("polytope has empty interior");

    data->bbox.lower.assign(n, std::numeric_limits<double>::infinity());
    data->bbox.upper.assign(n, -std::numeric_limits<double>::infinity());
    for (const auto& v : data->vertices)
        for (int k = 0; k < n; ++k) {
            data->bbox.lower[k] = std::min(data->bbox.lower[k], v[k]);
            data->bbox.upper[k] = std::max(data->bbox.upper[k], v[k]);
        }
    for (std::size_t i = 0; i < data->vertices.size(); ++i)
        for (std::size_t j = i + 1; j < data->vertices.size(); ++j)
            data->diameter = std::max(
                data->diameter, (to_eigen(data->vertices[i]) - to_eigen(data->vertices[j])).norm());

    auto [center, radius] = chebyshev_ball(data->half_spaces, n, tol);
    data->center = std::move(center);
    data->inradius = radius;

    const auto m = static_cast<Eigen::Index>(data->half_spaces.size());
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        a.row(i) = to_eigen(data->half_spaces[i].normal).transpose();
        b(i) = data->half_spaces[i].offset;
    }
    double volume = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const FacetSystem f = restrict_to_facet(a, b, i, tol);
        if (f.empty || f.duplicate)
            continue;
        const double area = lasserre_volume(f.a, f.b, tol);
        volume += f.height * area;
        if (static_cast<std::size_t>(i) >= data->boundary_faces || area <= 0.0)
            continue;
        Data::Facet facet;
        facet.index = static_cast<std::size_t>(i);
        facet.basis = f.basis;
        facet.origin = f.origin;
        facet.local_a = f.a;
        facet.local_b = f.b;
        facet.area = area;
        facet.lower = Eigen::VectorXd::Constant(n - 1, std::numeric_limits<double>::infinity());
        facet.upper = Eigen::VectorXd::Constant(n - 1, -std::numeric_limits<double>::infinity());
        for (const auto& v : data->vertices) {
            const Eigen::VectorXd x = to_eigen(v);
            if (std::abs(a.row(i).dot(x) - b(i)) > 1e3 * tol)
                continue;
            const Eigen::VectorXd y = f.basis.transpose() * (x - f.origin);
            facet.lower = facet.lower.cwiseMin(y);
            facet.upper = facet.upper.cwiseMax(y);
        }
        data->facets.push_back(std::move(facet));
    }
    data->volume = volume / n;
    for (const auto& f : data->facets) {
        data->surface_area += f.area;
        data->cumulative_area.push_back(data->surface_area);
    }

    Polytope p;
    p.data_ = std::move(data);
    return p;
}

Polytope Polytope::clipped(const Box& clip) const
{
    const int n = dimension();
    std::vector<HalfSpace> hs = half_spaces();
    const std::size_t original = hs.size();
    for (int k = 0; k < n; ++k) {
        Point e(n, 0.0);
        e[k] = 1.0;
        hs.push_back({e, clip.upper[k]});
        e[k] = -1.0;
        hs.push_back({e, -clip.lower[k]});
    }
    Polytope p = create(n, std::move(hs), true);
    // Rebuild facet list restricted to the original faces.
    auto data = std::make_shared<Data>(*p.data_);
    data->boundary_faces = original;
    std::vector<Data::Facet> kept;
    for (auto& f : data->facets)
        if (f.index < original)
            kept.push_back(std::move(f));
    data->facets = std::move(kept);
    data->cumulative_area.clear();
    data->surface_area = 0.0;
    for (const auto& f : data->facets) {
        data->surface_area += f.area;
        data->cumulative_area.push_back(data->surface_area);
    }
    p.data_ = std::move(data);
    return p;
}

int Polytope::dimension() const
{
    return data_->dimension;
}

const std::vector<HalfSpace>& Polytope::half_spaces() const
{
    return data_->half_spaces;
}

bool Polytope::bounded() const
{
    return data_->bounded;
}

} // namespace torsion
