#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "torsion/geometry.hpp"

namespace torsion {

/// c * prod_i x_i^{powers[i]}
struct Monomial
{
    double coefficient = 0.0;
    std::vector<int> powers;
};

/// Sum of monomials in n variables with a symbolic Laplacian.
class Polynomial
{
  public:
    Polynomial() = default;
    Polynomial(int dimension, std::vector<Monomial> terms);

    int dimension() const { return dimension_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    int degree() const;

    double operator()(std::span<const double> x) const;
    Polynomial laplacian() const;
    /// Substitutes x = shift + y, returning the polynomial in y.
    Polynomial translated(std::span<const double> shift) const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(double factor) const;
    /// True when every merged coefficient vanishes.
    bool is_zero() const;
    /// Upper bound of |p| over a box, from |c| prod max|x_i|^k.
    double abs_bound(const Box& box) const;

  private:
    void normalize();
    int dimension_ = 0;
    std::vector<Monomial> terms_;
};

/**
 * Test function for the Hermite-Hadamard inequality: subharmonic by
 * construction, so every kind carries a Laplacian certificate.
 *
 *   affine              g . x + c                    Laplacian 0
 *   quadratic           alpha |x - a|^2 + g . x + c  Laplacian 2 n alpha, alpha >= 0
 *   harmonic_polynomial polynomial with Laplacian identically zero
 *   shifted_norm        |x - a|                      Laplacian (n - 1) / |x - a|
 *   combination         sum w_k f_k, w_k >= 0
 */
class SubharmonicFn
{
  public:
    enum class Kind { Affine, Quadratic, HarmonicPolynomial, ShiftedNorm, Combination };

    static SubharmonicFn constant(int dimension, double value);
    static SubharmonicFn affine(Point gradient, double constant);
    static SubharmonicFn quadratic(double alpha, Point anchor, Point gradient, double constant);
    /// Throws std::invalid_argument unless the symbolic Laplacian vanishes.
    static SubharmonicFn harmonic_polynomial(Polynomial p);
    static SubharmonicFn shifted_norm(Point anchor);
    static SubharmonicFn combination(std::vector<std::pair<double, SubharmonicFn>> terms);

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    double value(std::span<const double> x) const;
    double laplacian(std::span<const double> x) const;
    /// Polynomial form for every kind except shifted_norm (and combinations using it).
    std::optional<Polynomial> as_polynomial() const;

    /// Anchor of a shifted norm; empty for the other kinds.
    const Point& anchor() const { return anchor_; }
    const std::vector<std::pair<double, SubharmonicFn>>& parts() const { return parts_; }

    nlohmann::json to_json() const;

  private:
    SubharmonicFn() = default;

    Kind kind_ = Kind::Affine;
    int dimension_ = 0;
    Polynomial poly_; // affine, quadratic and harmonic kinds
    double alpha_ = 0.0;
    Point anchor_;
    Point gradient_;
    double constant_ = 0.0;
    std::vector<std::pair<double, SubharmonicFn>> parts_;
};

/// JSON form: {"kind": "constant" | "affine" | "quadratic" | "harmonic_poly" |
/// "shifted_norm" | "combination", ...}; see README for the fields.
SubharmonicFn function_from_json(const nlohmann::json& doc);

struct CertificateReport
{
    bool ok = false;
    std::string reason;
    std::optional<Point> witness;
    double min_laplacian = 0.0;      // over the probe points
    double min_boundary_value = 0.0; // over the sampled boundary
    std::int64_t boundary_samples = 0;
    double tolerance = 1e-9;
};

/// Rejected certificate; carries the offending point.
class CertificateError : public std::invalid_argument
{
  public:
    CertificateError(const std::string& what, Point witness)
        : std::invalid_argument(what), witness_(std::move(witness))
    {
    }
    const Point& witness() const { return witness_; }

  private:
    Point witness_;
};

/**
 * Checks that f is subharmonic on the body (structurally, plus the Laplacian
 * at `probes` interior points) and that min f over `boundary_samples` sampled
 * boundary points is at least -tolerance.
 */
CertificateReport certify(const ConvexBody& body, const SubharmonicFn& f,
                          std::int64_t boundary_samples = 4096, std::int64_t probes = 256,
                          std::uint64_t seed = 0, double tolerance = 1e-9);

} // namespace torsion
