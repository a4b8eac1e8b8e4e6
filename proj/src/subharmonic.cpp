#include "torsion/subharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace torsion {

namespace {

void require_dimension(int n)
{
    if (n < 2)
        throw std::invalid_argument("function dimension must be >= 2");
}

void require_finite(std::span<const double> v, const char* what)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(what) + " must be finite");
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

Polynomial affine_polynomial(std::span<const double> gradient, double constant)
{
    const int n = static_cast<int>(gradient.size());
    std::vector<Monomial> terms;
    terms.push_back({constant, std::vector<int>(n, 0)});
    for (int i = 0; i < n; ++i) {
        Monomial m{gradient[i], std::vector<int>(n, 0)};
        m.powers[i] = 1;
        terms.push_back(std::move(m));
    }
    return Polynomial(n, std::move(terms));
}

std::vector<double> read_vector(const nlohmann::json& doc, const char* key)
{
    if (!doc.contains(key))
        throw std::invalid_argument(std::string("missing field '") + key + "'");
    return doc.at(key).get<std::vector<double>>();
}

} // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(int dimension, std::vector<Monomial> terms)
    : dimension_(dimension), terms_(std::move(terms))
{
    require_dimension(dimension);
    for (const Monomial& m : terms_) {
        if (static_cast<int>(m.powers.size()) != dimension)
            throw std::invalid_argument("monomial has the wrong number of exponents");
        if (!std::isfinite(m.coefficient))
            throw std::invalid_argument("monomial coefficient must be finite");
        for (int p : m.powers)
            if (p < 0)
                throw std::invalid_argument("monomial exponents must be >= 0");
    }
    normalize();
}

void Polynomial::normalize()
{
    std::map<std::vector<int>, double> merged;
    for (const Monomial& m : terms_)
        merged[m.powers] += m.coefficient;
    terms_.clear();
    for (auto& [powers, c] : merged)
        if (c != 0.0)
            terms_.push_back({c, powers});
}

int Polynomial::degree() const
{
    int d = 0;
    for (const Monomial& m : terms_) {
        int sum = 0;
        for (int p : m.powers)
            sum += p;
        d = std::max(d, sum);
    }
    return d;
}

double Polynomial::operator()(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != dimension_)
        throw std::invalid_argument("point dimension does not match the polynomial");
    double sum = 0.0;
    for (const Monomial& m : terms_) {
        double t = m.coefficient;
        for (int i = 0; i < dimension_; ++i)
            for (int k = 0; k < m.powers[i]; ++k)
                t *= x[i];
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::laplacian() const
{
    std::vector<Monomial> out;
    for (const Monomial& m : terms_)
        for (int i = 0; i < dimension_; ++i) {
            const int p = m.powers[i];
            if (p < 2)
                continue;
            Monomial d = m;
            d.coefficient *= p * (p - 1);
            d.powers[i] -= 2;
            out.push_back(std::move(d));
        }
    Polynomial result;
    result.dimension_ = dimension_;
    result.terms_ = std::move(out);
    result.normalize();
    return result;
}

Polynomial Polynomial::translated(std::span<const double> shift) const
{
    if (static_cast<int>(shift.size()) != dimension_)
        throw std::invalid_argument("shift dimension does not match the polynomial");
    std::vector<Monomial> out;
    for (const Monomial& m : terms_) {
        std::vector<Monomial> partial{{m.coefficient, std::vector<int>(dimension_, 0)}};
        for (int i = 0; i < dimension_; ++i) {
            const int p = m.powers[i];
            if (p == 0)
                continue;
            std::vector<Monomial> next;
            for (const Monomial& q : partial)
                for (int k = 0; k <= p; ++k) {
                    Monomial r = q;
                    r.coefficient *= binomial(p, k) * std::pow(shift[i], p - k);
                    r.powers[i] = k;
                    next.push_back(std::move(r));
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    Polynomial result;
    result.dimension_ = dimension_;
    result.terms_ = std::move(out);
    result.normalize();
    return result;
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    if (dimension_ != other.dimension_)
        throw std::invalid_argument("polynomial dimensions differ");
    Polynomial result = *this;
    result.terms_.insert(result.terms_.end(), other.terms_.begin(), other.terms_.end());
    result.normalize();
    return result;
}

Polynomial Polynomial::operator*(double factor) const
{
    Polynomial result = *this;
    for (Monomial& m : result.terms_)
        m.coefficient *= factor;
    result.normalize();
    return result;
}

bool Polynomial::is_zero() const
{
    return terms_.empty();
}

double Polynomial::abs_bound(const Box& box) const
{
    double sum = 0.0;
    for (const Monomial& m : terms_) {
        double t = std::abs(m.coefficient);
        for (int i = 0; i < dimension_; ++i)
            t *= std::pow(std::max(std::abs(box.lower[i]), std::abs(box.upper[i])), m.powers[i]);
        sum += t;
    }
    return sum;
}

// ------------------------------------------------------------- SubharmonicFn

SubharmonicFn SubharmonicFn::constant(int dimension, double value)
{
    require_dimension(dimension);
    return affine(Point(dimension, 0.0), value);
}

SubharmonicFn SubharmonicFn::affine(Point gradient, double constant)
{
    require_dimension(static_cast<int>(gradient.size()));
    require_finite(gradient, "gradient");
    if (!std::isfinite(constant))
        throw std::invalid_argument("constant must be finite");
    SubharmonicFn f;
    f.kind_ = Kind::Affine;
    f.dimension_ = static_cast<int>(gradient.size());
    f.poly_ = affine_polynomial(gradient, constant);
    f.gradient_ = std::move(gradient);
    f.constant_ = constant;
    return f;
}

SubharmonicFn SubharmonicFn::quadratic(double alpha, Point anchor, Point gradient, double constant)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("quadratic coefficient must be finite and >= 0");
    if (anchor.size() != gradient.size())
        throw std::invalid_argument("anchor and gradient dimensions differ");
    require_finite(anchor, "anchor");
    SubharmonicFn f = affine(std::move(gradient), constant);
    f.kind_ = Kind::Quadratic;
    f.alpha_ = alpha;
    const int n = f.dimension_;
    std::vector<Monomial> square;
    for (int i = 0; i < n; ++i) {
        Monomial m{alpha, std::vector<int>(n, 0)};
        m.powers[i] = 2;
        square.push_back(std::move(m));
    }
    const Point minus = [&] {
        Point p(anchor);
        for (double& v : p)
            v = -v;
        return p;
    }();
    f.poly_ = f.poly_ + Polynomial(n, std::move(square)).translated(minus);
    f.anchor_ = std::move(anchor);
    return f;
}

SubharmonicFn SubharmonicFn::harmonic_polynomial(Polynomial p)
{
    require_dimension(p.dimension());
    if (!p.laplacian().is_zero())
        throw std::invalid_argument("polynomial is not harmonic");
    SubharmonicFn f;
    f.kind_ = Kind::HarmonicPolynomial;
    f.dimension_ = p.dimension();
    f.poly_ = std::move(p);
    return f;
}

SubharmonicFn SubharmonicFn::shifted_norm(Point anchor)
{
    require_dimension(static_cast<int>(anchor.size()));
    require_finite(anchor, "anchor");
    SubharmonicFn f;
    f.kind_ = Kind::ShiftedNorm;
    f.dimension_ = static_cast<int>(anchor.size());
    f.anchor_ = std::move(anchor);
    return f;
}

SubharmonicFn SubharmonicFn::combination(std::vector<std::pair<double, SubharmonicFn>> terms)
{
    if (terms.empty())
        throw std::invalid_argument("combination needs at least one term");
    const int n = terms.front().second.dimension();
    for (const auto& [w, g] : terms) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("combination weights must be finite and >= 0");
        if (g.dimension() != n)
            throw std::invalid_argument("combination terms have different dimensions");
    }
    SubharmonicFn f;
    f.kind_ = Kind::Combination;
    f.dimension_ = n;
    f.parts_ = std::move(terms);
    return f;
}

double SubharmonicFn::value(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != dimension_)
        throw std::invalid_argument("point dimension does not match the function");
    switch (kind_) {
    case Kind::ShiftedNorm: {
        double s = 0.0;
        for (int i = 0; i < dimension_; ++i)
            s += (x[i] - anchor_[i]) * (x[i] - anchor_[i]);
        return std::sqrt(s);
    }
    case Kind::Combination: {
        double s = 0.0;
        for (const auto& [w, g] : parts_)
            s += w * g.value(x);
        return s;
    }
    default:
        return poly_(x);
    }
}

double SubharmonicFn::laplacian(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != dimension_)
        throw std::invalid_argument("point dimension does not match the function");
    switch (kind_) {
    case Kind::Affine:
    case Kind::HarmonicPolynomial:
        return 0.0;
    case Kind::Quadratic:
        return 2.0 * dimension_ * alpha_;
    case Kind::ShiftedNorm: {
        const double r = value(x);
        return r > 0.0 ? (dimension_ - 1) / r : std::numeric_limits<double>::infinity();
    }
    case Kind::Combination: {
        double s = 0.0;
        for (const auto& [w, g] : parts_)
            s += w * g.laplacian(x);
        return s;
    }
    }
    return 0.0;
}

std::optional<Polynomial> SubharmonicFn::as_polynomial() const
{
    if (kind_ == Kind::ShiftedNorm)
        return std::nullopt;
    if (kind_ != Kind::Combination)
        return poly_;
    Polynomial sum(dimension_, {});
    for (const auto& [w, g] : parts_) {
        auto p = g.as_polynomial();
        if (!p)
            return std::nullopt;
        sum = sum + (*p) * w;
    }
    return sum;
}

nlohmann::json SubharmonicFn::to_json() const
{
    using nlohmann::json;
    switch (kind_) {
    case Kind::Affine:
        return {{"kind", "affine"}, {"gradient", gradient_}, {"constant", constant_}};
    case Kind::Quadratic:
        return {{"kind", "quadratic"}, {"alpha", alpha_}, {"anchor", anchor_},
                {"gradient", gradient_}, {"constant", constant_}};
    case Kind::HarmonicPolynomial: {
        json terms = json::array();
        for (const Monomial& m : poly_.terms())
            terms.push_back({{"coefficient", m.coefficient}, {"powers", m.powers}});
        return {{"kind", "harmonic_poly"}, {"terms", terms}};
    }
    case Kind::ShiftedNorm:
        return {{"kind", "shifted_norm"}, {"anchor", anchor_}};
    case Kind::Combination: {
        json terms = json::array();
        for (const auto& [w, g] : parts_)
            terms.push_back({{"weight", w}, {"fn", g.to_json()}});
        return {{"kind", "combination"}, {"terms", terms}};
    }
    }
    return {};
}

SubharmonicFn function_from_json(const nlohmann::json& doc)
{
    try {
        if (!doc.is_object() || !doc.contains("kind"))
            throw std::invalid_argument("function JSON needs a 'kind' field");
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "constant")
            return SubharmonicFn::constant(doc.at("dimension").get<int>(),
                                           doc.at("value").get<double>());
        if (kind == "affine")
            return SubharmonicFn::affine(read_vector(doc, "gradient"),
                                         doc.value("constant", 0.0));
        if (kind == "quadratic") {
            const auto anchor = read_vector(doc, "anchor");
            Point gradient = doc.contains("gradient") ? read_vector(doc, "gradient")
                                                      : Point(anchor.size(), 0.0);
            return SubharmonicFn::quadratic(doc.at("alpha").get<double>(), anchor,
                                            std::move(gradient), doc.value("constant", 0.0));
        }
        if (kind == "harmonic_poly") {
            std::vector<Monomial> terms;
            int n = 0;
            for (const auto& t : doc.at("terms")) {
                Monomial m{t.at("coefficient").get<double>(), t.at("powers").get<std::vector<int>>()};
                n = static_cast<int>(m.powers.size());
                terms.push_back(std::move(m));
            }
            if (terms.empty())
                throw std::invalid_argument("harmonic_poly needs at least one term");
            return SubharmonicFn::harmonic_polynomial(Polynomial(n, std::move(terms)));
        }
        if (kind == "shifted_norm")
            return SubharmonicFn::shifted_norm(read_vector(doc, "anchor"));
        if (kind == "combination") {
            std::vector<std::pair<double, SubharmonicFn>> terms;
            for (const auto& t : doc.at("terms"))
                terms.emplace_back(t.at("weight").get<double>(), function_from_json(t.at("fn")));
            return SubharmonicFn::combination(std::move(terms));
        }
        throw std::invalid_argument("unknown function kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed function JSON: ") + e.what());
    }
}

// -------------------------------------------------------------- certificates

namespace {

// Structural part of the certificate; returns an empty string when sound.
std::string structural_problem(const ConvexBody& body, const SubharmonicFn& f)
{
    switch (f.kind()) {
    case SubharmonicFn::Kind::ShiftedNorm:
        if (body.contains(f.anchor()) || body.gap(f.anchor()) >= 0.0)
            return "shifted_norm anchor must lie outside the closed body";
        return {};
    case SubharmonicFn::Kind::Combination:
        for (const auto& part : f.parts()) {
            std::string p = structural_problem(body, part.second);
            if (!p.empty())
                return p;
        }
        return {};
    default:
        // Affine, quadratic (alpha >= 0) and harmonic kinds are checked on construction.
        return {};
    }
}

} // namespace

CertificateReport certify(const ConvexBody& body, const SubharmonicFn& f,
                          std::int64_t boundary_samples, std::int64_t probes, std::uint64_t seed,
                          double tolerance)
{
    if (f.dimension() != body.dimension())
        throw std::invalid_argument("function and body dimensions differ");
    CertificateReport rep;
    rep.tolerance = tolerance;
    rep.boundary_samples = boundary_samples;

    if (std::string problem = structural_problem(body, f); !problem.empty()) {
        rep.reason = problem;
        rep.witness = f.anchor().empty() ? body.inscribed_ball().first : f.anchor();
        return rep;
    }

    rep.min_laplacian = std::numeric_limits<double>::infinity();
    for (const Point& x : sample_interior(body, probes, seed ^ 0x1a91ull)) {
        const double lap = f.laplacian(x);
        if (lap < rep.min_laplacian) {
            rep.min_laplacian = lap;
            if (lap < 0.0)
                rep.witness = x;
        }
    }
    if (rep.min_laplacian < 0.0) {
        rep.reason = "negative Laplacian";
        return rep;
    }

    rep.min_boundary_value = std::numeric_limits<double>::infinity();
    Point worst;
    for (const BoundaryPoint& bp : sample_boundary(body, boundary_samples, seed ^ 0xb0a7ull)) {
        const double v = f.value(bp.position);
        if (v < rep.min_boundary_value) {
            rep.min_boundary_value = v;
            worst = bp.position;
        }
    }
    if (rep.min_boundary_value < -tolerance) {
        rep.reason = "negative on the boundary";
        rep.witness = worst;
        return rep;
    }
    rep.ok = true;
    return rep;
}

} // namespace torsion
