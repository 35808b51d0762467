#pragma once

// Distance fields d(x) to the supported K-geometries, their derivatives,
// and the sign condition
//     (C)  (p-k)(d lap d + 1 - k) <= 0 on Omega \ K     (p != k)
//     (C') d lap d + 1 - k >= 0                          (p == k)
// evaluated pointwise on sampled domains. The Laplacian is always a
// five-point-per-axis finite difference of the exact distance; samples whose
// stencil straddles K, a ridge, or a face boundary are flagged and excluded
// from verdicts.

#include "hardylab/params.hpp"
#include "hardylab/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylab {

using Vec = std::vector<double>;

namespace geo_detail {

inline double norm(const Vec& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline double dist_segment(const Vec& x, const Vec& a, const Vec& b, double& t_out) {
    double ab2 = 0.0, apab = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = b[i] - a[i];
        ab2 += e * e;
        apab += (x[i] - a[i]) * e;
    }
    double t = std::clamp(apab / ab2, 0.0, 1.0);
    t_out = t;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = a[i] + t * (b[i] - a[i]) - x[i];
        s += f * f;
    }
    return std::sqrt(s);
}

} // namespace geo_detail

struct DistanceSample {
    Vec x;
    double d = 0.0;
    Vec grad_d;
    double laplacian_d = 0.0;
    bool on_ridge = false;          // two smallest face distances tie within 1e-9
    bool laplacian_reliable = true; // FD stencil clear of K / ridges / face edges
    bool interior_foot = true;      // faceted variants: nearest point inside a face
};

class KGeometry {
public:
    enum class Variant {
        point,             // K = {0}, k = N
        affine_plane,      // K = {last k coordinates zero}
        ball_boundary,     // K = sphere |x| = R, Omega = inside, k = 1
        polygon_boundary,  // K = convex polygon boundary in R^2, Omega = interior, k = 1
        canal_section,     // K = sphere of codim k around the section V = {|y| < R}
        polytope_in_canal, // K = edges of a polygon inscribed in the circle |y| = R, N=3, k=2
    };

    static KGeometry point(int N) {
        KGeometry g;
        g.variant_ = Variant::point;
        g.N_ = N;
        g.k_ = N;
        return g;
    }

    static KGeometry affine_plane(int N, int codim) {
        if (codim < 1 || codim >= N)
            throw std::invalid_argument("affine_plane: need 1 <= codim <= N-1");
        KGeometry g;
        g.variant_ = Variant::affine_plane;
        g.N_ = N;
        g.k_ = codim;
        return g;
    }

    static KGeometry ball_boundary(int N, double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("ball_boundary: radius > 0");
        KGeometry g;
        g.variant_ = Variant::ball_boundary;
        g.N_ = N;
        g.k_ = 1;
        g.R_ = radius;
        return g;
    }

    static KGeometry polygon_boundary(std::vector<std::array<double, 2>> vertices) {
        if (vertices.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
        // convexity by the cross-product sign test
        const std::size_t m = vertices.size();
        double sign = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = vertices[i];
            const auto& b = vertices[(i + 1) % m];
            const auto& c = vertices[(i + 2) % m];
            const double cr =
                (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if (cr == 0.0) continue;
            if (sign == 0.0)
                sign = cr;
            else if (sign * cr < 0.0)
                throw std::invalid_argument("polygon_boundary: vertex list is not convex");
        }
        if (sign == 0.0) throw std::invalid_argument("polygon_boundary: degenerate polygon");
        KGeometry g;
        g.variant_ = Variant::polygon_boundary;
        g.N_ = 2;
        g.k_ = 1;
        g.poly_ = std::move(vertices);
        return g;
    }

    // V = {|y| < R} inside E = R^{N-k+1}, K = boundary sphere of V; inner
    // canal is the cylinder over V, outer canal over E \ closure(V).
    static KGeometry canal_section(int N, int codim, double section_radius, bool outer) {
        if (codim < 2 || codim > N - 1)
            throw std::invalid_argument("canal_section: need 2 <= codim <= N-1");
        if (!(section_radius > 0.0))
            throw std::invalid_argument("canal_section: radius > 0");
        KGeometry g;
        g.variant_ = Variant::canal_section;
        g.N_ = N;
        g.k_ = codim;
        g.R_ = section_radius;
        g.outer_ = outer;
        return g;
    }

    // Regular m-gon inscribed in the circle of radius R in the x1x2-plane of
    // R^3; K is the union of its edges (codimension 2).
    static KGeometry polytope_in_canal(int m_vertices, double R) {
        if (m_vertices < 3) throw std::invalid_argument("polytope_in_canal: m >= 3");
        if (!(R > 0.0)) throw std::invalid_argument("polytope_in_canal: R > 0");
        KGeometry g;
        g.variant_ = Variant::polytope_in_canal;
        g.N_ = 3;
        g.k_ = 2;
        g.R_ = R;
        g.m_ = m_vertices;
        for (int i = 0; i < m_vertices; ++i) {
            const double th = 2.0 * M_PI * double(i) / double(m_vertices);
            g.poly_.push_back({R * std::cos(th), R * std::sin(th)});
        }
        return g;
    }

    static KGeometry from_config(const std::map<std::string, std::string>& kv);

    Variant variant() const { return variant_; }
    int dimension() const { return N_; }
    int codim() const { return k_; }
    double radius() const { return R_; }
    bool outer() const { return outer_; }

    // exact distance to K
    double distance(const Vec& x) const {
        check_dim(x);
        switch (variant_) {
            case Variant::point: return geo_detail::norm(x);
            case Variant::affine_plane: {
                double s = 0.0;
                for (int i = N_ - k_; i < N_; ++i) s += x[i] * x[i];
                return std::sqrt(s);
            }
            case Variant::ball_boundary: return std::abs(R_ - geo_detail::norm(x));
            case Variant::polygon_boundary: {
                double t;
                return min_face_distance(x, nullptr, &t).first;
            }
            case Variant::canal_section: {
                double ny = 0.0, nz = 0.0;
                split_canal(x, ny, nz);
                return std::hypot(ny - R_, nz);
            }
            case Variant::polytope_in_canal: {
                double t;
                return min_face_distance(x, nullptr, &t).first;
            }
        }
        return 0.0;
    }

    // exact unit gradient where defined (nearest-point direction)
    Vec gradient(const Vec& x) const {
        check_dim(x);
        Vec g(x.size(), 0.0);
        switch (variant_) {
            case Variant::point: {
                const double n = geo_detail::norm(x);
                for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] / n;
                return g;
            }
            case Variant::affine_plane: {
                double s = 0.0;
                for (int i = N_ - k_; i < N_; ++i) s += x[i] * x[i];
                const double n = std::sqrt(s);
                for (int i = N_ - k_; i < N_; ++i) g[i] = x[i] / n;
                return g;
            }
            case Variant::ball_boundary: {
                const double n = geo_detail::norm(x);
                const double sgn = n < R_ ? -1.0 : 1.0;
                for (std::size_t i = 0; i < x.size(); ++i) g[i] = sgn * x[i] / n;
                return g;
            }
            case Variant::canal_section: {
                double ny = 0.0, nz = 0.0;
                split_canal(x, ny, nz);
                const double u = ny - R_;
                const double d = std::hypot(u, nz);
                const int my = N_ - k_ + 1;
                for (int i = 0; i < my; ++i) g[i] = (u / d) * (x[i] / ny);
                for (int i = my; i < N_; ++i) g[i] = x[i] / d;
                return g;
            }
            case Variant::polygon_boundary:
            case Variant::polytope_in_canal: {
                int face = 0;
                double t;
                const double d = min_face_distance(x, &face, &t).first;
                const Vec foot = face_foot(x, face, t);
                for (std::size_t i = 0; i < x.size(); ++i) g[i] = (x[i] - foot[i]) / d;
                if (variant_ == Variant::polygon_boundary) // inward normal
                    for (auto& c : g) c = -c;
                return g;
            }
        }
        return g;
    }

    // Closed-form Laplacian where available (test oracle; sample() always
    // uses finite differences).
    std::optional<double> exact_laplacian(const Vec& x) const {
        switch (variant_) {
            case Variant::point: return (N_ - 1) / geo_detail::norm(x);
            case Variant::affine_plane: return (k_ - 1) / distance(x);
            case Variant::ball_boundary: {
                const double n = geo_detail::norm(x);
                return (n < R_ ? -1.0 : 1.0) * (N_ - 1) / n;
            }
            case Variant::canal_section: {
                double ny = 0.0, nz = 0.0;
                split_canal(x, ny, nz);
                const double d = std::hypot(ny - R_, nz);
                return (k_ - 1) / d + (N_ - k_) * (ny - R_) / (ny * d);
            }
            case Variant::polygon_boundary: return std::nullopt; // 0 off ridges
            case Variant::polytope_in_canal: return std::nullopt;
        }
        return std::nullopt;
    }

    // Section quantity of the cylinder decomposition:
    // d lap d + 1 - k = tilde d lap_y tilde d = (N-k)(|y| - R)/|y|.
    double canal_section_quantity(const Vec& x) const {
        if (variant_ != Variant::canal_section)
            throw std::logic_error("canal_section_quantity: wrong variant");
        double ny = 0.0, nz = 0.0;
        split_canal(x, ny, nz);
        return (N_ - k_) * (ny - R_) / ny;
    }

    DistanceSample sample(const Vec& x) const {
        check_dim(x);
        DistanceSample s;
        s.x = x;
        s.d = distance(x);
        if (s.d <= 1e-12)
            throw std::domain_error("distance_eval: sample point lies on K");
        s.grad_d = gradient(x);

        const double h = std::max(1e-5, 1e-3 * s.d);
        double gap = std::numeric_limits<double>::infinity();
        if (faceted()) {
            double t;
            auto two = min_face_distance(x, nullptr, &t, &gap);
            s.on_ridge = gap < 1e-9;
            const int face = two.second;
            const double len = face_length(face);
            s.interior_foot = std::min(t, 1.0 - t) * len > 1e-9;
            if (std::min(t, 1.0 - t) * len < 4.0 * h) s.laplacian_reliable = false;
        }
        if (gap < 8.0 * h) s.laplacian_reliable = false;
        if (s.d < 4.0 * h) s.laplacian_reliable = false;
        if (variant_ == Variant::canal_section || variant_ == Variant::ball_boundary) {
            // distance kinks on the section axis |y| = 0
            double ny = geo_detail::norm(x), nz = 0.0;
            if (variant_ == Variant::canal_section) split_canal(x, ny, nz);
            if (ny < 4.0 * h) s.laplacian_reliable = false;
        }

        // five-point centered second difference per axis
        double lap = 0.0;
        Vec y = x;
        for (int i = 0; i < N_; ++i) {
            const double xi = x[i];
            y[i] = xi - 2 * h;
            const double m2 = distance(y);
            y[i] = xi - h;
            const double m1 = distance(y);
            y[i] = xi + h;
            const double p1 = distance(y);
            y[i] = xi + 2 * h;
            const double p2 = distance(y);
            y[i] = xi;
            lap += (-m2 + 16 * m1 - 30 * s.d + 16 * p1 - p2) / (12 * h * h);
        }
        s.laplacian_d = lap;
        if (s.on_ridge) s.laplacian_reliable = false;
        return s;
    }

    bool faceted() const {
        return variant_ == Variant::polygon_boundary || variant_ == Variant::polytope_in_canal;
    }

    const std::vector<std::array<double, 2>>& polygon_vertices() const { return poly_; }

    // interior test for the convex polygon (k = 1 variant)
    bool polygon_contains(const Vec& x) const {
        if (variant_ != Variant::polygon_boundary)
            throw std::logic_error("polygon_contains: wrong variant");
        const std::size_t m = poly_.size();
        double sign = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = poly_[i];
            const auto& b = poly_[(i + 1) % m];
            const double cr = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
            if (cr == 0.0) return false;
            if (sign == 0.0)
                sign = cr;
            else if (sign * cr < 0.0)
                return false;
        }
        return true;
    }

    std::string variant_name() const {
        switch (variant_) {
            case Variant::point: return "point";
            case Variant::affine_plane: return "affine";
            case Variant::ball_boundary: return "ball";
            case Variant::polygon_boundary: return "polygon";
            case Variant::canal_section: return outer_ ? "canal-outer" : "canal-inner";
            case Variant::polytope_in_canal: return "polytope";
        }
        return "?";
    }

private:
    void check_dim(const Vec& x) const {
        if (int(x.size()) != N_)
            throw std::invalid_argument("KGeometry: point dimension mismatch");
    }

    void split_canal(const Vec& x, double& ny, double& nz) const {
        const int my = N_ - k_ + 1; // dim of E
        double sy = 0.0, sz = 0.0;
        for (int i = 0; i < my; ++i) sy += x[i] * x[i];
        for (int i = my; i < N_; ++i) sz += x[i] * x[i];
        ny = std::sqrt(sy);
        nz = std::sqrt(sz);
    }

    int face_count() const {
        return variant_ == Variant::polygon_boundary || variant_ == Variant::polytope_in_canal
                   ? int(poly_.size())
                   : 1;
    }

    double face_length(int i) const {
        const auto& a = poly_[i];
        const auto& b = poly_[(i + 1) % poly_.size()];
        return std::hypot(b[0] - a[0], b[1] - a[1]);
    }

    Vec face_foot(const Vec& x, int i, double t) const {
        const auto& a = poly_[i];
        const auto& b = poly_[(i + 1) % poly_.size()];
        Vec f(x.size(), 0.0);
        f[0] = a[0] + t * (b[0] - a[0]);
        f[1] = a[1] + t * (b[1] - a[1]);
        return f;
    }

    // (min distance, arg face); t_out = foot parameter on the min face;
    // gap_out = second_min - min over faces.
    std::pair<double, int> min_face_distance(const Vec& x, int* face_out, double* t_out,
                                             double* gap_out = nullptr) const {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        int arg = 0;
        double t_best = 0.0;
        const std::size_t m = poly_.size();
        for (std::size_t i = 0; i < m; ++i) {
            Vec a = {poly_[i][0], poly_[i][1]};
            Vec b = {poly_[(i + 1) % m][0], poly_[(i + 1) % m][1]};
            a.resize(x.size(), 0.0);
            b.resize(x.size(), 0.0);
            double t;
            const double di = geo_detail::dist_segment(x, a, b, t);
            if (di < best) {
                second = best;
                best = di;
                arg = int(i);
                t_best = t;
            } else if (di < second) {
                second = di;
            }
        }
        if (face_out) *face_out = arg;
        if (t_out) *t_out = t_best;
        if (gap_out) *gap_out = second - best;
        return {best, arg};
    }

    Variant variant_ = Variant::point;
    int N_ = 3;
    int k_ = 3;
    double R_ = 1.0;
    bool outer_ = false;
    int m_ = 0;
    std::vector<std::array<double, 2>> poly_;
};

// ---------------------------------------------------------------------------
// Domain samplers (rejection sampling in variant-specific bounding regions)

inline Vec random_direction(Rng& rng, int n) {
    Vec v(n);
    double s = 0.0;
    do {
        s = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = rng.normal();
            s += v[i] * v[i];
        }
    } while (s < 1e-12);
    s = std::sqrt(s);
    for (auto& c : v) c /= s;
    return v;
}

inline std::vector<Vec> sample_domain(const KGeometry& g, std::size_t count, Rng rng) {
    std::vector<Vec> out;
    out.reserve(count);
    const int N = g.dimension();
    while (out.size() < count) {
        Vec x;
        switch (g.variant()) {
            case KGeometry::Variant::point: {
                x = random_direction(rng, N);
                const double r = rng.uniform(0.1, 2.0);
                for (auto& c : x) c *= r;
                break;
            }
            case KGeometry::Variant::affine_plane: {
                const int k = g.codim();
                x.assign(N, 0.0);
                for (int i = 0; i < N - k; ++i) x[i] = rng.uniform(-1.0, 1.0);
                Vec dir = random_direction(rng, k);
                const double r = rng.uniform(0.1, 2.0);
                for (int i = 0; i < k; ++i) x[N - k + i] = r * dir[i];
                break;
            }
            case KGeometry::Variant::ball_boundary: {
                x = random_direction(rng, N);
                const double r = g.radius() * rng.uniform(0.1, 0.95);
                for (auto& c : x) c *= r;
                break;
            }
            case KGeometry::Variant::polygon_boundary: {
                double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
                for (const auto& v : g.polygon_vertices()) {
                    lo0 = std::min(lo0, v[0]);
                    hi0 = std::max(hi0, v[0]);
                    lo1 = std::min(lo1, v[1]);
                    hi1 = std::max(hi1, v[1]);
                }
                const double scale = std::max(hi0 - lo0, hi1 - lo1);
                x = {rng.uniform(lo0, hi0), rng.uniform(lo1, hi1)};
                if (!g.polygon_contains(x) || g.distance(x) < 0.005 * scale) continue;
                break;
            }
            case KGeometry::Variant::canal_section: {
                const int k = g.codim();
                const int my = N - k + 1;
                Vec ydir = random_direction(rng, my);
                const double R = g.radius();
                const double ry = g.outer() ? rng.uniform(1.08 * R, 2.5 * R)
                                            : rng.uniform(0.05 * R, 0.92 * R);
                x.assign(N, 0.0);
                for (int i = 0; i < my; ++i) x[i] = ry * ydir[i];
                for (int i = my; i < N; ++i) x[i] = rng.uniform(-R, R);
                break;
            }
            case KGeometry::Variant::polytope_in_canal: {
                const double R = g.radius();
                Vec ydir = random_direction(rng, 2);
                const double ry = rng.uniform(0.0, 0.97 * R);
                x = {ry * ydir[0], ry * ydir[1], rng.uniform(-R, R)};
                if (g.distance(x) < 0.02 * R) continue;
                break;
            }
        }
        if (g.distance(x) <= 1e-9) continue;
        out.push_back(std::move(x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Condition (C) / (C')

struct ConditionCReport {
    enum class Verdict { satisfied, violated, inconclusive };

    HardyParams params;
    std::string geometry;
    bool degenerate = false; // p == k: checked (C') instead of (C)
    std::vector<double> values; // checker quantity per usable sample
    Verdict verdict = Verdict::inconclusive;
    double worst_value = 0.0;
    Vec worst_point;
    double ridge_fraction = 0.0;
    double interior_foot_fraction = 1.0;
    double tolerance_slack = 1e-4;
    std::string caveat;
};

inline const char* to_string(ConditionCReport::Verdict v) {
    switch (v) {
        case ConditionCReport::Verdict::satisfied: return "satisfied";
        case ConditionCReport::Verdict::violated: return "violated";
        case ConditionCReport::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline ConditionCReport check_condition_c(const KGeometry& g, const HardyParams& params,
                                          const std::vector<Vec>& points,
                                          double tolerance_slack = 1e-4) {
    params.validate();
    if (points.empty())
        throw std::domain_error("check_condition_c: empty sample set");

    ConditionCReport rep;
    rep.params = params;
    rep.geometry = g.variant_name();
    rep.degenerate = params.degenerate();
    rep.tolerance_slack = tolerance_slack;

    std::size_t flagged = 0, interior = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& x : points) {
        auto s = g.sample(x);
        if (s.interior_foot) ++interior;
        if (s.on_ridge || !s.laplacian_reliable) {
            ++flagged;
            continue;
        }
        const double base = s.d * s.laplacian_d + 1.0 - double(params.k);
        const double q = rep.degenerate ? -base : (params.p - double(params.k)) * base;
        rep.values.push_back(q);
        if (q > worst) {
            worst = q;
            rep.worst_point = x;
        }
    }
    rep.ridge_fraction = double(flagged) / double(points.size());
    rep.interior_foot_fraction = double(interior) / double(points.size());
    rep.worst_value = rep.values.empty() ? 0.0 : worst;

    if (rep.ridge_fraction > 0.5 || rep.values.empty())
        rep.verdict = ConditionCReport::Verdict::inconclusive;
    else if (rep.worst_value <= tolerance_slack)
        rep.verdict = ConditionCReport::Verdict::satisfied;
    else
        rep.verdict = ConditionCReport::Verdict::violated;

    if (g.variant() == KGeometry::Variant::polytope_in_canal)
        rep.caveat = "interior-face realization of the distance verified on samples only "
                     "(fraction " + std::to_string(rep.interior_foot_fraction) + ")";
    return rep;
}

inline ConditionCReport check_condition_c(const KGeometry& g, const HardyParams& params,
                                          std::size_t sample_count, std::uint64_t seed,
                                          double tolerance_slack = 1e-4) {
    return check_condition_c(g, params, sample_domain(g, sample_count, Rng(seed)),
                             tolerance_slack);
}

// ---------------------------------------------------------------------------
// Declarative construction

inline KGeometry KGeometry::from_config(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    const std::string variant = get("variant", "point");
    const int N = std::stoi(get("dimension", "3"));
    if (variant == "point") return KGeometry::point(N);
    if (variant == "affine")
        return KGeometry::affine_plane(N, std::stoi(get("codimension", "1")));
    if (variant == "ball") return KGeometry::ball_boundary(N, std::stod(get("radius", "1")));
    if (variant == "polygon") {
        std::vector<std::array<double, 2>> verts;
        std::istringstream ss(get("vertices", ""));
        std::string pair;
        while (std::getline(ss, pair, ';')) {
            const auto comma = pair.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("geometry config: vertices must be 'x,y; x,y; ...'");
            verts.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
        }
        return KGeometry::polygon_boundary(std::move(verts));
    }
    if (variant == "canal-inner" || variant == "canal-outer")
        return KGeometry::canal_section(N, std::stoi(get("codimension", "2")),
                                        std::stod(get("radius", "1")),
                                        variant == "canal-outer");
    if (variant == "polytope")
        return KGeometry::polytope_in_canal(std::stoi(get("vertex_count", "6")),
                                            std::stod(get("radius", "1")));
    throw std::invalid_argument("geometry config: unknown variant '" + variant + "'");
}

} // namespace hardylab
