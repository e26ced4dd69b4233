#include "fran/geometry.hpp"

#include <numbers>
#include <random>
#include <string>

#include "fran/errors.hpp"

namespace fran::geometry {

PointField::PointField(double window_radius, double density, std::vector<Point> points)
    : window_radius_(window_radius), density_(density), points_(std::move(points)) {
    if (!(window_radius > 0.0)) throw DomainError("window radius must be positive");
    if (!(density >= 0.0)) throw DomainError("density must be non-negative");
    for (const Point& p : points_) {
        if (!(p.radius >= 0.0) || p.radius > window_radius_) {
            throw DomainError("point at radius " + std::to_string(p.radius) + " lies outside the window");
        }
    }
}

std::size_t poisson_count(double lambda, double r_inner, double r_outer, CounterRng& rng) {
    if (!(lambda >= 0.0)) throw DomainError("PPP density must be non-negative");
    if (!(r_inner >= 0.0 && r_outer > r_inner)) throw DomainError("annulus needs 0 <= r_inner < r_outer");
    if (lambda == 0.0) return 0;
    const double mean = lambda * std::numbers::pi * (r_outer * r_outer - r_inner * r_inner);
    return static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
}

void append_uniform_annulus(std::vector<Point>& out, std::size_t count, double r_inner, double r_outer,
                            CounterRng& rng) {
    const double inner2 = r_inner * r_inner;
    const double span2 = r_outer * r_outer - inner2;
    out.reserve(out.size() + count);
    for (std::size_t i = 0; i < count; ++i) {
        // inverse transform of F(r) = (r^2 - r_in^2) / (r_out^2 - r_in^2)
        const double r = std::sqrt(inner2 + span2 * rng.uniform_positive());
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        out.push_back({std::min(r, r_outer), theta});
    }
}

void append_ppp_annulus(std::vector<Point>& out, double lambda, double r_inner, double r_outer,
                        CounterRng& rng) {
    append_uniform_annulus(out, poisson_count(lambda, r_inner, r_outer, rng), r_inner, r_outer, rng);
}

PointField sample_ppp_disc(double lambda, double r_sim, CounterRng& rng) {
    if (!(r_sim > 0.0)) throw DomainError("window radius must be positive");
    std::vector<Point> pts;
    append_ppp_annulus(pts, lambda, 0.0, r_sim, rng);
    return PointField(r_sim, lambda, std::move(pts));
}

std::pair<PointField, PointField> thin_field(const PointField& field, double p, CounterRng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("retention probability must lie in [0, 1]");
    std::vector<Point> kept, removed;
    for (const Point& pt : field.points()) {
        (rng.uniform() < p ? kept : removed).push_back(pt);
    }
    return {PointField(field.window_radius(), p * field.density(), std::move(kept)),
            PointField(field.window_radius(), (1.0 - p) * field.density(), std::move(removed))};
}

std::optional<Nearest> nearest_point(const PointField& field, const Point& origin) {
    if (field.empty()) return std::nullopt;
    const bool at_center = origin.radius == 0.0;
    Nearest best{0, field[0], at_center ? field[0].radius : distance(field[0], origin)};
    for (std::size_t i = 1; i < field.size(); ++i) {
        const double d = at_center ? field[i].radius : distance(field[i], origin);
        if (d < best.distance) best = {i, field[i], d};
    }
    return best;
}

double void_probability(double lambda, double l) {
    if (!(lambda >= 0.0) || !(l >= 0.0)) throw DomainError("void_probability needs lambda, l >= 0");
    return std::exp(-lambda * std::numbers::pi * l * l);
}

}  // namespace fran::geometry
