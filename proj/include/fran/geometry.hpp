#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fran/rng.hpp"

namespace fran::geometry {

/// A planar position stored in polar form about the window center, which is
/// where the desired user sits. Range queries against the center need only
/// the radius.
struct Point {
    double radius = 0.0;  // m
    double angle = 0.0;   // rad

    double x() const noexcept { return radius * std::cos(angle); }
    double y() const noexcept { return radius * std::sin(angle); }

    static Point from_cartesian(double x, double y) noexcept { return {std::hypot(x, y), std::atan2(y, x)}; }

    bool operator==(const Point&) const = default;
};

inline double distance(const Point& a, const Point& b) noexcept {
    if (a.radius == 0.0) return b.radius;
    if (b.radius == 0.0) return a.radius;
    return std::hypot(a.x() - b.x(), a.y() - b.y());
}

/// Finite realization of a homogeneous PPP on the disc of radius
/// window_radius centered at the origin.
class PointField {
public:
    PointField() = default;
    /// Throws DomainError if any point lies outside the window.
    PointField(double window_radius, double density, std::vector<Point> points = {});

    std::span<const Point> points() const noexcept { return points_; }
    const Point& operator[](std::size_t i) const noexcept { return points_[i]; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    double window_radius() const noexcept { return window_radius_; }
    /// Generative intensity (points / m^2), kept for audit.
    double density() const noexcept { return density_; }

    bool operator==(const PointField&) const = default;

private:
    double window_radius_ = 0.0;
    double density_ = 0.0;
    std::vector<Point> points_;
};

/// Appends `count` points uniform on the annulus r_inner <= r <= r_outer.
void append_uniform_annulus(std::vector<Point>& out, std::size_t count, double r_inner, double r_outer,
                            CounterRng& rng);

/// Poisson(lambda * pi * (r_outer^2 - r_inner^2)) draw.
std::size_t poisson_count(double lambda, double r_inner, double r_outer, CounterRng& rng);

/// Appends Poisson(lambda * area) points uniform on the annulus
/// r_inner <= r <= r_outer to `out`.
void append_ppp_annulus(std::vector<Point>& out, double lambda, double r_inner, double r_outer,
                        CounterRng& rng);

PointField sample_ppp_disc(double lambda, double r_sim, CounterRng& rng);

/// Independent p-marking: first field keeps each point with probability p.
std::pair<PointField, PointField> thin_field(const PointField& field, double p, CounterRng& rng);

struct Nearest {
    std::size_t index;
    Point point;
    double distance;
};

/// Ties go to the lowest index.
std::optional<Nearest> nearest_point(const PointField& field, const Point& origin = {});

/// exp(-lambda pi l^2): probability a PPP leaves a disc of radius l empty.
double void_probability(double lambda, double l);

}  // namespace fran::geometry
