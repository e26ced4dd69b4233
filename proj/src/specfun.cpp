#include "fran/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fran/errors.hpp"

namespace fran::specfun {

void QuadratureSettings::validate() const {
    if (!(absolute_tolerance > 0.0) || !(relative_tolerance > 0.0) ||
        !(truncation_decay_threshold > 0.0)) {
        throw DomainError("quadrature tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) throw DomainError("quadrature needs max_subdivisions >= 1");
}

namespace {

constexpr int kMaxDepth = 60;

struct SimpsonState {
    const Integrand& f;
    std::size_t budget;
    std::size_t used = 0;
    bool exhausted = false;
};

double checked(const Integrand& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
    }
    return y;
}

// Returns the refined integral; accumulates |S2 - S1| / 15 into err.
double simpson_refine(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth, double& err) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = checked(st.f, lm);
    const double frm = checked(st.f, rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;

    const bool converged = std::abs(delta) <= 15.0 * tol;
    if (converged || depth >= kMaxDepth || st.exhausted || m <= a || b <= m) {
        if (!converged) st.exhausted = st.exhausted || depth >= kMaxDepth;
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (++st.used > st.budget) {
        st.exhausted = true;
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_refine(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, err) +
           simpson_refine(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, err);
}

QuadratureResult simpson(SimpsonState& st, double a, double b, double tol) {
    const double fa = checked(st.f, a);
    const double fb = checked(st.f, b);
    const double fm = checked(st.f, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double err = 0.0;
    const std::size_t before = st.used;
    const double value = simpson_refine(st, a, b, fa, fm, fb, whole, tol, 0, err);
    return {value, err, st.used - before};
}

double panel_tolerance(const QuadratureSettings& q, double scale) {
    return std::max(q.absolute_tolerance, q.relative_tolerance * std::abs(scale));
}

}  // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& q) {
    q.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("interval bounds must be finite");
    if (a == b) return {};
    SimpsonState st{f, q.max_subdivisions};
    // A coarse pass sets the scale for the relative tolerance.
    const double fa = checked(f, a), fb = checked(f, b), fm = checked(f, 0.5 * (a + b));
    const double coarse = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    QuadratureResult r = simpson(st, a, b, panel_tolerance(q, coarse));
    if (st.exhausted) {
        throw ConvergenceError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "]",
                               r.value, r.error_estimate);
    }
    return r;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a, const QuadratureSettings& q) {
    q.validate();
    if (!std::isfinite(a)) throw DomainError("lower limit must be finite");

    SimpsonState st{f, q.max_subdivisions};
    QuadratureResult total;
    double lo = a;
    double width = 1.0 + std::abs(a);
    // Panels are integrated to a tolerance relative to the running total; the
    // first panel uses the absolute tolerance only.
    for (int panel = 0;; ++panel) {
        const double hi = lo + width;
        if (!std::isfinite(hi) || panel > 1200) {
            throw ConvergenceError("integrand did not decay before the panel range overflowed",
                                   total.value, total.error_estimate);
        }
        const double tol = panel_tolerance(q, total.value);
        const QuadratureResult piece = simpson(st, lo, hi, tol);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.subdivisions += piece.subdivisions;
        if (st.exhausted) {
            throw ConvergenceError("semi-infinite quadrature exhausted its subdivision budget",
                                   total.value, total.error_estimate);
        }
        if (std::abs(piece.value) <= q.truncation_decay_threshold * std::abs(total.value)) break;
        lo = hi;
        width *= 2.0;
    }
    return total;
}

double exp_integral_ei(double x) {
    if (std::isnan(x) || x >= 0.0) {
        throw DomainError("exp_integral_ei requires a strictly negative argument");
    }
    const double z = -x;
    constexpr double kEps = 1e-17;
    if (z <= 5.0) {
        // Ei(x) = gamma + ln|x| + sum_{k>=1} x^k / (k k!)
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= x / k;
            const double add = term / k;
            sum += add;
            if (std::abs(add) <= kEps * std::abs(sum)) break;
        }
        return std::numbers::egamma + std::log(z) + sum;
    }
    // E1(z) by the modified Lentz evaluation of
    // e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
    constexpr double kTiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10'000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return -h * std::exp(-z);
    }
    throw ConvergenceError("continued fraction for E1 did not converge", -h * std::exp(-z), 0.0);
}

double interference_constant(double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw DomainError("interference_constant requires alpha > 2");
    }
    const double angle = 2.0 * std::numbers::pi / alpha;
    return 2.0 * std::numbers::pi / (alpha * std::sin(angle));
}

double rho(double threshold, double alpha, const QuadratureSettings& q) {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw DomainError("rho requires T > 0");
    if (!(alpha > 2.0) || !std::isfinite(alpha)) throw DomainError("rho requires alpha > 2");
    const double scale = std::pow(threshold, 2.0 / alpha);
    const double half = 0.5 * alpha;
    const auto f = [half](double v) { return 1.0 / (1.0 + std::pow(v, half)); };
    return scale * integrate_semi_infinite(f, 1.0 / scale, q).value;
}

double rho_closed_alpha4(double threshold) {
    if (!(threshold > 0.0)) throw DomainError("rho_closed_alpha4 requires T > 0");
    // pi/2 - arctan(1/x) == arctan(x) for x > 0
    const double root = std::sqrt(threshold);
    return root * std::atan(root);
}

}  // namespace fran::specfun
