// SPDX-License-Identifier: Apache-2.0

#include "krdoa/scalar_min.hpp"

#include <cmath>
#include <limits>

#include "krdoa/errors.hpp"

namespace krdoa {

namespace {

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace

ScalarMinimum minimize_bounded(const std::function<double(double)>& f, double lower, double upper,
                               double x_tolerance) {
    if (!(upper > lower)) throw DomainError("est1d", "bracket must have positive width");
    if (!(x_tolerance > 0.0)) throw DomainError("est1d", "tolerance must be positive");

    const double golden_ratio = 0.5 * (3.0 - std::sqrt(5.0));
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

    ScalarMinimum result;
    double a = lower;
    double b = upper;
    double x = a + golden_ratio * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    ++result.evaluations;
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;

    double xm = 0.5 * (a + b);
    double tol1 = sqrt_eps * std::abs(x) + x_tolerance / 3.0;
    double tol2 = 2.0 * tol1;

    while (std::abs(x - xm) > tol2 - 0.5 * (b - a)) {
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            r = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if ((u - a) < tol2 || (b - u) < tol2) d = tol1 * sign_of(xm - x);
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= xm) ? a - x : b - x;
            d = golden_ratio * e;
        }
        const double u = x + (std::abs(d) >= tol1 ? d : tol1 * sign_of(d));
        const double fu = f(u);
        ++result.evaluations;

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * std::abs(x) + x_tolerance / 3.0;
        tol2 = 2.0 * tol1;
    }

    result.x = x;
    result.value = fx;
    for (const double bound : {lower, upper}) {
        const double fb = f(bound);
        ++result.evaluations;
        if (fb < result.value) {
            result.x = bound;
            result.value = fb;
        }
    }
    return result;
}

}  // namespace krdoa
