#include "elicit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "elicit/error.hpp"

namespace elicit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double checked(const ScalarFunction& f, double z) {
    const double v = f(z);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite function value " << v << " at z=" << z;
        throw EvaluationError(msg.str());
    }
    return v;
}

}  // namespace

Seed derive_seed(Seed master, std::uint64_t stream) {
    return Seed{splitmix64(splitmix64(master.value) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

Bracket::Bracket(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("bracket endpoints must be finite");
    }
    if (!(lo < hi)) {
        std::ostringstream msg;
        msg << "bracket requires lo < hi, got [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
}

McEstimate summarize(std::span<const double> values) {
    if (values.empty()) {
        throw PreconditionError("cannot summarize an empty sample");
    }
    // Two passes: the mean, then squared deviations from it.
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    double m2 = 0.0;
    for (double v : values) {
        m2 += (v - mean) * (v - mean);
    }
    const auto n = values.size();
    double se = 0.0;
    if (n > 1) {
        se = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return {mean, se, n};
}

double minimize1d(const ScalarFunction& f, const Bracket& bracket, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("minimize1d requires tol > 0");
    }
    constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
    constexpr double eps = 4.0 * std::numeric_limits<double>::epsilon();
    constexpr int max_iter = 500;

    double a = bracket.lo();
    double b = bracket.hi();
    double x = a + golden * (b - a);
    double w = x;
    double v = x;
    double fx = checked(f, x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = eps * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
            break;
        }
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            // parabolic fit through x, w, v
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            }
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = (x < m) ? tol1 : -tol1;
                }
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = checked(f, u);
        if (fu <= fx) {
            if (u < x) {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return x;
}

double root1d(const ScalarFunction& f, const Bracket& bracket, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("root1d requires tol > 0");
    }
    double lo = bracket.lo();
    double hi = bracket.hi();
    double flo = checked(f, lo);
    const double fhi = checked(f, hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream msg;
        msg << "root not bracketed: f(" << lo << ")=" << flo << ", f(" << hi << ")=" << fhi;
        throw BracketError(msg.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fmid = checked(f, mid);
        if (fmid == 0.0) {
            return mid;
        }
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double default_step(double z) { return 1e-6 * std::max(1.0, std::abs(z)); }

double central_diff(const ScalarFunction& f, double z, double step) {
    if (!(step > 0.0)) {
        throw DomainError("central_diff requires step > 0");
    }
    const double up = checked(f, z + step);
    const double down = checked(f, z - step);
    return (up - down) / (2.0 * step);
}

}  // namespace elicit
