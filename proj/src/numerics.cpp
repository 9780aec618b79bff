#include "openlab/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "openlab/errors.hpp"

namespace openlab {

cplx log1p_i(double u) { return {0.5 * std::log1p(u * u), std::atan(u)}; }

double one_minus_exp(double x) { return -std::expm1(-x); }

double h2(double x) {
    if (std::abs(x) > 0.1) return x + std::expm1(-x);
    // sum_{n>=2} (-x)^n / n!
    double term = x * x / 2.0, s = 0.0;
    for (int n = 2; n < 30 && std::abs(term) > 1e-300; ++n) {
        s += term;
        term *= -x / (n + 1);
    }
    return s;
}

double g3(double x) {
    if (std::abs(x) > 0.1) return 2.0 * x + 4.0 * std::expm1(-x) - std::expm1(-2.0 * x);
    // sum_{n>=3} (-1)^n x^n (4 - 2^n) / n!
    double s = 0.0, xn_fact = x * x * x / 6.0, two_n = 8.0;
    for (int n = 3; n < 30; ++n) {
        double term = ((n % 2) ? -1.0 : 1.0) * xn_fact * (4.0 - two_n);
        s += term;
        if (std::abs(term) < 1e-300) break;
        xn_fact *= x / (n + 1);
        two_n *= 2.0;
    }
    return s;
}

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, double rel_tol,
                     double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == b) return {cplx{0.0, 0.0}, 0.0};
    // intervals at roundoff scale: midpoint value, GK error estimates are meaningless there
    if (std::abs(b - a) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return {f(0.5 * (a + b)) * (b - a), 0.0};
    double err = 0.0, l1 = 0.0;
    cplx v = gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol, &err, &l1);
    double scale = std::max(std::abs(v), l1);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
        err > std::max(100.0 * rel_tol * scale, abs_tol))
        throw QuadratureError("adaptive quadrature on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "] did not converge, error estimate " +
                              std::to_string(err));
    return {v, err};
}

GaussRule gauss_hermite(int n) {
    // Newton iteration on the orthonormal recurrence with asymptotic starting guesses
    GaussRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.nodes[1];
        else
            z = 2.0 * z - r.nodes[i - 2];
        double pp = 0.0;
        int it = 0;
        for (; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        if (it == 100) throw NumericalError("Gauss-Hermite node iteration did not converge");
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / (pp * pp);
    }
    // ascending order
    for (int i = 0; i < n / 2; ++i) std::swap(r.nodes[i], r.nodes[n - 1 - i]);
    return r;
}

double hermite(int n, double z) {
    if (n == 0) return 1.0;
    double h0 = 1.0, h1 = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        double h2v = 2.0 * z * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2v;
    }
    return h1;
}

Extrapolated richardson(const std::vector<cplx>& seq, int p0) {
    if (seq.empty()) return {};
    std::vector<cplx> row = seq;
    cplx best = row.back();
    double err = seq.size() > 1 ? std::abs(seq.back() - seq[seq.size() - 2]) : 0.0;
    int p = p0;
    while (row.size() > 1) {
        double fac = std::pow(2.0, p);
        std::vector<cplx> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            next[i] = (fac * row[i + 1] - row[i]) / (fac - 1.0);
        double e = next.size() > 1 ? std::abs(next.back() - next[next.size() - 2])
                                   : std::abs(next.back() - row.back());
        best = next.back();
        err = e;
        row = std::move(next);
        ++p;
    }
    return {best, err};
}

cplx align_scalar(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::conj(b[i]) * a[i];
        den += std::norm(b[i]);
    }
    return den > 0 ? num / den : cplx{0.0, 0.0};
}

}  // namespace openlab
