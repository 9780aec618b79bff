// numerics.hpp: small numerical helpers shared across modules

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace openlab {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

// log(1 + i u) for real u, accurate for small |u|
cplx log1p_i(double u);

// 1 - e^{-x} and helpers whose naive forms cancel for small x
double one_minus_exp(double x);            // 1 - e^{-x}
double h2(double x);                       // x - 1 + e^{-x}
double g3(double x);                       // 2x - 3 + 4e^{-x} - e^{-2x}

struct QuadResult {
    cplx value;
    double error{0.0};
};

// Adaptive Gauss-Kronrod on [a, b]. Throws QuadratureError if the estimate misses tol.
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double rel_tol = 1e-13, double abs_tol = 0.0);

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule for weight e^{-t^2}
GaussRule gauss_hermite(int n);

// Physicists' Hermite polynomial H_n(z)
double hermite(int n, double z);

// Richardson table for a sequence computed at h, h/2, h/4, ... whose error
// expands in powers h^p0, h^(p0+1), ...
struct Extrapolated {
    cplx value;
    double error{0.0};
};
Extrapolated richardson(const std::vector<cplx>& seq, int p0);

// c minimizing ||a - c b||_2
cplx align_scalar(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace openlab
