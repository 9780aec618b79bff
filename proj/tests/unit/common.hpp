#pragma once

#include "openlab/model.hpp"

inline openlab::EnvParams p2(double f = 0.0, double lambda = 0.0) {
    openlab::EnvParams p;
    p.nu = 0.5;
    p.d0 = 0.5;
    p.d2 = 0.5;
    p.f = f;
    p.lambda = lambda;
    return p;
}
