#pragma once

#include <random>

#include "doctest.h"
#include "xyz/battery.hpp"

namespace xyz::testing {

inline cplx draw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-0.45, 0.45), im(-0.25, 0.25);
    return {re(rng), im(rng)};
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace xyz::testing
