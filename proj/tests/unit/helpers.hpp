#pragma once

#include <Eigen/Core>

#include <random>

#include "ness/params.hpp"

namespace testing {

inline Eigen::VectorXd random_vector(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = nd(gen);
    return v;
}

/// Parameter set drawn from ranges where every engine is well conditioned.
inline ness::ChainParams random_params(int n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> g(0.3, 3.0), tau(-2.0, 2.0), T(0.5, 3.0);
    return ness::make_params(n, g(gen), g(gen), tau(gen), T(gen), T(gen));
}

}  // namespace testing
