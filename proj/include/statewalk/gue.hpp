#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace statewalk {

// Hermitian random matrices with independent Gaussian entries:
// diagonal ~ N(0, scale^2) real, off-diagonal Re and Im ~ N(0, scale^2/2).
struct GUEEnsemble {
    int dim = 2;
    double scale = 1.0;

    static GUEEnsemble make(int dim, double scale);
};

// Fresh independent draw on every call.
Eigen::MatrixXcd sample_gue(const GUEEnsemble& ens, std::mt19937_64& rng);

// Draw into a preallocated matrix (ensemble loops).
void sample_gue_into(const GUEEnsemble& ens, std::mt19937_64& rng, Eigen::MatrixXcd& H);

} // namespace statewalk
