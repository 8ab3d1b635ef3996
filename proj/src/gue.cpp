#include "statewalk/gue.hpp"

#include <cmath>
#include <stdexcept>

namespace statewalk {

GUEEnsemble GUEEnsemble::make(int dim, double scale) {
    if (dim < 2) throw std::invalid_argument("GUE dimension must be >= 2");
    // scale 0 is the degenerate frozen ensemble; only negatives are rejected
    if (scale < 0.0) throw std::invalid_argument("GUE scale must be >= 0");
    return GUEEnsemble{dim, scale};
}

void sample_gue_into(const GUEEnsemble& ens, std::mt19937_64& rng, Eigen::MatrixXcd& H) {
    const int n = ens.dim;
    H.resize(n, n);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double off = ens.scale / std::sqrt(2.0);
    // fixed row-major draw order keeps results reproducible for a given seed
    for (int j = 0; j < n; ++j) {
        H(j, j) = ens.scale * normal(rng);
        for (int k = j + 1; k < n; ++k) {
            const double re = off * normal(rng);
            const double im = off * normal(rng);
            H(j, k) = std::complex<double>(re, im);
            H(k, j) = std::complex<double>(re, -im);
        }
    }
}

Eigen::MatrixXcd sample_gue(const GUEEnsemble& ens, std::mt19937_64& rng) {
    Eigen::MatrixXcd H;
    sample_gue_into(ens, rng, H);
    return H;
}

} // namespace statewalk
