#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace statewalk {

struct Histogram {
    std::vector<double> edges; // size bins+1
    std::vector<long> counts;  // size bins
};

Histogram make_histogram(const std::vector<double>& samples, int bins = 30);

struct Moments {
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

Moments sample_moments(const std::vector<double>& samples);

struct StatsReport {
    long sample_count = 0;
    Moments moments;
    double ks_statistic = 0.0;
    double p_value = 1.0;
    Histogram histogram;
    double alpha = 0.01;
    bool degenerate = false;
    bool pass = false;
    std::string test_name;
};

// Null distribution of the KS statistic when the normal parameters are fitted
// from the sample itself; built once per sample size by simulation with a
// fixed internal seed and cached for the process lifetime.
class KsNullTable {
public:
    static const KsNullTable& for_size(int n, int table_size = 2000);

    double p_value(double d) const;
    int sample_size() const { return n_; }

private:
    KsNullTable(int n, int table_size);
    int n_;
    std::vector<double> sorted_d_;
};

// KS statistic of `samples` against a normal fitted to their mean/variance.
double ks_statistic_vs_fitted_normal(std::vector<double> samples);

// One-sample normality test (composite null, Monte Carlo p-value).
StatsReport normality_test(const std::vector<double>& samples, double alpha = 0.01);

// Two-sample KS with the asymptotic Kolmogorov p-value.
struct TwoSampleKs {
    double statistic = 0.0;
    double p_value = 1.0;
};
TwoSampleKs two_sample_ks(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_j (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

struct PairwiseKsEntry {
    int i = 0;
    int j = 0;
    double statistic = 0.0;
    double p_raw = 0.0;
    double p_adjusted = 0.0; // Bonferroni
};

struct IsotropyReport {
    std::vector<PairwiseKsEntry> pairs;
    double min_p_adjusted = 1.0;
    double max_statistic = 0.0;
    double alpha = 0.01;
    bool pass = false;
};

// Pairwise two-sample KS across the sample sets; pass when every
// Bonferroni-adjusted p exceeds alpha.
IsotropyReport isotropy_test(const std::vector<std::vector<double>>& sets, double alpha = 0.01);

struct BornCurveRow {
    int target = 0;
    double fs_distance = 0.0;       // theta(psi, phi0)
    double born_probability = 0.0;  // |<psi, phi0>|^2
    long hits = 0;
    double empirical_frequency = 0.0;
    bool zero_hits = false;
    std::optional<double> gaussian_closed_form; // exp(-|a-b|^2/4s^2) for M^sigma targets
};

struct BornCurve {
    double epsilon = 0.0;
    long n_trials = 0;
    std::vector<BornCurveRow> rows;
};

// Frequency of final states within a Fubini-Study ball of each target.
// `distances` holds theta(final_t, psi_j) for trial t and target j.
BornCurve born_rule_curve(const Eigen::MatrixXd& distances,
                          const std::vector<double>& born_probabilities, double epsilon,
                          const std::vector<std::optional<double>>& gaussian_closed_forms = {});

// Both sides of the Gaussian Born identity: |<g_b, g_a>|^2 computed from the
// overlap closed form, and exp(-|a-b|^2 / 4 sigma^2).
std::pair<double, double> born_gaussian_identity(const Eigen::VectorXd& a,
                                                 const Eigen::VectorXd& b, double sigma);

struct DiffusionFit {
    double diffusion = 0.0; // slope/2 of variance vs time through the origin
    double r_squared = 0.0;
    bool variance_monotone = true;
    std::vector<double> times;
    std::vector<double> variances;
};

// Least squares fit of Var(displacement) = 2 D t through the origin.
DiffusionFit diffusion_fit(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& displacement_samples);

} // namespace statewalk
