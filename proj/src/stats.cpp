#include "statewalk/stats.hpp"

#include "statewalk/ensemble.hpp"
#include "statewalk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace statewalk {

namespace {
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

constexpr std::uint64_t kNullTableSeed = 0x6b73746162ULL; // fixed: p-values are run-independent
} // namespace

Histogram make_histogram(const std::vector<double>& samples, int bins) {
    if (samples.empty() || bins < 1) return {};
    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0; // degenerate data lands in the first bin

    Histogram h;
    h.edges.resize(std::size_t(bins) + 1);
    h.counts.assign(std::size_t(bins), 0);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.edges[std::size_t(b)] = lo + b * width;
    for (double x : samples) {
        int b = int((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[std::size_t(b)];
    }
    return h;
}

Moments sample_moments(const std::vector<double>& samples) {
    const auto n = double(samples.size());
    if (samples.empty()) return {};
    Moments m;
    for (double x : samples) m.mean += x;
    m.mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = samples.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

double ks_statistic_vs_fitted_normal(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("need at least two samples");
    const Moments m = sample_moments(samples);
    if (!(m.variance > 0.0)) return 1.0; // degenerate: maximal distance
    const double sd = std::sqrt(m.variance);

    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = normal_cdf((samples[i] - m.mean) / sd);
        d = std::max(d, std::abs(f - double(i) / double(n)));
        d = std::max(d, std::abs(double(i + 1) / double(n) - f));
    }
    return d;
}

KsNullTable::KsNullTable(int n, int table_size) : n_(n) {
    sorted_d_.resize(std::size_t(table_size));
    run_trials(table_size, ExecPolicy::Parallel, [&](int rep) {
        auto rng = make_engine(trial_seed(kNullTableSeed, std::uint64_t(rep)));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (auto& v : x) v = normal(rng);
        sorted_d_[std::size_t(rep)] = ks_statistic_vs_fitted_normal(std::move(x));
    });
    std::sort(sorted_d_.begin(), sorted_d_.end());
}

const KsNullTable& KsNullTable::for_size(int n, int table_size) {
    static std::map<int, KsNullTable> cache;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, KsNullTable(n, table_size)).first;
    return it->second;
}

double KsNullTable::p_value(double d) const {
    const auto it = std::lower_bound(sorted_d_.begin(), sorted_d_.end(), d);
    const auto ge = sorted_d_.end() - it;
    return double(ge + 1) / double(sorted_d_.size() + 1);
}

StatsReport normality_test(const std::vector<double>& samples, double alpha) {
    if (samples.size() < 100)
        throw std::invalid_argument("normality test needs at least 100 samples");

    StatsReport r;
    r.test_name = "ks_normality";
    r.alpha = alpha;
    r.sample_count = long(samples.size());
    r.moments = sample_moments(samples);
    r.histogram = make_histogram(samples);
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    if (!(r.moments.variance > 0.0) || *mn == *mx) {
        r.degenerate = true;
        r.ks_statistic = 1.0;
        r.p_value = 0.0;
        r.pass = false;
        return r;
    }
    r.ks_statistic = ks_statistic_vs_fitted_normal(samples);
    r.p_value = KsNullTable::for_size(int(samples.size())).p_value(r.ks_statistic);
    r.pass = r.p_value > alpha;
    return r;
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-14) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TwoSampleKs two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample set");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    TwoSampleKs r;
    r.statistic = d;
    r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

IsotropyReport isotropy_test(const std::vector<std::vector<double>>& sets, double alpha) {
    if (sets.size() < 2) throw std::invalid_argument("isotropy test needs at least 2 sets");
    for (const auto& s : sets)
        if (s.size() < 1000)
            throw std::invalid_argument("isotropy test needs at least 1000 samples per set");

    IsotropyReport rep;
    rep.alpha = alpha;
    const std::size_t n_pairs = sets.size() * (sets.size() - 1) / 2;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const TwoSampleKs ks = two_sample_ks(sets[i], sets[j]);
            PairwiseKsEntry e;
            e.i = int(i);
            e.j = int(j);
            e.statistic = ks.statistic;
            e.p_raw = ks.p_value;
            e.p_adjusted = std::min(1.0, ks.p_value * double(n_pairs));
            rep.max_statistic = std::max(rep.max_statistic, e.statistic);
            rep.min_p_adjusted = std::min(rep.min_p_adjusted, e.p_adjusted);
            rep.pairs.push_back(e);
        }
    }
    rep.pass = rep.min_p_adjusted > alpha;
    return rep;
}

BornCurve born_rule_curve(const Eigen::MatrixXd& distances,
                          const std::vector<double>& born_probabilities, double epsilon,
                          const std::vector<std::optional<double>>& gaussian_closed_forms) {
    const Eigen::Index n_trials = distances.rows();
    const Eigen::Index n_targets = distances.cols();
    if (std::size_t(n_targets) != born_probabilities.size())
        throw std::invalid_argument("one Born probability per target required");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    BornCurve curve;
    curve.epsilon = epsilon;
    curve.n_trials = long(n_trials);
    for (Eigen::Index j = 0; j < n_targets; ++j) {
        BornCurveRow row;
        row.target = int(j);
        row.born_probability = born_probabilities[std::size_t(j)];
        row.fs_distance = std::acos(std::clamp(std::sqrt(row.born_probability), 0.0, 1.0));
        for (Eigen::Index t = 0; t < n_trials; ++t)
            if (distances(t, j) <= epsilon) ++row.hits;
        row.empirical_frequency = double(row.hits) / double(n_trials);
        row.zero_hits = row.hits == 0;
        if (std::size_t(j) < gaussian_closed_forms.size())
            row.gaussian_closed_form = gaussian_closed_forms[std::size_t(j)];
        curve.rows.push_back(row);
    }
    return curve;
}

std::pair<double, double> born_gaussian_identity(const Eigen::VectorXd& a,
                                                 const Eigen::VectorXd& b, double sigma) {
    const double overlap = std::exp(-(a - b).squaredNorm() / (8.0 * sigma * sigma));
    const double direct = std::exp(-(a - b).squaredNorm() / (4.0 * sigma * sigma));
    return {overlap * overlap, direct};
}

DiffusionFit diffusion_fit(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& displacement_samples) {
    if (times.size() < 3) throw std::invalid_argument("need at least 3 time points");
    if (times.size() != displacement_samples.size())
        throw std::invalid_argument("one sample set per time point required");

    DiffusionFit fit;
    fit.times = times;
    for (const auto& s : displacement_samples) {
        // sorted accumulation: the fit does not depend on trial order, bit for bit
        std::vector<double> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        fit.variances.push_back(sorted.size() > 1 ? sample_moments(sorted).variance : 0.0);
    }

    for (std::size_t i = 1; i < fit.variances.size(); ++i)
        if (fit.variances[i] < fit.variances[i - 1]) fit.variance_monotone = false;

    double stv = 0.0, stt = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        stv += times[i] * fit.variances[i];
        stt += times[i] * times[i];
        svv += fit.variances[i] * fit.variances[i];
    }
    if (!(stt > 0.0)) throw std::invalid_argument("time points must not all be zero");
    const double slope = stv / stt;
    fit.diffusion = 0.5 * slope;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double r = fit.variances[i] - slope * times[i];
        ss_res += r * r;
    }
    fit.r_squared = svv > 0.0 ? 1.0 - ss_res / svv : 1.0;
    return fit;
}

} // namespace statewalk
