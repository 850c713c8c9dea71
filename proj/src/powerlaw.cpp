#include "ecograph/structure.hpp"

#include "ecograph/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecograph {

double hurwitz_zeta(double s, double q) {
    // Euler-Maclaurin summation with N direct terms and six Bernoulli
    // corrections; relative error well below 1e-14 for s in (1, 50].
    constexpr int direct = 12;
    constexpr double bernoulli_over_factorial[] = {
        1.0 / 12.0,           // B2 / 2!
        -1.0 / 720.0,         // B4 / 4!
        1.0 / 30240.0,        // B6 / 6!
        -1.0 / 1209600.0,     // B8 / 8!
        1.0 / 47900160.0,     // B10 / 10!
        -691.0 / 1307674368000.0,  // B12 / 12!
    };
    double sum = 0.0;
    for (int j = 0; j < direct; ++j) sum += std::pow(q + j, -s);
    const double a = q + direct;
    const double a_pow = std::pow(a, -s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // Rising factorial s (s+1) ... (s+2k-2) times a^(-s-2k+1).
    double term = s * a_pow / a;
    for (int k = 0; k < 6; ++k) {
        sum += bernoulli_over_factorial[k] * term;
        term *= (s + 2 * k + 1) * (s + 2 * k + 2) / (a * a);
    }
    return sum;
}

namespace {

struct Tail {
    std::vector<std::uint64_t> values;  // distinct positive values, ascending
    std::vector<std::size_t> at_least;  // samples >= values[j]; one extra trailing 0
};

double approx_gamma(std::size_t n, double log_sum, std::uint64_t xmin) {
    const double shifted = log_sum - static_cast<double>(n) * std::log(static_cast<double>(xmin) - 0.5);
    return 1.0 + static_cast<double>(n) / shifted;
}

// Maximizes l(gamma) = -gamma sum ln k - n ln zeta(gamma, xmin).
double mle_gamma(std::size_t n, double log_sum, std::uint64_t xmin) {
    const auto q = static_cast<double>(xmin);
    auto neg_loglik = [&](double g) { return g * log_sum + static_cast<double>(n) * std::log(hurwitz_zeta(g, q)); };
    auto [g, value] = boost::math::tools::brent_find_minima(neg_loglik, 1.0 + 1e-6, 30.0, 52);
    (void)value;
    return g;
}

// Sup distance over the integer support, stopping early once `bound` is
// exceeded.
double ks_distance(const Tail& tail, std::size_t first, double gamma, double bound) {
    const auto xmin = static_cast<double>(tail.values[first]);
    const double norm = hurwitz_zeta(gamma, xmin);
    const auto n = static_cast<double>(tail.at_least[first]);
    double d = 0.0;
    for (std::size_t j = first; j < tail.values.size() && d < bound; ++j) {
        const double k = static_cast<double>(tail.values[j]);
        // P(K >= k) and P(K > k), empirical against model.
        const double emp_ge = static_cast<double>(tail.at_least[j]) / n;
        const double emp_gt = static_cast<double>(tail.at_least[j + 1]) / n;
        const double mod_ge = j == first ? 1.0 : hurwitz_zeta(gamma, k) / norm;
        const double mod_gt = hurwitz_zeta(gamma, k + 1.0) / norm;
        d = std::max({d, std::abs(emp_ge - mod_ge), std::abs(emp_gt - mod_gt)});
    }
    return d;
}

double loglog_slope(const std::vector<std::uint64_t>& values, const std::vector<std::size_t>& counts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double x = std::log(static_cast<double>(values[j]));
        const double y = std::log(static_cast<double>(counts[j]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

} // namespace

PowerLawFit fit_power_law(std::span<const std::uint64_t> samples) {
    std::vector<std::uint64_t> positive;
    positive.reserve(samples.size());
    for (auto k : samples) {
        if (k > 0) positive.push_back(k);
    }
    std::sort(positive.begin(), positive.end());

    Tail tail;
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < positive.size();) {
        std::size_t j = i;
        while (j < positive.size() && positive[j] == positive[i]) ++j;
        tail.values.push_back(positive[i]);
        counts.push_back(j - i);
        i = j;
    }
    if (tail.values.size() <= 1) {
        throw FitError("power-law fit undefined: degree distribution has " + std::to_string(tail.values.size()) +
                           " distinct positive value(s)",
                       "a power law needs a spread of degrees; check the graph variant");
    }
    if (tail.values.size() < kMinTailDistinct) {
        throw FitError("power-law tail too small: " + std::to_string(tail.values.size()) +
                           " distinct positive degrees, need at least " + std::to_string(kMinTailDistinct),
                       "use a larger graph");
    }
    tail.at_least.assign(tail.values.size() + 1, 0);
    for (std::size_t j = tail.values.size(); j-- > 0;) tail.at_least[j] = tail.at_least[j + 1] + counts[j];
    std::vector<double> log_suffix(tail.values.size() + 1, 0.0);
    for (std::size_t j = tail.values.size(); j-- > 0;) {
        log_suffix[j] = log_suffix[j + 1] + static_cast<double>(counts[j]) * std::log(static_cast<double>(tail.values[j]));
    }

    PowerLawFit best;
    best.ks = std::numeric_limits<double>::infinity();
    const std::size_t last_candidate = tail.values.size() - kMinTailDistinct;
    for (std::size_t first = 0; first <= last_candidate; ++first) {
        const std::size_t n_tail = tail.at_least[first];
        const std::uint64_t xmin = tail.values[first];
        const double gamma = mle_gamma(n_tail, log_suffix[first], xmin);
        const double d = ks_distance(tail, first, gamma, best.ks);
        if (d < best.ks) {
            best.ks = d;
            best.gamma = gamma;
            best.xmin = xmin;
            best.n_tail = n_tail;
            best.gamma_approx = approx_gamma(n_tail, log_suffix[first], xmin);
        }
    }
    best.loglog_slope = loglog_slope(tail.values, counts);
    return best;
}

PowerLawFit fit_power_law(const DegreeDistribution& dist) { return fit_power_law(dist.samples()); }

} // namespace ecograph
