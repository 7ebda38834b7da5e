#include "chankit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chankit/errors.hpp"
#include "chankit/kernels.hpp"

namespace chankit {

namespace {

void require_spread(std::span<const PathLossSample> samples) {
    if (samples.size() < 2) throw InsufficientDataError("need at least 2 path-loss samples");
    const double d = samples.front().distance;
    if (std::all_of(samples.begin(), samples.end(), [&](const auto& s) { return s.distance == d; }))
        throw InsufficientDataError("need at least two distinct distances");
}

} // namespace

CimFit make_cim(double n, double d0, double freq) {
    CimFit f;
    f.n = n;
    f.d0 = d0;
    f.freq = freq;
    f.fspl_d0 = fspl(freq, d0);
    return f;
}

FimFit make_fim(double alpha, double beta) {
    FimFit f;
    f.alpha = alpha;
    f.beta = beta;
    return f;
}

CimFit fit_cim(std::span<const PathLossSample> samples, double d0, double freq) {
    if (!(d0 > 0)) throw DomainError("fit_cim: d0 must be positive");
    for (const auto& s : samples)
        if (!(s.distance >= d0)) throw DomainError("fit_cim: sample distance below d0");
    require_spread(samples);

    CimFit fit = make_cim(0.0, d0, freq);
    std::vector<double> a, b;
    a.reserve(samples.size());
    b.reserve(samples.size());
    for (const auto& s : samples) {
        a.push_back(s.path_loss - fit.fspl_d0);
        b.push_back(10.0 * std::log10(s.distance / d0));
    }
    const double bb = kernels::dot(b, b);
    if (!(bb > 0)) throw InsufficientDataError("fit_cim: all samples at d0");
    fit.n = kernels::dot(a, b) / bb;
    double sse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = a[i] - fit.n * b[i];
        sse += r * r;
    }
    fit.sigma = std::sqrt(sse / static_cast<double>(a.size()));
    fit.n_points = samples.size();
    return fit;
}

FimFit fit_fim(std::span<const PathLossSample> samples) {
    for (const auto& s : samples)
        if (!(s.distance > 0)) throw DomainError("fit_fim: distances must be positive");
    require_spread(samples);

    const auto k = static_cast<double>(samples.size());
    std::vector<double> x, y;
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        x.push_back(10.0 * std::log10(s.distance));
        y.push_back(s.path_loss);
    }
    const double mx = kernels::sum(x) / k;
    const double my = kernels::sum(y) / k;
    for (auto& v : x) v -= mx;
    for (auto& v : y) v -= my;
    const double sxx = kernels::dot(x, x);
    if (!(sxx > 0)) throw InsufficientDataError("fit_fim: distances do not vary");

    FimFit fit;
    fit.beta = kernels::dot(x, y) / sxx;
    fit.alpha = my - fit.beta * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.beta * x[i];
        sse += r * r;
    }
    fit.sigma = std::sqrt(sse / k);
    fit.n_points = samples.size();
    return fit;
}

double predict_cim(const CimFit& fit, double d) {
    if (!(d >= fit.d0)) throw DomainError("predict_cim: distance below d0");
    return fit.fspl_d0 + 10.0 * fit.n * std::log10(d / fit.d0);
}

double predict_fim(const FimFit& fit, double d) {
    if (!(d > 0)) throw DomainError("predict_fim: distance must be positive");
    return fit.alpha + 10.0 * fit.beta * std::log10(d);
}

} // namespace chankit
