#pragma once

#include <span>

#include "chankit/metrics.hpp"

namespace chankit {

// Close-in free-space reference model: PL(d) = FSPL(f, d0) + 10 n log10(d/d0).
struct CimFit {
    double n = 2.0;
    double sigma = 0.0; // dB
    double d0 = 1.0;    // m
    double fspl_d0 = 0.0;
    double freq = 28e9; // Hz
    std::size_t n_points = 0;
};

// Floating-intercept model: PL(d) = alpha + 10 beta log10(d).
struct FimFit {
    double alpha = 0.0; // dB
    double beta = 2.0;
    double sigma = 0.0; // dB
    std::size_t n_points = 0;
};

CimFit make_cim(double n, double d0 = 1.0, double freq = 28e9);
FimFit make_fim(double alpha, double beta);

// Least-squares PLE through the anchored intercept. Shadowing sigma is the
// RMS residual with divisor K.
CimFit fit_cim(std::span<const PathLossSample> samples, double d0 = 1.0, double freq = 28e9);

// Ordinary least squares of PL on 10 log10(d).
FimFit fit_fim(std::span<const PathLossSample> samples);

double predict_cim(const CimFit& fit, double d);
double predict_fim(const FimFit& fit, double d);

} // namespace chankit
