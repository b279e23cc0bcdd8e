#pragma once

#include <span>
#include <string>
#include <vector>

#include "syrup/types.hpp"

namespace syrup {

/// One observation for calibrator fitting: the log-derivative, the behavior
/// one-hot, and the binary correctness label.
struct DesignRow {
    double z = 0.0;
    BehaviorVector u;
    int y = 0;
};

struct FitReport {
    CalibratorParams params;
    double log_likelihood = 0.0;
    int n_iterations = 0;
    bool converged = false;
};

/// Maximum-likelihood fit of  logit(p) = alpha*z + beta  with an optional
/// ridge penalty lambda*alpha^2 (the intercept is never penalized). Newton
/// iterations from (0,0); convergence when the log-likelihood change falls
/// below 1e-8 and the step and score are small; at most 100 iterations.
/// Throws DegenerateLabels when the rows contain a single class. On
/// non-convergence (e.g. separated data at lambda=0) the report carries
/// converged=false and the finite last iterate.
FitReport fit_platt(std::span<const DesignRow> rows, double ridge_lambda);

/// Fit of  logit(p) = alpha*z + gamma1'u + z * gamma2'u + beta  under
/// reference-cell coding (gamma1[0] = gamma2[0] = 0), so the no-suggestion
/// case reduces exactly to the plain fit. Ridge penalty
/// lambda*(alpha^2 + sum gamma1_i^2 + sum gamma2_i^2); same solver settings
/// as fit_platt.
FitReport fit_syrup(std::span<const DesignRow> rows, double ridge_lambda);

/// p = sigmoid(alpha*z + gamma1'u + z * gamma2'u + beta), clamped to
/// [1e-9, 1 - 1e-9].
CalibratedEstimate predict(const CalibratorParams& params, double z, const BehaviorVector& u);

/// Stable identity of a fitted parameter set; records scored under different
/// fingerprints must never enter the same bias comparison.
std::string params_fingerprint(const CalibratorParams& params);

double sigmoid(double x);

/// Penalized Bernoulli log-likelihood of the rows under the given params
/// (the fitting objective; equals the raw log-likelihood when lambda = 0).
double log_likelihood(std::span<const DesignRow> rows, const CalibratorParams& params);

}  // namespace syrup
