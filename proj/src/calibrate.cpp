#include "syrup/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <json.hpp>

#include "syrup/error.hpp"
#include "syrup/json_io.hpp"
#include "syrup/sha256.hpp"

namespace syrup {

namespace {

constexpr double kLogLikTolerance = 1e-8;
constexpr int kMaxIterations = 100;
constexpr double kMaxStep = 10.0;       // per-iteration cap, keeps iterates finite
constexpr double kStepTolerance = 1e-2; // converged fits end with tiny Newton steps
constexpr double kScoreTolerance = 1e-9;
// at lambda = 0 a coefficient this large means the likelihood plateaued on a
// separating direction, not that an MLE was reached
constexpr double kDivergenceBound = 20.0;

double log1pexp(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Feature layout: [z, 1] for platt; [z, 1, u1..u3, z*u1..z*u3] for syrup.
// Column 1 is the unpenalized intercept in both.
struct Design {
    std::size_t dim;
    bool interactions;

    void features(const DesignRow& row, double* x) const {
        x[0] = row.z;
        x[1] = 1.0;
        if (!interactions) return;
        for (int i = 1; i < 4; ++i) {
            double ui = row.u.onehot[static_cast<std::size_t>(i)];
            x[2 + static_cast<std::size_t>(i - 1)] = ui;
            x[5 + static_cast<std::size_t>(i - 1)] = row.z * ui;
        }
    }
};

// Gaussian elimination with partial pivoting. Near-zero pivots (all-zero
// feature columns, e.g. constant z or an unobserved behavior category) get a
// zero step in that coordinate instead of failing.
void solve_in_place(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) pivot = r;
        if (std::fabs(a[pivot * n + col]) < 1e-12) {
            for (std::size_t r = 0; r < n; ++r) a[r * n + col] = 0.0;
            a[col * n + col] = 1.0;
            b[col] = 0.0;
            continue;
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double s = b[col];
        for (std::size_t c = col + 1; c < n; ++c) s -= a[col * n + c] * b[c];
        b[col] = s / a[col * n + col];
    }
}

class Objective {
public:
    Objective(std::span<const DesignRow> rows, const Design& design, double lambda)
        : rows_(rows), design_(design), lambda_(lambda) {}

    double value(const std::vector<double>& theta) const {
        double ll = 0.0;
        double x[8];
        for (const auto& row : rows_) {
            design_.features(row, x);
            double eta = 0.0;
            for (std::size_t i = 0; i < design_.dim; ++i) eta += theta[i] * x[i];
            ll += row.y * eta - log1pexp(eta);
        }
        return ll - lambda_ * penalty_sq(theta);
    }

    // score = gradient of the penalized log-likelihood
    void score(const std::vector<double>& theta, std::vector<double>& g) const {
        std::fill(g.begin(), g.end(), 0.0);
        double x[8];
        for (const auto& row : rows_) {
            design_.features(row, x);
            double eta = 0.0;
            for (std::size_t i = 0; i < design_.dim; ++i) eta += theta[i] * x[i];
            double resid = row.y - sigmoid(eta);
            for (std::size_t i = 0; i < design_.dim; ++i) g[i] += resid * x[i];
        }
        for (std::size_t i = 0; i < design_.dim; ++i)
            if (i != 1) g[i] -= 2.0 * lambda_ * theta[i];
    }

    // negated Hessian (positive semidefinite): X'WX + 2*lambda on penalized diag
    void neg_hessian(const std::vector<double>& theta, std::vector<double>& h) const {
        std::fill(h.begin(), h.end(), 0.0);
        std::size_t n = design_.dim;
        double x[8];
        for (const auto& row : rows_) {
            design_.features(row, x);
            double eta = 0.0;
            for (std::size_t i = 0; i < n; ++i) eta += theta[i] * x[i];
            double p = sigmoid(eta);
            double w = p * (1.0 - p);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) h[i * n + j] += w * x[i] * x[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) h[i * n + j] = h[j * n + i];
            if (i != 1) h[i * n + i] += 2.0 * lambda_;
        }
    }

private:
    double penalty_sq(const std::vector<double>& theta) const {
        double s = 0.0;
        for (std::size_t i = 0; i < design_.dim; ++i)
            if (i != 1) s += theta[i] * theta[i];
        return s;
    }

    std::span<const DesignRow> rows_;
    const Design& design_;
    double lambda_;
};

CalibratorParams params_from_theta(const std::vector<double>& theta, const Design& design,
                                   double lambda) {
    CalibratorParams p;
    p.kind = design.interactions ? CalibratorKind::syrup : CalibratorKind::platt;
    p.alpha = theta[0];
    p.beta = theta[1];
    p.ridge_lambda = lambda;
    if (design.interactions) {
        for (int i = 1; i < 4; ++i) {
            p.gamma1[static_cast<std::size_t>(i)] = theta[2 + static_cast<std::size_t>(i - 1)];
            p.gamma2[static_cast<std::size_t>(i)] = theta[5 + static_cast<std::size_t>(i - 1)];
        }
    }
    return p;
}

FitReport fit(std::span<const DesignRow> rows, const Design& design, double lambda) {
    if (lambda < 0) throw InvariantViolation("ridge_lambda", "must be >= 0");
    bool any0 = false, any1 = false;
    for (const auto& row : rows) {
        if (!std::isfinite(row.z)) throw InvariantViolation("z", "must be finite");
        if (row.y != 0 && row.y != 1) throw InvariantViolation("y", "must be 0 or 1");
        row.u.validate();
        (row.y == 0 ? any0 : any1) = true;
    }
    if (!any0 || !any1) throw DegenerateLabels("rows must contain both classes");

    Objective obj(rows, design, lambda);
    std::size_t n = design.dim;
    std::vector<double> theta(n, 0.0);
    std::vector<double> g(n), h(n * n), step(n);

    double value = obj.value(theta);
    bool converged = false;
    int iter = 0;
    while (iter < kMaxIterations) {
        ++iter;
        obj.score(theta, g);
        obj.neg_hessian(theta, h);
        std::vector<double> a = h;
        step = g;
        solve_in_place(a, step, n);

        double max_step = 0.0;
        for (double s : step) max_step = std::max(max_step, std::fabs(s));
        if (max_step > kMaxStep)
            for (double& s : step) s *= kMaxStep / max_step;

        // damped Newton: halve until the objective does not decrease
        std::vector<double> candidate(n);
        double new_value = value;
        double scale = 1.0;
        for (int half = 0; half < 30; ++half) {
            for (std::size_t i = 0; i < n; ++i) candidate[i] = theta[i] + scale * step[i];
            new_value = obj.value(candidate);
            if (std::isfinite(new_value) && new_value >= value - 1e-12) break;
            scale *= 0.5;
        }
        double step_size = 0.0;
        for (double s : step) step_size = std::max(step_size, std::fabs(scale * s));
        theta = candidate;

        double delta = std::fabs(new_value - value);
        value = new_value;
        if (delta < kLogLikTolerance && step_size < kStepTolerance) {
            // polish so the score vanishes to solver precision, not just the
            // objective change (quadratic Newton steps: a couple suffice)
            obj.score(theta, g);
            double gmax = 0.0;
            for (double v : g) gmax = std::max(gmax, std::fabs(v));
            if (gmax < kScoreTolerance) {
                converged = true;
                break;
            }
        }
    }

    if (lambda == 0.0) {
        for (double t : theta)
            if (std::fabs(t) > kDivergenceBound) converged = false;
    }

    FitReport report;
    report.params = params_from_theta(theta, design, lambda);
    report.log_likelihood = value;
    report.n_iterations = iter;
    report.converged = converged;
    return report;
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

FitReport fit_platt(std::span<const DesignRow> rows, double ridge_lambda) {
    return fit(rows, Design{2, false}, ridge_lambda);
}

FitReport fit_syrup(std::span<const DesignRow> rows, double ridge_lambda) {
    return fit(rows, Design{8, true}, ridge_lambda);
}

CalibratedEstimate predict(const CalibratorParams& params, double z, const BehaviorVector& u) {
    double eta = params.alpha * z + params.beta;
    for (std::size_t i = 0; i < 4; ++i) {
        double ui = u.onehot[i];
        eta += params.gamma1[i] * ui + z * params.gamma2[i] * ui;
    }
    double p = std::clamp(sigmoid(eta), 1e-9, 1.0 - 1e-9);
    return CalibratedEstimate{p};
}

std::string params_fingerprint(const CalibratorParams& params) {
    nlohmann::json j = params;
    return sha256_hex(j.dump()).substr(0, 16);
}

double log_likelihood(std::span<const DesignRow> rows, const CalibratorParams& params) {
    double ll = 0.0;
    for (const auto& row : rows) {
        double eta = params.alpha * row.z + params.beta;
        for (std::size_t i = 0; i < 4; ++i) {
            double ui = row.u.onehot[i];
            eta += params.gamma1[i] * ui + row.z * params.gamma2[i] * ui;
        }
        ll += row.y * eta - log1pexp(eta);
    }
    double penalty = params.alpha * params.alpha;
    for (std::size_t i = 0; i < 4; ++i)
        penalty += params.gamma1[i] * params.gamma1[i] + params.gamma2[i] * params.gamma2[i];
    return ll - params.ridge_lambda * penalty;
}

}  // namespace syrup
