// Test-only reference implementations, deliberately independent of the
// library's Newton solver: plain gradient ascent with backtracking for the
// logistic MLE, and central finite differences for score checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

struct LogisticFit {
    double alpha = 0.0;
    double beta = 0.0;
};

inline double sigmoid_ref(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline double loglik_ref(const std::vector<double>& z, const std::vector<int>& y, double a,
                         double b) {
    double ll = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double eta = a * z[i] + b;
        double lse = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += y[i] * eta - lse;
    }
    return ll;
}

// derivative-free Nelder-Mead on the 2-parameter negative log-likelihood;
// a different algorithm family from the library's Newton solver
inline LogisticFit fit_logistic_reference(const std::vector<double>& z,
                                          const std::vector<int>& y) {
    auto f = [&](double a, double b) { return -loglik_ref(z, y, a, b); };
    struct Vertex {
        double a, b, value;
    };
    std::vector<Vertex> simplex{{0.0, 0.0, f(0.0, 0.0)},
                                {1.0, 0.0, f(1.0, 0.0)},
                                {0.0, 1.0, f(0.0, 1.0)}};
    auto by_value = [](const Vertex& lhs, const Vertex& rhs) { return lhs.value < rhs.value; };
    for (int it = 0; it < 5000; ++it) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        double spread = std::max(std::fabs(simplex[2].a - simplex[0].a),
                                 std::fabs(simplex[2].b - simplex[0].b));
        if (spread < 1e-9 && simplex[2].value - simplex[0].value < 1e-12) break;

        double ca = (simplex[0].a + simplex[1].a) / 2.0;
        double cb = (simplex[0].b + simplex[1].b) / 2.0;
        Vertex& worst = simplex[2];
        Vertex reflected{ca + (ca - worst.a), cb + (cb - worst.b), 0.0};
        reflected.value = f(reflected.a, reflected.b);
        if (reflected.value < simplex[0].value) {
            Vertex expanded{ca + 2.0 * (ca - worst.a), cb + 2.0 * (cb - worst.b), 0.0};
            expanded.value = f(expanded.a, expanded.b);
            worst = expanded.value < reflected.value ? expanded : reflected;
        } else if (reflected.value < simplex[1].value) {
            worst = reflected;
        } else {
            Vertex contracted{ca + 0.5 * (worst.a - ca), cb + 0.5 * (worst.b - cb), 0.0};
            contracted.value = f(contracted.a, contracted.b);
            if (contracted.value < worst.value) {
                worst = contracted;
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[static_cast<std::size_t>(i)].a =
                        simplex[0].a + 0.5 * (simplex[static_cast<std::size_t>(i)].a - simplex[0].a);
                    simplex[static_cast<std::size_t>(i)].b =
                        simplex[0].b + 0.5 * (simplex[static_cast<std::size_t>(i)].b - simplex[0].b);
                    simplex[static_cast<std::size_t>(i)].value =
                        f(simplex[static_cast<std::size_t>(i)].a,
                          simplex[static_cast<std::size_t>(i)].b);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return {simplex[0].a, simplex[0].b};
}

// central finite-difference gradient of f at x
inline std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double orig = x[i];
        x[i] = orig + h;
        double up = f(x);
        x[i] = orig - h;
        double down = f(x);
        x[i] = orig;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

}  // namespace oracle
