#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holterisk {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

struct BestTracker {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    void consider(const std::vector<double>& xi, double fi) {
        if (fi < f) {
            f = fi;
            x = xi;
        }
    }
};

} // namespace

OptimizeResult gradient_descent(const Objective& obj, std::vector<double> x0, const GdConfig& cfg) {
    OptimizeResult res;
    const std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    std::vector<double> g, v(n, 0.0);
    BestTracker best;

    double f = obj(x, g);
    if (!std::isfinite(f)) {
        res.aborted = true;
        res.note = "non-finite cost at the initial point";
        res.x = std::move(x);
        res.f = f;
        return res;
    }
    best.consider(x, f);

    for (int e = 0; e < cfg.epochs; ++e) {
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = cfg.momentum * v[i] - cfg.learning_rate * g[i];
            x[i] += v[i];
        }
        f = obj(x, g);
        ++res.iterations;
        if (!std::isfinite(f)) {
            res.aborted = true;
            res.note = "non-finite cost during gradient descent";
            break;
        }
        best.consider(x, f);
    }

    res.x = std::move(best.x);
    res.f = best.f;
    return res;
}

OptimizeResult bfgs(const Objective& obj, std::vector<double> x0, const BfgsConfig& cfg) {
    OptimizeResult res;
    const std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    std::vector<double> g;
    BestTracker best;

    double f = obj(x, g);
    if (!std::isfinite(f)) {
        res.aborted = true;
        res.note = "non-finite cost at the initial point";
        res.x = std::move(x);
        res.f = f;
        return res;
    }
    best.consider(x, f);

    // Dense inverse-Hessian approximation, row-major.
    std::vector<double> h(n * n, 0.0);
    auto reset_h = [&] {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
    };
    reset_h();
    bool h_is_identity = true;

    std::vector<double> d(n), xt(n), gt, s(n), yv(n), hy(n);
    for (int it = 0; it < cfg.max_iterations; ++it) {
        if (inf_norm(g) <= cfg.grad_tol) {
            res.note = "gradient tolerance reached";
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = h.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
            d[i] = -acc;
        }
        double gd = dot(g, d);
        if (!(gd < 0.0)) { // not a descent direction; fall back to steepest descent
            reset_h();
            h_is_identity = true;
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            gd = dot(g, d);
            if (!(gd < 0.0)) {
                res.note = "zero gradient direction";
                break;
            }
        }

        double t = 1.0;
        double ft = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < cfg.max_line_search_steps; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + t * d[i];
            ft = obj(xt, gt);
            if (std::isfinite(ft) && ft <= f + cfg.armijo_c * t * gd) {
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }
        ++res.iterations;
        if (!accepted) {
            if (!h_is_identity) {
                reset_h();
                h_is_identity = true;
                continue; // retry along steepest descent
            }
            res.note = "line search failed";
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xt[i] - x[i];
            yv[i] = gt[i] - g[i];
        }
        x = xt;
        f = ft;
        g = gt;
        best.consider(x, f);

        const double sy = dot(s, yv);
        const double s_norm = std::sqrt(dot(s, s));
        const double y_norm = std::sqrt(dot(yv, yv));
        if (sy > 1e-12 * s_norm * y_norm && std::isfinite(sy)) {
            // H <- (I - s y^T / sy) H (I - y s^T / sy) + s s^T / sy
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                const double* row = h.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) acc += row[j] * yv[j];
                hy[i] = acc;
            }
            const double yhy = dot(yv, hy);
            const double a = (sy + yhy) / (sy * sy);
            for (std::size_t i = 0; i < n; ++i) {
                double* row = h.data() + i * n;
                for (std::size_t j = 0; j < n; ++j)
                    row[j] += a * s[i] * s[j] - (hy[i] * s[j] + s[i] * hy[j]) / sy;
            }
            h_is_identity = false;
        }
    }

    res.x = std::move(best.x);
    res.f = best.f;
    return res;
}

} // namespace holterisk
