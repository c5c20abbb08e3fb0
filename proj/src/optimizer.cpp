#include "qdisc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qdisc {

namespace {

double norm2(std::span<const double> v) {
    double s = 0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

/// -atanh(xi) / (xi ln 2): d h((1 + xi)/2) / d xi divided by xi.
double entropy_slope_over_xi(double xi) {
    if (xi < 1e-8) {
        return -1 / std::numbers::ln2;
    }
    if (xi >= 1) {
        return -std::numeric_limits<double>::infinity();
    }
    return -std::atanh(xi) / (xi * std::numbers::ln2);
}

double golden_section(const std::function<double(double)> &f, double lo, double hi,
                      double *best_x) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo;
    double b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 80 && (b - a) > 1e-14; i++) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    *best_x = fc < fd ? c : d;
    return std::min(fc, fd);
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::GradientDescent:
            return "gradient_descent";
        case Method::NelderMead:
            return "nelder_mead";
        case Method::GridThenPolish:
            return "grid_then_polish";
    }
    return "unknown";
}

Method parse_method(const std::string &name) {
    if (name == "gradient_descent") {
        return Method::GradientDescent;
    }
    if (name == "nelder_mead") {
        return Method::NelderMead;
    }
    if (name == "grid_then_polish") {
        return Method::GridThenPolish;
    }
    throw Error("unknown optimizer method '" + name + "'");
}

void OptimizerConfig::validate() const {
    if (!(eta > 0)) {
        throw Error("optimizer config: eta must be positive");
    }
    if (!(fd_step > 0)) {
        throw Error("optimizer config: fd_step must be positive");
    }
    if (!(tol > 0)) {
        throw Error("optimizer config: tol must be positive");
    }
    if (max_iter < 1) {
        throw Error("optimizer config: max_iter must be at least 1");
    }
    if (restarts < 1) {
        throw Error("optimizer config: restarts must be at least 1");
    }
}

std::vector<double> finite_diff_gradient(const CostFunction &cost, std::span<const double> theta,
                                         double h) {
    if (!(h > 0)) {
        throw Error("finite_diff_gradient: step must be positive");
    }
    std::vector<double> x(theta.begin(), theta.end());
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); k++) {
        const double orig = x[k];
        x[k] = orig + h;
        const double up = cost(x);
        x[k] = orig - h;
        const double down = cost(x);
        x[k] = orig;
        g[k] = (up - down) / (2 * h);
    }
    return g;
}

Vec3 analytic_gradient_bell(const Vec3 &omega, const Vec3 &theta) {
    const double s1 = std::sin(theta[0]);
    const double c1 = std::cos(theta[0]);
    const double s2 = std::sin(theta[1]);
    const double c2 = std::cos(theta[1]);
    const double s3 = std::sin(theta[2]);
    const double c3 = std::cos(theta[2]);
    const double r = c1;
    const double y1 = s1 * c2;
    const double y2 = s1 * s2 * c3;
    const double y3 = s1 * s2 * s3;

    // d(r, y1, y2, y3) / d theta_k
    const double dp[3][4] = {
        {-s1, c1 * c2, c1 * s2 * c3, c1 * s2 * s3},
        {0, -s1 * s2, s1 * c2 * c3, s1 * c2 * s3},
        {0, 0, -s1 * s2 * s3, s1 * s2 * c3},
    };
    // Bloch direction of V|0> and its derivatives with respect to (r, y1, y2, y3).
    const Vec3 z = {2 * (y1 * y3 - r * y2), 2 * (r * y1 + y2 * y3),
                    r * r + y3 * y3 - y1 * y1 - y2 * y2};
    const double dz[3][4] = {
        {-2 * y2, 2 * y3, -2 * r, 2 * y1},
        {2 * y1, 2 * r, 2 * y3, 2 * y2},
        {2 * r, -2 * y1, -2 * y2, 2 * y3},
    };

    const double slope = entropy_slope_over_xi(bell_xi(omega, z));
    Vec3 grad{};
    for (int k = 0; k < 3; k++) {
        double g = 0;
        for (int i = 0; i < 3; i++) {
            const double weight = omega[i] * omega[i] * z[i];
            if (weight == 0) {
                continue;
            }
            double dzi = 0;
            for (int p = 0; p < 4; p++) {
                dzi += dz[i][p] * dp[k][p];
            }
            g += weight * dzi;
        }
        double val = g == 0 ? 0.0 : slope * g;
        if (std::isnan(val)) {
            val = 0;
        }
        grad[k] = std::clamp(val, -kGradientClamp, kGradientClamp);
    }
    return grad;
}

OptimizationResult gradient_descent(const CostFunction &cost, const GradientFunction &grad,
                                    std::span<const double> theta0, const OptimizerConfig &cfg,
                                    bool record_trace) {
    cfg.validate();
    OptimizationResult res;
    std::vector<double> theta(theta0.begin(), theta0.end());
    double value = cost(theta);
    double eta = cfg.eta;
    int halvings = 0;
    if (record_trace) {
        res.trace.push_back({0, value});
    }

    std::vector<double> trial(theta.size());
    int it = 0;
    for (; it < cfg.max_iter; it++) {
        const auto g = grad(theta);
        res.final_size = norm2(g);
        const bool clamped = std::any_of(g.begin(), g.end(), [](double x) {
            return std::abs(x) >= kGradientClamp;
        });

        double trial_value;
        if (clamped) {
            // Steepness saturated: search the descent ray directly.
            const double gn = res.final_size;
            auto along = [&](double s) {
                for (std::size_t k = 0; k < theta.size(); k++) {
                    trial[k] = theta[k] - s * g[k] / gn;
                }
                return cost(trial);
            };
            double s = 0;
            trial_value = golden_section(along, 0, 0.5, &s);
            along(s);
        } else {
            for (std::size_t k = 0; k < theta.size(); k++) {
                trial[k] = theta[k] - eta * g[k];
            }
            trial_value = cost(trial);
        }

        if (trial_value <= value) {
            const double change = value - trial_value;
            theta = trial;
            value = trial_value;
            halvings = 0;
            if (record_trace) {
                res.trace.push_back({it + 1, value});
            }
            if (change < cfg.tol) {
                res.converged = true;
                it++;
                break;
            }
        } else {
            if (++halvings > 20) {
                break;
            }
            eta *= 0.5;
        }
    }
    res.iterations = it;
    res.best_params = theta;
    res.best_value = value;
    return res;
}

OptimizationResult nelder_mead(const CostFunction &cost, std::span<const double> theta0,
                               const OptimizerConfig &cfg, double initial_step,
                               bool record_trace) {
    cfg.validate();
    const std::size_t n = theta0.size();
    if (n == 0) {
        throw Error("nelder_mead: empty parameter vector");
    }
    std::vector<std::vector<double>> pts(n + 1, std::vector<double>(theta0.begin(), theta0.end()));
    for (std::size_t k = 0; k < n; k++) {
        pts[k + 1][k] += initial_step;
    }
    std::vector<double> vals(n + 1);
    for (std::size_t k = 0; k <= n; k++) {
        vals[k] = cost(pts[k]);
    }

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t k = 0; k <= n; k++) {
            order[k] = k;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t k = 0; k <= n; k++) {
            p2[k] = std::move(pts[order[k]]);
            v2[k] = vals[order[k]];
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    auto diameter = [&] {
        double d = 0;
        for (std::size_t a = 0; a <= n; a++) {
            for (std::size_t b = a + 1; b <= n; b++) {
                double s = 0;
                for (std::size_t k = 0; k < n; k++) {
                    const double diff = pts[a][k] - pts[b][k];
                    s += diff * diff;
                }
                d = std::max(d, std::sqrt(s));
            }
        }
        return d;
    };
    auto combine = [&](const std::vector<double> &c, const std::vector<double> &x, double t) {
        // c + t (x - c)
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; k++) {
            out[k] = c[k] + t * (x[k] - c[k]);
        }
        return out;
    };

    OptimizationResult res;
    sort_simplex();
    if (record_trace) {
        res.trace.push_back({0, vals[0]});
    }
    int it = 0;
    for (; it < cfg.max_iter; it++) {
        const double size = diameter();
        if (size < cfg.tol) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; k++) {
            for (std::size_t j = 0; j < n; j++) {
                centroid[j] += pts[k][j] / static_cast<double>(n);
            }
        }
        auto &worst = pts[n];
        const auto xr = combine(centroid, worst, -1.0);
        const double fr = cost(xr);
        bool do_shrink = false;
        if (fr < vals[0]) {
            auto xe = combine(centroid, worst, -2.0);
            const double fe = cost(xe);
            if (fe < fr) {
                worst = std::move(xe);
                vals[n] = fe;
            } else {
                worst = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            worst = xr;
            vals[n] = fr;
        } else if (fr < vals[n]) {
            auto xc = combine(centroid, xr, 0.5);
            const double fc = cost(xc);
            if (fc <= fr) {
                worst = std::move(xc);
                vals[n] = fc;
            } else {
                do_shrink = true;
            }
        } else {
            auto xcc = combine(centroid, worst, 0.5);
            const double fcc = cost(xcc);
            if (fcc < vals[n]) {
                worst = std::move(xcc);
                vals[n] = fcc;
            } else {
                do_shrink = true;
            }
        }
        if (do_shrink) {
            for (std::size_t k = 1; k <= n; k++) {
                pts[k] = combine(pts[0], pts[k], 0.5);
                vals[k] = cost(pts[k]);
            }
        }
        sort_simplex();
        if (record_trace) {
            res.trace.push_back({it + 1, vals[0]});
        }
    }
    res.iterations = it;
    res.final_size = diameter();
    res.best_params = pts[0];
    res.best_value = vals[0];
    return res;
}

GridOracleResult grid_oracle(const MeasurementCost &cost, int resolution) {
    if (resolution < 8) {
        throw Error("grid_oracle: resolution must be at least 8");
    }
    GridOracleResult out;
    auto direction = [](double u, double phi) -> Vec3 {
        const double s = std::sqrt(std::max(0.0, 1 - u * u));
        return {s * std::cos(phi), s * std::sin(phi), u};
    };
    double best = std::numeric_limits<double>::infinity();
    double best_u = 1;
    double best_phi = 0;
    auto visit = [&](double u, double phi) {
        const double v = cost(VonNeumannMeasurement::from_bloch_direction(direction(u, phi)));
        out.evaluations++;
        if (v < best) {
            best = v;
            best_u = u;
            best_phi = phi;
        }
    };

    const double du = 2.0 / (resolution - 1);
    const double dphi = 2 * std::numbers::pi / resolution;
    for (int i = 0; i < resolution; i++) {
        const double u = i == resolution - 1 ? 1.0 : -1.0 + du * i;
        for (int j = 0; j < resolution; j++) {
            visit(u, dphi * j);
        }
    }
    out.grid_min = best;

    double su = du;
    double sphi = dphi;
    for (int level = 0; level < 3; level++) {
        su /= 3;
        sphi /= 3;
        const double cu = best_u;
        const double cphi = best_phi;
        for (int a = -3; a <= 3; a++) {
            for (int b = -3; b <= 3; b++) {
                if (a == 0 && b == 0) {
                    continue;
                }
                visit(std::clamp(cu + a * su, -1.0, 1.0), cphi + b * sphi);
            }
        }
    }
    out.min_value = best;
    out.direction = direction(best_u, best_phi);
    out.argmin = VonNeumannMeasurement::from_bloch_direction(out.direction);
    return out;
}

OptimizationResult multi_start(const InnerOptimizer &inner, const CostFunction &cost,
                               const OptimizerConfig &cfg) {
    cfg.validate();
    std::vector<Vec3> starts;
    for (int axis = 0; axis < 3; axis++) {
        for (double sign : {1.0, -1.0}) {
            Vec3 d{};
            d[axis] = sign;
            starts.push_back(VonNeumannMeasurement::from_bloch_direction(d).angles());
        }
    }
    UniformSource rng(cfg.seed);
    for (int k = 0; k < cfg.restarts; k++) {
        const double a = std::numbers::pi * rng.next();
        const double b = std::numbers::pi * rng.next();
        const double c = 2 * std::numbers::pi * rng.next();
        starts.push_back({a, b, c});
    }

    OptimizationResult best;
    int total_iterations = 0;
    bool have = false;
    for (const auto &s : starts) {
        auto r = inner(cost, s);
        total_iterations += r.iterations;
        if (!have || r.best_value < best.best_value) {
            best = std::move(r);
            have = true;
        }
    }
    best.iterations = total_iterations;
    best.restarts = static_cast<int>(starts.size());
    return best;
}

OptimizationResult minimize_measurement(const MeasurementCost &cost, const OptimizerConfig &cfg,
                                        const std::optional<Vec3> &bell_omega) {
    cfg.validate();
    const CostFunction angle_cost = [&cost](std::span<const double> t) {
        return cost(VonNeumannMeasurement::from_angles({t[0], t[1], t[2]}));
    };

    switch (cfg.method) {
        case Method::NelderMead:
            return multi_start(
                [&cfg](const CostFunction &f, std::span<const double> x0) {
                    return nelder_mead(f, x0, cfg);
                },
                angle_cost, cfg);
        case Method::GradientDescent: {
            GradientFunction grad;
            if (bell_omega) {
                grad = [omega = *bell_omega](std::span<const double> t) {
                    const auto g = analytic_gradient_bell(omega, {t[0], t[1], t[2]});
                    return std::vector<double>(g.begin(), g.end());
                };
            } else {
                grad = [&angle_cost, h = cfg.fd_step](std::span<const double> t) {
                    return finite_diff_gradient(angle_cost, t, h);
                };
            }
            return multi_start(
                [&cfg, &grad](const CostFunction &f, std::span<const double> x0) {
                    return gradient_descent(f, grad, x0, cfg);
                },
                angle_cost, cfg);
        }
        case Method::GridThenPolish: {
            const auto coarse = grid_oracle(cost, 24);
            const auto start = coarse.argmin.angles();
            auto res = nelder_mead(angle_cost, start, cfg);
            res.restarts = 1;
            if (coarse.min_value < res.best_value) {
                res.best_params = {start[0], start[1], start[2]};
                res.best_value = angle_cost(res.best_params);
            }
            return res;
        }
    }
    throw Error("minimize_measurement: unknown method");
}

}  // namespace qdisc
