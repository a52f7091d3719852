#include "ogi/optimizer.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

namespace ogi::opt {

namespace {

constexpr double kBadValue = 1e300;

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

void Bounds::check(std::size_t dim) const {
    if (lo.size() != dim || hi.size() != dim) throw std::invalid_argument("Bounds: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw std::invalid_argument("Bounds: coordinate " + std::to_string(i) + " has lo > hi or is not finite");
}

BoxTransform::BoxTransform(Bounds box) : box_(std::move(box)) {
    for (std::size_t i = 0; i < box_.lo.size(); ++i)
        if (box_.lo[i] < box_.hi[i]) free_.push_back(i);
}

std::vector<double> BoxTransform::to_free(const std::vector<double>& x) const {
    std::vector<double> z(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) {
        const std::size_t i = free_[k];
        const double lo = box_.lo[i], hi = box_.hi[i], w = hi - lo;
        const double xi = std::clamp(x[i], lo + 1e-9 * w, hi - 1e-9 * w);
        z[k] = std::log((xi - lo) / (hi - xi));
    }
    return z;
}

std::vector<double> BoxTransform::to_box(const std::vector<double>& z) const {
    std::vector<double> x(box_.lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = box_.lo[i];
    for (std::size_t k = 0; k < free_.size(); ++k) {
        const std::size_t i = free_[k];
        x[i] = box_.lo[i] + (box_.hi[i] - box_.lo[i]) * logistic(z[k]);
    }
    return x;
}

std::vector<double> BoxTransform::jacobian_diag(const std::vector<double>& z) const {
    std::vector<double> d(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) {
        const std::size_t i = free_[k];
        const double s = logistic(z[k]);
        d[k] = (box_.hi[i] - box_.lo[i]) * s * (1.0 - s);
    }
    return d;
}

namespace {

struct Context {
    const Objective* f;
    const Gradient* grad;
    const BoxTransform* tr;
    int evaluations = 0;
    std::vector<double> scratch_grad;
};

double eval_z(const gsl_vector* v, Context& c) {
    std::vector<double> z(v->size);
    for (std::size_t k = 0; k < v->size; ++k) z[k] = gsl_vector_get(v, k);
    ++c.evaluations;
    double r;
    try {
        r = (*c.f)(c.tr->to_box(z));
    } catch (const std::exception&) {
        r = kBadValue;
    }
    return std::isfinite(r) ? r : kBadValue;
}

double gsl_f(const gsl_vector* v, void* p) { return eval_z(v, *static_cast<Context*>(p)); }

void gsl_df(const gsl_vector* v, void* p, gsl_vector* g) {
    auto& c = *static_cast<Context*>(p);
    std::vector<double> z(v->size);
    for (std::size_t k = 0; k < v->size; ++k) z[k] = gsl_vector_get(v, k);
    const std::vector<double> x = c.tr->to_box(z);
    c.scratch_grad.assign(x.size(), 0.0);
    try {
        (*c.grad)(x, c.scratch_grad);
    } catch (const std::exception&) {
        c.scratch_grad.assign(x.size(), 0.0);
    }
    const std::vector<double> jd = c.tr->jacobian_diag(z);
    const auto& idx = c.tr->free_index();
    for (std::size_t k = 0; k < v->size; ++k) {
        const double gk = c.scratch_grad[idx[k]] * jd[k];
        gsl_vector_set(g, k, std::isfinite(gk) ? gk : 0.0);
    }
}

void gsl_fdf(const gsl_vector* v, void* p, double* f, gsl_vector* g) {
    *f = gsl_f(v, p);
    gsl_df(v, p, g);
}

using VecPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;

VecPtr make_vec(const std::vector<double>& z) {
    VecPtr v(gsl_vector_alloc(std::max<std::size_t>(z.size(), 1)), &gsl_vector_free);
    for (std::size_t k = 0; k < z.size(); ++k) gsl_vector_set(v.get(), k, z[k]);
    return v;
}

struct SimplexRun {
    std::vector<double> z;
    double value;
    int iterations;
    bool converged;
};

SimplexRun run_simplex(Context& ctx, std::vector<double> z, const OptimizerConfig& cfg, int budget,
                       std::vector<double>& trace) {
    const std::size_t n = z.size();
    gsl_multimin_function fn{&gsl_f, n, &ctx};
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
    SimplexRun run{z, std::numeric_limits<double>::infinity(), 0, false};
    const int start_evals = ctx.evaluations;
    const int stall_window = 50 * static_cast<int>(n);
    // Restart the simplex at its own optimum until a restart no longer helps.
    // A coordinate running into its bound never lets the simplex shrink in
    // transformed space, so each leg also stops once the value stalls.
    for (int restart = 0; restart < 8; ++restart) {
        VecPtr x = make_vec(run.z);
        VecPtr step = make_vec(std::vector<double>(n, cfg.initial_step));
        gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
        const double before = run.value;
        std::vector<double> history;
        bool out_of_budget = true;
        while (ctx.evaluations - start_evals < budget) {
            if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) {
                out_of_budget = false;
                break;
            }
            ++run.iterations;
            trace.push_back(std::min(s->fval, trace.empty() ? s->fval : trace.back()));
            history.push_back(s->fval);
            if (gsl_multimin_fminimizer_size(s.get()) < cfg.xtol) {
                out_of_budget = false;
                break;
            }
            const std::size_t h = history.size();
            if (h > static_cast<std::size_t>(stall_window) &&
                history[h - 1 - stall_window] - history[h - 1] <= cfg.ftol * (1.0 + std::abs(history[h - 1]))) {
                out_of_budget = false;
                break;
            }
        }
        if (s->fval < run.value) {
            run.value = s->fval;
            for (std::size_t k = 0; k < n; ++k) run.z[k] = gsl_vector_get(s->x, k);
        }
        if (out_of_budget) break;
        if (before - run.value <= cfg.ftol * (1.0 + std::abs(run.value))) {
            run.converged = true;
            break;
        }
    }
    return run;
}

void polish(Context& ctx, std::vector<double>& z, double& value) {
    const std::size_t n = z.size();
    gsl_multimin_function_fdf fn{&gsl_f, &gsl_df, &gsl_fdf, n, &ctx};
    std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n), &gsl_multimin_fdfminimizer_free);
    VecPtr x = make_vec(z);
    gsl_multimin_fdfminimizer_set(s.get(), &fn, x.get(), 0.01, 0.1);
    for (int it = 0; it < 200; ++it) {
        if (gsl_multimin_fdfminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_gradient(s->gradient, 1e-12) == GSL_SUCCESS) break;
    }
    if (s->f < value && std::isfinite(s->f)) {
        value = s->f;
        for (std::size_t k = 0; k < n; ++k) z[k] = gsl_vector_get(s->x, k);
    }
}

}  // namespace

OptimResult minimize(const Objective& f, const Gradient& grad, const std::vector<double>& x0, const Bounds& box,
                     const OptimizerConfig& cfg) {
    box.check(x0.size());
    if (cfg.starts < 1) throw std::invalid_argument("minimize: need at least one start");
    BoxTransform tr(box);
    Context ctx{&f, &grad, &tr, 0, {}};
    gsl_error_handler_t* old = gsl_set_error_handler_off();

    OptimResult res;
    const std::vector<double> z0 = tr.to_free(x0);
    if (z0.empty()) {
        res.x = tr.to_box(z0);
        res.value = f(res.x);
        res.evaluations = 1;
        res.converged = true;
        res.at_bound.assign(x0.size(), false);
        gsl_set_error_handler(old);
        return res;
    }

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> jit(0.0, cfg.jitter);
    const int budget = std::max(1, cfg.max_evaluations / cfg.starts);
    std::vector<double> best_z = z0;
    double best = std::numeric_limits<double>::infinity();
    bool best_conv = false;
    for (int s = 0; s < cfg.starts; ++s) {
        std::vector<double> z = z0;
        if (s > 0)
            for (double& v : z) v += jit(rng);
        std::vector<double> trace;
        const SimplexRun run = run_simplex(ctx, z, cfg, budget, trace);
        res.iterations += run.iterations;
        if (run.value < best) {
            best = run.value;
            best_z = run.z;
            best_conv = run.converged;
            res.best_start = s;
        }
        // Keep the trace monotone across starts: record the running best.
        for (double v : trace) res.trace.push_back(res.trace.empty() ? v : std::min(res.trace.back(), v));
    }
    if (cfg.polish && grad) polish(ctx, best_z, best);
    gsl_set_error_handler(old);

    res.x = tr.to_box(best_z);
    res.value = f(res.x);
    res.evaluations = ctx.evaluations + 1;
    res.converged = best_conv && std::isfinite(res.value) && res.value < kBadValue;
    res.at_bound.assign(x0.size(), false);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double w = box.hi[i] - box.lo[i];
        if (w > 0.0) res.at_bound[i] = (res.x[i] - box.lo[i]) < 1e-6 * w || (box.hi[i] - res.x[i]) < 1e-6 * w;
    }
    if (!res.trace.empty() && res.value < res.trace.back()) res.trace.push_back(res.value);
    return res;
}

}  // namespace ogi::opt
