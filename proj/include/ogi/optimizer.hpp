#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ogi::opt {

using Objective = std::function<double(const std::vector<double>&)>;
/// Writes the gradient of the objective at x into grad (same length as x).
using Gradient = std::function<void(const std::vector<double>&, std::vector<double>&)>;

/// Open box lo < x < hi. A coordinate with lo == hi is pinned to that value.
struct Bounds {
    std::vector<double> lo, hi;
    void check(std::size_t dim) const;
};

struct OptimizerConfig {
    int max_evaluations = 10000;
    double ftol = 1e-10;          // change in objective between restarts
    double xtol = 1e-8;           // simplex size in transformed coordinates
    double initial_step = 0.5;    // simplex step in transformed coordinates
    int starts = 5;               // first start is the supplied point, the rest are jittered
    double jitter = 0.5;          // sd of the jitter in transformed coordinates
    std::uint64_t seed = 1;
    bool polish = true;           // gradient polish when a gradient is available
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;  // minimized objective
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
    int best_start = 0;
    std::vector<bool> at_bound;       // within 1e-6 (relative to the box width) of a bound
    std::vector<double> trace;        // best value after each simplex iteration, non-increasing
};

/// Minimizes f over the box with a logistic reparameterization, multi-start
/// Nelder-Mead and an optional BFGS polish that is accepted only when it
/// lowers the objective.
OptimResult minimize(const Objective& f, const Gradient& grad, const std::vector<double>& x0, const Bounds& box,
                     const OptimizerConfig& cfg = {});

/// Maps x inside the box to unconstrained coordinates and back; pinned
/// coordinates are dropped.
class BoxTransform {
public:
    explicit BoxTransform(Bounds box);
    std::size_t free_dim() const { return free_.size(); }
    std::vector<double> to_free(const std::vector<double>& x) const;
    std::vector<double> to_box(const std::vector<double>& z) const;
    /// dx_i/dz for each free coordinate at z.
    std::vector<double> jacobian_diag(const std::vector<double>& z) const;
    const std::vector<std::size_t>& free_index() const { return free_; }

private:
    Bounds box_;
    std::vector<std::size_t> free_;
};

}  // namespace ogi::opt
