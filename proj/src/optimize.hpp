#ifndef HOLTERISK_OPTIMIZE_HPP
#define HOLTERISK_OPTIMIZE_HPP

#include <functional>
#include <string>
#include <vector>

namespace holterisk {

// Fills grad (resized by the callee) and returns the cost. A non-finite
// return aborts the optimization.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

struct GdConfig {
    double learning_rate = 0.05;
    double momentum = 0.9;
    int epochs = 200;
};

struct BfgsConfig {
    int max_iterations = 500;
    double grad_tol = 1e-8;     // infinity norm
    double armijo_c = 1e-4;     // sufficient-decrease constant
    double backtrack = 0.5;
    int max_line_search_steps = 40;
};

struct OptimizeResult {
    std::vector<double> x; // best-seen point
    double f = 0.0;        // best-seen value
    int iterations = 0;
    bool aborted = false;  // non-finite cost encountered
    std::string note;
};

// Full-batch gradient descent with momentum (velocity form:
// v <- mu v - lr g, x <- x + v). Returns the best point seen.
OptimizeResult gradient_descent(const Objective& obj, std::vector<double> x0, const GdConfig& cfg);

// BFGS with a dense inverse-Hessian approximation (standard rank-2
// update) and an Armijo backtracking line search. Returns the best
// point seen; stops on the gradient tolerance, iteration budget, or a
// failed steepest-descent line search.
OptimizeResult bfgs(const Objective& obj, std::vector<double> x0, const BfgsConfig& cfg);

} // namespace holterisk

#endif
