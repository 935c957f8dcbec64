#ifndef WORDOPT_LASSO_HPP
#define WORDOPT_LASSO_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "wordopt/score.hpp"
#include "wordopt/word.hpp"

namespace wordopt {

// Coordinate-descent solver for
//     minimize 0.5 * ||y - b0 - X b||^2 + lambda * ||b||_1
// Columns and response are centered internally, so the intercept is exact and
// lambda >= lasso_lambda_max(X, y) yields an exactly all-zero b.
struct LassoFit {
    Eigen::VectorXd beta;
    double intercept = 0.0;
    int sweeps = 0;
    bool converged = false;
};

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                   double tol = 1e-8, int max_sweeps = 10000);

/// Smallest lambda whose lasso solution is identically zero:
/// max_j |Xc_j . yc| on the centered data.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct PositionImpact {
    std::size_t position;
    double impact;  // max |coefficient| over this position's one-hot columns
};

/// Ranks word positions by their impact on the score, fitted on the archive
/// of (word, score) rows. Words enter the design matrix one-hot per
/// (position, symbol) with symbol 0 as the dropped reference. Requires at
/// least 2n rows; constant scores yield all-zero impacts, not an error.
/// Result is sorted by |impact| descending, ties by position ascending.
std::vector<PositionImpact> lasso_rank(const std::vector<std::pair<Word, Score>>& archive,
                                       const Alphabet& alphabet, std::size_t n, double lambda);

/// Design matrix used by lasso_rank; exposed for the rank's oracle tests.
Eigen::MatrixXd one_hot_design(const std::vector<std::pair<Word, Score>>& archive,
                               const Alphabet& alphabet, std::size_t n);

}  // namespace wordopt

#endif
