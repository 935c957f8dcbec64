#include "wordopt/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "wordopt/errors.hpp"

namespace wordopt {

namespace {

inline double soft_threshold(double rho, double lambda) {
    if (rho > lambda) return rho - lambda;
    if (rho < -lambda) return rho + lambda;
    return 0.0;
}

}  // namespace

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                   double tol, int max_sweeps) {
    if (X.rows() != y.size()) throw ContractError("lasso_fit: row count mismatch");
    if (lambda < 0.0) throw ContractError("lasso_fit: lambda must be >= 0");

    const Eigen::RowVectorXd col_means = X.colwise().mean();
    const double y_mean = y.mean();
    Eigen::MatrixXd Xc = X.rowwise() - col_means;
    Eigen::VectorXd r = y.array() - y_mean;  // residual with beta = 0
    const Eigen::VectorXd col_sq = Xc.colwise().squaredNorm();

    LassoFit fit;
    fit.beta = Eigen::VectorXd::Zero(X.cols());
    for (fit.sweeps = 0; fit.sweeps < max_sweeps; ++fit.sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (col_sq[j] == 0.0) continue;  // constant column, stays at 0
            const double old = fit.beta[j];
            const double rho = Xc.col(j).dot(r) + old * col_sq[j];
            const double updated = soft_threshold(rho, lambda) / col_sq[j];
            if (updated != old) {
                r -= Xc.col(j) * (updated - old);
                fit.beta[j] = updated;
                max_change = std::max(max_change, std::abs(updated - old));
            }
        }
        if (max_change < tol) {
            fit.converged = true;
            ++fit.sweeps;
            break;
        }
    }
    fit.intercept = y_mean - col_means.dot(fit.beta);
    return fit;
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::RowVectorXd col_means = X.colwise().mean();
    const Eigen::MatrixXd Xc = X.rowwise() - col_means;
    const Eigen::VectorXd yc = y.array() - y.mean();
    return (Xc.transpose() * yc).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd one_hot_design(const std::vector<std::pair<Word, Score>>& archive,
                               const Alphabet& alphabet, std::size_t n) {
    const std::size_t m = alphabet.size();
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(archive.size()),
                                              static_cast<Eigen::Index>(n * (m - 1)));
    for (std::size_t row = 0; row < archive.size(); ++row) {
        const Word& w = archive[row].first;
        if (w.size() != n) throw ContractError("lasso_rank: archive word length mismatch");
        for (std::size_t p = 0; p < n; ++p) {
            const std::uint8_t s = w[p];
            if (s == 0) continue;  // reference symbol
            X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p * (m - 1) + s - 1)) = 1.0;
        }
    }
    return X;
}

std::vector<PositionImpact> lasso_rank(const std::vector<std::pair<Word, Score>>& archive,
                                       const Alphabet& alphabet, std::size_t n, double lambda) {
    if (archive.size() < 2 * n)
        throw ContractError("lasso_rank: archive must hold at least 2n rows");
    const std::size_t m = alphabet.size();
    Eigen::MatrixXd X = one_hot_design(archive, alphabet, n);
    Eigen::VectorXd y(static_cast<Eigen::Index>(archive.size()));
    for (std::size_t row = 0; row < archive.size(); ++row)
        y[static_cast<Eigen::Index>(row)] = archive[row].second;

    const LassoFit fit = lasso_fit(X, y, lambda);

    std::vector<PositionImpact> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        double impact = 0.0;
        for (std::size_t s = 1; s < m; ++s)
            impact = std::max(impact, std::abs(fit.beta[static_cast<Eigen::Index>(p * (m - 1) + s - 1)]));
        out[p] = PositionImpact{p, impact};
    }
    std::stable_sort(out.begin(), out.end(), [](const PositionImpact& a, const PositionImpact& b) {
        return a.impact > b.impact;
    });
    return out;
}

}  // namespace wordopt
