#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "wordopt/errors.hpp"
#include "wordopt/ga.hpp"
#include "wordopt/lasso.hpp"

using namespace wordopt;

namespace {

// Planted-model archive: score = offset + sum_i coef[i]*bit_i + noise.
std::vector<std::pair<Word, Score>> planted_archive(std::size_t n, std::size_t rows,
                                                    const std::vector<double>& coef,
                                                    double offset, double sigma, Rng& rng) {
    Alphabet bin = Alphabet::binary();
    std::vector<std::pair<Word, Score>> archive;
    archive.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        Word w = random_word(bin, n, rng);
        double s = offset;
        for (std::size_t i = 0; i < n; ++i) s += coef[i] * w[i];
        if (sigma > 0.0) {
            // Box-Muller from two uniforms; plenty for test noise.
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            s += sigma * std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
        }
        archive.emplace_back(std::move(w), std::max(0.0, s));
    }
    return archive;
}

}  // namespace

TEST_CASE("lambda at or above lambda_max yields exactly zero coefficients") {
    Rng rng(11);
    std::vector<double> coef(12, 0.0);
    coef[2] = 3.0;
    coef[7] = -2.0;
    auto archive = planted_archive(12, 80, coef, 10.0, 0.0, rng);
    Alphabet bin = Alphabet::binary();

    Eigen::MatrixXd X = one_hot_design(archive, bin, 12);
    Eigen::VectorXd y(80);
    for (int i = 0; i < 80; ++i) y[i] = archive[i].second;

    const double lmax = lasso_lambda_max(X, y);
    auto fit = lasso_fit(X, y, lmax);
    CHECK(fit.beta.cwiseAbs().maxCoeff() == 0.0);
    auto fit2 = lasso_fit(X, y, lmax * 2);
    CHECK(fit2.beta.cwiseAbs().maxCoeff() == 0.0);
    // just below lambda_max something activates
    auto fit3 = lasso_fit(X, y, lmax * 0.99);
    CHECK(fit3.beta.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("lambda zero on an overdetermined full-rank system matches least squares") {
    // 30x8 system; oracle = normal equations.
    Rng rng(21);
    Eigen::MatrixXd X(30, 8);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 8; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
        y[i] = rng.uniform(0.0, 5.0);
    }
    auto fit = lasso_fit(X, y, 0.0, 1e-12, 100000);

    // centered normal-equations oracle
    Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    Eigen::VectorXd yc = y.array() - y.mean();
    Eigen::VectorXd ols = (Xc.transpose() * Xc).ldlt().solve(Xc.transpose() * yc);
    CHECK((fit.beta - ols).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("constant scores produce all-zero impacts, not an error") {
    Alphabet bin = Alphabet::binary();
    Rng rng(31);
    std::vector<std::pair<Word, Score>> archive;
    for (int i = 0; i < 40; ++i) archive.emplace_back(random_word(bin, 10, rng), 7.0);
    auto ranks = lasso_rank(archive, bin, 10, 0.5);
    for (const auto& r : ranks) CHECK(r.impact == 0.0);
}

TEST_CASE("lasso_rank needs at least 2n rows") {
    Alphabet bin = Alphabet::binary();
    Rng rng(41);
    std::vector<std::pair<Word, Score>> archive;
    for (int i = 0; i < 9; ++i) archive.emplace_back(random_word(bin, 5, rng), double(i));
    CHECK_THROWS_AS(lasso_rank(archive, bin, 5, 0.1), ContractError);
}

TEST_CASE("planted 5-coefficient model: top-5 ranked positions recover the planted set") {
    // n=30, 300 rows, noise sigma=0.1, 5 strong planted coefficients.
    const std::size_t n = 30;
    int recovered = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(1000 + trial);
        std::vector<double> coef(n, 0.0);
        std::set<std::size_t> planted;
        while (planted.size() < 5) planted.insert(rng.below(n));
        for (auto p : planted) coef[p] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0, 2.0);
        auto archive = planted_archive(n, 300, coef, 20.0, 0.1, rng);
        auto ranks = lasso_rank(archive, Alphabet::binary(), n, 0.5);
        std::set<std::size_t> top5;
        for (int i = 0; i < 5; ++i) top5.insert(ranks[i].position);
        recovered += top5 == planted;
    }
    CHECK(recovered >= 95);
}
