#include "netspect/residualize.hpp"

#include <map>

#include "netspect/errors.hpp"
#include "netspect/parallel.hpp"

namespace netspect {

namespace {

// Least squares via Householder QR; rank checked with column pivoting.
Eigen::VectorXd qr_lstsq(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool* rank_ok) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    *rank_ok = qr.rank() == x.cols();
    if (!*rank_ok) return Eigen::VectorXd();
    return qr.solve(y);
}

}  // namespace

ResidualPanel residualize(const ReturnPanel& returns, const ReturnPanel& factors,
                          const ResidualizeOptions& opts) {
    if (factors.n_tickers() < 1)
        throw std::invalid_argument("residualize: need at least one factor column");

    // factor rows joined by date
    std::map<std::string, Eigen::Index> factor_row;
    for (Eigen::Index t = 0; t < factors.n_dates(); ++t)
        factor_row[factors.dates[static_cast<std::size_t>(t)]] = t;

    const Eigen::Index n_dates = returns.n_dates();
    const Eigen::Index n_stocks = returns.n_tickers();
    const Eigen::Index nf = factors.n_tickers();

    // factor design row per return date; NaN when any factor is missing
    Eigen::MatrixXd f(n_dates, nf);
    std::vector<bool> f_ok(static_cast<std::size_t>(n_dates), false);
    for (Eigen::Index t = 0; t < n_dates; ++t) {
        auto it = factor_row.find(returns.dates[static_cast<std::size_t>(t)]);
        if (it == factor_row.end()) continue;
        bool ok = true;
        for (Eigen::Index j = 0; j < nf; ++j) {
            f(t, j) = factors.values(it->second, j);
            if (is_missing(f(t, j))) ok = false;
        }
        f_ok[static_cast<std::size_t>(t)] = ok;
    }

    // global collinearity check on the complete factor rows
    {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index t = 0; t < n_dates; ++t)
            if (f_ok[static_cast<std::size_t>(t)]) rows.push_back(t);
        if (rows.size() >= static_cast<std::size_t>(nf) + 1) {
            Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), nf + 1);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                x(static_cast<Eigen::Index>(r), 0) = 1.0;
                x.row(static_cast<Eigen::Index>(r)).tail(nf) = f.row(rows[r]);
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
            qr.setThreshold(1e-10);
            if (qr.rank() < nf + 1)
                throw RankDeficientFactors("factor matrix is rank deficient (collinear factors)");
        }
    }

    ResidualPanel out;
    out.residuals.dates = returns.dates;
    out.residuals.tickers = returns.tickers;
    out.residuals.values = Eigen::MatrixXd::Constant(n_dates, n_stocks, missing_value());
    out.factor_names = factors.tickers;
    out.coef = Eigen::MatrixXd::Constant(n_stocks, nf + 1, missing_value());

    // per-stock fits are self-contained: each writes only its own column and
    // skip flag, so the result is identical for any worker count
    std::vector<std::uint8_t> skipped_flag(static_cast<std::size_t>(n_stocks), 0);
    parallel_for(static_cast<std::size_t>(n_stocks), opts.threads, [&](std::size_t stock) {
        const Eigen::Index s = static_cast<Eigen::Index>(stock);
        std::vector<Eigen::Index> rows;
        for (Eigen::Index t = 0; t < n_dates; ++t)
            if (f_ok[static_cast<std::size_t>(t)] && !is_missing(returns.values(t, s)))
                rows.push_back(t);

        if (!opts.rolling) {
            if (rows.size() < static_cast<std::size_t>(opts.min_beta_obs)) {
                skipped_flag[stock] = 1;
                return;
            }
            Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), nf + 1);
            Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                x(static_cast<Eigen::Index>(r), 0) = 1.0;
                x.row(static_cast<Eigen::Index>(r)).tail(nf) = f.row(rows[r]);
                y(static_cast<Eigen::Index>(r)) = returns.values(rows[r], s);
            }
            bool rank_ok = false;
            const Eigen::VectorXd beta = qr_lstsq(x, y, &rank_ok);
            if (!rank_ok) {
                skipped_flag[stock] = 1;
                return;
            }
            out.coef.row(s) = beta.transpose();
            for (std::size_t r = 0; r < rows.size(); ++r)
                out.residuals.values(rows[r], s) =
                    y(static_cast<Eigen::Index>(r)) - x.row(static_cast<Eigen::Index>(r)) * beta;
        } else {
            // trailing-window betas: the residual at t uses the fit over the
            // last rolling_window joint observations ending at t
            bool fitted_any = false;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const std::size_t lo =
                    r + 1 >= static_cast<std::size_t>(opts.rolling_window)
                        ? r + 1 - static_cast<std::size_t>(opts.rolling_window)
                        : 0;
                const std::size_t m = r - lo + 1;
                if (m < static_cast<std::size_t>(opts.min_beta_obs)) continue;
                Eigen::MatrixXd x(static_cast<Eigen::Index>(m), nf + 1);
                Eigen::VectorXd y(static_cast<Eigen::Index>(m));
                for (std::size_t i = 0; i < m; ++i) {
                    x(static_cast<Eigen::Index>(i), 0) = 1.0;
                    x.row(static_cast<Eigen::Index>(i)).tail(nf) = f.row(rows[lo + i]);
                    y(static_cast<Eigen::Index>(i)) = returns.values(rows[lo + i], s);
                }
                bool rank_ok = false;
                const Eigen::VectorXd beta = qr_lstsq(x, y, &rank_ok);
                if (!rank_ok) continue;
                out.residuals.values(rows[r], s) =
                    returns.values(rows[r], s) -
                    (beta(0) + f.row(rows[r]) * beta.tail(nf));
                out.coef.row(s) = beta.transpose();  // last fitted window retained
                fitted_any = true;
            }
            if (!fitted_any) skipped_flag[stock] = 1;
        }
    });

    for (Eigen::Index s = 0; s < n_stocks; ++s)
        if (skipped_flag[static_cast<std::size_t>(s)])
            out.skipped.push_back(returns.tickers[static_cast<std::size_t>(s)]);
    return out;
}

}  // namespace netspect
