#include "brlsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "brlsim/errors.hpp"

namespace brlsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_price_entries(const std::vector<double>& prices) {
    for (std::size_t j = 0; j < prices.size(); ++j) {
        if (!(prices[j] > 0.0) || !std::isfinite(prices[j])) {
            throw DomainError("price entry " + std::to_string(j) +
                              " must be strictly positive and finite, got " +
                              std::to_string(prices[j]));
        }
    }
}

// Max-shifted exponential sum: log(sum_k exp(t_k)) over the collected terms.
// Terms with value -inf are skipped by the callers before they get here.
double log_sum_exp(const std::vector<double>& terms) {
    if (terms.empty()) return kNegInf;
    double m = *std::max_element(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

}  // namespace

PriceVector::PriceVector(std::vector<double> prices) : prices_(std::move(prices)) {
    if (prices_.empty()) throw DomainError("price vector must not be empty");
    check_price_entries(prices_);
}

PriceVector PriceVector::constant(std::size_t n, double value) {
    return PriceVector(std::vector<double>(n, value));
}

PriceVector PriceVector::with(std::size_t j, double value) const {
    if (j >= prices_.size()) throw IndexError("price index out of range");
    std::vector<double> copy = prices_;
    copy[j] = value;
    return PriceVector(std::move(copy));
}

bool PriceBounds::contains(const PriceVector& p) const {
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] < p_min || p[j] > p_max) return false;
    }
    return true;
}

PriceVector PriceBounds::midpoint(std::size_t n) const {
    return PriceVector::constant(n, 0.5 * (p_min + p_max));
}

Market::Market(std::size_t num_goods, std::size_t num_buyers, std::vector<double> budgets,
               std::vector<double> coefficients, double rho)
    : num_goods_(num_goods),
      num_buyers_(num_buyers),
      budgets_(std::move(budgets)),
      coefficients_(std::move(coefficients)),
      rho_(rho) {
    if (num_goods_ == 0) throw DomainError("market needs at least one good");
    if (num_buyers_ == 0) throw DomainError("market needs at least one buyer");
    if (budgets_.size() != num_buyers_) throw DomainError("budget vector size mismatch");
    if (coefficients_.size() != num_buyers_ * num_goods_) {
        throw DomainError("coefficient matrix size mismatch");
    }
    if (!(rho_ > 0.0) || !(rho_ < 1.0)) {
        throw DomainError("rho must lie strictly in (0,1): only the WGS regime is supported");
    }
    epsilon_ = rho_ / (1.0 - rho_);

    total_budget_ = 0.0;
    for (std::size_t i = 0; i < num_buyers_; ++i) {
        if (!(budgets_[i] > 0.0) || !std::isfinite(budgets_[i])) {
            throw DomainError("budget of buyer " + std::to_string(i) +
                              " must be strictly positive");
        }
        total_budget_ += budgets_[i];
    }

    log_coefficients_.resize(coefficients_.size());
    for (std::size_t idx = 0; idx < coefficients_.size(); ++idx) {
        double c = coefficients_[idx];
        if (c < 0.0 || !std::isfinite(c)) {
            throw DomainError("coefficients must be finite and non-negative");
        }
        log_coefficients_[idx] = c > 0.0 ? std::log(c) : kNegInf;
    }

    for (std::size_t i = 0; i < num_buyers_; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < num_goods_; ++j) {
            if (coefficient(i, j) > 0.0) { any = true; break; }
        }
        if (!any) {
            throw DomainError("buyer " + std::to_string(i) +
                              " has no positive coefficient; demand is ill-defined");
        }
    }
    for (std::size_t j = 0; j < num_goods_; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < num_buyers_; ++i) {
            if (coefficient(i, j) > 0.0) { any = true; break; }
        }
        if (!any) {
            throw DomainError("good " + std::to_string(j) +
                              " interests no buyer; best response is ill-defined");
        }
    }
}

Allocation demand(const Market& market, const PriceVector& p) {
    if (p.size() != market.num_goods()) throw DomainError("price vector size mismatch");

    const double eps = market.epsilon();
    const std::size_t n = market.num_goods();
    const std::size_t m = market.num_buyers();

    std::vector<double> log_p(n);
    for (std::size_t j = 0; j < n; ++j) log_p[j] = std::log(p[j]);

    Allocation x;
    x.num_buyers = m;
    x.num_goods = n;
    x.quantities.assign(m * n, 0.0);

    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t i = 0; i < m; ++i) {
        terms.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (market.coefficient(i, j) > 0.0) {
                terms.push_back(eps * (market.log_coefficient(i, j) - log_p[j]));
            }
        }
        const double lse = log_sum_exp(terms);
        const double log_b = std::log(market.budget(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (market.coefficient(i, j) > 0.0) {
                double t = eps * (market.log_coefficient(i, j) - log_p[j]);
                x(i, j) = std::exp(log_b - log_p[j] + t - lse);
            }
        }
    }
    return x;
}

double good_demand(const Market& market, const PriceVector& p, std::size_t j) {
    if (j >= market.num_goods()) throw IndexError("good index out of range");
    if (p.size() != market.num_goods()) throw DomainError("price vector size mismatch");

    const double eps = market.epsilon();
    const std::size_t n = market.num_goods();

    std::vector<double> log_p(n);
    for (std::size_t k = 0; k < n; ++k) log_p[k] = std::log(p[k]);

    double total = 0.0;
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t i = 0; i < market.num_buyers(); ++i) {
        if (market.coefficient(i, j) <= 0.0) continue;
        terms.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (market.coefficient(i, k) > 0.0) {
                terms.push_back(eps * (market.log_coefficient(i, k) - log_p[k]));
            }
        }
        const double lse = log_sum_exp(terms);
        const double t_j = eps * (market.log_coefficient(i, j) - log_p[j]);
        total += std::exp(std::log(market.budget(i)) - log_p[j] + t_j - lse);
    }
    return total;
}

double good_spending(const Market& market, const PriceVector& p_other, std::size_t j,
                     double alpha) {
    if (j >= market.num_goods()) throw IndexError("good index out of range");
    if (p_other.size() != market.num_goods()) throw DomainError("price vector size mismatch");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("trial price alpha must be strictly positive");
    }

    const double eps = market.epsilon();
    const std::size_t n = market.num_goods();
    const double log_alpha = std::log(alpha);

    std::vector<double> log_p(n);
    for (std::size_t k = 0; k < n; ++k) log_p[k] = std::log(p_other[k]);

    double total = 0.0;
    std::vector<double> other_terms;
    other_terms.reserve(n);
    for (std::size_t i = 0; i < market.num_buyers(); ++i) {
        if (market.coefficient(i, j) <= 0.0) continue;
        other_terms.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j && market.coefficient(i, k) > 0.0) {
                other_terms.push_back(eps * (market.log_coefficient(i, k) - log_p[k]));
            }
        }
        const double t_j = eps * (market.log_coefficient(i, j) - log_alpha);
        // share = (c_ij/a)^eps / (sum_{k!=j} (c_ik/p_k)^eps + (c_ij/a)^eps)
        //       = 1 / (1 + exp(lse_other - t_j)); exactly 1 when j is the
        // buyer's only positively-weighted good (lse_other = -inf).
        const double lse_other = log_sum_exp(other_terms);
        const double share = 1.0 / (1.0 + std::exp(lse_other - t_j));
        total += market.budget(i) * share;
    }
    return total;
}

double utility(const Market& market, const Allocation& x, std::size_t i) {
    if (i >= market.num_buyers()) throw IndexError("buyer index out of range");
    if (x.num_buyers != market.num_buyers() || x.num_goods != market.num_goods()) {
        throw DomainError("allocation shape mismatch");
    }

    const double rho = market.rho();
    std::vector<double> terms;
    terms.reserve(market.num_goods());
    for (std::size_t j = 0; j < market.num_goods(); ++j) {
        const double q = x(i, j);
        if (q < 0.0) throw DomainError("allocation quantities must be non-negative");
        const double c = market.coefficient(i, j);
        if (c > 0.0 && q > 0.0) {
            terms.push_back(rho * (std::log(c) + std::log(q)));
        }
    }
    if (terms.empty()) return 0.0;
    return std::exp(log_sum_exp(terms) / rho);
}

PriceBounds price_bounds(const Market& market) {
    const double eps = market.epsilon();
    const std::size_t n = market.num_goods();
    const std::size_t m = market.num_buyers();

    PriceBounds bounds;
    bounds.p_max = market.total_budget();

    // C_ij = b_i * c_ij^eps / sum_k c_ik^eps, in log domain. A price of good j
    // below C_ij makes buyer i alone demand more than the unit supply, so the
    // best response can never fall below the most-interested buyer's C_ij.
    std::vector<double> buyer_lse(m);
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t i = 0; i < m; ++i) {
        terms.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (market.coefficient(i, k) > 0.0) {
                terms.push_back(eps * market.log_coefficient(i, k));
            }
        }
        buyer_lse[i] = log_sum_exp(terms);
    }

    double p_min = bounds.p_max;
    for (std::size_t j = 0; j < n; ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (market.coefficient(i, j) <= 0.0) continue;
            double log_c = std::log(market.budget(i)) +
                           eps * market.log_coefficient(i, j) - buyer_lse[i];
            best = std::max(best, std::exp(log_c));
        }
        p_min = std::min(p_min, best);
    }
    bounds.p_min = std::min(p_min, bounds.p_max);
    return bounds;
}

double clearing_residual(const Market& market, const PriceVector& p) {
    double worst = 0.0;
    for (std::size_t j = 0; j < market.num_goods(); ++j) {
        worst = std::max(worst, std::abs(good_demand(market, p, j) - 1.0));
    }
    return worst;
}

}  // namespace brlsim
