#pragma once

#include <cstddef>
#include <vector>

namespace brlsim {

/// Strictly positive per-good prices; the dynamic state of the system.
/// Construction validates positivity and finiteness, so holding a
/// PriceVector is a proof that every entry is a usable price.
class PriceVector {
  public:
    explicit PriceVector(std::vector<double> prices);
    static PriceVector constant(std::size_t n, double value);

    std::size_t size() const { return prices_.size(); }
    double operator[](std::size_t j) const { return prices_[j]; }
    const std::vector<double>& values() const { return prices_; }

    /// Copy with entry j replaced (validated).
    PriceVector with(std::size_t j, double value) const;

    bool operator==(const PriceVector& other) const { return prices_ == other.prices_; }

  private:
    std::vector<double> prices_;
};

/// Buyer-by-good quantity matrix.
struct Allocation {
    std::size_t num_buyers = 0;
    std::size_t num_goods = 0;
    std::vector<double> quantities;  // row-major, buyer rows

    double operator()(std::size_t i, std::size_t j) const {
        return quantities[i * num_goods + j];
    }
    double& operator()(std::size_t i, std::size_t j) {
        return quantities[i * num_goods + j];
    }
};

/// The invariant price box: updates map [p_min, p_max]^n into itself.
struct PriceBounds {
    double p_min = 0.0;
    double p_max = 0.0;

    bool contains(const PriceVector& p) const;
    PriceVector midpoint(std::size_t n) const;
};

/// A CES Fisher market in the weak-gross-substitutes regime. Immutable after
/// construction; every operation below is a pure function of its inputs.
///
/// Buyers have budgets b_i, preference coefficients c_ij >= 0, and a common
/// substitution parameter rho in (0,1). Construction rejects markets where a
/// good interests no buyer or a buyer wants no good: demand and best
/// responses would be ill-defined.
class Market {
  public:
    Market(std::size_t num_goods, std::size_t num_buyers, std::vector<double> budgets,
           std::vector<double> coefficients, double rho);

    std::size_t num_goods() const { return num_goods_; }
    std::size_t num_buyers() const { return num_buyers_; }
    double rho() const { return rho_; }
    double epsilon() const { return epsilon_; }

    double budget(std::size_t i) const { return budgets_[i]; }
    const std::vector<double>& budgets() const { return budgets_; }

    double coefficient(std::size_t i, std::size_t j) const {
        return coefficients_[i * num_goods_ + j];
    }
    const std::vector<double>& coefficients() const { return coefficients_; }

    /// log(c_ij); -inf where c_ij == 0 (callers must skip those terms).
    double log_coefficient(std::size_t i, std::size_t j) const {
        return log_coefficients_[i * num_goods_ + j];
    }

    double total_budget() const { return total_budget_; }

  private:
    std::size_t num_goods_;
    std::size_t num_buyers_;
    std::vector<double> budgets_;
    std::vector<double> coefficients_;
    std::vector<double> log_coefficients_;
    double rho_;
    double epsilon_;
    double total_budget_;
};

/// Utility-maximizing allocation at prices p:
///   x_ij = (b_i / p_j) * (c_ij/p_j)^eps / sum_k (c_ik/p_k)^eps
/// Zero-coefficient terms are excluded before any log transform, so they
/// contribute exactly zero. Every buyer spends its full budget.
Allocation demand(const Market& market, const PriceVector& p);

/// Total demand sum_i x_ij(p) for one good.
double good_demand(const Market& market, const PriceVector& p, std::size_t j);

/// Total buyer spending on good j when its own price is alpha and the other
/// prices come from p_other (entry j of p_other is ignored). Strictly
/// decreasing in alpha whenever some interested buyer also weights another
/// good; bounded above by the total budget.
double good_spending(const Market& market, const PriceVector& p_other, std::size_t j,
                     double alpha);

/// CES utility of buyer i at allocation x; zero terms excluded from the sum.
double utility(const Market& market, const Allocation& x, std::size_t i);

PriceBounds price_bounds(const Market& market);

/// max_j |sum_i x_ij(p) - 1|: the empirical certificate of equilibrium.
double clearing_residual(const Market& market, const PriceVector& p);

}  // namespace brlsim
