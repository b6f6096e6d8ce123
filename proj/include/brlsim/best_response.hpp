#pragma once

#include <cstddef>

#include "brlsim/market.hpp"

namespace brlsim {

struct BestResponseResult {
    double price = 0.0;    // the clearing price for the good
    double residual = 0.0; // |clearing_gap| at the returned price
    int iterations = 0;
};

/// g(alpha, p) = alpha - good_spending(market, p, j, alpha).
/// Strictly increasing in alpha, decreasing in every other price; its unique
/// root is the seller's profit-maximizing price.
double clearing_gap(const Market& market, const PriceVector& p, std::size_t j, double alpha);

/// Solves clearing_gap(alpha, p) = 0 for good j: the price at which demand
/// for the good is exactly the unit supply, which maximizes the seller's
/// profit in the WGS regime.
BestResponseResult best_response(const Market& market, const PriceVector& p, std::size_t j);

/// All sellers best-responding simultaneously: every coordinate is computed
/// from the same input vector.
PriceVector best_response_all(const Market& market, const PriceVector& p);

}  // namespace brlsim
