#include "brlsim/generator.hpp"

#include <random>
#include <vector>

#include "brlsim/errors.hpp"
#include "brlsim/rng.hpp"

namespace brlsim {

namespace {

void check_range(double lo, double hi, const char* what) {
    if (!(lo > 0.0) || !(hi >= lo)) {
        throw ConfigError(std::string(what) + " range must satisfy 0 < min <= max");
    }
}

}  // namespace

Market generate_market(const MarketGenSpec& spec) {
    if (spec.num_goods == 0 || spec.num_buyers == 0) {
        throw ConfigError("generator needs at least one good and one buyer");
    }
    if (!(spec.rho > 0.0 && spec.rho < 1.0)) {
        throw ConfigError("generator rho must lie strictly in (0,1)");
    }
    check_range(spec.budget_min, spec.budget_max, "budget");
    check_range(spec.coeff_min, spec.coeff_max, "coefficient");
    if (!(spec.sparsity >= 0.0 && spec.sparsity < 1.0)) {
        throw ConfigError("sparsity must lie in [0,1)");
    }

    const std::size_t n = spec.num_goods;
    const std::size_t m = spec.num_buyers;
    std::mt19937_64 gen(spec.seed);

    std::vector<double> budgets(m);
    for (std::size_t i = 0; i < m; ++i) {
        budgets[i] = log_uniform_in(gen, spec.budget_min, spec.budget_max);
    }

    auto draw_coeff = [&]() {
        if (spec.sparsity > 0.0 && uniform01(gen) < spec.sparsity) return 0.0;
        return log_uniform_in(gen, spec.coeff_min, spec.coeff_max);
    };

    std::vector<double> coeffs(m * n);
    for (auto& c : coeffs) c = draw_coeff();

    // Resample zero rows/columns until the positivity invariants hold. A
    // column redraw can zero out a row, so loop over both checks together.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        bool clean = true;
        for (std::size_t i = 0; i < m; ++i) {
            bool any = false;
            for (std::size_t j = 0; j < n; ++j) any = any || coeffs[i * n + j] > 0.0;
            if (!any) {
                clean = false;
                for (std::size_t j = 0; j < n; ++j) coeffs[i * n + j] = draw_coeff();
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            bool any = false;
            for (std::size_t i = 0; i < m; ++i) any = any || coeffs[i * n + j] > 0.0;
            if (!any) {
                clean = false;
                for (std::size_t i = 0; i < m; ++i) coeffs[i * n + j] = draw_coeff();
            }
        }
        if (clean) {
            return Market(n, m, std::move(budgets), std::move(coeffs), spec.rho);
        }
    }
    throw ConfigError("generator failed to satisfy positivity after resampling; "
                      "sparsity is too high for this shape");
}

}  // namespace brlsim
