#include "brlsim/dynamics.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "brlsim/errors.hpp"
#include "brlsim/rng.hpp"

namespace brlsim {

FullSchedule::FullSchedule(std::size_t num_sellers) {
    if (num_sellers == 0) throw DomainError("schedule needs at least one seller");
    all_.resize(num_sellers);
    for (std::size_t j = 0; j < num_sellers; ++j) all_[j] = j;
}

std::vector<std::size_t> FullSchedule::next() { return all_; }

RoundRobinSchedule::RoundRobinSchedule(std::size_t num_sellers) : num_sellers_(num_sellers) {
    if (num_sellers == 0) throw DomainError("schedule needs at least one seller");
}

std::vector<std::size_t> RoundRobinSchedule::next() {
    std::vector<std::size_t> out{cursor_};
    cursor_ = (cursor_ + 1) % num_sellers_;
    return out;
}

RandomSubsetSchedule::RandomSubsetSchedule(std::size_t num_sellers, std::uint64_t seed,
                                           std::size_t window)
    : num_sellers_(num_sellers), window_(window), gen_(seed), idle_steps_(num_sellers, 0) {
    if (num_sellers == 0) throw DomainError("schedule needs at least one seller");
    if (window_ < 1) throw DomainError("fairness window must be at least 1");
}

std::vector<std::size_t> RandomSubsetSchedule::next() {
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < num_sellers_; ++j) {
        if (idle_steps_[j] + 1 >= window_ || uniform01(gen_) < 0.5) {
            active.push_back(j);
        }
    }
    if (active.empty()) {
        active.push_back(uniform_index(gen_, num_sellers_));
    }
    for (std::size_t j = 0; j < num_sellers_; ++j) ++idle_steps_[j];
    for (std::size_t j : active) idle_steps_[j] = 0;
    return active;
}

PriceVector step_sync(const Market& market, ProfileSource& source, const PriceVector& p) {
    return brl_update(market, source.next(), p);
}

PriceVector step_async(const Market& market, ProfileSource& source, const PriceVector& p,
                       const std::vector<std::size_t>& active) {
    if (active.empty()) throw DomainError("step_async: active set must be non-empty");
    std::vector<std::size_t> sorted = active;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return brl_update_subset(market, source.next(), p, sorted);
}

Trajectory run(const Market& market, RunMode mode, Schedule* schedule, ProfileSource& source,
               const PriceVector& p0, std::size_t steps) {
    const std::size_t n = market.num_goods();
    if (p0.size() != n) throw DomainError("initial price vector size mismatch");
    if (n > 64) throw DomainError("trajectories support at most 64 sellers");
    if (mode == RunMode::kAsync && schedule == nullptr) {
        throw DomainError("asynchronous runs require a schedule");
    }
    const PriceBounds bounds = price_bounds(market);
    if (!bounds.contains(p0)) {
        throw BoxError("initial prices lie outside the invariant box [" +
                       std::to_string(bounds.p_min) + ", " + std::to_string(bounds.p_max) +
                       "]; the convergence theory only covers the box");
    }

    std::vector<std::size_t> all(n);
    for (std::size_t j = 0; j < n; ++j) all[j] = j;
    const std::uint64_t full_mask = n == 64 ? ~0ull : (1ull << n) - 1;

    Trajectory trajectory;
    trajectory.points.push_back({0, p0, 0, 0, std::nullopt, std::nullopt});

    PriceVector p = p0;
    std::uint64_t pending = full_mask;  // sellers yet to update in the open epoch
    std::size_t epoch = 0;
    for (std::size_t t = 1; t <= steps; ++t) {
        const std::vector<std::size_t> active =
            mode == RunMode::kSync ? all : schedule->next();
        p = step_async(market, source, p, active);

        std::uint64_t mask = 0;
        for (std::size_t j : active) mask |= 1ull << j;
        pending &= ~mask;

        trajectory.points.push_back({t, p, mask, epoch, std::nullopt, std::nullopt});
        if (pending == 0) {
            trajectory.epoch_ends.push_back(t);
            ++epoch;
            pending = full_mask;
        }
    }
    return trajectory;
}

}  // namespace brlsim
