#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "brlsim/beliefs.hpp"
#include "brlsim/market.hpp"

namespace brlsim {

enum class RunMode { kSync, kAsync };

/// Produces the active-seller subset for each time step. Implementations
/// must keep every subset non-empty and honor their fairness window: no
/// seller goes without an update for more than `fairness_window` steps.
class Schedule {
  public:
    virtual ~Schedule() = default;
    virtual std::vector<std::size_t> next() = 0;
    virtual std::size_t fairness_window() const = 0;
};

/// Every seller, every step.
class FullSchedule final : public Schedule {
  public:
    explicit FullSchedule(std::size_t num_sellers);
    std::vector<std::size_t> next() override;
    std::size_t fairness_window() const override { return 1; }

  private:
    std::vector<std::size_t> all_;
};

/// Singletons 0, 1, ..., n-1, 0, ...
class RoundRobinSchedule final : public Schedule {
  public:
    explicit RoundRobinSchedule(std::size_t num_sellers);
    std::vector<std::size_t> next() override;
    std::size_t fairness_window() const override { return num_sellers_; }

  private:
    std::size_t num_sellers_;
    std::size_t cursor_ = 0;
};

/// Seeded random non-empty subsets. Sellers that would otherwise exceed the
/// fairness window are force-included, so the window is hard-guaranteed.
class RandomSubsetSchedule final : public Schedule {
  public:
    RandomSubsetSchedule(std::size_t num_sellers, std::uint64_t seed, std::size_t window);
    std::vector<std::size_t> next() override;
    std::size_t fairness_window() const override { return window_; }

  private:
    std::size_t num_sellers_;
    std::size_t window_;
    std::mt19937_64 gen_;
    std::vector<std::size_t> idle_steps_;
};

struct TrajectoryPoint {
    std::size_t step = 0;
    PriceVector prices;
    std::uint64_t active_mask = 0;  // bit j set iff seller j updated at this step
    std::size_t epoch = 0;
    std::optional<double> distance_to_reference;
    std::optional<double> clearing_residual;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;       // length steps + 1, starting at p0
    std::vector<std::size_t> epoch_ends;       // steps at which an epoch completed
};

/// One synchronous round: draw a profile, apply the BRL update to all sellers.
PriceVector step_sync(const Market& market, ProfileSource& source, const PriceVector& p);

/// One asynchronous step: the active sellers compute their BRL updates from
/// the input vector; everyone else keeps their price bit-identically.
PriceVector step_async(const Market& market, ProfileSource& source, const PriceVector& p,
                       const std::vector<std::size_t>& active);

/// Drives `steps` updates from p0 and records the full trajectory. p0 must
/// lie inside the price box; anything else is rejected (the convergence
/// guarantees only cover the box, and clamping would misattribute behavior).
/// In sync mode the schedule is ignored and may be null. An epoch closes at
/// the first step by which every seller has updated at least once.
Trajectory run(const Market& market, RunMode mode, Schedule* schedule, ProfileSource& source,
               const PriceVector& p0, std::size_t steps);

}  // namespace brlsim
