#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <unordered_map>
#include <vector>

#include "brlsim/market.hpp"

namespace brlsim {

/// A finite belief tree. StayPut is the level-0 model: the seller keeps its
/// current price. A Respond node models its owner best-responding to the
/// prices generated by the children models of all the other sellers.
///
/// Nodes are immutable and shared; identical subtrees can (and should) reuse
/// the same node, which lets evaluation memoize on structural identity.
class MentalModel {
  public:
    static MentalModel stay_put();
    static MentalModel respond(std::size_t owner, std::map<std::size_t, MentalModel> children);

    bool is_stay_put() const;
    std::size_t owner() const;  // Respond nodes only
    const std::map<std::size_t, MentalModel>& children() const;

    /// 0 for StayPut; one more than the maximum child level otherwise.
    int level() const;

    /// Identity token for memoization: equal for shared subtrees.
    const void* node_id() const;

  private:
    struct Node;
    explicit MentalModel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Model of every seller other than j, as held by seller j (or by a Respond
/// node owned by j).
using ChildMap = std::map<std::size_t, MentalModel>;

/// Uniform level-k assignment for seller j: with k = 1 every other seller is
/// believed to stay put; with k >= 2 every other seller is believed to
/// best-respond with a level-(k-1) model. Seller j's resulting update has
/// level k. k = 0 is rejected: a seller always best-responds to something.
ChildMap level_k_children(std::size_t j, int k, std::size_t num_sellers);

/// One belief assignment per seller. Profiles need not be consistent across
/// sellers, and the dynamics may swap them arbitrarily between steps.
/// Construction validates coverage (each entry models exactly the other
/// sellers, child owners match their slots) and the depth cap.
class BeliefProfile {
  public:
    static constexpr int kDefaultMaxDepth = 8;

    BeliefProfile(std::size_t num_sellers, std::vector<ChildMap> entries,
                  int max_depth = kDefaultMaxDepth);

    static BeliefProfile level_k(std::size_t num_sellers, int k,
                                 int max_depth = kDefaultMaxDepth);
    /// All-StayPut profile: plain best-response dynamics.
    static BeliefProfile stay_put(std::size_t num_sellers);

    std::size_t num_sellers() const { return entries_.size(); }
    const ChildMap& entry(std::size_t j) const;

  private:
    std::vector<ChildMap> entries_;
};

/// Believed-price cache for one evaluation pass; keyed on node identity.
/// Only Respond nodes are cached (a StayPut value depends on its slot).
using ModelMemo = std::unordered_map<const void*, double>;

/// Price that `model`, sitting in slot `seller`, predicts at current prices
/// p: StayPut returns p[seller]; a Respond node returns its owner's best
/// response to the prices its children generate (the owner's own entry of
/// the believed vector is taken from p; the best response never reads it).
double evaluate_model(const Market& market, const MentalModel& model, std::size_t seller,
                      const PriceVector& p, ModelMemo* memo = nullptr);

/// The BRL update: coordinate j is seller j's best response to the believed
/// vector generated by its profile entry. With an all-StayPut profile this
/// coincides exactly with best_response_all.
PriceVector brl_update(const Market& market, const BeliefProfile& profile,
                       const PriceVector& p);

/// As brl_update, but only the listed coordinates are recomputed; the rest
/// are copied from p unchanged.
PriceVector brl_update_subset(const Market& market, const BeliefProfile& profile,
                              const PriceVector& p, const std::vector<std::size_t>& active);

/// Supplies the belief profile for each dynamics step.
class ProfileSource {
  public:
    virtual ~ProfileSource() = default;
    virtual BeliefProfile next() = 0;
};

class FixedProfileSource final : public ProfileSource {
  public:
    explicit FixedProfileSource(BeliefProfile profile) : profile_(std::move(profile)) {}
    BeliefProfile next() override { return profile_; }

  private:
    BeliefProfile profile_;
};

/// Cycles through a list of profiles, one per step.
class SequenceProfileSource final : public ProfileSource {
  public:
    explicit SequenceProfileSource(std::vector<BeliefProfile> profiles);
    BeliefProfile next() override;

  private:
    std::vector<BeliefProfile> profiles_;
    std::size_t cursor_ = 0;
};

/// Draws a fresh random profile every step: each believed seller gets a tree
/// of random level up to max_depth - 1. Subtrees are pooled per draw so that
/// one profile shares structure (bounded evaluation cost); draws are
/// deterministic given the seed.
class RandomProfileSource final : public ProfileSource {
  public:
    RandomProfileSource(std::size_t num_sellers, int max_depth, std::uint64_t seed);
    BeliefProfile next() override;

  private:
    std::size_t num_sellers_;
    int max_depth_;
    std::mt19937_64 gen_;
};

}  // namespace brlsim
