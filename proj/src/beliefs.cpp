#include "brlsim/beliefs.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "brlsim/best_response.hpp"
#include "brlsim/errors.hpp"
#include "brlsim/rng.hpp"

namespace brlsim {

struct MentalModel::Node {
    bool stay = true;
    std::size_t owner = 0;
    std::map<std::size_t, MentalModel> children;
    int level = 0;
};

MentalModel MentalModel::stay_put() {
    static const std::shared_ptr<const Node> node = std::make_shared<Node>();
    return MentalModel(node);
}

MentalModel MentalModel::respond(std::size_t owner, std::map<std::size_t, MentalModel> children) {
    if (children.count(owner) > 0) {
        throw ConfigError("a Respond node must not model its own owner");
    }
    auto node = std::make_shared<Node>();
    node->stay = false;
    node->owner = owner;
    node->children = std::move(children);
    int deepest = 0;
    for (const auto& [k, child] : node->children) {
        (void)k;
        deepest = std::max(deepest, child.level());
    }
    node->level = 1 + deepest;
    return MentalModel(std::move(node));
}

bool MentalModel::is_stay_put() const { return node_->stay; }

std::size_t MentalModel::owner() const {
    if (node_->stay) throw ConfigError("StayPut has no owner");
    return node_->owner;
}

const std::map<std::size_t, MentalModel>& MentalModel::children() const {
    return node_->children;
}

int MentalModel::level() const { return node_->level; }

const void* MentalModel::node_id() const { return node_.get(); }

ChildMap level_k_children(std::size_t j, int k, std::size_t num_sellers) {
    if (num_sellers < 1) throw DomainError("level_k_children: need at least one seller");
    if (j >= num_sellers) throw IndexError("level_k_children: seller index out of range");
    if (k < 1) {
        throw DomainError("level_k_children: k must be >= 1; level 0 is only a child model");
    }

    // Shared per-level Respond nodes, built bottom-up: every occurrence of
    // "seller o responds at level l" is the same node.
    std::vector<MentalModel> prev;  // level l-1 nodes, indexed by owner
    for (int level = 1; level < k; ++level) {
        std::vector<MentalModel> current;
        current.reserve(num_sellers);
        for (std::size_t o = 0; o < num_sellers; ++o) {
            ChildMap children;
            for (std::size_t other = 0; other < num_sellers; ++other) {
                if (other == o) continue;
                children.emplace(other,
                                 level == 1 ? MentalModel::stay_put() : prev[other]);
            }
            current.push_back(MentalModel::respond(o, std::move(children)));
        }
        prev = std::move(current);
    }

    ChildMap result;
    for (std::size_t other = 0; other < num_sellers; ++other) {
        if (other == j) continue;
        result.emplace(other, k == 1 ? MentalModel::stay_put() : prev[other]);
    }
    return result;
}

namespace {

// Coverage and owner consistency for one children map; recursive.
void validate_children(const ChildMap& children, std::size_t owner, std::size_t num_sellers) {
    if (children.size() != num_sellers - 1) {
        throw ConfigError("belief children must cover exactly the " +
                          std::to_string(num_sellers - 1) + " other sellers, got " +
                          std::to_string(children.size()));
    }
    for (const auto& [slot, model] : children) {
        if (slot >= num_sellers) {
            throw ConfigError("belief child index " + std::to_string(slot) + " out of range");
        }
        if (slot == owner) {
            throw ConfigError("belief children must not include their own seller");
        }
        if (!model.is_stay_put()) {
            if (model.owner() != slot) {
                throw ConfigError("Respond node owned by seller " +
                                  std::to_string(model.owner()) + " placed in slot " +
                                  std::to_string(slot));
            }
            validate_children(model.children(), slot, num_sellers);
        }
    }
}

int entry_level(const ChildMap& children) {
    int deepest = 0;
    for (const auto& [slot, model] : children) {
        (void)slot;
        deepest = std::max(deepest, model.level());
    }
    return 1 + deepest;
}

}  // namespace

BeliefProfile::BeliefProfile(std::size_t num_sellers, std::vector<ChildMap> entries,
                             int max_depth)
    : entries_(std::move(entries)) {
    if (max_depth < 1) throw ConfigError("belief depth cap must be at least 1");
    if (entries_.size() != num_sellers) {
        throw ConfigError("belief profile must have one entry per seller");
    }
    for (std::size_t j = 0; j < num_sellers; ++j) {
        validate_children(entries_[j], j, num_sellers);
        const int level = entry_level(entries_[j]);
        if (level > max_depth) {
            throw ConfigError("belief tree for seller " + std::to_string(j) + " has level " +
                              std::to_string(level) + ", exceeding the depth cap " +
                              std::to_string(max_depth));
        }
    }
}

BeliefProfile BeliefProfile::level_k(std::size_t num_sellers, int k, int max_depth) {
    std::vector<ChildMap> entries;
    entries.reserve(num_sellers);
    for (std::size_t j = 0; j < num_sellers; ++j) {
        entries.push_back(level_k_children(j, k, num_sellers));
    }
    return BeliefProfile(num_sellers, std::move(entries), max_depth);
}

BeliefProfile BeliefProfile::stay_put(std::size_t num_sellers) {
    return level_k(num_sellers, 1);
}

const ChildMap& BeliefProfile::entry(std::size_t j) const {
    if (j >= entries_.size()) throw IndexError("belief profile entry out of range");
    return entries_[j];
}

double evaluate_model(const Market& market, const MentalModel& model, std::size_t seller,
                      const PriceVector& p, ModelMemo* memo) {
    const std::size_t n = market.num_goods();
    if (seller >= n) throw IndexError("evaluate_model: seller index out of range");
    if (p.size() != n) throw DomainError("evaluate_model: price vector size mismatch");

    if (model.is_stay_put()) return p[seller];
    if (model.owner() != seller) {
        throw ConfigError("evaluate_model: Respond node owned by seller " +
                          std::to_string(model.owner()) + " evaluated in slot " +
                          std::to_string(seller));
    }
    if (memo) {
        auto hit = memo->find(model.node_id());
        if (hit != memo->end()) return hit->second;
    }

    std::vector<double> believed = p.values();
    for (const auto& [slot, child] : model.children()) {
        believed[slot] = evaluate_model(market, child, slot, p, memo);
    }
    const double price = best_response(market, PriceVector(std::move(believed)), seller).price;
    if (memo) memo->emplace(model.node_id(), price);
    return price;
}

PriceVector brl_update_subset(const Market& market, const BeliefProfile& profile,
                              const PriceVector& p, const std::vector<std::size_t>& active) {
    const std::size_t n = market.num_goods();
    if (profile.num_sellers() != n) {
        throw DomainError("belief profile size does not match the market");
    }
    if (p.size() != n) throw DomainError("price vector size mismatch");
    if (active.empty()) throw DomainError("active seller set must be non-empty");

    // Believed prices depend only on (subtree, p), so one cache serves every
    // active seller in this step.
    ModelMemo memo;
    std::vector<double> out = p.values();
    for (std::size_t j : active) {
        if (j >= n) throw IndexError("active seller index out of range");
        std::vector<double> believed = p.values();
        for (const auto& [slot, child] : profile.entry(j)) {
            believed[slot] = evaluate_model(market, child, slot, p, &memo);
        }
        out[j] = best_response(market, PriceVector(std::move(believed)), j).price;
    }
    return PriceVector(std::move(out));
}

PriceVector brl_update(const Market& market, const BeliefProfile& profile,
                       const PriceVector& p) {
    std::vector<std::size_t> all(market.num_goods());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    return brl_update_subset(market, profile, p, all);
}

SequenceProfileSource::SequenceProfileSource(std::vector<BeliefProfile> profiles)
    : profiles_(std::move(profiles)) {
    if (profiles_.empty()) throw ConfigError("profile sequence must not be empty");
}

BeliefProfile SequenceProfileSource::next() {
    BeliefProfile out = profiles_[cursor_];
    cursor_ = (cursor_ + 1) % profiles_.size();
    return out;
}

RandomProfileSource::RandomProfileSource(std::size_t num_sellers, int max_depth,
                                         std::uint64_t seed)
    : num_sellers_(num_sellers), max_depth_(max_depth), gen_(seed) {
    if (num_sellers_ == 0) throw ConfigError("random profiles need at least one seller");
    if (max_depth_ < 1 || max_depth_ > BeliefProfile::kDefaultMaxDepth) {
        throw ConfigError("random profile max_depth must lie in [1, " +
                          std::to_string(BeliefProfile::kDefaultMaxDepth) + "]");
    }
}

BeliefProfile RandomProfileSource::next() {
    // Pool of respond nodes per (level, owner), children drawn from lower
    // pools with random levels. Sharing keeps the node count of one profile
    // at most num_sellers * max_depth while reshuffling shapes every draw.
    std::vector<std::vector<MentalModel>> pool;  // pool[l-1][owner], level <= l
    for (int level = 1; level < max_depth_; ++level) {
        std::vector<MentalModel> row;
        row.reserve(num_sellers_);
        for (std::size_t o = 0; o < num_sellers_; ++o) {
            ChildMap children;
            for (std::size_t k = 0; k < num_sellers_; ++k) {
                if (k == o) continue;
                const auto pick = uniform_index(gen_, static_cast<std::size_t>(level));
                children.emplace(k, pick == 0 ? MentalModel::stay_put()
                                              : pool[pick - 1][k]);
            }
            row.push_back(MentalModel::respond(o, std::move(children)));
        }
        pool.push_back(std::move(row));
    }

    std::vector<ChildMap> entries;
    entries.reserve(num_sellers_);
    for (std::size_t j = 0; j < num_sellers_; ++j) {
        ChildMap children;
        for (std::size_t k = 0; k < num_sellers_; ++k) {
            if (k == j) continue;
            const auto pick = uniform_index(gen_, static_cast<std::size_t>(max_depth_));
            children.emplace(k, pick == 0 ? MentalModel::stay_put() : pool[pick - 1][k]);
        }
        entries.push_back(std::move(children));
    }
    return BeliefProfile(num_sellers_, std::move(entries), max_depth_);
}

}  // namespace brlsim
