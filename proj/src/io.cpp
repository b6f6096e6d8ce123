#include "brlsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "brlsim/errors.hpp"

namespace brlsim {

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

nlohmann::ordered_json market_to_json(const Market& market) {
    nlohmann::ordered_json doc;
    doc["num_goods"] = market.num_goods();
    doc["num_buyers"] = market.num_buyers();
    doc["rho"] = market.rho();
    doc["budgets"] = market.budgets();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < market.num_buyers(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < market.num_goods(); ++j) {
            row.push_back(market.coefficient(i, j));
        }
        rows.push_back(std::move(row));
    }
    doc["coefficients"] = std::move(rows);
    return doc;
}

Market market_from_json(const nlohmann::json& doc) {
    try {
        const auto n = doc.at("num_goods").get<std::size_t>();
        const auto m = doc.at("num_buyers").get<std::size_t>();
        const auto rho = doc.at("rho").get<double>();
        if (!(rho > 0.0 && rho < 1.0)) {
            std::string msg = "market field 'rho' must lie strictly in (0,1), got " +
                              std::to_string(rho);
            if (rho <= 0.0) {
                msg += "; the complementary-goods regime is outside this engine's "
                       "weak-gross-substitutes scope";
            }
            throw ConfigError(msg);
        }
        auto budgets = doc.at("budgets").get<std::vector<double>>();
        if (budgets.size() != m) {
            throw ConfigError("market field 'budgets' must list one entry per buyer");
        }
        const auto& rows = doc.at("coefficients");
        if (!rows.is_array() || rows.size() != m) {
            throw ConfigError("market field 'coefficients' must list one row per buyer");
        }
        std::vector<double> coeffs;
        coeffs.reserve(m * n);
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != n) {
                throw ConfigError("each coefficient row must list one entry per good");
            }
            for (const auto& cell : row) coeffs.push_back(cell.get<double>());
        }
        try {
            return Market(n, m, std::move(budgets), std::move(coeffs), rho);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid market: ") + e.what());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed market document: ") + e.what());
    }
}

void save_market(const std::string& path, const Market& market,
                 const nlohmann::ordered_json& meta) {
    nlohmann::ordered_json doc = market_to_json(market);
    if (!meta.empty()) doc["meta"] = meta;
    write_text_file(path, doc.dump(2) + "\n");
}

Market load_market(const std::string& path) {
    return market_from_json(load_json_file(path));
}

std::string market_hash(const Market& market) {
    return hex64(fnv1a64(market_to_json(market).dump()));
}

nlohmann::ordered_json model_to_json(const MentalModel& model) {
    nlohmann::ordered_json doc;
    if (model.is_stay_put()) {
        doc["kind"] = "stay";
        return doc;
    }
    doc["kind"] = "respond";
    doc["owner"] = model.owner();
    nlohmann::ordered_json children = nlohmann::ordered_json::object();
    for (const auto& [slot, child] : model.children()) {
        children[std::to_string(slot)] = model_to_json(child);
    }
    doc["children"] = std::move(children);
    return doc;
}

namespace {

std::size_t parse_seller_key(const std::string& key, std::size_t num_sellers) {
    std::size_t value = 0;
    const auto result = std::from_chars(key.data(), key.data() + key.size(), value);
    if (result.ec != std::errc{} || result.ptr != key.data() + key.size() ||
        value >= num_sellers) {
        throw ConfigError("belief children key '" + key + "' is not a valid seller index");
    }
    return value;
}

}  // namespace

MentalModel model_from_json(const nlohmann::json& doc, std::size_t slot,
                            std::size_t num_sellers) {
    try {
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "stay") return MentalModel::stay_put();
        if (kind != "respond") {
            throw ConfigError("belief node kind must be 'stay' or 'respond', got '" + kind +
                              "'");
        }
        const auto owner = doc.at("owner").get<std::size_t>();
        if (owner != slot) {
            throw ConfigError("respond node owner " + std::to_string(owner) +
                              " does not match its slot " + std::to_string(slot));
        }
        ChildMap children;
        for (const auto& [key, child] : doc.at("children").items()) {
            const std::size_t child_slot = parse_seller_key(key, num_sellers);
            children.emplace(child_slot, model_from_json(child, child_slot, num_sellers));
        }
        return MentalModel::respond(owner, std::move(children));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed belief node: ") + e.what());
    }
}

BeliefProfile profile_from_json(const nlohmann::json& doc, std::size_t num_sellers,
                                int max_depth) {
    try {
        const auto& sellers = doc.at("sellers");
        if (!sellers.is_array() || sellers.size() != num_sellers) {
            throw ConfigError("belief profile must list one entry per seller (" +
                              std::to_string(num_sellers) + ")");
        }
        std::vector<ChildMap> entries;
        entries.reserve(num_sellers);
        for (std::size_t j = 0; j < num_sellers; ++j) {
            const auto& entry = sellers.at(j);
            if (entry.contains("level")) {
                const int k = entry.at("level").get<int>();
                if (k < 1) {
                    throw ConfigError("belief level shorthand must be >= 1");
                }
                entries.push_back(level_k_children(j, k, num_sellers));
            } else if (entry.contains("children")) {
                ChildMap children;
                for (const auto& [key, child] : entry.at("children").items()) {
                    const std::size_t slot = parse_seller_key(key, num_sellers);
                    children.emplace(slot, model_from_json(child, slot, num_sellers));
                }
                entries.push_back(std::move(children));
            } else {
                throw ConfigError("belief entry for seller " + std::to_string(j) +
                                  " needs either 'level' or 'children'");
            }
        }
        return BeliefProfile(num_sellers, std::move(entries), max_depth);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed belief profile: ") + e.what());
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<std::string>& header_comments) {
    for (const auto& line : header_comments) {
        out << "# " << line << "\n";
    }
    const std::size_t n = trajectory.points.empty() ? 0 : trajectory.points.front().prices.size();
    out << "step,epoch,active_mask";
    for (std::size_t j = 1; j <= n; ++j) out << ",p" << j;
    out << ",dist_to_ref,clearing_residual\n";

    for (const auto& point : trajectory.points) {
        out << point.step << ',' << point.epoch << ',' << point.active_mask;
        for (std::size_t j = 0; j < n; ++j) out << ',' << format_double(point.prices[j]);
        out << ',';
        if (point.distance_to_reference) out << format_double(*point.distance_to_reference);
        out << ',';
        if (point.clearing_residual) out << format_double(*point.clearing_residual);
        out << '\n';
    }
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    try {
        nlohmann::json doc;
        in >> doc;
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("failed to parse " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open file for writing: " + path);
    out << contents;
    if (!out) throw ConfigError("failed while writing: " + path);
}

}  // namespace brlsim
