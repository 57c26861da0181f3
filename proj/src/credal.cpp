#include "psrisk/credal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace psrisk::credal {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string row_label(const bn::NodeId& id, std::size_t row) {
    std::ostringstream os;
    os << "node '" << id << "' row " << row;
    return os.str();
}

bool is_complement_pair(const ProbInterval& a, const ProbInterval& b) {
    return std::abs(b.lower() - (1.0 - a.upper())) <= kRowSumTolerance &&
           std::abs(b.upper() - (1.0 - a.lower())) <= kRowSumTolerance;
}

void validate_row(const CrNode& node, std::size_t row_index) {
    const CredalRow& row = node.rows[row_index];
    if (row.entries.size() != node.states.size()) {
        throw ValidationError(row_label(node.id, row_index) + " has wrong width");
    }

    std::vector<std::size_t> intervals;
    for (std::size_t i = 0; i < row.entries.size(); ++i) {
        if (!row.entries[i].is_point()) intervals.push_back(i);
    }

    if (intervals.empty()) {
        double sum = 0.0;
        for (const ProbInterval& e : row.entries) sum += e.lower();
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream os;
            os << row_label(node.id, row_index) << " sums to " << sum;
            throw ValidationError(os.str());
        }
        return;
    }
    if (row.entries.size() == 2 && intervals.size() == 2) {
        if (!is_complement_pair(row.entries[0], row.entries[1])) {
            throw ValidationError(row_label(node.id, row_index) +
                                  ": binary entries are not complements");
        }
        return;
    }
    if (intervals.size() > 1) {
        throw ValidationError(row_label(node.id, row_index) +
                              " has more than one free interval entry");
    }

    const std::size_t free = intervals[0];
    double rest = 0.0;
    for (std::size_t i = 0; i < row.entries.size(); ++i) {
        if (i != free) rest += row.entries[i].lower();
    }
    if (std::abs(rest + row.entries[free].lower() - 1.0) > kRowSumTolerance) {
        throw ValidationError(row_label(node.id, row_index) +
                              " does not sum to 1 at the lower corner");
    }
}

}  // namespace

CredalNet::CredalNet(std::vector<CrNode> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const CrNode& node = nodes_[i];
        if (node.id.empty()) {
            throw ValidationError("network node with empty id");
        }
        if (!index_.emplace(node.id, static_cast<int>(i)).second) {
            throw ValidationError("duplicate node id '" + node.id + "'");
        }
        if (node.states.empty()) {
            throw ValidationError("node '" + node.id + "' has no states");
        }
    }
    for (const CrNode& node : nodes_) {
        std::set<bn::NodeId> seen;
        std::size_t expected_rows = 1;
        for (const bn::NodeId& parent : node.parents) {
            auto it = index_.find(parent);
            if (it == index_.end()) {
                throw ValidationError("node '" + node.id + "' references unknown parent '" +
                                      parent + "'");
            }
            if (!seen.insert(parent).second) {
                throw ValidationError("node '" + node.id + "' lists parent '" + parent +
                                      "' twice");
            }
            expected_rows *= nodes_[it->second].states.size();
            if (expected_rows > (std::size_t{1} << 22)) {
                throw ValidationError("node '" + node.id + "' CPT would exceed 2^22 rows");
            }
        }
        if (node.rows.size() != expected_rows) {
            std::ostringstream os;
            os << "node '" << node.id << "' has " << node.rows.size() << " rows, expected "
               << expected_rows;
            throw ValidationError(os.str());
        }
        for (std::size_t r = 0; r < node.rows.size(); ++r) {
            validate_row(node, r);
        }
    }
    // Full structural validation (including the cycle check) comes from
    // instantiating a corner.
    instantiate_corner(*this, all_lower_corner(*this));
}

const CrNode& CredalNet::node(const bn::NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw LookupError("unknown node '" + id + "'");
    }
    return nodes_[static_cast<std::size_t>(it->second)];
}

bool CredalNet::has_node(const bn::NodeId& id) const { return index_.count(id) != 0; }

int CredalNet::free_state(const CredalRow& row) {
    // Binary complement pairs use the first entry as the free parameter.
    for (std::size_t i = 0; i < row.entries.size(); ++i) {
        if (!row.entries[i].is_point()) return static_cast<int>(i);
    }
    return -1;
}

std::string parameter_key(const bn::NodeId& node, std::size_t row) {
    std::ostringstream os;
    os << node << "[" << row << "]";
    return os.str();
}

std::vector<std::string> free_parameters(const CredalNet& net) {
    std::vector<std::string> keys;
    for (const CrNode& node : net.nodes()) {
        for (std::size_t r = 0; r < node.rows.size(); ++r) {
            if (CredalNet::free_state(node.rows[r]) >= 0) {
                keys.push_back(parameter_key(node.id, r));
            }
        }
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

namespace {

CornerSelection uniform_corner(const CredalNet& net, Endpoint endpoint) {
    CornerSelection selection;
    for (const std::string& key : free_parameters(net)) {
        selection[key] = endpoint;
    }
    return selection;
}

}  // namespace

CornerSelection all_lower_corner(const CredalNet& net) {
    return uniform_corner(net, Endpoint::Lower);
}

CornerSelection all_upper_corner(const CredalNet& net) {
    return uniform_corner(net, Endpoint::Upper);
}

bn::BayesNet instantiate_corner(const CredalNet& net, const CornerSelection& selection) {
    std::set<std::string> known;
    std::vector<bn::BnNode> point_nodes;
    point_nodes.reserve(net.nodes().size());

    for (const CrNode& node : net.nodes()) {
        bn::BnNode point;
        point.id = node.id;
        point.states = node.states;
        point.parents = node.parents;
        point.cpt.rows.reserve(node.rows.size());

        for (std::size_t r = 0; r < node.rows.size(); ++r) {
            const CredalRow& row = node.rows[r];
            const int free = CredalNet::free_state(row);
            if (free < 0) {
                std::vector<double> values;
                values.reserve(row.entries.size());
                for (const ProbInterval& e : row.entries) values.push_back(e.lower());
                point.cpt.rows.push_back(std::move(values));
                continue;
            }

            const std::string key = parameter_key(node.id, r);
            known.insert(key);
            auto it = selection.find(key);
            if (it == selection.end()) {
                throw ValidationError("corner selection is missing parameter '" + key + "'");
            }
            const ProbInterval& span = row.entries[static_cast<std::size_t>(free)];
            const double v = (it->second == Endpoint::Lower) ? span.lower() : span.upper();

            std::vector<double> values(row.entries.size(), 0.0);
            if (row.entries.size() == 2) {
                values[static_cast<std::size_t>(free)] = v;
                values[static_cast<std::size_t>(1 - free)] = 1.0 - v;
            } else {
                // Remaining states keep their lower-corner proportions.
                values[static_cast<std::size_t>(free)] = v;
                const double head = 1.0 - span.lower();
                double sum = v;
                for (std::size_t i = 0; i < row.entries.size(); ++i) {
                    if (static_cast<int>(i) == free) continue;
                    values[i] = head > 0.0
                                    ? row.entries[i].lower() * (1.0 - v) / head
                                    : 0.0;
                    sum += values[i];
                }
                if (sum > 0.0) {
                    for (double& value : values) value /= sum;
                }
            }
            point.cpt.rows.push_back(std::move(values));
        }
        point_nodes.push_back(std::move(point));
    }

    for (const auto& [key, endpoint] : selection) {
        if (!known.count(key)) {
            throw ValidationError("corner selection references unknown parameter '" + key +
                                  "'");
        }
    }
    return bn::BayesNet(std::move(point_nodes));
}

const StateBound& ScenarioBounds::at(const std::string& state) const {
    for (const StateBound& b : bounds) {
        if (b.state == state) return b;
    }
    throw LookupError("bounds have no state '" + state + "'");
}

ScenarioBounds two_corner_bounds(const CredalNet& net, const bn::NodeId& target,
                                 const bn::Evidence& evidence) {
    const CornerSelection lower = all_lower_corner(net);
    const CornerSelection upper = all_upper_corner(net);
    const bn::StateDistribution best = bn::infer_marginal(instantiate_corner(net, lower),
                                                          target, evidence);
    const bn::StateDistribution worst = bn::infer_marginal(instantiate_corner(net, upper),
                                                           target, evidence);

    ScenarioBounds out;
    out.method = "two-corner";
    for (std::size_t i = 0; i < best.states.size(); ++i) {
        out.bounds.push_back(StateBound{best.states[i], best.p[i], worst.p[i], lower, upper});
    }
    return out;
}

ScenarioBounds corner_enumeration_bounds(const CredalNet& net, const bn::NodeId& target,
                                         const bn::Evidence& evidence,
                                         std::size_t max_parameters) {
    const std::vector<std::string> keys = free_parameters(net);
    if (keys.size() > max_parameters) {
        std::ostringstream os;
        os << "corner enumeration over " << keys.size() << " parameters exceeds the limit of "
           << max_parameters;
        throw ValidationError(os.str());
    }

    ScenarioBounds out;
    out.method = "enumerate";
    const std::uint64_t corners = std::uint64_t{1} << keys.size();
    for (std::uint64_t mask = 0; mask < corners; ++mask) {
        CornerSelection selection;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            selection[keys[k]] =
                ((mask >> k) & 1) ? Endpoint::Upper : Endpoint::Lower;
        }
        const bn::StateDistribution dist =
            bn::infer_marginal(instantiate_corner(net, selection), target, evidence);
        if (mask == 0) {
            for (std::size_t i = 0; i < dist.states.size(); ++i) {
                out.bounds.push_back(
                    StateBound{dist.states[i], dist.p[i], dist.p[i], selection, selection});
            }
            continue;
        }
        for (std::size_t i = 0; i < dist.states.size(); ++i) {
            StateBound& b = out.bounds[i];
            if (dist.p[i] < b.best) {
                b.best = dist.p[i];
                b.selection_best = selection;
            }
            if (dist.p[i] > b.worst) {
                b.worst = dist.p[i];
                b.selection_worst = selection;
            }
        }
    }
    return out;
}

}  // namespace psrisk::credal
