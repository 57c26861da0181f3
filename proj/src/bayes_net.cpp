#include "psrisk/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace psrisk::bn {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr std::size_t kMaxCptRows = std::size_t{1} << 22;

std::string describe_row(const NodeId& id, std::size_t row) {
    std::ostringstream os;
    os << "node '" << id << "' CPT row " << row;
    return os.str();
}

}  // namespace

BayesNet::BayesNet(std::vector<BnNode> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const BnNode& node = nodes_[i];
        if (node.id.empty()) {
            throw ValidationError("network node with empty id");
        }
        if (!index_.emplace(node.id, static_cast<int>(i)).second) {
            throw ValidationError("duplicate node id '" + node.id + "'");
        }
        if (node.states.empty()) {
            throw ValidationError("node '" + node.id + "' has no states");
        }
        std::set<std::string> seen_states(node.states.begin(), node.states.end());
        if (seen_states.size() != node.states.size()) {
            throw ValidationError("node '" + node.id + "' has duplicate state labels");
        }
    }

    for (const BnNode& node : nodes_) {
        std::set<NodeId> seen;
        std::size_t expected_rows = 1;
        for (const NodeId& parent : node.parents) {
            if (!index_.count(parent)) {
                throw ValidationError("node '" + node.id + "' references unknown parent '" +
                                      parent + "'");
            }
            if (!seen.insert(parent).second) {
                throw ValidationError("node '" + node.id + "' lists parent '" + parent +
                                      "' twice");
            }
            expected_rows *= nodes_[index_.at(parent)].states.size();
            if (expected_rows > kMaxCptRows) {
                throw ValidationError("node '" + node.id + "' CPT would exceed " +
                                      std::to_string(kMaxCptRows) + " rows");
            }
        }
        if (node.cpt.rows.size() != expected_rows) {
            std::ostringstream os;
            os << "node '" << node.id << "' CPT has " << node.cpt.rows.size()
               << " rows, expected " << expected_rows;
            throw ValidationError(os.str());
        }
        for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
            const std::vector<double>& row = node.cpt.rows[r];
            if (row.size() != node.states.size()) {
                throw ValidationError(describe_row(node.id, r) + " has wrong width");
            }
            double sum = 0.0;
            for (double v : row) {
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw ValidationError(describe_row(node.id, r) +
                                          " contains an out-of-range entry");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                std::ostringstream os;
                os << describe_row(node.id, r) << " sums to " << sum;
                throw ValidationError(os.str());
            }
        }
    }

    // Kahn's algorithm; doubles as the cycle check.
    std::vector<int> in_degree(nodes_.size(), 0);
    std::vector<std::vector<int>> children(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (const NodeId& parent : nodes_[i].parents) {
            children[index_.at(parent)].push_back(static_cast<int>(i));
            ++in_degree[i];
        }
    }
    std::deque<int> ready;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (in_degree[i] == 0) ready.push_back(static_cast<int>(i));
    }
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop_front();
        topo_.push_back(v);
        for (int child : children[v]) {
            if (--in_degree[child] == 0) ready.push_back(child);
        }
    }
    if (topo_.size() != nodes_.size()) {
        throw ValidationError("network graph contains a cycle");
    }
}

const BnNode& BayesNet::node(const NodeId& id) const {
    return nodes_[static_cast<std::size_t>(index_of(id))];
}

int BayesNet::index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw LookupError("unknown node '" + id + "'");
    }
    return it->second;
}

int BayesNet::state_index(const BnNode& node, const std::string& state) {
    auto it = std::find(node.states.begin(), node.states.end(), state);
    if (it == node.states.end()) {
        throw LookupError("node '" + node.id + "' has no state '" + state + "'");
    }
    return static_cast<int>(it - node.states.begin());
}

int BayesNet::cpt_row_index(const BnNode& node, const std::vector<int>& full_assignment) const {
    int row = 0;
    for (const NodeId& parent : node.parents) {
        const int pi = index_.at(parent);
        row = row * static_cast<int>(nodes_[pi].states.size()) + full_assignment[pi];
    }
    return row;
}

double StateDistribution::at(const std::string& state) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == state) return p[i];
    }
    throw LookupError("distribution has no state '" + state + "'");
}

double joint_probability(const BayesNet& net, const std::map<NodeId, std::string>& assignment) {
    for (const auto& [id, state] : assignment) {
        BayesNet::state_index(net.node(id), state);  // validates both
    }
    std::vector<int> states(net.nodes().size(), -1);
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        auto it = assignment.find(net.nodes()[i].id);
        if (it == assignment.end()) {
            throw ValidationError("assignment is missing node '" + net.nodes()[i].id + "'");
        }
        states[i] = BayesNet::state_index(net.nodes()[i], it->second);
    }
    double product = 1.0;
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        const BnNode& node = net.nodes()[i];
        product *= node.cpt.rows[net.cpt_row_index(node, states)][states[i]];
    }
    return product;
}

namespace {

// Dense table over a sorted set of node indices, first variable major.
struct Factor {
    std::vector<int> vars;
    std::vector<int> cards;
    std::vector<double> values;
};

std::size_t table_size(const std::vector<int>& cards) {
    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    return n;
}

std::size_t index_in(const Factor& f, const std::vector<int>& global_states) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < f.vars.size(); ++k) {
        idx = idx * static_cast<std::size_t>(f.cards[k]) +
              static_cast<std::size_t>(global_states[f.vars[k]]);
    }
    return idx;
}

// Calls fn once per joint assignment of f.vars, states written in place
// into `global_states`.
template <typename Fn>
void for_each_assignment(const Factor& f, std::vector<int>& global_states, Fn&& fn) {
    const std::size_t total = table_size(f.cards);
    for (int var : f.vars) global_states[var] = 0;
    for (std::size_t linear = 0; linear < total; ++linear) {
        fn(linear);
        for (std::size_t k = f.vars.size(); k-- > 0;) {
            if (++global_states[f.vars[k]] < f.cards[k]) break;
            global_states[f.vars[k]] = 0;
        }
    }
}

Factor node_factor(const BayesNet& net, int node_index) {
    const BnNode& node = net.nodes()[node_index];
    Factor f;
    f.vars.push_back(node_index);
    for (const NodeId& parent : node.parents) f.vars.push_back(net.index_of(parent));
    std::sort(f.vars.begin(), f.vars.end());
    f.cards.reserve(f.vars.size());
    for (int v : f.vars) f.cards.push_back(static_cast<int>(net.nodes()[v].states.size()));
    f.values.assign(table_size(f.cards), 0.0);

    std::vector<int> states(net.nodes().size(), 0);
    for_each_assignment(f, states, [&](std::size_t linear) {
        const int row = net.cpt_row_index(node, states);
        f.values[linear] = node.cpt.rows[row][states[node_index]];
    });
    return f;
}

Factor multiply(const Factor& a, const Factor& b, const BayesNet& net) {
    Factor out;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                   std::back_inserter(out.vars));
    out.cards.reserve(out.vars.size());
    for (int v : out.vars) out.cards.push_back(static_cast<int>(net.nodes()[v].states.size()));
    out.values.assign(table_size(out.cards), 0.0);

    std::vector<int> states(net.nodes().size(), 0);
    for_each_assignment(out, states, [&](std::size_t linear) {
        out.values[linear] = a.values[index_in(a, states)] * b.values[index_in(b, states)];
    });
    return out;
}

Factor sum_out(const Factor& f, int var, const BayesNet& net) {
    Factor out;
    for (int v : f.vars) {
        if (v != var) out.vars.push_back(v);
    }
    out.cards.reserve(out.vars.size());
    for (int v : out.vars) out.cards.push_back(static_cast<int>(net.nodes()[v].states.size()));
    out.values.assign(table_size(out.cards), 0.0);

    std::vector<int> states(net.nodes().size(), 0);
    for_each_assignment(f, states, [&](std::size_t linear) {
        out.values[index_in(out, states)] += f.values[linear];
    });
    return out;
}

Factor reduce(const Factor& f, int var, int state, const BayesNet& net) {
    Factor out;
    for (int v : f.vars) {
        if (v != var) out.vars.push_back(v);
    }
    out.cards.reserve(out.vars.size());
    for (int v : out.vars) out.cards.push_back(static_cast<int>(net.nodes()[v].states.size()));
    out.values.assign(table_size(out.cards), 0.0);

    std::vector<int> states(net.nodes().size(), 0);
    for_each_assignment(f, states, [&](std::size_t linear) {
        if (states[var] == state) {
            out.values[index_in(out, states)] = f.values[linear];
        }
    });
    return out;
}

// Greedy min-degree over the factor interaction graph; ties break on node
// index so the ordering is deterministic.
std::vector<int> min_degree_order(const std::vector<Factor>& factors,
                                  const std::set<int>& to_eliminate) {
    std::map<int, std::set<int>> adjacent;
    for (const Factor& f : factors) {
        for (int a : f.vars) {
            for (int b : f.vars) {
                if (a != b) adjacent[a].insert(b);
            }
        }
    }
    std::set<int> pending = to_eliminate;
    std::vector<int> order;
    order.reserve(pending.size());
    while (!pending.empty()) {
        int best = -1;
        std::size_t best_degree = 0;
        for (int v : pending) {
            const std::size_t degree = adjacent[v].size();
            if (best == -1 || degree < best_degree) {
                best = v;
                best_degree = degree;
            }
        }
        order.push_back(best);
        const std::set<int> neighbours = adjacent[best];
        for (int a : neighbours) {
            adjacent[a].erase(best);
            for (int b : neighbours) {
                if (a != b) adjacent[a].insert(b);
            }
        }
        adjacent.erase(best);
        pending.erase(best);
    }
    return order;
}

StateDistribution eliminate(const BayesNet& net, const NodeId& target, const Evidence& evidence,
                            const std::vector<int>& order) {
    const int target_index = net.index_of(target);

    std::vector<Factor> factors;
    factors.reserve(net.nodes().size());
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        factors.push_back(node_factor(net, static_cast<int>(i)));
    }
    for (const auto& [id, state] : evidence) {
        const int var = net.index_of(id);
        const int s = BayesNet::state_index(net.nodes()[var], state);
        for (Factor& f : factors) {
            if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
                f = reduce(f, var, s, net);
            }
        }
    }

    for (int var : order) {
        Factor combined;
        combined.values = {1.0};
        std::vector<Factor> rest;
        rest.reserve(factors.size());
        for (Factor& f : factors) {
            if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
                combined = multiply(combined, f, net);
            } else {
                rest.push_back(std::move(f));
            }
        }
        rest.push_back(sum_out(combined, var, net));
        factors = std::move(rest);
    }

    Factor result;
    result.values = {1.0};
    for (const Factor& f : factors) {
        result = multiply(result, f, net);
    }

    const BnNode& target_node = net.nodes()[target_index];
    StateDistribution dist;
    dist.states = target_node.states;
    dist.p.assign(target_node.states.size(), 0.0);
    std::vector<int> states(net.nodes().size(), 0);
    for_each_assignment(result, states, [&](std::size_t linear) {
        dist.p[states[target_index]] += result.values[linear];
    });

    double z = 0.0;
    for (double v : dist.p) z += v;
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw InconsistentEvidenceError("evidence has probability zero");
    }
    for (double& v : dist.p) v /= z;
    return dist;
}

std::set<int> elimination_set(const BayesNet& net, const NodeId& target,
                              const Evidence& evidence) {
    const int target_index = net.index_of(target);
    if (evidence.count(target)) {
        throw ValidationError("target node '" + target + "' is fixed by the evidence");
    }
    std::set<int> eliminate;
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        eliminate.insert(static_cast<int>(i));
    }
    eliminate.erase(target_index);
    for (const auto& [id, state] : evidence) {
        const int var = net.index_of(id);
        BayesNet::state_index(net.nodes()[var], state);
        eliminate.erase(var);
    }
    return eliminate;
}

}  // namespace

StateDistribution infer_marginal(const BayesNet& net, const NodeId& target,
                                 const Evidence& evidence) {
    const std::set<int> to_eliminate = elimination_set(net, target, evidence);
    std::vector<Factor> factors;
    factors.reserve(net.nodes().size());
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        factors.push_back(node_factor(net, static_cast<int>(i)));
    }
    return eliminate(net, target, evidence, min_degree_order(factors, to_eliminate));
}

StateDistribution infer_marginal_with_order(const BayesNet& net, const NodeId& target,
                                            const Evidence& evidence,
                                            const std::vector<NodeId>& order) {
    const std::set<int> to_eliminate = elimination_set(net, target, evidence);
    std::vector<int> indices;
    indices.reserve(order.size());
    for (const NodeId& id : order) {
        indices.push_back(net.index_of(id));
    }
    std::set<int> given(indices.begin(), indices.end());
    if (given != to_eliminate || indices.size() != given.size()) {
        throw ValidationError("elimination order must cover the non-target, non-evidence "
                              "nodes exactly once");
    }
    return eliminate(net, target, evidence, indices);
}

McDistribution monte_carlo_estimate(const BayesNet& net, const NodeId& target,
                                    const Evidence& evidence, std::uint64_t samples,
                                    std::uint64_t seed) {
    if (samples == 0) {
        throw ValidationError("sample count must be positive");
    }
    const int target_index = net.index_of(target);
    if (evidence.count(target)) {
        throw ValidationError("target node '" + target + "' is fixed by the evidence");
    }
    std::vector<std::pair<int, int>> evidence_states;
    for (const auto& [id, state] : evidence) {
        const int var = net.index_of(id);
        evidence_states.emplace_back(var, BayesNet::state_index(net.nodes()[var], state));
    }

    std::mt19937_64 rng(seed);
    const auto next_uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    const BnNode& target_node = net.nodes()[target_index];
    std::vector<std::uint64_t> counts(target_node.states.size(), 0);
    std::uint64_t accepted = 0;

    std::vector<int> states(net.nodes().size(), 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (int i : net.topological_order()) {
            const BnNode& node = net.nodes()[i];
            const std::vector<double>& row = node.cpt.rows[net.cpt_row_index(node, states)];
            const double u = next_uniform();
            double cumulative = 0.0;
            int drawn = static_cast<int>(row.size()) - 1;
            for (std::size_t k = 0; k < row.size(); ++k) {
                cumulative += row[k];
                if (u < cumulative) {
                    drawn = static_cast<int>(k);
                    break;
                }
            }
            states[i] = drawn;
        }
        bool consistent = true;
        for (const auto& [var, state] : evidence_states) {
            if (states[var] != state) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        ++accepted;
        ++counts[states[target_index]];
    }

    if (accepted == 0) {
        throw InsufficientSamplesError("all " + std::to_string(samples) +
                                       " samples were rejected by the evidence");
    }

    McDistribution out;
    out.states = target_node.states;
    out.samples = samples;
    out.accepted = accepted;
    const double n = static_cast<double>(accepted);
    for (std::uint64_t c : counts) {
        const double p = static_cast<double>(c) / n;
        out.estimate.push_back(p);
        out.std_error.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return out;
}

GeneratedCpt single_cause_cpt_rule(const std::vector<double>& parent_heps) {
    if (parent_heps.empty()) {
        throw ValidationError("CPT rule needs at least one parent probability");
    }
    if (parent_heps.size() > 22) {
        throw ValidationError("CPT rule limited to 22 parents, got " +
                              std::to_string(parent_heps.size()));
    }
    for (double p : parent_heps) {
        Probability{p};  // range check only
    }
    const std::size_t m = parent_heps.size();

    GeneratedCpt out;
    out.arity_extrapolated = (m != 2);
    out.cpt.rows.reserve(std::size_t{1} << m);

    // Parent states are binary with TRUE first, so bit k of the row number
    // (first parent in the high bit) is 1 when parent k is FALSE.
    for (std::size_t row = 0; row < (std::size_t{1} << m); ++row) {
        std::vector<std::size_t> failing;
        for (std::size_t k = 0; k < m; ++k) {
            const bool is_true = ((row >> (m - 1 - k)) & 1) == 0;
            if (is_true) failing.push_back(k);
        }
        double p_true = 0.0;
        if (m == 1) {
            p_true = failing.empty() ? 0.0 : parent_heps[0];
        } else if (failing.size() == m) {
            p_true = 1.0;
        } else if (failing.size() == 1) {
            p_true = parent_heps[failing[0]];
        } else if (!failing.empty()) {
            double none = 1.0;
            for (std::size_t k : failing) none *= 1.0 - parent_heps[k];
            p_true = 1.0 - none;
        }
        out.cpt.rows.push_back({p_true, 1.0 - p_true});
    }
    return out;
}

}  // namespace psrisk::bn
