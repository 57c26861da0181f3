#pragma once

// Shared test helpers: independent oracles (joint enumeration, truth tables)
// and random model generators. Everything here stays deliberately separate
// from the library's own evaluation paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "psrisk/bayes_net.hpp"
#include "psrisk/credal.hpp"
#include "psrisk/fault_tree.hpp"
#include "psrisk/prob.hpp"

namespace testsup {

using psrisk::ProbInterval;
namespace bn = psrisk::bn;
namespace fta = psrisk::fta;
namespace credal = psrisk::credal;

inline double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Bayesian-network oracle: full joint enumeration with its own row
// arithmetic (first-parent-major, matching the documented CPT convention).

inline double oracle_joint(const bn::BayesNet& net, const std::vector<int>& states) {
    double product = 1.0;
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        const bn::BnNode& node = net.nodes()[i];
        std::size_t row = 0;
        for (const std::string& parent : node.parents) {
            const std::size_t pi = static_cast<std::size_t>(net.index_of(parent));
            row = row * net.nodes()[pi].states.size() +
                  static_cast<std::size_t>(states[pi]);
        }
        product *= node.cpt.rows[row][static_cast<std::size_t>(states[i])];
    }
    return product;
}

inline std::vector<double> oracle_marginal(const bn::BayesNet& net, const std::string& target,
                                           const bn::Evidence& evidence) {
    const std::size_t n = net.nodes().size();
    std::vector<int> cards(n);
    for (std::size_t i = 0; i < n; ++i) {
        cards[i] = static_cast<int>(net.nodes()[i].states.size());
    }
    std::vector<std::pair<std::size_t, int>> pinned;
    for (const auto& [id, state] : evidence) {
        const std::size_t i = static_cast<std::size_t>(net.index_of(id));
        pinned.emplace_back(i, bn::BayesNet::state_index(net.nodes()[i], state));
    }
    const std::size_t ti = static_cast<std::size_t>(net.index_of(target));

    std::vector<double> sums(static_cast<std::size_t>(cards[ti]), 0.0);
    std::vector<int> states(n, 0);
    while (true) {
        bool consistent = true;
        for (const auto& [i, s] : pinned) {
            if (states[i] != s) {
                consistent = false;
                break;
            }
        }
        if (consistent) {
            sums[static_cast<std::size_t>(states[ti])] += oracle_joint(net, states);
        }
        std::size_t k = n;
        while (k-- > 0) {
            if (++states[k] < cards[k]) break;
            states[k] = 0;
            if (k == 0) {
                double z = 0.0;
                for (double v : sums) z += v;
                for (double& v : sums) v /= z;
                return sums;
            }
        }
        if (n == 0) break;
    }
    return sums;
}

// Random binary network: node i may take parents among nodes 0..i-1.
inline bn::BayesNet random_binary_net(std::mt19937_64& rng, int max_nodes,
                                      int max_parents = 3) {
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes));
    std::vector<bn::BnNode> nodes;
    for (int i = 0; i < n; ++i) {
        bn::BnNode node;
        node.id = "n" + std::to_string(i);
        std::vector<int> candidates;
        for (int j = 0; j < i; ++j) candidates.push_back(j);
        std::shuffle(candidates.begin(), candidates.end(), rng);
        const int k = std::min<int>(max_parents, static_cast<int>(rng() % 3));
        for (int j = 0; j < std::min<int>(k, static_cast<int>(candidates.size())); ++j) {
            node.parents.push_back("n" + std::to_string(candidates[j]));
        }
        const std::size_t rows = std::size_t{1} << node.parents.size();
        for (std::size_t r = 0; r < rows; ++r) {
            const double p = uniform(rng);
            node.cpt.rows.push_back({p, 1.0 - p});
        }
        nodes.push_back(std::move(node));
    }
    return bn::BayesNet(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Fault-tree oracles: truth-table expectation and minimal cut sets by
// exhaustive subset search. Both assume every leaf is a distinct event.

inline bool oracle_holds(const fta::Node& node, const std::map<std::string, bool>& states) {
    if (node.type == fta::Node::Type::BasicEvent) {
        return states.at(node.event_id);
    }
    bool acc = node.gate == fta::GateKind::And;
    for (const fta::Node& child : node.children) {
        const bool v = oracle_holds(child, states);
        acc = node.gate == fta::GateKind::And ? (acc && v) : (acc || v);
    }
    return acc;
}

inline double oracle_truth_table(const fta::FaultTree& tree) {
    std::vector<std::string> ids;
    std::vector<double> probs;
    for (const auto& [id, record] : tree.events) {
        ids.push_back(id);
        probs.push_back(record.point_probability());
    }
    const std::size_t n = ids.size();
    double expectation = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::map<std::string, bool> states;
        double weight = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool on = (mask >> k) & 1;
            states[ids[k]] = on;
            weight *= on ? probs[k] : 1.0 - probs[k];
        }
        if (oracle_holds(tree.top, states)) {
            expectation += weight;
        }
    }
    return expectation;
}

inline std::set<std::set<std::string>> oracle_cut_sets(const fta::FaultTree& tree) {
    std::vector<std::string> ids;
    for (const auto& [id, record] : tree.events) ids.push_back(id);
    const std::size_t n = ids.size();

    std::vector<std::set<std::string>> implying;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::map<std::string, bool> states;
        std::set<std::string> on;
        for (std::size_t k = 0; k < n; ++k) {
            const bool bit = (mask >> k) & 1;
            states[ids[k]] = bit;
            if (bit) on.insert(ids[k]);
        }
        if (oracle_holds(tree.top, states)) {
            implying.push_back(std::move(on));
        }
    }
    std::set<std::set<std::string>> minimal;
    for (const std::set<std::string>& candidate : implying) {
        bool is_minimal = true;
        for (const std::set<std::string>& other : implying) {
            if (other.size() < candidate.size() &&
                std::includes(candidate.begin(), candidate.end(), other.begin(),
                              other.end())) {
                is_minimal = false;
                break;
            }
        }
        if (is_minimal) minimal.insert(candidate);
    }
    return minimal;
}

// Probability that at least one cut set occurs, by inclusion-exclusion.
inline double oracle_inclusion_exclusion(const std::set<std::set<std::string>>& cuts,
                                         const std::map<std::string, double>& probs) {
    std::vector<std::set<std::string>> list(cuts.begin(), cuts.end());
    const std::size_t m = list.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        std::set<std::string> events;
        int bits = 0;
        for (std::size_t k = 0; k < m; ++k) {
            if ((mask >> k) & 1) {
                ++bits;
                events.insert(list[k].begin(), list[k].end());
            }
        }
        double p = 1.0;
        for (const std::string& id : events) p *= probs.at(id);
        total += (bits % 2 == 1) ? p : -p;
    }
    return total;
}

struct TreeGen {
    std::mt19937_64& rng;
    fta::FaultTree& tree;
    int next_id = 0;
    int budget;

    fta::Node leaf(double max_p) {
        const std::string id = "e" + std::to_string(next_id++);
        psrisk::FailureRecord record;
        record.component_id = id;
        record.probability = ProbInterval::point(uniform(rng) * max_p);
        record.source = "generated";
        tree.events[id] = record;
        return fta::Node::basic(id);
    }

    fta::Node node(int depth, double max_p) {
        if (depth >= 3 || budget <= 1 || uniform(rng) < 0.35) {
            --budget;
            return leaf(max_p);
        }
        const int width = 2 + static_cast<int>(rng() % 3);
        std::vector<fta::Node> children;
        for (int i = 0; i < width && budget > 0; ++i) {
            children.push_back(node(depth + 1, max_p));
        }
        return fta::Node::gate_of(uniform(rng) < 0.5 ? fta::GateKind::And : fta::GateKind::Or,
                                  std::move(children));
    }
};

// Random coherent tree, every leaf a distinct event, <= max_events leaves.
inline fta::FaultTree random_tree(std::mt19937_64& rng, int max_events, double max_p = 1.0) {
    fta::FaultTree tree;
    TreeGen gen{rng, tree, 0, max_events};
    tree.top = gen.node(0, max_p);
    tree.validate();
    return tree;
}

// ---------------------------------------------------------------------------
// Credal helpers: random interval networks (binary rows only) and an
// interior-point instantiation independent of the library's corner path.

inline credal::CredalNet random_credal_net(std::mt19937_64& rng, int n_params,
                                           int extra_nodes = 2) {
    const int n = n_params + static_cast<int>(rng() % (extra_nodes + 1));
    std::vector<credal::CrNode> nodes;
    int intervals_left = n_params;
    for (int i = 0; i < n; ++i) {
        credal::CrNode node;
        node.id = "n" + std::to_string(i);
        if (i > 0 && (rng() % 2) == 0) {
            node.parents.push_back("n" + std::to_string(rng() % static_cast<std::uint64_t>(i)));
        }
        const std::size_t rows = std::size_t{1} << node.parents.size();
        for (std::size_t r = 0; r < rows; ++r) {
            const double p = 0.05 + 0.9 * uniform(rng);
            // spend interval parameters greedily so the count is exact
            if (intervals_left > 0) {
                --intervals_left;
                const double width = 0.05 + 0.2 * uniform(rng);
                const double lo = std::max(0.0, p - width / 2);
                const double hi = std::min(1.0, p + width / 2);
                node.rows.push_back(credal::CredalRow{
                    {ProbInterval(lo, hi), psrisk::interval_complement(ProbInterval(lo, hi))}});
            } else {
                node.rows.push_back(credal::CredalRow{
                    {ProbInterval::point(p), ProbInterval::point(1.0 - p)}});
            }
        }
        nodes.push_back(std::move(node));
    }
    credal::CredalNet net{std::move(nodes)};
    if (credal::free_parameters(net).size() != static_cast<std::size_t>(n_params)) {
        // fewer rows than requested parameters; retry with one more node
        return random_credal_net(rng, n_params, extra_nodes + 1);
    }
    return net;
}

// Point network with every free binary parameter at lower + t*(upper-lower).
inline bn::BayesNet instantiate_interior(const credal::CredalNet& net,
                                         const std::map<std::string, double>& t_by_key) {
    std::vector<bn::BnNode> nodes;
    for (const credal::CrNode& cn : net.nodes()) {
        bn::BnNode node;
        node.id = cn.id;
        node.states = cn.states;
        node.parents = cn.parents;
        for (std::size_t r = 0; r < cn.rows.size(); ++r) {
            const credal::CredalRow& row = cn.rows[r];
            const int free = credal::CredalNet::free_state(row);
            if (free < 0) {
                std::vector<double> values;
                for (const ProbInterval& e : row.entries) values.push_back(e.lower());
                node.cpt.rows.push_back(std::move(values));
                continue;
            }
            const ProbInterval& span = row.entries[static_cast<std::size_t>(free)];
            const double t = t_by_key.at(credal::parameter_key(cn.id, r));
            const double v = span.lower() + t * (span.upper() - span.lower());
            std::vector<double> values(2, 0.0);
            values[static_cast<std::size_t>(free)] = v;
            values[static_cast<std::size_t>(1 - free)] = 1.0 - v;
            node.cpt.rows.push_back(std::move(values));
        }
        nodes.push_back(std::move(node));
    }
    return bn::BayesNet(std::move(nodes));
}

}  // namespace testsup
