#include <cmath>
#include <random>

#include "doctest.h"
#include "psrisk/credal.hpp"
#include "support.hpp"

using namespace psrisk;
using namespace psrisk::credal;

namespace {

CrNode leaf(const std::string& id, const ProbInterval& p) {
    CrNode node;
    node.id = id;
    node.rows = {CredalRow{{p, interval_complement(p)}}};
    return node;
}

}  // namespace

TEST_CASE("credal row validation") {
    // binary entries must be complements
    CrNode bad = leaf("A", ProbInterval(0.1, 0.2));
    bad.rows[0].entries[1] = ProbInterval(0.7, 0.8);
    CHECK_THROWS_AS(CredalNet({bad}), ValidationError);

    // at most one free interval in a wider row
    CrNode wide;
    wide.id = "W";
    wide.states = {"a", "b", "c"};
    wide.rows = {CredalRow{{ProbInterval(0.1, 0.2), ProbInterval(0.1, 0.3),
                            ProbInterval::point(0.5)}}};
    CHECK_THROWS_AS(CredalNet({wide}), ValidationError);

    // remainder must absorb the free entry at its lower bound
    CrNode off;
    off.id = "O";
    off.states = {"a", "b", "c"};
    off.rows = {CredalRow{{ProbInterval(0.1, 0.2), ProbInterval::point(0.5),
                           ProbInterval::point(0.3)}}};
    CHECK_THROWS_AS(CredalNet({off}), ValidationError);

    // well-formed multi-state row: 0.1 free, others carry 0.9
    CrNode ok;
    ok.id = "K";
    ok.states = {"a", "b", "c"};
    ok.rows = {CredalRow{{ProbInterval(0.1, 0.4), ProbInterval::point(0.6),
                          ProbInterval::point(0.3)}}};
    CHECK_NOTHROW(CredalNet({ok}));

    // cycles surface through corner instantiation
    CrNode x = leaf("X", ProbInterval::point(0.5));
    x.parents = {"Y"};
    x.rows = {x.rows[0], x.rows[0]};
    CrNode y = leaf("Y", ProbInterval::point(0.5));
    y.parents = {"X"};
    y.rows = {y.rows[0], y.rows[0]};
    CHECK_THROWS_AS(CredalNet({x, y}), ValidationError);
}

TEST_CASE("corner instantiation") {
    const CredalNet net({leaf("A", ProbInterval(0.1, 0.2))});
    CHECK(free_parameters(net) == std::vector<std::string>{"A[0]"});

    const bn::BayesNet lower = instantiate_corner(net, all_lower_corner(net));
    CHECK(lower.node("A").cpt.rows[0][0] == 0.1);
    const bn::BayesNet upper = instantiate_corner(net, all_upper_corner(net));
    CHECK(upper.node("A").cpt.rows[0][0] == 0.2);

    CHECK_THROWS_AS(instantiate_corner(net, {}), ValidationError);
    CornerSelection stray = all_lower_corner(net);
    stray["B[0]"] = Endpoint::Lower;
    CHECK_THROWS_AS(instantiate_corner(net, stray), ValidationError);

    // all intervals degenerate: the unique point network, any selection
    const CredalNet fixed({leaf("A", ProbInterval::point(0.3))});
    CHECK(free_parameters(fixed).empty());
    const bn::BayesNet p = instantiate_corner(fixed, {});
    CHECK(p.node("A").cpt.rows[0][0] == 0.3);
}

TEST_CASE("multi-state rows scale the remainder proportionally") {
    CrNode ok;
    ok.id = "K";
    ok.states = {"a", "b", "c"};
    ok.rows = {CredalRow{{ProbInterval(0.1, 0.4), ProbInterval::point(0.6),
                          ProbInterval::point(0.3)}}};
    const CredalNet net({ok});

    const bn::BayesNet upper = instantiate_corner(net, all_upper_corner(net));
    const std::vector<double>& row = upper.node("K").cpt.rows[0];
    CHECK(row[0] == doctest::Approx(0.4).epsilon(1e-12));
    // 0.6 : 0.3 keeps its 2 : 1 split across the remaining 0.6 of mass
    CHECK(row[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(row[2] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(row[0] + row[1] + row[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-corner bounds") {
    const CredalNet net({leaf("A", ProbInterval(0.1, 0.2))});
    const ScenarioBounds b = two_corner_bounds(net, "A", {});
    CHECK(b.method == "two-corner");
    CHECK(b.at("TRUE").best == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(b.at("TRUE").worst == doctest::Approx(0.2).epsilon(1e-12));

    const CredalNet fixed({leaf("A", ProbInterval::point(0.3))});
    const ScenarioBounds f = two_corner_bounds(fixed, "A", {});
    CHECK(f.at("TRUE").best == f.at("TRUE").worst);
    CHECK(f.at("TRUE").best == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("corner enumeration") {
    // no free parameters: point marginal on both sides
    const CredalNet fixed({leaf("A", ProbInterval::point(0.3))});
    const ScenarioBounds f = corner_enumeration_bounds(fixed, "A", {});
    CHECK(f.at("TRUE").best == f.at("TRUE").worst);

    // a single parameter behaves exactly like the two corners
    const CredalNet one({leaf("A", ProbInterval(0.1, 0.2))});
    const ScenarioBounds e = corner_enumeration_bounds(one, "A", {});
    const ScenarioBounds t = two_corner_bounds(one, "A", {});
    CHECK(e.at("TRUE").best == t.at("TRUE").best);
    CHECK(e.at("TRUE").worst == t.at("TRUE").worst);

    // refusal carries the parameter count
    std::mt19937_64 rng(7501);
    const CredalNet big = testsup::random_credal_net(rng, 6);
    CHECK_THROWS_WITH_AS(corner_enumeration_bounds(big, big.nodes()[0].id, {}, 5),
                         doctest::Contains("6 parameters"), ValidationError);
}

TEST_CASE("enumeration bounds contain interior-point marginals") {
    std::mt19937_64 rng(7502);
    for (int rep = 0; rep < 12; ++rep) {
        const int n_params = 3 + static_cast<int>(rng() % 4);
        const CredalNet net = testsup::random_credal_net(rng, n_params);
        const std::string target = net.nodes()[rng() % net.nodes().size()].id;

        const ScenarioBounds envelope = corner_enumeration_bounds(net, target, {});
        const ScenarioBounds corners = two_corner_bounds(net, target, {});
        const std::vector<std::string> keys = free_parameters(net);

        for (const StateBound& sb : envelope.bounds) {
            const StateBound& tc = corners.at(sb.state);
            CHECK(sb.best <= std::min(tc.best, tc.worst) + 1e-15);
            CHECK(sb.worst >= std::max(tc.best, tc.worst) - 1e-15);
        }

        for (int draw = 0; draw < 25; ++draw) {
            std::map<std::string, double> t;
            for (const std::string& key : keys) t[key] = testsup::uniform(rng);
            const bn::StateDistribution interior =
                bn::infer_marginal(testsup::instantiate_interior(net, t), target, {});
            for (std::size_t s = 0; s < interior.states.size(); ++s) {
                const StateBound& sb = envelope.at(interior.states[s]);
                CHECK(interior.p[s] >= sb.best - 1e-12);
                CHECK(interior.p[s] <= sb.worst + 1e-12);
            }
        }
    }
}

TEST_CASE("degenerate networks agree with point inference everywhere") {
    std::mt19937_64 rng(7503);
    const bn::BayesNet point = testsup::random_binary_net(rng, 6);
    std::vector<CrNode> nodes;
    for (const bn::BnNode& b : point.nodes()) {
        CrNode c;
        c.id = b.id;
        c.states = b.states;
        c.parents = b.parents;
        for (const std::vector<double>& row : b.cpt.rows) {
            c.rows.push_back(CredalRow{
                {ProbInterval::point(row[0]), ProbInterval::point(row[1])}});
        }
        nodes.push_back(std::move(c));
    }
    const CredalNet net(std::move(nodes));
    const std::string target = point.nodes()[0].id;

    const bn::StateDistribution expected = bn::infer_marginal(point, target, {});
    const ScenarioBounds two = two_corner_bounds(net, target, {});
    const ScenarioBounds full = corner_enumeration_bounds(net, target, {});
    for (std::size_t s = 0; s < expected.states.size(); ++s) {
        const double e = expected.p[s];
        CHECK(std::abs(two.at(expected.states[s]).best - e) <= 1e-12);
        CHECK(std::abs(two.at(expected.states[s]).worst - e) <= 1e-12);
        CHECK(std::abs(full.at(expected.states[s]).best - e) <= 1e-12);
        CHECK(std::abs(full.at(expected.states[s]).worst - e) <= 1e-12);
    }
}
