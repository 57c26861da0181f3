#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "psrisk/collab.hpp"
#include "psrisk/model_io.hpp"
#include "psrisk/numfmt.hpp"
#include "support.hpp"

using namespace psrisk;
using namespace psrisk::io;

namespace {

ModelDocument fixture_lopa() {
    ModelDocument doc;
    doc.lopa = collab::reference_lopa_scenario();
    return doc;
}

ModelDocument fixture_fta() {
    ModelDocument doc;
    doc.fault_tree = collab::case_study_fault_tree();
    return doc;
}

ModelDocument fixture_collab() {
    ModelDocument doc;
    doc.credal_net = collab::build_collaboration_model(collab::ai_failure_defaults(),
                                                       collab::hep_defaults());
    return doc;
}

}  // namespace

TEST_CASE("scientific formatting round-trips and matches the table style") {
    CHECK(sci(1.25e-02) == "1.25E-02");
    CHECK(sci(1.0) == "1E+00");
    CHECK(sci(0.0) == "0E+00");
    CHECK(sci(8.15e-04) == "8.15E-04");
    CHECK(sci3(1.0000000000000001e-07) == "1.00E-07");

    std::mt19937_64 rng(7601);
    for (int i = 0; i < 2000; ++i) {
        const double v = testsup::uniform(rng) * std::pow(10.0, -(double)(rng() % 12));
        CHECK(std::strtod(sci(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("parse diagnostics") {
    // syntax error with a position
    try {
        parse_model("{\n  \"format_version\": 1,\n  broken\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 1);
    }

    CHECK_THROWS_AS(parse_model(""), ParseError);
    CHECK_THROWS_AS(parse_model("[1, 2]"), ValidationError);

    // no sections
    CHECK_THROWS_WITH_AS(parse_model("{\"format_version\": 1}"),
                         doctest::Contains("no sections"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_model("{\"format_version\": 7, \"lopa\": {}}"),
                         doctest::Contains("unsupported"), ValidationError);
    CHECK_THROWS_AS(parse_model("{\"lopa\": {}}"), ValidationError);
}

TEST_CASE("semantic errors name the offending element") {
    // CPT row that sums to 0.98
    const std::string bad_net = R"({
      "format_version": 1,
      "network": {"kind": "bayes", "nodes": [
        {"id": "X", "parents": [], "states": ["TRUE", "FALSE"], "cpt": [[0.49, 0.49]]}
      ]}
    })";
    CHECK_THROWS_WITH_AS(parse_model(bad_net), doctest::Contains("'X' CPT row 0"),
                         ValidationError);

    const std::string inverted = R"({
      "format_version": 1,
      "fault_tree": {
        "events": [{"id": "a", "probability": {"lower": 0.2, "upper": 0.1}}],
        "top": "a"
      }
    })";
    CHECK_THROWS_WITH_AS(parse_model(inverted), doctest::Contains("probability"),
                         ValidationError);

    const std::string cyclic = R"({
      "format_version": 1,
      "network": {"kind": "bayes", "nodes": [
        {"id": "A", "parents": ["B"], "cpt": [[0.5, 0.5], [0.5, 0.5]]},
        {"id": "B", "parents": ["A"], "cpt": [[0.5, 0.5], [0.5, 0.5]]}
      ]}
    })";
    CHECK_THROWS_WITH_AS(parse_model(cyclic), doctest::Contains("cycle"), ValidationError);
}

TEST_CASE("unknown fields: rejected in strict mode, warned in lenient mode") {
    const std::string text = R"({
      "format_version": 1,
      "surprise": true,
      "lopa": {
        "initiating_event": {"unit": "per_demand", "value": 1.0},
        "layers": [{"name": "L1", "kind": "control_loop", "pfd": 0.01}]
      }
    })";
    ParseOptions strict;
    strict.strict = true;
    CHECK_THROWS_WITH_AS(parse_model(text, strict), doctest::Contains("surprise"),
                         ValidationError);

    std::vector<std::string> warnings;
    ParseOptions lenient;
    lenient.warnings = &warnings;
    const ModelDocument doc = parse_model(text, lenient);
    CHECK(doc.lopa.has_value());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("surprise") != std::string::npos);
}

TEST_CASE("shipped models round-trip byte for byte") {
    for (const ModelDocument& doc : {fixture_lopa(), fixture_fta(), fixture_collab()}) {
        const std::string text = serialize_model(doc);
        const ModelDocument reparsed = parse_model(text);
        CHECK(serialize_model(reparsed) == text);
    }
}

TEST_CASE("catalog round-trip preserves every interval bit for bit") {
    ModelDocument doc;
    doc.catalogs = Catalogs{collab::idheas_pif_catalog(), collab::ai_failure_defaults()};
    const std::string text = serialize_model(doc);
    const ModelDocument reparsed = parse_model(text);
    REQUIRE(reparsed.catalogs.has_value());
    REQUIRE(reparsed.catalogs->pifs.size() == 20);
    REQUIRE(reparsed.catalogs->ai_failures.size() == 10);

    std::map<std::string, std::optional<ProbInterval>> original;
    for (const collab::PifRecord& r : doc.catalogs->pifs) original[r.name] = r.hep;
    for (const collab::PifRecord& r : reparsed.catalogs->pifs) {
        REQUIRE(original.count(r.name) == 1);
        const auto& expected = original.at(r.name);
        CHECK(r.hep.has_value() == expected.has_value());
        if (r.hep) {
            CHECK(r.hep->lower() == expected->lower());
            CHECK(r.hep->upper() == expected->upper());
        }
    }
    std::map<std::string, ProbInterval> ai;
    for (const collab::AiFailureRecord& r : doc.catalogs->ai_failures) {
        ai.emplace(r.failure_type, r.probability);
    }
    for (const collab::AiFailureRecord& r : reparsed.catalogs->ai_failures) {
        CHECK(r.probability == ai.at(r.failure_type));
    }
}

TEST_CASE("the fault-tree fixture evaluates to the published number after a round trip") {
    const ModelDocument doc = parse_model(serialize_model(fixture_fta()));
    REQUIRE(doc.fault_tree.has_value());
    const double rare = fta::evaluate(*doc.fault_tree, fta::EvaluationMode::RareEvent).value();
    CHECK(std::abs(rare - 8.15e-04) / 8.15e-04 < 0.005);
}

TEST_CASE("generated corpus round-trips") {
    std::mt19937_64 rng(7602);
    for (int i = 0; i < 60; ++i) {
        ModelDocument doc;
        switch (i % 4) {
            case 0: {
                lopa::LopaScenario s;
                s.initiating_event = {(rng() % 2) ? lopa::DemandUnit::PerDemand
                                                  : lopa::DemandUnit::PerYear,
                                      (rng() % 2) ? testsup::uniform(rng)
                                                  : testsup::uniform(rng) * 3.0};
                if (s.initiating_event.unit == lopa::DemandUnit::PerDemand) {
                    s.initiating_event.value = testsup::uniform(rng);
                }
                const int n = static_cast<int>(rng() % 5);
                for (int k = 0; k < n; ++k) {
                    const double a = testsup::uniform(rng);
                    const double b = testsup::uniform(rng);
                    s.layers.push_back(lopa::ProtectionLayer{
                        "layer " + std::to_string(k),
                        (k % 2) ? lopa::IplKind::custom("special #" + std::to_string(k))
                                : lopa::IplKind::of(lopa::IplClass::Sis),
                        ProbInterval(std::min(a, b), std::max(a, b))});
                }
                doc.lopa = std::move(s);
                break;
            }
            case 1:
                doc.fault_tree = testsup::random_tree(rng, 10);
                break;
            case 2: {
                bn::BayesNet net = testsup::random_binary_net(rng, 8);
                doc.bayes_net = std::move(net);
                break;
            }
            case 3:
                doc.credal_net = testsup::random_credal_net(rng, 4);
                break;
        }
        const std::string text = serialize_model(doc);
        const ModelDocument reparsed = parse_model(text);
        CHECK(serialize_model(reparsed) == text);
    }
}

TEST_CASE("fuzzed byte strings never crash the parser") {
    std::mt19937_64 rng(7603);
    int diagnostics = 0;
    for (int i = 0; i < 3000; ++i) {
        const std::size_t len = rng() % 120;
        std::string text;
        for (std::size_t k = 0; k < len; ++k) {
            text += static_cast<char>(rng() % 256);
        }
        try {
            parse_model(text);
        } catch (const ParseError&) {
            ++diagnostics;
        } catch (const ValidationError&) {
            ++diagnostics;
        }
    }
    CHECK(diagnostics > 0);

    // structured mutations of a valid document
    const std::string base = serialize_model(fixture_fta());
    for (int i = 0; i < 2000; ++i) {
        std::string text = base;
        const int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            text[rng() % text.size()] = static_cast<char>(rng() % 256);
        }
        try {
            parse_model(text);
        } catch (const ParseError&) {
        } catch (const ValidationError&) {
        }
    }
}

TEST_CASE("csv export") {
    ResultDocument results;
    results.input_digest = digest("x");
    ResultEntry entry;
    entry.query = "lopa";
    entry.method = "ladder";
    for (const std::string& s : lopa::consequence_state_names()) {
        entry.states.push_back({s, 0.25, 0.5});
    }
    results.entries.push_back(entry);

    const std::string csv = export_results(results, ExportFormat::Csv);
    CHECK(csv.substr(0, 36) == "query,state,lower,upper,method\r\nlopa");
    std::size_t rows = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) {
        ++rows;
    }
    CHECK(rows == 6);  // header + five states

    // quoting
    ResultDocument quoted = results;
    quoted.entries[0].states[0].state = "a,b\"c";
    const std::string qcsv = export_results(quoted, ExportFormat::Csv);
    CHECK(qcsv.find("\"a,b\"\"c\"") != std::string::npos);

    CHECK_THROWS_AS(export_results(ResultDocument{}, ExportFormat::Csv), ValidationError);
}

TEST_CASE("svg export") {
    ResultDocument results;
    ResultEntry entry;
    entry.query = "bounds";
    entry.method = "two-corner";
    entry.states.push_back({"safe&sound", 0.9, 0.97});
    entry.states.push_back({"accident", 4.0e-06, 3.7e-04});
    results.entries.push_back(entry);

    const std::string svg = export_results(results, ExportFormat::SvgBar);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("safe&amp;sound") != std::string::npos);
    std::size_t rects = 0;
    for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos; ++pos) {
        ++rects;
    }
    CHECK(rects == 3);  // background + one bar per state

    const std::string log_svg =
        export_results(results, ExportFormat::SvgBar, ExportOptions{true});
    CHECK(log_svg != svg);

    // byte determinism
    CHECK(export_results(results, ExportFormat::SvgBar) == svg);
}

TEST_CASE("result documents serialize deterministically") {
    ResultDocument results;
    results.input_digest = digest("abc");
    ResultEntry entry;
    entry.query = "fta";
    entry.method = "exact";
    entry.states.push_back({"top", 8.0646722180189861e-04, 8.0646722180189861e-04});
    entry.notes["seed"] = "1";
    results.entries.push_back(entry);

    const std::string a = serialize_results(results);
    const std::string b = serialize_results(results);
    CHECK(a == b);
    CHECK(a.find("fnv1a64:") != std::string::npos);
    CHECK(digest("abc") != digest("abd"));
}

TEST_CASE("semantically equal documents canonicalize to identical bytes") {
    const std::string forward = R"({
      "format_version": 1,
      "network": {"kind": "bayes", "nodes": [
        {"id": "A", "parents": [], "cpt": [[0.5, 0.5]]},
        {"id": "B", "parents": ["A"], "cpt": [[0.8, 0.2], [0.2, 0.8]]}
      ]}
    })";
    const std::string shuffled = R"({
      "network": {"nodes": [
        {"cpt": [[0.8, 0.2], [0.2, 0.8]], "parents": ["A"], "states": ["TRUE", "FALSE"], "id": "B"},
        {"id": "A", "cpt": [[0.5, 0.5]]}
      ], "kind": "bayes"},
      "format_version": 1
    })";
    CHECK(serialize_model(parse_model(forward)) == serialize_model(parse_model(shuffled)));

    // number shorthand for degenerate credal entries canonicalizes to objects
    const std::string shorthand = R"({
      "format_version": 1,
      "network": {"kind": "credal", "nodes": [
        {"id": "A", "cpt": [[{"lower": 0.1, "upper": 0.3}, {"lower": 0.7, "upper": 0.9}]]},
        {"id": "B", "parents": ["A"], "cpt": [[0.2, 0.8], [{"lower": 0.4, "upper": 0.4}, 0.6]]}
      ]}
    })";
    const ModelDocument doc = parse_model(shorthand);
    REQUIRE(doc.credal_net.has_value());
    const std::string text = serialize_model(doc);
    CHECK(text.find("\"lower\": 2E-01") != std::string::npos);
    CHECK(serialize_model(parse_model(text)) == text);
}

TEST_CASE("pathological inputs stay diagnostics, not crashes") {
    // deep nesting is rejected before the recursive parser sees it
    const std::string deep(200000, '[');
    CHECK_THROWS_AS(parse_model(deep), ParseError);
    const std::string deep_obj = std::string(100000, '{') + "\"a\":1" + std::string(100000, '}');
    CHECK_THROWS_AS(parse_model(deep_obj), ParseError);
    // brackets inside strings do not count toward the depth
    CHECK_THROWS_WITH_AS(parse_model("{\"format_version\": 1, \"x\": \"[[[[[[\"}"),
                         doctest::Contains("no sections"), ValidationError);

    // a parent list wide enough to wrap the row-count arithmetic
    std::string nodes;
    std::string parents;
    for (int i = 0; i < 70; ++i) {
        nodes += "{\"id\": \"p" + std::to_string(i) + "\", \"cpt\": [[0.5, 0.5]]},";
        if (i) parents += ",";
        parents += "\"p" + std::to_string(i) + "\"";
    }
    const std::string wide = "{\"format_version\": 1, \"network\": {\"kind\": \"bayes\", "
                             "\"nodes\": [" + nodes + "{\"id\": \"kid\", \"parents\": [" +
                             parents + "], \"cpt\": []}]}}";
    CHECK_THROWS_WITH_AS(parse_model(wide), doctest::Contains("rows"), ValidationError);
}
