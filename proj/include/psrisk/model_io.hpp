#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psrisk/bayes_net.hpp"
#include "psrisk/collab.hpp"
#include "psrisk/credal.hpp"
#include "psrisk/fault_tree.hpp"
#include "psrisk/lopa.hpp"

namespace psrisk::io {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Catalogs {
    std::vector<collab::PifRecord> pifs;
    std::vector<collab::AiFailureRecord> ai_failures;
};

// A parsed risk model. At least one section is present; the network section
// is either point-valued or interval-valued, never both.
struct ModelDocument {
    int format_version = kFormatVersion;
    std::optional<lopa::LopaScenario> lopa;
    std::optional<fta::FaultTree> fault_tree;
    std::optional<bn::BayesNet> bayes_net;
    std::optional<credal::CredalNet> credal_net;
    std::optional<Catalogs> catalogs;
};

struct ParseOptions {
    // Strict mode rejects unknown fields; lenient mode records a warning
    // and continues.
    bool strict = false;
    std::vector<std::string>* warnings = nullptr;
};

// Parses and fully validates a UTF-8 JSON model document. Syntax problems
// raise ParseError with a 1-based line/column; semantic problems raise
// ValidationError naming the offending element.
ModelDocument parse_model(const std::string& text, const ParseOptions& options = {});

// Canonical form: sorted keys, two-space indentation, probabilities in
// shortest round-trip scientific notation. parse(serialize(d)) == d, and
// semantically equal documents serialize byte-identically.
std::string serialize_model(const ModelDocument& document);

struct ResultState {
    std::string state;
    double lower = 0.0;
    double upper = 0.0;
};

struct ResultEntry {
    std::string query;
    std::string method;
    std::vector<ResultState> states;
    std::map<std::string, std::string> notes;
};

struct ResultDocument {
    std::string tool_version = kToolVersion;
    int format_version = kFormatVersion;
    std::string input_digest;
    std::vector<ResultEntry> entries;
};

// FNV-1a/64 fingerprint of a document's canonical text, as recorded in
// ResultDocument::input_digest.
std::string digest(const std::string& canonical_text);

std::string serialize_results(const ResultDocument& results);

enum class ExportFormat { Csv, SvgBar };

struct ExportOptions {
    bool log_scale = false;  // SVG bars only
};

// CSV with the fixed header query,state,lower,upper,method (RFC 4180), or a
// static SVG bar chart with one bar per result state.
std::string export_results(const ResultDocument& results, ExportFormat format,
                           const ExportOptions& options = {});

}  // namespace psrisk::io
