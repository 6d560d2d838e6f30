#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fairmatch/core.hpp"

namespace fairmatch::io {

/// Optional display names carried by instance files.
struct Labels {
    std::vector<std::string> agents;
    std::vector<std::string> items;
};

struct ParsedInstance {
    Instance instance;
    Labels labels;
};

/// Instance documents are JSON with keys: "agents" (names), "items"
/// (names), "utilities" (matrix of integers or "num/den" strings) and
/// optional "demands". Rationals parse exactly; floating-point tokens
/// are rejected. ParseError carries line/column when available.
ParsedInstance parse_instance(const std::string& text, const std::string& origin = "<string>");
ParsedInstance load_instance(const std::filesystem::path& path);
std::string serialize_instance(const Instance& inst, const Labels& labels);

Allocation parse_allocation(const std::string& text, const std::string& origin = "<string>");
Allocation load_allocation(const std::filesystem::path& path);
std::string serialize_allocation(const Allocation& x);

RatVec parse_rational_vector(const std::string& text, const std::string& key,
                             const std::string& origin = "<string>");
PriceVector load_prices(const std::filesystem::path& path);
EarningsVector load_earnings(const std::filesystem::path& path);
std::string serialize_prices(const PriceVector& prices);
std::string serialize_earnings(const EarningsVector& earnings);

/// FNV-1a 64-bit digest of the canonical instance serialization,
/// rendered as 16 hex digits. Stable across runs and platforms.
std::string instance_digest(const Instance& inst);

/// Writes via a temporary file in the same directory plus rename, so
/// readers never observe a half-written file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

Labels default_labels(int n_agents, int n_items);

}  // namespace fairmatch::io
