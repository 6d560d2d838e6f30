#include "fairmatch/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairmatch::io {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                             ": " + e.what(),
                         line, col);
    }
}

// Exact rational from a JSON token: integers directly, strings through
// the "num/den" grammar. Floating point never enters the ingest path.
Rational rational_from_json(const json& v, const std::string& origin, const std::string& where) {
    if (v.is_number_integer())
        return Rational(static_cast<long long>(v.get<std::int64_t>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float())
        throw ParseError(origin + ": " + where +
                         ": floating point is not accepted; write \"num/den\"");
    throw ParseError(origin + ": " + where + ": expected an integer or a \"num/den\" string");
}

RatVec vector_from_json(const json& arr, const std::string& origin, const std::string& where) {
    if (!arr.is_array()) throw ParseError(origin + ": " + where + ": expected an array");
    RatVec out;
    out.reserve(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k)
        out.push_back(rational_from_json(arr[k], origin, where + "[" + std::to_string(k) + "]"));
    return out;
}

const json& require_key(const json& doc, const char* key, const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end())
        throw ParseError(origin + ": missing key \"" + std::string(key) + "\"");
    return *it;
}

}  // namespace

Labels default_labels(int n_agents, int n_items) {
    Labels labels;
    for (int i = 0; i < n_agents; ++i) labels.agents.push_back("a" + std::to_string(i));
    for (int j = 0; j < n_items; ++j) labels.items.push_back("g" + std::to_string(j));
    return labels;
}

ParsedInstance parse_instance(const std::string& text, const std::string& origin) {
    json doc = parse_json(text, origin);
    if (!doc.is_object()) throw ParseError(origin + ": instance document must be an object");

    ParsedInstance out;
    const json& agents = require_key(doc, "agents", origin);
    const json& items = require_key(doc, "items", origin);
    if (!agents.is_array() || !items.is_array())
        throw ParseError(origin + ": \"agents\" and \"items\" must be arrays of names");
    for (const auto& a : agents) out.labels.agents.push_back(a.get<std::string>());
    for (const auto& g : items) out.labels.items.push_back(g.get<std::string>());

    const json& utilities = require_key(doc, "utilities", origin);
    if (!utilities.is_array())
        throw ParseError(origin + ": \"utilities\" must be a matrix");
    for (std::size_t i = 0; i < utilities.size(); ++i)
        out.instance.utilities.push_back(
            vector_from_json(utilities[i], origin, "utilities[" + std::to_string(i) + "]"));

    if (out.instance.utilities.size() != out.labels.agents.size())
        throw ParseError(origin + ": utilities row count != number of agents");
    for (const auto& row : out.instance.utilities)
        if (row.size() != out.labels.items.size())
            throw ParseError(origin + ": utilities column count != number of items");

    if (auto it = doc.find("demands"); it != doc.end())
        out.instance.demands = vector_from_json(*it, origin, "demands");

    out.instance = validate_instance(std::move(out.instance));
    return out;
}

ParsedInstance load_instance(const std::filesystem::path& path) {
    return parse_instance(read_file(path), path.string());
}

std::string serialize_instance(const Instance& inst, const Labels& labels) {
    nlohmann::ordered_json doc;
    doc["agents"] = labels.agents;
    doc["items"] = labels.items;
    json util = json::array();
    for (const auto& row : inst.utilities) {
        json r = json::array();
        for (const auto& u : row) r.push_back(fraction_string(u));
        util.push_back(r);
    }
    doc["utilities"] = util;
    json dem = json::array();
    for (const auto& d : inst.demands) dem.push_back(fraction_string(d));
    doc["demands"] = dem;
    return doc.dump(2) + "\n";
}

Allocation parse_allocation(const std::string& text, const std::string& origin) {
    json doc = parse_json(text, origin);
    const json& matrix =
        doc.is_object() ? require_key(doc, "allocation", origin) : doc;
    if (!matrix.is_array()) throw ParseError(origin + ": expected an allocation matrix");
    Allocation out;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        out.x.push_back(
            vector_from_json(matrix[i], origin, "allocation[" + std::to_string(i) + "]"));
    for (const auto& row : out.x)
        if (row.size() != out.x.front().size())
            throw ParseError(origin + ": ragged allocation matrix");
    return out;
}

Allocation load_allocation(const std::filesystem::path& path) {
    return parse_allocation(read_file(path), path.string());
}

std::string serialize_allocation(const Allocation& x) {
    nlohmann::ordered_json doc;
    json matrix = json::array();
    for (const auto& row : x.x) {
        json r = json::array();
        for (const auto& v : row) r.push_back(fraction_string(v));
        matrix.push_back(r);
    }
    doc["allocation"] = matrix;
    return doc.dump(2) + "\n";
}

RatVec parse_rational_vector(const std::string& text, const std::string& key,
                             const std::string& origin) {
    json doc = parse_json(text, origin);
    const json& arr = doc.is_object() ? require_key(doc, key.c_str(), origin) : doc;
    return vector_from_json(arr, origin, key);
}

PriceVector load_prices(const std::filesystem::path& path) {
    return PriceVector{parse_rational_vector(read_file(path), "prices", path.string())};
}

EarningsVector load_earnings(const std::filesystem::path& path) {
    return EarningsVector{parse_rational_vector(read_file(path), "earnings", path.string())};
}

std::string serialize_prices(const PriceVector& prices) {
    nlohmann::ordered_json doc;
    json arr = json::array();
    for (const auto& p : prices.p) arr.push_back(fraction_string(p));
    doc["prices"] = arr;
    return doc.dump(2) + "\n";
}

std::string serialize_earnings(const EarningsVector& earnings) {
    nlohmann::ordered_json doc;
    json arr = json::array();
    for (const auto& q : earnings.q) arr.push_back(fraction_string(q));
    doc["earnings"] = arr;
    return doc.dump(2) + "\n";
}

std::string instance_digest(const Instance& inst) {
    std::ostringstream canon;
    canon << inst.n_agents() << "x" << inst.n_items() << ";";
    for (const auto& row : inst.utilities)
        for (const auto& u : row) canon << fraction_string(u) << ",";
    canon << ";";
    for (const auto& d : inst.demands) canon << fraction_string(d) << ",";

    std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << h;
    return hex.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace fairmatch::io
