#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace clickmodel {

/// Malformed or inconsistent input data. Mapped to CLI exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric procedure cannot proceed (singular system, memory guard hit).
/// Mapped to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One query impression: the ranked documents shown and which were clicked.
/// Positions are the implicit 1-based indices into `docs`.
struct SessionRecord {
    std::string query;
    std::vector<std::string> docs;     // no duplicate ids within a record
    std::vector<std::uint8_t> clicks;  // same length as docs, 0 or 1
};

/// Aggregated (document, position) cell for one query.
/// `clicks` is fractional so that exact synthetic tables can carry the
/// model's true click probability; aggregation always produces integers.
struct Triple {
    std::string doc;
    int position = 0;  // 1-based
    std::int64_t impressions = 0;
    double clicks = 0.0;

    double ctr() const { return clicks / static_cast<double>(impressions); }
};

struct QueryTriples {
    std::vector<Triple> triples;
    /// Position-1 impressions, i.e. the number of issuances of the query.
    /// Used for frequency bucketing.
    std::int64_t frequency = 0;
};

/// Triples grouped by query. std::map keeps iteration deterministic.
struct TripleTable {
    std::map<std::string, QueryTriples> queries;

    std::size_t triple_count() const {
        std::size_t n = 0;
        for (const auto& [q, entry] : queries) n += entry.triples.size();
        return n;
    }
};

}  // namespace clickmodel
