#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clickmodel/io.hpp"
#include "clickmodel/types.hpp"

namespace clickmodel {

/// Session log line format: query_id<TAB>doc1,doc2,...<TAB>c1,c2,...
/// with c in {0,1}. Blank and `#` lines are skipped. Malformed lines
/// (field count, click flags, duplicate doc) raise DataError with the
/// line number.
std::vector<SessionRecord> parse_session_log(std::istream& in);

void write_session_log(std::ostream& out, const std::vector<SessionRecord>& sessions,
                       const MetaHeader* meta = nullptr);

struct AggregateOptions {
    std::int64_t min_impressions = 100;
    bool drop_zero_clicks = true;
};

/// Streaming (query, doc, position) counter. Sessions can be added in any
/// order or in shards; finish() produces a deterministic table.
class Aggregator {
  public:
    void add(const SessionRecord& session);
    void merge(const Aggregator& other);
    TripleTable finish(const AggregateOptions& options) const;

  private:
    struct Cell {
        std::int64_t impressions = 0;
        std::int64_t clicks = 0;
    };
    struct QueryCounts {
        std::unordered_map<std::string, std::vector<Cell>> docs;  // position-1 indexed
        std::int64_t sessions = 0;
    };
    std::unordered_map<std::string, QueryCounts> queries_;
};

TripleTable aggregate(const std::vector<SessionRecord>& sessions,
                      const AggregateOptions& options);

/// Impression-weighted train/test split. Every query with >= 2 triples
/// contributes at least one test triple; single-triple queries stay in
/// train. Deterministic given the seed.
std::pair<TripleTable, TripleTable> split_train_test(const TripleTable& table,
                                                     double test_fraction,
                                                     std::uint64_t seed);

/// Triple file format: query_id<TAB>doc_id<TAB>position<TAB>impressions<TAB>clicks.
/// Reading recomputes per-query frequency as the sum of surviving
/// position-1 impressions.
TripleTable read_triples(std::istream& in);
void write_triples(std::ostream& out, const TripleTable& table,
                   const MetaHeader* meta = nullptr);

TripleTable read_triples_file(const std::string& path);
void write_triples_file(const std::string& path, const TripleTable& table,
                        const MetaHeader* meta = nullptr);

}  // namespace clickmodel
