#include "clickmodel/clicklog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "clickmodel/rng.hpp"

namespace clickmodel {

std::vector<SessionRecord> parse_session_log(std::istream& in) {
    std::vector<SessionRecord> sessions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable_line(line)) continue;
        auto fields = split_fields(line, '\t');
        if (fields.size() != 3)
            throw DataError("line " + std::to_string(line_no) + ": expected 3 tab-separated fields, got " +
                            std::to_string(fields.size()));
        SessionRecord rec;
        rec.query = std::string(fields[0]);
        if (rec.query.empty())
            throw DataError("line " + std::to_string(line_no) + ": empty query id");
        auto docs = split_fields(fields[1], ',');
        auto clicks = split_fields(fields[2], ',');
        if (docs.size() != clicks.size())
            throw DataError("line " + std::to_string(line_no) + ": " + std::to_string(docs.size()) +
                            " docs but " + std::to_string(clicks.size()) + " click flags");
        std::unordered_set<std::string_view> seen;
        rec.docs.reserve(docs.size());
        rec.clicks.reserve(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (docs[i].empty())
                throw DataError("line " + std::to_string(line_no) + ": empty doc id");
            if (!seen.insert(docs[i]).second)
                throw DataError("line " + std::to_string(line_no) + ": duplicate document '" +
                                std::string(docs[i]) + "'");
            if (clicks[i] == "0")
                rec.clicks.push_back(0);
            else if (clicks[i] == "1")
                rec.clicks.push_back(1);
            else
                throw DataError("line " + std::to_string(line_no) + ": click flag '" +
                                std::string(clicks[i]) + "' not in {0,1}");
            rec.docs.emplace_back(docs[i]);
        }
        sessions.push_back(std::move(rec));
    }
    return sessions;
}

void write_session_log(std::ostream& out, const std::vector<SessionRecord>& sessions,
                       const MetaHeader* meta) {
    if (meta) out << meta_comment(*meta) << '\n';
    for (const auto& s : sessions) {
        out << s.query << '\t';
        for (std::size_t i = 0; i < s.docs.size(); ++i) {
            if (i) out << ',';
            out << s.docs[i];
        }
        out << '\t';
        for (std::size_t i = 0; i < s.clicks.size(); ++i) {
            if (i) out << ',';
            out << (s.clicks[i] ? '1' : '0');
        }
        out << '\n';
    }
}

void Aggregator::add(const SessionRecord& session) {
    auto& q = queries_[session.query];
    q.sessions += 1;
    for (std::size_t i = 0; i < session.docs.size(); ++i) {
        auto& cells = q.docs[session.docs[i]];
        if (cells.size() <= i) cells.resize(i + 1);
        cells[i].impressions += 1;
        cells[i].clicks += session.clicks[i] ? 1 : 0;
    }
}

void Aggregator::merge(const Aggregator& other) {
    for (const auto& [query, counts] : other.queries_) {
        auto& q = queries_[query];
        q.sessions += counts.sessions;
        for (const auto& [doc, cells] : counts.docs) {
            auto& mine = q.docs[doc];
            if (mine.size() < cells.size()) mine.resize(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i) {
                mine[i].impressions += cells[i].impressions;
                mine[i].clicks += cells[i].clicks;
            }
        }
    }
}

TripleTable Aggregator::finish(const AggregateOptions& options) const {
    if (options.min_impressions < 1) throw DataError("min_impressions must be >= 1");
    TripleTable table;
    for (const auto& [query, counts] : queries_) {
        QueryTriples entry;
        entry.frequency = counts.sessions;
        for (const auto& [doc, cells] : counts.docs) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const Cell& c = cells[i];
                if (c.impressions == 0) continue;
                if (c.impressions < options.min_impressions) continue;
                if (options.drop_zero_clicks && c.clicks == 0) continue;
                Triple t;
                t.doc = doc;
                t.position = static_cast<int>(i + 1);
                t.impressions = c.impressions;
                t.clicks = static_cast<double>(c.clicks);
                entry.triples.push_back(std::move(t));
            }
        }
        if (entry.triples.empty()) continue;
        std::sort(entry.triples.begin(), entry.triples.end(), [](const Triple& a, const Triple& b) {
            return a.doc != b.doc ? a.doc < b.doc : a.position < b.position;
        });
        table.queries.emplace(query, std::move(entry));
    }
    return table;
}

TripleTable aggregate(const std::vector<SessionRecord>& sessions, const AggregateOptions& options) {
    Aggregator agg;
    for (const auto& s : sessions) agg.add(s);
    return agg.finish(options);
}

std::pair<TripleTable, TripleTable> split_train_test(const TripleTable& table, double test_fraction,
                                                     std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError("test_fraction must be in (0, 1)");
    TripleTable train, test;
    for (const auto& [query, entry] : table.queries) {
        const std::size_t n = entry.triples.size();
        if (n < 2) {
            train.queries.emplace(query, entry);
            continue;
        }
        std::size_t want = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
        want = std::clamp<std::size_t>(want, 1, n - 1);

        // Weighted sampling without replacement, proportional to impressions.
        Rng rng = substream(seed, query);
        std::vector<std::size_t> remaining(n);
        for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
        std::vector<bool> in_test(n, false);
        for (std::size_t k = 0; k < want; ++k) {
            double total = 0;
            for (std::size_t idx : remaining) total += static_cast<double>(entry.triples[idx].impressions);
            double u = rng.next_unit() * total;
            std::size_t chosen = remaining.back();
            double acc = 0;
            for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
                acc += static_cast<double>(entry.triples[remaining[pos]].impressions);
                if (u < acc) {
                    chosen = remaining[pos];
                    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
                    break;
                }
            }
            in_test[chosen] = true;
        }

        QueryTriples train_entry, test_entry;
        train_entry.frequency = test_entry.frequency = entry.frequency;
        for (std::size_t i = 0; i < n; ++i)
            (in_test[i] ? test_entry : train_entry).triples.push_back(entry.triples[i]);
        train.queries.emplace(query, std::move(train_entry));
        test.queries.emplace(query, std::move(test_entry));
    }
    return {std::move(train), std::move(test)};
}

TripleTable read_triples(std::istream& in) {
    TripleTable table;
    std::string line;
    std::size_t line_no = 0;
    std::set<std::tuple<std::string, std::string, int>> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable_line(line)) continue;
        auto fields = split_fields(line, '\t');
        if (fields.size() != 5)
            throw DataError("line " + std::to_string(line_no) + ": expected 5 tab-separated fields, got " +
                            std::to_string(fields.size()));
        Triple t;
        std::string query(fields[0]);
        t.doc = std::string(fields[1]);
        t.position = static_cast<int>(parse_int_field(fields[2], "position", line_no));
        t.impressions = parse_int_field(fields[3], "impressions", line_no);
        t.clicks = parse_double_field(fields[4], "clicks", line_no);
        if (query.empty() || t.doc.empty())
            throw DataError("line " + std::to_string(line_no) + ": empty query or doc id");
        if (t.position < 1)
            throw DataError("line " + std::to_string(line_no) + ": position must be >= 1");
        if (t.impressions < 1)
            throw DataError("line " + std::to_string(line_no) + ": impressions must be >= 1");
        if (t.clicks < 0 || t.clicks > static_cast<double>(t.impressions))
            throw DataError("line " + std::to_string(line_no) + ": clicks outside [0, impressions]");
        if (!seen.emplace(query, t.doc, t.position).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate (query, doc, position)");
        table.queries[query].triples.push_back(std::move(t));
    }
    for (auto& [query, entry] : table.queries) {
        std::sort(entry.triples.begin(), entry.triples.end(), [](const Triple& a, const Triple& b) {
            return a.doc != b.doc ? a.doc < b.doc : a.position < b.position;
        });
        entry.frequency = 0;
        for (const auto& t : entry.triples)
            if (t.position == 1) entry.frequency += t.impressions;
    }
    return table;
}

void write_triples(std::ostream& out, const TripleTable& table, const MetaHeader* meta) {
    if (meta) out << meta_comment(*meta) << '\n';
    for (const auto& [query, entry] : table.queries)
        for (const auto& t : entry.triples)
            out << query << '\t' << t.doc << '\t' << t.position << '\t' << t.impressions << '\t'
                << fmt_double(t.clicks) << '\n';
}

TripleTable read_triples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_triples(in);
}

void write_triples_file(const std::string& path, const TripleTable& table, const MetaHeader* meta) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_triples(out, table, meta);
    if (!out.flush()) throw DataError("failed writing " + path);
}

}  // namespace clickmodel
