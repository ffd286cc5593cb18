#include "seqrec/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace seqrec {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

int resolve_column(const std::vector<std::string>& header,
                   const std::optional<std::string>& name, int fallback,
                   const char* role) {
    if (!name) return fallback;
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end())
        throw DataError(std::string("missing ") + role + " column '" + *name + "' in header");
    return static_cast<int>(it - header.begin());
}

} // namespace

InteractionLog load_interactions(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open interaction file: " + path);

    InteractionLog log;
    std::string line;
    std::size_t line_no = 0;
    bool need_header = schema.has_header || schema.user_name || schema.item_name ||
                       schema.time_name;
    int user_col = schema.user_col;
    int item_col = schema.item_col;
    int time_col = schema.time_col;

    auto fail = [&](const std::string& what) {
        if (!schema.lenient)
            throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, schema.delimiter);
        if (need_header && line_no == 1) {
            user_col = resolve_column(fields, schema.user_name, user_col, "user");
            item_col = resolve_column(fields, schema.item_name, item_col, "item");
            time_col = resolve_column(fields, schema.time_name, time_col, "timestamp");
            continue;
        }
        int max_col = std::max({user_col, item_col, time_col});
        if (static_cast<int>(fields.size()) <= max_col) {
            fail("expected at least " + std::to_string(max_col + 1) + " columns, got " +
                 std::to_string(fields.size()));
            continue;
        }
        const std::string& user = fields[user_col];
        const std::string& item = fields[item_col];
        const std::string& ts_str = fields[time_col];
        if (user.empty() || item.empty()) {
            fail("empty user or item id");
            continue;
        }
        std::int64_t ts = 0;
        auto [ptr, ec] = std::from_chars(ts_str.data(), ts_str.data() + ts_str.size(), ts);
        if (ec != std::errc{} || ptr != ts_str.data() + ts_str.size()) {
            fail("unparseable timestamp '" + ts_str + "'");
            continue;
        }
        log.records.push_back({user, item, ts});
    }
    return log;
}

double SequenceDataset::avg_seq_len() const {
    if (users.empty()) return 0.0;
    std::size_t total = 0;
    for (const auto& u : users) total += u.sequence.size();
    return static_cast<double>(total) / static_cast<double>(users.size());
}

SequenceDataset build_sequences(const InteractionLog& log, const BuildOptions& opts) {
    if (opts.min_len < 3) throw ConfigError("min_len must be >= 3");

    // Group per user, preserving input order within equal timestamps.
    struct Row {
        std::string item;
        std::int64_t ts;
        std::size_t order;
    };
    std::unordered_map<std::string, std::vector<Row>> by_user;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& r = log.records[i];
        by_user[r.user_id].push_back({r.item_id, r.timestamp, i});
    }
    for (auto& [user, rows] : by_user) {
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.ts != b.ts) return a.ts < b.ts;
            return a.order < b.order;
        });
    }

    // Deterministic user order.
    std::vector<std::string> user_ids;
    user_ids.reserve(by_user.size());
    for (const auto& [user, rows] : by_user) user_ids.push_back(user);
    std::sort(user_ids.begin(), user_ids.end());

    // Alternate user-length and item-count filters until a fixed point.
    std::unordered_map<std::string, bool> user_alive;
    for (const auto& u : user_ids) user_alive[u] = true;
    std::unordered_map<std::string, bool> item_alive;

    bool changed = true;
    while (changed) {
        changed = false;
        std::unordered_map<std::string, std::size_t> item_counts;
        for (const auto& u : user_ids) {
            if (!user_alive[u]) continue;
            std::size_t len = 0;
            for (const auto& row : by_user[u]) {
                if (opts.min_item_count > 0 && !item_alive.empty() &&
                    !item_alive[row.item])
                    continue;
                ++len;
                ++item_counts[row.item];
            }
            if (len < opts.min_len) {
                user_alive[u] = false;
                changed = true;
                // Discount this user's contribution.
                for (const auto& row : by_user[u]) {
                    auto it = item_counts.find(row.item);
                    if (it != item_counts.end() && it->second > 0) --it->second;
                }
            }
        }
        if (opts.min_item_count > 0) {
            std::unordered_map<std::string, bool> next_alive;
            for (const auto& [item, c] : item_counts) {
                bool keep = c >= opts.min_item_count;
                next_alive[item] = keep;
            }
            if (!item_alive.empty()) {
                for (const auto& [item, keep] : next_alive) {
                    auto it = item_alive.find(item);
                    bool was = it != item_alive.end() && it->second;
                    if (was != keep) changed = true;
                }
            } else {
                for (const auto& [item, keep] : next_alive)
                    if (!keep) changed = true;
            }
            item_alive = std::move(next_alive);
        }
    }

    // Materialize surviving sequences, truncating to the most recent max_len.
    std::vector<std::pair<std::string, std::vector<std::string>>> sequences;
    for (const auto& u : user_ids) {
        if (!user_alive[u]) continue;
        std::vector<std::string> seq;
        for (const auto& row : by_user[u]) {
            if (opts.min_item_count > 0 && !item_alive.empty() && !item_alive[row.item])
                continue;
            seq.push_back(row.item);
        }
        if (seq.size() > opts.max_len)
            seq.erase(seq.begin(), seq.end() - static_cast<std::ptrdiff_t>(opts.max_len));
        sequences.emplace_back(u, std::move(seq));
    }
    if (sequences.empty())
        throw DataError("no users survive filtering (min_len=" +
                        std::to_string(opts.min_len) + ")");

    // Vocabulary over surviving interactions only, indexed in sorted id order.
    std::vector<std::string> item_ids;
    {
        std::unordered_map<std::string, bool> seen;
        for (const auto& [user, seq] : sequences)
            for (const auto& item : seq)
                if (!seen[item]) {
                    seen[item] = true;
                    item_ids.push_back(item);
                }
        std::sort(item_ids.begin(), item_ids.end());
    }

    SequenceDataset ds;
    ds.item_vocab.index_to_id = item_ids;
    for (ItemIndex i = 0; i < ds.item_vocab.size(); ++i)
        ds.item_vocab.id_to_index[item_ids[i]] = i;

    ds.users.reserve(sequences.size());
    for (auto& [user, seq] : sequences) {
        UserEntry entry;
        entry.user_id = user;
        entry.sequence.reserve(seq.size());
        for (const auto& item : seq)
            entry.sequence.push_back(ds.item_vocab.id_to_index.at(item));
        ds.users.push_back(std::move(entry));
    }
    return ds;
}

SplitDataset split_leave_one_out(const SequenceDataset& ds) {
    SplitDataset split;
    split.item_vocab = ds.item_vocab;
    split.avg_seq_len = ds.avg_seq_len();
    split.users.reserve(ds.users.size());
    for (const auto& u : ds.users) {
        if (u.sequence.size() < 3)
            throw DataError("user '" + u.user_id + "' has fewer than 3 interactions");
        SplitUser su;
        su.user_id = u.user_id;
        su.train_prefix.assign(u.sequence.begin(), u.sequence.end() - 2);
        su.valid_target = u.sequence[u.sequence.size() - 2];
        su.test_target = u.sequence.back();
        split.users.push_back(std::move(su));
    }
    return split;
}

void write_split(const SplitDataset& split, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream train(fs::path(dir) / "train.txt");
    std::ofstream valid(fs::path(dir) / "valid.txt");
    std::ofstream test(fs::path(dir) / "test.txt");
    if (!train || !valid || !test) throw DataError("cannot write split files under " + dir);
    for (const auto& u : split.users) {
        train << u.user_id << '\t';
        for (std::size_t i = 0; i < u.train_prefix.size(); ++i) {
            if (i) train << ',';
            train << split.item_vocab.decode(u.train_prefix[i]);
        }
        train << '\n';
        valid << u.user_id << '\t' << split.item_vocab.decode(u.valid_target) << '\n';
        test << u.user_id << '\t' << split.item_vocab.decode(u.test_target) << '\n';
    }
}

} // namespace seqrec
