#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqrec/types.hpp"

namespace seqrec {

struct Interaction {
    std::string user_id;
    std::string item_id;
    std::int64_t timestamp = 0;
};

struct InteractionLog {
    std::vector<Interaction> records;
};

// Column selection for delimiter-separated interaction files. Columns may be
// addressed by header name or by zero-based position.
struct ColumnSchema {
    char delimiter = '\t';
    bool has_header = false;
    // When a name is set it takes precedence over the index for that column.
    std::optional<std::string> user_name, item_name, time_name;
    int user_col = 0;
    int item_col = 1;
    int time_col = 2;
    // Skip malformed rows instead of aborting.
    bool lenient = false;
};

InteractionLog load_interactions(const std::string& path, const ColumnSchema& schema);

struct ItemVocab {
    std::vector<std::string> index_to_id;
    std::unordered_map<std::string, ItemIndex> id_to_index;

    ItemIndex size() const { return static_cast<ItemIndex>(index_to_id.size()); }
    const std::string& decode(ItemIndex i) const { return index_to_id.at(i); }
    std::optional<ItemIndex> encode(const std::string& id) const {
        auto it = id_to_index.find(id);
        if (it == id_to_index.end()) return std::nullopt;
        return it->second;
    }
};

struct UserEntry {
    std::string user_id;
    std::vector<ItemIndex> sequence; // chronological
};

struct SequenceDataset {
    std::vector<UserEntry> users;
    ItemVocab item_vocab;

    ItemIndex num_items() const { return item_vocab.size(); }
    double avg_seq_len() const;
};

struct BuildOptions {
    std::size_t min_len = 3;
    std::size_t max_len = 100;
    // 0 disables item-frequency filtering; when > 0, user and item filters are
    // applied alternately until a fixed point.
    std::size_t min_item_count = 0;
};

SequenceDataset build_sequences(const InteractionLog& log, const BuildOptions& opts);

struct SplitUser {
    std::string user_id;
    std::vector<ItemIndex> train_prefix; // sequence minus last two items
    ItemIndex valid_target = kInvalidItem;
    ItemIndex test_target = kInvalidItem;

    // Full sequence minus the last item.
    std::vector<ItemIndex> test_context() const {
        std::vector<ItemIndex> ctx = train_prefix;
        ctx.push_back(valid_target);
        return ctx;
    }
    ItemIndex last_context_item() const { return valid_target; }
};

struct SplitDataset {
    std::vector<SplitUser> users;
    ItemVocab item_vocab;
    double avg_seq_len = 0.0; // over full filtered sequences, pre-split

    ItemIndex num_items() const { return item_vocab.size(); }
};

SplitDataset split_leave_one_out(const SequenceDataset& ds);

void write_split(const SplitDataset& split, const std::string& dir);

} // namespace seqrec
