#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqrec/baselines.hpp"
#include "seqrec/corpus.hpp"
#include "seqrec/types.hpp"

namespace seqrec {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

struct RunConfig {
    // Paths
    std::string interactions_path;
    std::string embeddings_path;
    std::string output_dir = ".";

    // Preprocessing
    std::size_t min_len = 3;
    std::size_t max_len = 100;
    std::size_t min_item_count = 0;
    std::string delimiter = "\t";
    bool has_header = false;
    std::string user_column = "0";
    std::string item_column = "1";
    std::string time_column = "2";
    bool lenient_parse = false;
    bool allow_missing_embeddings = false;

    // Models: tgh1, tgh2, semnn, idlast, idsem, count-last, external:<file>
    std::vector<std::string> models = {"tgh1"};

    // Evaluation
    std::vector<std::size_t> eval_ks = {1, 5, 10};
    std::size_t k_max = 10;
    std::size_t overlap_k = 10;

    std::uint64_t seed = 42;
    unsigned threads = 0; // 0 = auto (hardware, or SEQREC_AUDIT_THREADS)
    BprHyperparams bpr;

    // Parses the JSON config file (if any), then applies flag overrides.
    // Unknown keys are rejected.
    static RunConfig from_json_file(const std::string& path);
    void apply_json(const std::string& json_text);
    std::string to_json() const;

    void validate() const;
    unsigned effective_threads() const;
    ColumnSchema column_schema() const;
};

// Subcommand bodies; throw ConfigError / DataError on failure. The CLI wrapper
// maps exceptions to exit codes.
void cmd_stats(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_diagnose(const RunConfig& cfg);
void cmd_split(const RunConfig& cfg);

struct ConvertOptions {
    std::string input_path;
    std::string output_path;
    bool to_binary = true;
    bool normalize = false;
    char text_delimiter = ' ';
};
void cmd_convert_embeddings(const ConvertOptions& opts);

} // namespace seqrec
